use super::structures::Gapc;
use crate::error::Result;
use crate::gentangent::frame;
use crate::gentangent::gen_metric_from_riemannian;
use crate::gentangent::metric::metric_skewness;
use crate::report::{CheckItem, CheckReport, Residuals};
use crate::symkernel::Sampler;
use crate::tensorcalc::{Chart, Components, Endo, Metric};

pub const COMPAT_HYPOTHESIS: &str = "hypothesis g(phi X,Y) + g(X,phi Y) = 0";
pub const COMPAT_ANTICOMMUTATOR: &str = "G Phi + Phi G = 0";
pub const COMPAT_FLAT: &str = "flat o phi = -phi^* o flat";
pub const COMPAT_SHARP: &str = "sharp o phi^* = -phi o sharp";
pub const COMPAT_LOGIC: &str = "skewness => G Phi = -Phi G";
pub const COMPAT_COMMUTATOR: &str = "G Phi - Phi G = 0";

/// Anticommutation of Φ with the generalized metric 𝒢_g̃ = [[0, ♯], [♭, 0]]
/// and the intertwining of the musical maps with φ.
pub fn compatibility_check(gs: &Gapc, g: &Metric, sampler: &Sampler) -> Result<CheckReport> {
    let c = gs.chart();
    Chart::ensure_same(c, g.chart())?;
    let coords = &c.coords;
    let phi = &gs.big_phi.phi;
    let mut rep = CheckReport::new(format!("compatibility {}", gs.name));

    let hyp = metric_skewness(g, phi)?.evaluate(COMPAT_HYPOTHESIS, sampler, coords)?;
    let hyp_holds = hyp.passed();
    rep.push(hyp);

    let gm = gen_metric_from_riemannian(g).to_op();
    let op = gs.big_phi.to_op();
    let anti = gm.compose(&op)?.add(&op.compose(&gm)?)?;
    let mut r = Residuals::new();
    for (label, a) in frame(c) {
        r.tensor(&label, &anti.apply(&a)?);
    }
    let anti_item = r.evaluate(COMPAT_ANTICOMMUTATOR, sampler, coords)?;
    let comm = gm.compose(&op)?.sub(&op.compose(&gm)?)?;
    let mut r = Residuals::new();
    for (label, a) in frame(c) {
        r.tensor(&label, &comm.apply(&a)?);
    }
    let comm_item = r.evaluate(COMPAT_COMMUTATOR, sampler, coords)?;

    // ♭ has matrix g, ♯ has matrix g⁻¹ and φ* acts through φᵀ.
    let pm = phi.matrix();
    let mut r = Residuals::new();
    r.tensor("", &Endo::new(c, g.matrix().mul(pm).add(&pm.transpose().mul(g.matrix())))?);
    let flat_item = r.evaluate(COMPAT_FLAT, sampler, coords)?;
    let mut r = Residuals::new();
    r.tensor("", &Endo::new(c, g.inverse_matrix().mul(&pm.transpose()).add(&pm.mul(g.inverse_matrix())))?);
    let sharp_item = r.evaluate(COMPAT_SHARP, sampler, coords)?;

    let holds = anti_item.passed();
    for it in [anti_item, flat_item, sharp_item] {
        rep.push(if hyp_holds { it } else { it.into_info().with_note("hypothesis unmet") });
    }
    rep.push(CheckItem::logic(COMPAT_LOGIC, hyp_holds, holds));
    let note = if comm_item.passed() { "commutes" } else { "does not commute" };
    rep.push(comm_item.into_info().with_note(note));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gentangent::GenEndo;
    use crate::parastruct::{catalog, induce_gapc};
    use crate::report::{ItemKind, Verdict};
    use crate::symkernel::Scalar;

    fn diag(e: &[i64]) -> Metric {
        Metric::diagonal(&catalog::r3(), e.iter().map(|v| Scalar::from_int(*v)).collect()).unwrap()
    }

    #[test]
    fn s0_with_its_pseudo_metric_commutes_instead_of_anticommuting() {
        let s = Sampler::default();
        let g = induce_gapc(&catalog::s0(), &s).unwrap();
        let rep = compatibility_check(&g, &diag(&[1, -1, 1]), &s).unwrap();
        for label in [COMPAT_HYPOTHESIS, COMPAT_FLAT, COMPAT_SHARP, COMPAT_COMMUTATOR] {
            assert_eq!(rep.item(label).unwrap().tier, crate::symkernel::Tier::SymbolicZero, "{label}");
        }
        // G Phi (d/dx) = flat(d/dy) = -dy and Phi G (d/dx) = -phi^*(dx) = -dy
        let anti = rep.item(COMPAT_ANTICOMMUTATOR).unwrap();
        let w = anti.witness.as_ref().unwrap();
        assert_eq!(w.location, "d/dx dy");
        assert_eq!(w.expression, "-2");
        assert_eq!(rep.item(COMPAT_LOGIC).unwrap().note.as_deref(), Some("hypothesis holds, consequence fails"));
        assert_eq!(rep.verdict(), Verdict::Fail);
    }

    #[test]
    fn euclidean_metric_fails_the_hypothesis() {
        let s = Sampler::default();
        let g = induce_gapc(&catalog::s0(), &s).unwrap();
        let rep = compatibility_check(&g, &diag(&[1, 1, 1]), &s).unwrap();
        assert!(!rep.item(COMPAT_HYPOTHESIS).unwrap().passed());
        // anticommutation holds exactly when phi is g-symmetric, as it is here
        let anti = rep.item(COMPAT_ANTICOMMUTATOR).unwrap();
        assert!(anti.passed());
        assert_eq!(anti.kind, ItemKind::Info);
        assert!(!rep.item(COMPAT_COMMUTATOR).unwrap().passed());
        assert_eq!(rep.item(COMPAT_LOGIC).unwrap().note.as_deref(), Some("hypothesis unmet"));
        assert_eq!(rep.failing(), vec![COMPAT_HYPOTHESIS]);
    }

    #[test]
    fn zero_phi_anticommutes_trivially() {
        let s = Sampler::default();
        let s0 = catalog::s0();
        let c = s0.chart().clone();
        let g = Gapc::new("zero", GenEndo::diagonal(Endo::zero(&c)), s0.xi.clone(), s0.eta.clone()).unwrap();
        let rep = compatibility_check(&g, &diag(&[2, 3, 5]), &s).unwrap();
        assert!(rep.item(COMPAT_ANTICOMMUTATOR).unwrap().passed());
        assert!(rep.item(COMPAT_COMMUTATOR).unwrap().passed());
        assert_eq!(rep.verdict(), Verdict::Pass);
    }
}
