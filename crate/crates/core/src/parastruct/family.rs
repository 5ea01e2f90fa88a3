use std::collections::BTreeMap;

use super::structures::{check_apc, Apc, Gapc};
use crate::error::{Error, Result};
use crate::gentangent::{GenEndo, GenOp};
use crate::report::{CheckItem, CheckReport, Residuals};
use crate::symkernel::{Sampler, Scalar};
use crate::tensorcalc::{form_tensor_vector, Bivector, Chart, Endo, OneForm, TwoForm, VectorField};

pub const FAMILY_EXPANSION: &str =
    "Phi_t^2 = cos^2 t Phi_1^2 + sin^2 t Phi_2^2 + cos t sin t (Phi_1 Phi_2 + Phi_2 Phi_1)";
pub const FAMILY_CONCLUSION: &str = "Phi_t^2 = diag(I - eta_t(x)xi_t, (I - eta_t(x)xi_t)^*)";
pub const FAMILY_LOGIC: &str = "hypotheses => Phi_t is generalized almost paracontact";

const VACUITY_NOTE: &str = "for two almost paracontact structures the pairwise hypotheses cannot all hold: \
phi_1 xi_2 = 0 and eta_1(xi_2) = 0 give xi_2 = phi_1^2 xi_2 + eta_1(xi_2) xi_1 = 0, contradicting eta_2(xi_2) = 1";

/// The family Φ_t = cos t·Φ₁ + sin t·Φ₂ of induced structures, with
/// ξ_t and η_t combined the same way. `t` becomes a free symbol.
pub fn family_structure(s1: &Apc, s2: &Apc, t: &str) -> Result<Gapc> {
    Chart::ensure_same(s1.chart(), s2.chart())?;
    let c = s1.chart();
    if c.index(t).is_some() {
        return Err(Error::Precondition(format!("family parameter `{t}` is a coordinate of {}", c.name)));
    }
    Chart::new("parameter", vec![t.to_string()])?;
    let (ct, st) = (Scalar::cos(Scalar::var(t)), Scalar::sin(Scalar::var(t)));
    let phi = s1.phi.scale(&ct).add(&s2.phi.scale(&st))?;
    let xi = s1.xi.scale(&ct).add(&s2.xi.scale(&st))?;
    let eta = s1.eta.scale(&ct).add(&s2.eta.scale(&st))?;
    Gapc::new(format!("{}_{}_{t}", s1.name, s2.name), GenEndo::diagonal(phi), xi, eta)
}

/// Replaces the symbol `t` by `value` in every component.
pub fn family_at(g: &Gapc, t: &str, value: &Scalar) -> Result<Gapc> {
    let map = BTreeMap::from([(t.to_string(), value.clone())]);
    let sub = |s: &Scalar| s.substitute(&map);
    let c = g.chart();
    let phi = Endo::new(c, g.big_phi.phi.matrix().try_map(sub)?)?;
    let beta = Bivector::new(c, g.big_phi.beta.matrix().try_map(sub)?)?;
    let b = TwoForm::new(c, g.big_phi.b.matrix().try_map(sub)?)?;
    let xi = VectorField::new(c, g.xi.comps().iter().map(sub).collect::<Result<_>>()?)?;
    let eta = OneForm::new(c, g.eta.comps().iter().map(sub).collect::<Result<_>>()?)?;
    Gapc::new(g.name.clone(), GenEndo::new(phi, beta, b)?, xi, eta)
}

/// Builds Φ_t and checks the hypotheses, the unconditional expansion
/// identity and the conditional conclusion.
pub fn one_param_family(s1: &Apc, s2: &Apc, t: &str, sampler: &Sampler) -> Result<(Gapc, CheckReport)> {
    let fam = family_structure(s1, s2, t)?;
    let c = s1.chart().clone();
    let mut coords = c.coords.clone();
    coords.push(t.to_string());
    let mut rep = CheckReport::new(format!("family {} {} in {t}", s1.name, s2.name));

    let apc1 = check_apc(s1, sampler)?;
    let apc2 = check_apc(s2, sampler)?;
    let both_apc = apc1.passed() && apc2.passed();
    rep.absorb(&format!("hypothesis {} almost paracontact", s1.name), apc1);
    rep.absorb(&format!("hypothesis {} almost paracontact", s2.name), apc2);

    let pair = [(1, s1), (2, s2)];
    let mut delta = Residuals::new();
    let mut kills = Residuals::new();
    for (i, si) in pair {
        for (j, sj) in pair {
            let d = if i == j { Scalar::one() } else { Scalar::zero() };
            delta.push(format!("eta_{i}(xi_{j})"), &si.eta.on(&sj.xi)? - &d);
            kills.tensor(&format!("phi_{i} xi_{j}"), &si.phi.apply(&sj.xi)?);
        }
    }
    let mut hyp = vec![
        delta.evaluate("hypothesis eta_i(xi_j) = delta_ij", sampler, &c.coords)?,
        kills.evaluate("hypothesis phi_i xi_j = 0", sampler, &c.coords)?,
    ];
    let anti = s1.phi.compose(&s2.phi)?.add(&s2.phi.compose(&s1.phi)?)?;
    let cross = form_tensor_vector(&s1.eta, &s2.xi)?.add(&form_tensor_vector(&s2.eta, &s1.xi)?)?;
    let mut r = Residuals::new();
    r.tensor("", &anti.add(&cross)?);
    hyp.push(r.evaluate(
        "hypothesis phi_1 phi_2 + phi_2 phi_1 = -(eta_1(x)xi_2 + eta_2(x)xi_1)",
        sampler,
        &c.coords,
    )?);
    let pairwise_hold = hyp.iter().all(CheckItem::passed);
    for it in hyp {
        rep.push(it);
    }
    let hypotheses_hold = both_apc && pairwise_hold;
    if both_apc {
        rep.note(VACUITY_NOTE);
    }

    let (ct, st) = (Scalar::cos(Scalar::var(t)), Scalar::sin(Scalar::var(t)));
    let p1 = GenEndo::diagonal(s1.phi.clone()).to_op();
    let p2 = GenEndo::diagonal(s2.phi.clone()).to_op();
    let pt = fam.big_phi.to_op();
    let mixed = p1.compose(&p2)?.add(&p2.compose(&p1)?)?;
    let expansion: GenOp =
        p1.square().scale(&(&ct * &ct)).add(&p2.square().scale(&(&st * &st)))?.add(&mixed.scale(&(&ct * &st)))?;
    let mut r = Residuals::new();
    r.tensor("", &pt.square().sub(&expansion)?);
    rep.push(r.evaluate(FAMILY_EXPANSION, sampler, &coords)?);

    let mut r = Residuals::new();
    r.tensor("", &pt.square().sub(&fam.target_square())?);
    let conclusion = r.evaluate(FAMILY_CONCLUSION, sampler, &coords)?;
    let holds = conclusion.passed();
    rep.push(if hypotheses_hold { conclusion } else { conclusion.into_info().with_note("hypothesis unmet") });
    rep.push(CheckItem::logic(FAMILY_LOGIC, hypotheses_hold, holds));
    Ok((fam, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parastruct::catalog;
    use crate::report::{ItemKind, Verdict};
    use crate::tensorcalc::SMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_pair_keeps_expansion_but_not_conclusion() {
        let s0 = catalog::s0();
        let (_, rep) = one_param_family(&s0, &s0, "t", &Sampler::default()).unwrap();
        assert!(rep.item(FAMILY_EXPANSION).unwrap().passed());
        let delta = rep.item("hypothesis eta_i(xi_j) = delta_ij").unwrap();
        assert!(!delta.passed());
        assert_eq!(delta.witness.as_ref().unwrap().location, "eta_1(xi_2)");
        assert_eq!(rep.item(FAMILY_CONCLUSION).unwrap().kind, ItemKind::Info);
        assert_eq!(rep.item(FAMILY_LOGIC).unwrap().note.as_deref(), Some("hypothesis unmet"));
        assert!(rep.notes[0].contains("cannot all hold"));
    }

    #[test]
    fn parameter_zero_recovers_the_first_structure() {
        let (s0, s1) = (catalog::s0(), catalog::s1());
        let fam = family_structure(&s1, &s0, "t").unwrap();
        let at0 = family_at(&fam, "t", &Scalar::zero()).unwrap();
        assert_eq!(at0.big_phi, GenEndo::diagonal(s1.phi.clone()));
        assert_eq!(at0.xi, s1.xi);
        assert_eq!(at0.eta, s1.eta);
    }

    #[test]
    fn parameter_must_not_be_a_coordinate() {
        let s0 = catalog::s0();
        assert!(matches!(family_structure(&s0, &s0, "x"), Err(Error::Precondition(_))));
    }

    #[test]
    fn expansion_holds_for_random_constant_matrices() {
        let c = catalog::r3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut random_apc = |name: &str| {
            let m = SMatrix::from_fn(3, 3, |_, _| Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
            Apc::new(name, Endo::new(&c, m).unwrap(), VectorField::coordinate(&c, 2), OneForm::coordinate(&c, 2), None)
                .unwrap()
        };
        for _ in 0..5 {
            let (a, b) = (random_apc("A"), random_apc("B"));
            let (_, rep) = one_param_family(&a, &b, "t", &Sampler::default()).unwrap();
            assert_eq!(rep.item(FAMILY_EXPANSION).unwrap().tier, crate::symkernel::Tier::SymbolicZero);
            assert_ne!(rep.verdict(), Verdict::Pass);
        }
    }
}
