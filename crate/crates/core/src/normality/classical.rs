use crate::error::{Error, Result};
use crate::parastruct::{check_apc, Apc};
use crate::report::{CheckItem, CheckReport, Residuals};
use crate::symkernel::Sampler;
use crate::tensorcalc::{
    d1, form_tensor_vector, lie_derivative_endo, lie_derivative_oneform, nijenhuis_endo, Endo, VectorField,
};

pub const NORMAL_NIJENHUIS: &str = "N_phi(X,Y) - d eta(X,Y) xi = 0";
pub const NORMAL_LIE_ETA: &str = "L_xi eta = 0";
pub const NORMAL_LIE_PHI: &str = "L_xi phi = 0";
pub const NORMAL_SKEW: &str = "(L_{phi X} eta)Y - (L_{phi Y} eta)X = 0";
pub const NORMAL_IMPLIED: &str = "N_phi - d eta (x) xi = 0 and L_xi eta = 0 => L_xi phi = 0";

pub(crate) fn require_apc(s: &Apc, sampler: &Sampler) -> Result<()> {
    let rep = check_apc(s, sampler)?;
    if rep.passed() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "`{}` is not almost paracontact (failing: {})",
            s.name,
            rep.failing().join(", ")
        )))
    }
}

fn pair_label(s: &Apc, i: usize, j: usize) -> String {
    let c = s.chart();
    format!("({},{})", c.vector_label(i), c.vector_label(j))
}

/// The four classical normality conditions on every pair of coordinate fields.
pub fn classical_normality(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    require_apc(s, sampler)?;
    let c = s.chart();
    let n = c.dim();
    let coords = &c.coords;
    let d_eta = d1(&s.eta);
    let fields: Vec<VectorField> = (0..n).map(|i| VectorField::coordinate(c, i)).collect();
    let mut rep = CheckReport::new(format!("classical normality {}", s.name));

    let mut cond1 = Residuals::new();
    for i in 0..n {
        for j in 0..n {
            let r =
                nijenhuis_endo(&s.phi, &fields[i], &fields[j])?.sub(&s.xi.scale(&d_eta.on(&fields[i], &fields[j])?))?;
            cond1.tensor(&pair_label(s, i, j), &r);
        }
    }
    let cond1 = cond1.evaluate(NORMAL_NIJENHUIS, sampler, coords)?;

    let mut lie_eta = Residuals::new();
    lie_eta.tensor("", &lie_derivative_oneform(&s.xi, &s.eta)?);
    let lie_eta = lie_eta.evaluate(NORMAL_LIE_ETA, sampler, coords)?;

    let l_phi = lie_derivative_endo(&s.xi, &s.phi)?;
    let mut lie_phi = Residuals::new();
    for j in 0..n {
        lie_phi.tensor(&format!("(xi,{})", c.vector_label(j)), &l_phi.column(j));
    }
    let lie_phi = lie_phi.evaluate(NORMAL_LIE_PHI, sampler, coords)?;

    let mut cond4 = Residuals::new();
    let lie_along: Vec<_> =
        (0..n).map(|i| lie_derivative_oneform(&s.phi.apply(&fields[i])?, &s.eta)).collect::<Result<_>>()?;
    for i in 0..n {
        for j in 0..n {
            let r = &lie_along[i].on(&fields[j])? - &lie_along[j].on(&fields[i])?;
            cond4.push(pair_label(s, i, j), r);
        }
    }
    let cond4 = cond4.evaluate(NORMAL_SKEW, sampler, coords)?;

    let hyp = cond1.passed() && lie_eta.passed();
    let implied = lie_phi.passed();
    for it in [cond1, lie_eta, lie_phi, cond4] {
        rep.push(it);
    }
    rep.push(CheckItem::logic(NORMAL_IMPLIED, hyp, implied));
    Ok(rep)
}

pub const E1_SQUARE: &str = "E1^2 = I";
pub const E2_SQUARE: &str = "E2^2 = I";
pub const E1_INTEGRABLE: &str = "N_E1 = 0";
pub const E2_INTEGRABLE: &str = "N_E2 = 0";
pub const E_SUM: &str = "E1 + E2 = 2 phi";
pub const E_AUXILIARY: &str = "(L_{phi^2 X} eta)Y - (L_{phi Y} eta)(phi X) = 0";

/// The almost product structures E₁ = φ − η⊗ξ and E₂ = φ + η⊗ξ.
pub fn product_structures(s: &Apc) -> Result<(Endo, Endo)> {
    let j = form_tensor_vector(&s.eta, &s.xi)?;
    Ok((s.phi.sub(&j)?, s.phi.add(&j)?))
}

/// E₁, E₂ with their squares and Nijenhuis tensors, plus the identity
/// obtained by applying η to N_E₁(φX, Y), which must hold when E₁ is
/// integrable.
pub fn product_structures_report(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    require_apc(s, sampler)?;
    let c = s.chart();
    let n = c.dim();
    let coords = &c.coords;
    let (e1, e2) = product_structures(s)?;
    let fields: Vec<VectorField> = (0..n).map(|i| VectorField::coordinate(c, i)).collect();
    let mut rep = CheckReport::new(format!("product structures {}", s.name));

    for (label, e) in [(E1_SQUARE, &e1), (E2_SQUARE, &e2)] {
        let mut r = Residuals::new();
        r.tensor("", &e.square().sub(&Endo::identity(c))?);
        rep.push(r.evaluate(label, sampler, coords)?);
    }
    let mut nij = Vec::new();
    for (label, e) in [(E1_INTEGRABLE, &e1), (E2_INTEGRABLE, &e2)] {
        let mut r = Residuals::new();
        for i in 0..n {
            for j in i + 1..n {
                r.tensor(&pair_label(s, i, j), &nijenhuis_endo(e, &fields[i], &fields[j])?);
            }
        }
        let it = r.evaluate(label, sampler, coords)?;
        nij.push(it.passed());
        rep.push(it);
    }
    let mut r = Residuals::new();
    r.tensor("", &e1.add(&e2)?.sub(&s.phi.scale(&crate::symkernel::Scalar::from_int(2)))?);
    rep.push(r.evaluate(E_SUM, sampler, coords)?);

    let mut aux = Residuals::new();
    let phi2 = s.phi.square();
    for i in 0..n {
        let px = s.phi.apply(&fields[i])?;
        let l1 = lie_derivative_oneform(&phi2.apply(&fields[i])?, &s.eta)?;
        for (j, fj) in fields.iter().enumerate() {
            let l2 = lie_derivative_oneform(&s.phi.apply(fj)?, &s.eta)?;
            aux.push(pair_label(s, i, j), &l1.on(fj)? - &l2.on(&px)?);
        }
    }
    let aux = aux.evaluate(E_AUXILIARY, sampler, coords)?;
    let holds = aux.passed();
    rep.push(if nij[0] { aux } else { aux.into_info().with_note("hypothesis unmet") });
    rep.push(CheckItem::logic(format!("{E1_INTEGRABLE} => {E_AUXILIARY}"), nij[0], holds));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parastruct::catalog;
    use crate::report::Verdict;
    use crate::symkernel::Tier;

    #[test]
    fn s0_and_s1_are_normal() {
        let s = Sampler::default();
        for apc in [catalog::s0(), catalog::s1()] {
            let rep = classical_normality(&apc, &s).unwrap();
            assert_eq!(rep.verdict(), Verdict::Pass, "{}", apc.name);
            assert!(rep.items.iter().all(|i| i.tier == Tier::SymbolicZero));
        }
    }

    #[test]
    fn s1_nijenhuis_cancels_d_eta() {
        let apc = catalog::s1();
        let c = apc.chart();
        let (dx, dy) = (VectorField::coordinate(c, 0), VectorField::coordinate(c, 1));
        // N_phi(d/dx,d/dy) = d/dz and d eta(d/dx,d/dy) = 1
        assert_eq!(nijenhuis_endo(&apc.phi, &dx, &dy).unwrap(), VectorField::coordinate(c, 2));
        assert_eq!(d1(&apc.eta).on(&dx, &dy).unwrap(), crate::symkernel::Scalar::one());
    }

    #[test]
    fn s2_fails_on_the_lie_derivative_of_phi() {
        let s = Sampler::default();
        let rep = classical_normality(&catalog::s2(), &s).unwrap();
        assert_eq!(rep.verdict(), Verdict::Fail);
        assert!(rep.item(NORMAL_LIE_ETA).unwrap().passed());
        assert!(rep.item(NORMAL_SKEW).unwrap().passed());
        let lie = rep.item(NORMAL_LIE_PHI).unwrap();
        let w = lie.witness.as_ref().unwrap();
        assert_eq!(w.location, "(xi,d/dx) d/dy");
        assert_eq!(w.expression, "exp(z)");
        assert!((w.value - w.point["z"].exp()).abs() < 1e-12);
        // condition 1 fails too: N_phi(d/dx,d/dz) = d/dx
        let n1 = rep.item(NORMAL_NIJENHUIS).unwrap();
        assert!(!n1.passed());
        let c = catalog::r3();
        let apc = catalog::s2();
        let n = nijenhuis_endo(&apc.phi, &VectorField::coordinate(&c, 0), &VectorField::coordinate(&c, 2)).unwrap();
        assert_eq!(n, VectorField::coordinate(&c, 0));
    }

    #[test]
    fn product_structures_of_the_catalog() {
        let s = Sampler::default();
        for apc in catalog::structures() {
            let rep = product_structures_report(&apc, &s).unwrap();
            assert!(rep.item(E1_SQUARE).unwrap().passed());
            assert!(rep.item(E2_SQUARE).unwrap().passed());
            assert!(rep.item(E_SUM).unwrap().passed());
        }
        for apc in [catalog::s0(), catalog::s1()] {
            let rep = product_structures_report(&apc, &s).unwrap();
            assert_eq!(rep.verdict(), Verdict::Pass, "{}", apc.name);
        }
        let rep = product_structures_report(&catalog::s2(), &s).unwrap();
        assert!(!rep.item(E1_INTEGRABLE).unwrap().passed());
    }

    #[test]
    fn s0_product_structure_matrix() {
        let (e1, _) = product_structures(&catalog::s0()).unwrap();
        let m = e1.matrix();
        let expect = [[0, 1, 0], [1, 0, 0], [0, 0, -1]];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(m.get(i, j), &crate::symkernel::Scalar::from_int(*v));
            }
        }
    }

    #[test]
    fn refuses_non_paracontact_input() {
        let c = catalog::r3();
        let id = Apc::new(
            "id",
            Endo::identity(&c),
            VectorField::coordinate(&c, 2),
            crate::tensorcalc::OneForm::coordinate(&c, 2),
            None,
        )
        .unwrap();
        assert!(matches!(classical_normality(&id, &Sampler::default()), Err(Error::Precondition(_))));
    }
}
