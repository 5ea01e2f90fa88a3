use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classical::{classical_normality, require_apc};
use crate::error::Result;
use crate::gentangent::{courant_bracket, frame, gen_endo_apply, GenEndo, GenOp, GenSection};
use crate::parastruct::Apc;
use crate::report::{CheckItem, CheckReport, ItemKind, Residuals};
use crate::symkernel::{Sampler, Scalar, Tier};
use crate::tensorcalc::{product_with_line, wedge_ff, wedge_vv, Chart, Endo, ProductChart};

/// The M-adapted generalized almost product structure on M×ℝ:
/// P = [[φ, ξ∧∂t], [η∧dt, −φ*]].
#[derive(Clone, Debug)]
pub struct AdaptedProduct {
    pub product: ProductChart,
    pub p: GenEndo,
    pub report: CheckReport,
}

pub const P_UPPER: &str = "phi^2 + beta B = I";
pub const P_LOWER: &str = "B beta + (phi^*)^2 = I";
pub const P_BETA: &str = "phi beta - beta phi^* = 0";
pub const P_B: &str = "B phi - phi^* B = 0";
pub const P_SQUARE: &str = "P^2 = I";

/// Block equations for P² = I with P g₀-skew.
pub fn product_block_conditions(p: &GenEndo, sampler: &Sampler) -> Result<CheckReport> {
    let c = p.chart();
    let n = c.dim();
    let coords = &c.coords;
    let phi = p.phi.matrix();
    let q = p.beta.matrix();
    let l = p.b.matrix().transpose();
    let phit = phi.transpose();
    let id = crate::tensorcalc::SMatrix::identity(n);
    let mut rep = CheckReport::new("product blocks");
    for (label, m) in [
        (P_UPPER, phi.mul(phi).add(&q.mul(&l)).sub(&id)),
        (P_LOWER, l.mul(q).add(&phit.mul(&phit)).sub(&id)),
        (P_BETA, phi.mul(q).sub(&q.mul(&phit))),
        (P_B, l.mul(phi).sub(&phit.mul(&l))),
    ] {
        let mut r = Residuals::new();
        r.tensor("", &Endo::new(c, m)?);
        rep.push(r.evaluate(label, sampler, coords)?);
    }
    let mut r = Residuals::new();
    r.tensor("", &p.to_op().square().sub(&GenOp::identity(c))?);
    rep.push(r.evaluate(P_SQUARE, sampler, coords)?);
    Ok(rep)
}

pub fn adapted_product(s: &Apc, sampler: &Sampler) -> Result<AdaptedProduct> {
    require_apc(s, sampler)?;
    let product = product_with_line(s.chart())?;
    let xi = product.lift_vf(&s.xi)?;
    let eta = product.lift_form(&s.eta)?;
    let p = GenEndo::new(product.lift_endo(&s.phi)?, wedge_vv(&xi, &product.d_dt())?, wedge_ff(&eta, &product.dt())?)?;
    let mut report = product_block_conditions(&p, sampler)?;
    report.name = format!("adapted product {}", s.name);
    if let Some(note) = &product.note {
        report.note(note.clone());
    }
    Ok(AdaptedProduct { product, p, report })
}

/// 𝒩_P(A,C) = [PA,PC] + P²[A,C] − P[PA,C] − P[A,PC].
pub fn courant_nijenhuis(p: &GenEndo, a: &GenSection, c: &GenSection) -> Result<GenSection> {
    Chart::ensure_same(p.chart(), a.chart())?;
    Chart::ensure_same(p.chart(), c.chart())?;
    let pa = gen_endo_apply(p, a)?;
    let pc = gen_endo_apply(p, c)?;
    let t1 = courant_bracket(&pa, &pc)?;
    let t2 = p.to_op().square().apply(&courant_bracket(a, c)?)?;
    let t3 = gen_endo_apply(p, &courant_bracket(&pa, c)?)?;
    let t4 = gen_endo_apply(p, &courant_bracket(a, &pc)?)?;
    t1.add(&t2)?.sub(&t3)?.sub(&t4)
}

pub const GEN_NORMAL: &str = "N_P = 0";
pub const GEN_TENSORIAL: &str = "N_P(fA,C) = f N_P(A,C)";
const MULTIPLIERS: usize = 3;

/// Polynomial multipliers a + b·x_i + c·x_j·x_k drawn from the sampler seed.
fn multipliers(coords: &[String], seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..MULTIPLIERS)
        .map(|_| {
            let mut pick = || Scalar::var(&coords[rng.gen_range(0..coords.len())]);
            let (xi, xj, xk) = (pick(), pick(), pick());
            let mut coeff = || Scalar::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            let (a, b, c) = (coeff(), coeff(), coeff());
            &(&a + &(&b * &xi)) + &(&c * &(&xj * &xk))
        })
        .collect()
}

/// Vanishing of the Courant–Nijenhuis tensor of the adapted product on every
/// unordered pair of frame sections of M×ℝ, with function-linearity spot
/// checks reported as information.
pub fn generalized_normality(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    let ap = adapted_product(s, sampler)?;
    let c = &ap.product.chart;
    let coords = &c.coords;
    let mut rep = CheckReport::new(format!("generalized normality {}", s.name));
    rep.notes.extend(ap.report.notes.iter().cloned());
    if !ap.report.passed() {
        rep.note(format!("P is not an almost product structure (failing: {})", ap.report.failing().join(", ")));
    }
    let secs = frame(c);
    let mut nij = Residuals::new();
    for (i, (la, a)) in secs.iter().enumerate() {
        for (lb, b) in &secs[i + 1..] {
            nij.tensor(&format!("({la},{lb})"), &courant_nijenhuis(&ap.p, a, b)?);
        }
    }
    rep.push(nij.evaluate(GEN_NORMAL, sampler, coords)?);

    let fs = multipliers(coords, sampler.config.seed);
    let mut lin = Residuals::new();
    for (k, f) in fs.iter().enumerate() {
        for (i, (la, a)) in secs.iter().enumerate() {
            for (lb, b) in &secs[i + 1..] {
                let scaled = courant_nijenhuis(&ap.p, &a.scale(f), b)?;
                let expected = courant_nijenhuis(&ap.p, a, b)?.scale(f);
                lin.tensor(&format!("f{k} ({la},{lb})"), &scaled.sub(&expected)?);
            }
        }
    }
    let lin = lin.evaluate(GEN_TENSORIAL, sampler, coords)?;
    let note = if lin.passed() { "function-linear on the spot checks" } else { "not function-linear" };
    rep.push(lin.into_info().with_note(note));
    Ok(rep)
}

pub const EQUIV_AGREE: &str = "classical and generalized normality agree";

/// Runs both normality checkers; passes iff their outcomes agree.
pub fn normality_equivalence(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    let classical = classical_normality(s, sampler)?;
    let generalized = generalized_normality(s, sampler)?;
    let (a, b) = (classical.passed(), generalized.passed());
    let mut rep = CheckReport::new(format!("normality equivalence {}", s.name));
    let verdict = |p: bool| if p { "normal" } else { "not normal" };
    rep.push(CheckItem::info("classical", verdict(a)));
    rep.push(CheckItem::info("generalized", verdict(b)));
    let mut agree = CheckItem::logic(EQUIV_AGREE, true, a == b);
    agree.kind = ItemKind::Residual;
    agree.note = Some(format!("classical {}, generalized {}", verdict(a), verdict(b)));
    rep.push(agree);
    if a != b {
        for (prefix, r) in [("classical", &classical), ("generalized", &generalized)] {
            for it in r.items.iter().filter(|i| i.kind != ItemKind::Info && i.tier == Tier::Nonzero) {
                rep.push(CheckItem { label: format!("{prefix}: {}", it.label), ..it.clone() }.into_info());
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parastruct::catalog;
    use crate::report::Verdict;
    use crate::tensorcalc::{Components, VectorField};

    #[test]
    fn adapted_product_of_s0() {
        let s = Sampler::default();
        let ap = adapted_product(&catalog::s0(), &s).unwrap();
        let c = &ap.product.chart;
        assert_eq!(c.coords, vec!["x", "y", "z", "t"]);
        // (z,t) slots of beta and B
        assert_eq!(ap.p.beta.comp(2, 3), &Scalar::one());
        assert_eq!(ap.p.b.comp(2, 3), &Scalar::one());
        assert_eq!(ap.report.verdict(), Verdict::Pass);
        // beta B acts as diag(0,0,1,1)
        let bb = ap.p.beta.matrix().mul(&ap.p.b.matrix().transpose());
        for i in 0..4 {
            let want = if i >= 2 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(bb.get(i, i), &want);
        }
    }

    #[test]
    fn adapted_products_of_the_catalog_are_almost_product() {
        let s = Sampler::default();
        for apc in catalog::structures() {
            assert_eq!(adapted_product(&apc, &s).unwrap().report.verdict(), Verdict::Pass, "{}", apc.name);
        }
    }

    #[test]
    fn courant_nijenhuis_vanishes_on_the_diagonal_and_for_flat_data() {
        let s = Sampler::default();
        let ap = adapted_product(&catalog::s1(), &s).unwrap();
        for (_, a) in frame(&ap.product.chart) {
            assert!(courant_nijenhuis(&ap.p, &a, &a).unwrap().is_zero());
        }
        let c = catalog::r3();
        let flat = GenEndo::diagonal(
            Endo::new(
                &c,
                catalog::s0().phi.matrix().add(&crate::tensorcalc::SMatrix::diagonal(vec![
                    Scalar::zero(),
                    Scalar::zero(),
                    Scalar::one(),
                ])),
            )
            .unwrap(),
        );
        for (_, a) in frame(&c) {
            for (_, b) in frame(&c) {
                assert!(courant_nijenhuis(&flat, &a, &b).unwrap().is_zero());
            }
        }
        let a = GenSection::vector(VectorField::coordinate(&c, 0).scale(&Scalar::var("y")));
        assert!(courant_nijenhuis(&flat, &a, &a).unwrap().is_zero());
    }

    #[test]
    fn generalized_verdicts_match_classical() {
        let s = Sampler::default();
        for (apc, normal) in [(catalog::s0(), true), (catalog::s1(), true), (catalog::s2(), false)] {
            let rep = generalized_normality(&apc, &s).unwrap();
            assert_eq!(rep.passed(), normal, "{}", apc.name);
            assert!(rep.item(GEN_TENSORIAL).unwrap().passed(), "{}", apc.name);
            assert_eq!(normality_equivalence(&apc, &s).unwrap().verdict(), Verdict::Pass, "{}", apc.name);
        }
    }

    #[test]
    fn courant_nijenhuis_is_antisymmetric() {
        let s = Sampler::default();
        let ap = adapted_product(&catalog::s2(), &s).unwrap();
        let secs = frame(&ap.product.chart);
        for (_, a) in &secs {
            for (_, b) in &secs {
                let sum =
                    courant_nijenhuis(&ap.p, a, b).unwrap().add(&courant_nijenhuis(&ap.p, b, a).unwrap()).unwrap();
                assert!(sum.is_zero());
            }
        }
    }
}
