use super::structures::{check_gapc, induce_gapc, Apc, Gapc};
use crate::error::Result;
use crate::gentangent::{b_transform, beta_transform, GenEndo};
use crate::report::{CheckItem, CheckReport, Residuals};
use crate::symkernel::Sampler;
use crate::tensorcalc::{Bivector, Chart, Components, Endo, OneForm, SMatrix, TwoForm};

pub const B_INVARIANCE: &str = "B(phi X,Y) + B(X,phi Y) = 0";
pub const B_SUFFICIENCY: &str = "B(phi^2 X,Y) = B(phi X,phi Y)";
pub const BETA_INVARIANCE: &str = "beta o phi^* + phi o beta = 0";
pub const BETA_SUFFICIENCY: &str = "eta(beta(alpha)) xi = alpha(xi) beta(eta)";
pub const BETA_PROOF_IDENTITY: &str =
    "beta((phi^*)^2 alpha) - phi^2(beta(alpha)) = eta(beta(alpha)) xi - alpha(xi) beta(eta)";
pub const CLOSED: &str = "dB = 0";

/// Components (dB)(∂i,∂j,∂k) = ∂i B_jk + ∂j B_ki + ∂k B_ij for i < j < k.
fn closedness(b: &TwoForm) -> Residuals {
    let c = b.chart();
    let n = c.dim();
    let mut r = Residuals::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (xi, xj, xk) = (&c.coords[i], &c.coords[j], &c.coords[k]);
                let v = &(&b.comp(j, k).diff(xi) + &b.comp(k, i).diff(xj)) + &b.comp(i, j).diff(xk);
                r.push(format!("({},{},{})", c.form_label(i), c.form_label(j), c.form_label(k)), v);
            }
        }
    }
    r
}

fn matrix_residual(c: &crate::tensorcalc::ChartRef, m: SMatrix, label: impl Fn(usize, usize) -> String) -> Residuals {
    let mut r = Residuals::new();
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            r.push(label(i, j), m.get(i, j).clone());
        }
    }
    r
}

fn vector_pairs(c: &crate::tensorcalc::ChartRef) -> impl Fn(usize, usize) -> String + '_ {
    move |i, j| format!("({},{})", c.vector_label(i), c.vector_label(j))
}

fn conditional(rep: &mut CheckReport, hypothesis: bool, item: CheckItem) {
    rep.push(if hypothesis { item } else { item.into_info().with_note("hypothesis unmet") });
}

fn difference(label: &str, a: &GenEndo, b: &GenEndo, sampler: &Sampler) -> Result<CheckItem> {
    let mut r = Residuals::new();
    r.tensor("", &a.sub(b)?);
    r.evaluate(label, sampler, &a.chart().coords)
}

/// The condition under which e^B leaves the induced structure unchanged,
/// together with the consequence Φ_B = Φ.
pub fn b_invariance(b2: &TwoForm, s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    Chart::ensure_same(s.chart(), b2.chart())?;
    let c = s.chart();
    let phi = induce_gapc(s, sampler)?;
    let pm = s.phi.matrix();
    let bm = b2.matrix();
    let mut rep = CheckReport::new(format!("B-invariance {}", s.name));
    let cond = matrix_residual(c, pm.transpose().mul(bm).add(&bm.mul(pm)), vector_pairs(c)).evaluate(
        B_INVARIANCE,
        sampler,
        &c.coords,
    )?;
    let hyp = cond.passed();
    rep.push(cond);
    let transformed = b_transform(&phi.big_phi, b2)?;
    let same = difference("Phi_B = Phi", &transformed, &phi.big_phi, sampler)?;
    let holds = same.passed();
    conditional(&mut rep, hyp, same);
    rep.push(CheckItem::logic("invariance condition => Phi_B = Phi", hyp, holds));
    rep.push(closed_info(b2, sampler)?);
    Ok(rep)
}

fn closed_info(b2: &TwoForm, sampler: &Sampler) -> Result<CheckItem> {
    let item = closedness(b2).evaluate(CLOSED, sampler, &b2.chart().coords)?;
    let note = if item.passed() { "closed" } else { "not closed; e^B is not a symmetry of the bracket" };
    Ok(item.into_info().with_note(note))
}

/// The sufficient condition for Φ_B to be generalized almost paracontact,
/// with check_gapc on Φ_B as the consequence.
pub fn b_sufficiency(b2: &TwoForm, s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    Chart::ensure_same(s.chart(), b2.chart())?;
    let c = s.chart();
    let phi = induce_gapc(s, sampler)?;
    let pm = s.phi.matrix();
    let bm = b2.matrix();
    let p2 = pm.mul(pm);
    let mut rep = CheckReport::new(format!("B-sufficiency {}", s.name));
    let cond = matrix_residual(c, p2.transpose().mul(bm).sub(&pm.transpose().mul(bm).mul(pm)), vector_pairs(c))
        .evaluate(B_SUFFICIENCY, sampler, &c.coords)?;
    let hyp = cond.passed();
    rep.push(cond);
    let transformed =
        Gapc::new(format!("{} B-transformed", s.name), b_transform(&phi.big_phi, b2)?, s.xi.clone(), s.eta.clone())?;
    let gapc = check_gapc(&transformed, sampler)?;
    let holds = gapc.passed();
    for it in gapc.items {
        let it = CheckItem { label: format!("Phi_B: {}", it.label), ..it };
        conditional(&mut rep, hyp, it);
    }
    rep.push(CheckItem::logic("sufficiency condition => Phi_B generalized almost paracontact", hyp, holds));
    rep.push(closed_info(b2, sampler)?);
    Ok(rep)
}

/// The condition under which e^β leaves the induced structure unchanged.
pub fn beta_invariance(beta2: &Bivector, s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    Chart::ensure_same(s.chart(), beta2.chart())?;
    let c = s.chart();
    let phi = induce_gapc(s, sampler)?;
    let pm = s.phi.matrix();
    let q = beta2.matrix();
    let mut rep = CheckReport::new(format!("beta-invariance {}", s.name));
    let cond = matrix_residual(c, q.mul(&pm.transpose()).add(&pm.mul(q)), |i, j| {
        format!("{} -> {}", c.form_label(j), c.vector_label(i))
    })
    .evaluate(BETA_INVARIANCE, sampler, &c.coords)?;
    let hyp = cond.passed();
    rep.push(cond);
    let transformed = beta_transform(&phi.big_phi, beta2)?;
    let same = difference("Phi_beta = Phi", &transformed, &phi.big_phi, sampler)?;
    let holds = same.passed();
    conditional(&mut rep, hyp, same);
    rep.push(CheckItem::logic("invariance condition => Phi_beta = Phi", hyp, holds));
    Ok(rep)
}

/// The sufficient condition on β, evaluated on each α = dx^k, the identity
/// used to derive it, and check_gapc on Φ_β.
pub fn beta_sufficiency(beta2: &Bivector, s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    Chart::ensure_same(s.chart(), beta2.chart())?;
    let c = s.chart();
    let phi = induce_gapc(s, sampler)?;
    let mut rep = CheckReport::new(format!("beta-sufficiency {}", s.name));
    let beta_eta = beta2.contract(&s.eta)?;
    let phi2 = s.phi.square();
    let phi_t2 = Endo::new(c, phi2.matrix().transpose())?;
    let mut cond = Residuals::new();
    let mut ident = Residuals::new();
    for k in 0..c.dim() {
        let alpha = OneForm::coordinate(c, k);
        let b_alpha = beta2.contract(&alpha)?;
        let rhs = s.xi.scale(&s.eta.on(&b_alpha)?).sub(&beta_eta.scale(&alpha.on(&s.xi)?))?;
        cond.tensor(&format!("alpha={}", c.form_label(k)), &rhs);
        let star2_alpha = OneForm::new(c, phi_t2.matrix().mul_vec(alpha.comps()))?;
        let lhs = beta2.contract(&star2_alpha)?.sub(&phi2.apply(&b_alpha)?)?;
        ident.tensor(&format!("alpha={}", c.form_label(k)), &lhs.sub(&rhs)?);
    }
    let cond = cond.evaluate(BETA_SUFFICIENCY, sampler, &c.coords)?;
    let hyp = cond.passed();
    rep.push(cond);
    rep.push(ident.evaluate(BETA_PROOF_IDENTITY, sampler, &c.coords)?);
    let transformed = Gapc::new(
        format!("{} beta-transformed", s.name),
        beta_transform(&phi.big_phi, beta2)?,
        s.xi.clone(),
        s.eta.clone(),
    )?;
    let gapc = check_gapc(&transformed, sampler)?;
    let holds = gapc.passed();
    for it in gapc.items {
        let it = CheckItem { label: format!("Phi_beta: {}", it.label), ..it };
        conditional(&mut rep, hyp, it);
    }
    rep.push(CheckItem::logic("sufficiency condition => Phi_beta generalized almost paracontact", hyp, holds));
    Ok(rep)
}

/// Upper-right block of the β-transform written exactly as the literal
/// formula φ + β₂B, −φβ₂ − β₂φ* + β − β₂Bφ (with the last term as printed).
/// Kept only to document that it differs from conjugation when B ≠ 0.
pub fn beta_transform_literal_upper_right(p: &GenEndo, beta2: &Bivector) -> Result<SMatrix> {
    Chart::ensure_same(p.chart(), beta2.chart())?;
    let phi = p.phi.matrix();
    let q = beta2.matrix();
    let l = p.b.matrix().transpose();
    Ok(p.beta.matrix().sub(&phi.mul(q)).sub(&q.mul(&phi.transpose())).sub(&q.mul(&l).mul(phi)))
}

/// The fundamental form g(φX, Y), the B-field of the para-cosymplectic case.
pub fn fundamental_form(s: &Apc) -> Result<TwoForm> {
    s.fundamental_form()
}
