use super::diffeo::{induced_gen_map, pullback_form, pushforward_vf, Diffeo};
use crate::error::Result;
use crate::gentangent::{frame, gen_endo_apply, GenEndo, GenSection};
use crate::parastruct::{check_apc, Apc};
use crate::report::{CheckItem, CheckReport, Residuals};
use crate::symkernel::Sampler;
use crate::tensorcalc::{dual_endo_apply, Chart, OneForm, VectorField};

pub const MORPH_INTERTWINE: &str = "phi_2 o f_* = f_* o phi_1";
pub const MORPH_XI: &str = "f_* xi_1 = xi_2";
pub const MORPH_ETA: &str = "f^* eta_2 = eta_1";
pub const MORPH_DUAL: &str = "phi_1^* o f^* = f^* o phi_2^*";
pub const MORPH_LOGIC: &str = "defining identities => f^* eta_2 = eta_1";
pub const GEN_COMMUTATION: &str = "Phi_2 o f~ = f~ o Phi_1";
pub const GEN_XI_ANCHOR: &str = "f~(xi_1 + 0) = xi_2 + 0";
pub const GEN_ETA_ANCHOR: &str = "f~(0 + eta_1) = 0 + eta_2";

/// Checks φ₂∘f_* = f_*∘φ₁ and f_*ξ₁ = ξ₂ on coordinate fields, the implied
/// f*η₂ = η₁ and the dual intertwining on the target coframe.
pub fn check_paracontactomorphism(f: &Diffeo, s1: &Apc, s2: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    Chart::ensure_same(f.source(), s1.chart())?;
    Chart::ensure_same(f.target(), s2.chart())?;
    let (src, tgt) = (f.source(), f.target());
    let mut rep = CheckReport::new(format!("paracontactomorphism {}: {} -> {}", f.name, s1.name, s2.name));

    let mut inter = Residuals::new();
    for j in 0..src.dim() {
        let e = VectorField::coordinate(src, j);
        let lhs = s2.phi.apply(&pushforward_vf(f, &e)?)?;
        let rhs = pushforward_vf(f, &s1.phi.apply(&e)?)?;
        inter.tensor(&src.vector_label(j), &lhs.sub(&rhs)?);
    }
    let inter = inter.evaluate(MORPH_INTERTWINE, sampler, &tgt.coords)?;
    let mut xi = Residuals::new();
    xi.tensor("", &pushforward_vf(f, &s1.xi)?.sub(&s2.xi)?);
    let xi = xi.evaluate(MORPH_XI, sampler, &tgt.coords)?;
    let defining = inter.passed() && xi.passed();
    rep.push(inter);
    rep.push(xi);

    let mut eta = Residuals::new();
    eta.tensor("", &pullback_form(f, &s2.eta)?.sub(&s1.eta)?);
    let eta = eta.evaluate(MORPH_ETA, sampler, &src.coords)?;
    let implied = eta.passed();
    rep.push(eta);

    let mut dual = Residuals::new();
    for i in 0..tgt.dim() {
        let a = OneForm::coordinate(tgt, i);
        let lhs = dual_endo_apply(&s1.phi, &pullback_form(f, &a)?)?;
        let rhs = pullback_form(f, &dual_endo_apply(&s2.phi, &a)?)?;
        dual.tensor(&tgt.form_label(i), &lhs.sub(&rhs)?);
    }
    rep.push(dual.evaluate(MORPH_DUAL, sampler, &src.coords)?);

    let both_apc = check_apc(s1, sampler)?.passed() && check_apc(s2, sampler)?.passed();
    rep.push(CheckItem::logic(MORPH_LOGIC, defining && both_apc, implied));
    Ok(rep)
}

/// Φ₂∘f̃ = f̃∘Φ₁ on every frame section of the source and the two anchors
/// f̃(ξ₁) = ξ₂, f̃(η₁) = η₂ for the induced structures. When f is not a
/// paracontactomorphism the items are kept as information only.
pub fn check_gen_commutation(f: &Diffeo, s1: &Apc, s2: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    let morph = check_paracontactomorphism(f, s1, s2, sampler)?;
    let hyp = morph.passed();
    let tgt = f.target();
    let (p1, p2) = (GenEndo::diagonal(s1.phi.clone()), GenEndo::diagonal(s2.phi.clone()));
    let mut rep = CheckReport::new(format!("generalized commutation {}: {} -> {}", f.name, s1.name, s2.name));
    if !hyp {
        rep.note(format!("{} is not a paracontactomorphism; items below are unconditional data", f.name));
    }

    let mut comm = Residuals::new();
    for (label, a) in frame(f.source()) {
        let lhs = gen_endo_apply(&p2, &induced_gen_map(f, &a)?)?;
        let rhs = induced_gen_map(f, &gen_endo_apply(&p1, &a)?)?;
        comm.tensor(&label, &lhs.sub(&rhs)?);
    }
    let comm = comm.evaluate(GEN_COMMUTATION, sampler, &tgt.coords)?;
    let holds = comm.passed();

    let mut xi = Residuals::new();
    xi.tensor("", &induced_gen_map(f, &GenSection::vector(s1.xi.clone()))?.sub(&GenSection::vector(s2.xi.clone()))?);
    let xi = xi.evaluate(GEN_XI_ANCHOR, sampler, &tgt.coords)?;
    let mut eta = Residuals::new();
    eta.tensor(
        "",
        &induced_gen_map(f, &GenSection::covector(s1.eta.clone()))?.sub(&GenSection::covector(s2.eta.clone()))?,
    );
    let eta = eta.evaluate(GEN_ETA_ANCHOR, sampler, &tgt.coords)?;

    for it in [comm, xi, eta] {
        rep.push(if hyp { it } else { it.into_info().with_note("not a paracontactomorphism") });
    }
    rep.push(CheckItem::logic("paracontactomorphism => Phi_2 o f~ = f~ o Phi_1", hyp, holds));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::maps;
    use crate::parastruct::catalog;
    use crate::report::{ItemKind, Verdict};
    use crate::symkernel::Tier;

    #[test]
    fn swap_is_a_paracontactomorphism_of_s0() {
        let s = Sampler::default();
        let s0 = catalog::s0();
        let f = maps::swap(s0.chart());
        let rep = check_paracontactomorphism(&f, &s0, &s0, &s).unwrap();
        assert_eq!(rep.verdict(), Verdict::Pass);
        assert!(rep.items.iter().all(|i| i.tier == Tier::SymbolicZero));
        let gen = check_gen_commutation(&f, &s0, &s0, &s).unwrap();
        assert_eq!(gen.verdict(), Verdict::Pass);
        assert!(gen.item(GEN_ETA_ANCHOR).unwrap().passed());
    }

    #[test]
    fn identity_works_for_every_catalog_structure() {
        let s = Sampler::default();
        for apc in catalog::structures() {
            let f = Diffeo::identity(apc.chart());
            assert_eq!(check_paracontactomorphism(&f, &apc, &apc, &s).unwrap().verdict(), Verdict::Pass);
            assert_eq!(check_gen_commutation(&f, &apc, &apc, &s).unwrap().verdict(), Verdict::Pass);
        }
    }

    #[test]
    fn scaling_breaks_the_intertwining() {
        let s = Sampler::default();
        let s0 = catalog::s0();
        let f = maps::scaling(s0.chart());
        let rep = check_paracontactomorphism(&f, &s0, &s0, &s).unwrap();
        let it = rep.item(MORPH_INTERTWINE).unwrap();
        let w = it.witness.as_ref().unwrap();
        // φ(f_* d/dx) = φ(2 d/dx) = 2 d/dy while f_*(φ d/dx) = f_* d/dy = d/dy
        assert_eq!(w.location, "d/dx d/dy");
        assert_eq!(w.expression, "1");
        assert!(rep.item(MORPH_XI).unwrap().passed());
        assert!(rep.item(MORPH_ETA).unwrap().passed());
        let gen = check_gen_commutation(&f, &s0, &s0, &s).unwrap();
        assert_eq!(gen.item(GEN_COMMUTATION).unwrap().kind, ItemKind::Info);
        assert!(!gen.item(GEN_COMMUTATION).unwrap().passed());
        assert!(!gen.notes.is_empty());
    }

    #[test]
    fn translation_maps_s1_to_its_translate() {
        // f(x,y,z) = (x+1,y,z) intertwines S1 with itself since S1 has no x-dependence
        let s = Sampler::default();
        let s1 = catalog::s1();
        let f = maps::translation(s1.chart());
        assert_eq!(check_paracontactomorphism(&f, &s1, &s1, &s).unwrap().verdict(), Verdict::Pass);
        assert_eq!(check_gen_commutation(&f, &s1, &s1, &s).unwrap().verdict(), Verdict::Pass);
    }
}
