use crate::error::{Error, Result};
use crate::gentangent::metric::metric_skewness;
use crate::gentangent::{frame, g0_pair, gen_endo_apply, GenEndo, GenOp, GenSection};
use crate::report::{CheckReport, Residuals};
use crate::symkernel::{Sampler, Scalar};
use crate::tensorcalc::{
    dual_endo_apply, form_tensor_vector, Chart, ChartRef, Components, Endo, Metric, OneForm, SMatrix, TwoForm,
    VectorField,
};

/// An almost paracontact structure (φ, ξ, η), optionally with a metric.
/// Construction does not validate the axioms; use [`check_apc`].
#[derive(Clone, Debug, PartialEq)]
pub struct Apc {
    pub name: String,
    pub phi: Endo,
    pub xi: VectorField,
    pub eta: OneForm,
    pub g: Option<Metric>,
}

impl Apc {
    pub fn new(name: impl Into<String>, phi: Endo, xi: VectorField, eta: OneForm, g: Option<Metric>) -> Result<Self> {
        Chart::ensure_same(phi.chart(), xi.chart())?;
        Chart::ensure_same(phi.chart(), eta.chart())?;
        if let Some(g) = &g {
            Chart::ensure_same(phi.chart(), g.chart())?;
        }
        Ok(Apc { name: name.into(), phi, xi, eta, g })
    }

    pub fn chart(&self) -> &ChartRef {
        self.phi.chart()
    }

    pub fn coords(&self) -> &[String] {
        &self.chart().coords
    }

    /// J = η⊗ξ, the endomorphism X ↦ η(X)ξ.
    pub fn j(&self) -> Endo {
        form_tensor_vector(&self.eta, &self.xi).expect("same chart")
    }

    /// The fundamental 2-form B(X,Y) = g(φX, Y); requires a metric.
    pub fn fundamental_form(&self) -> Result<TwoForm> {
        let g =
            self.g.as_ref().ok_or_else(|| Error::Precondition(format!("structure `{}` has no metric", self.name)))?;
        TwoForm::new(self.chart(), self.phi.matrix().transpose().mul(g.matrix()))
    }
}

/// A generalized almost paracontact structure (Φ, ξ, η).
#[derive(Clone, Debug, PartialEq)]
pub struct Gapc {
    pub name: String,
    pub big_phi: GenEndo,
    pub xi: VectorField,
    pub eta: OneForm,
}

impl Gapc {
    pub fn new(name: impl Into<String>, big_phi: GenEndo, xi: VectorField, eta: OneForm) -> Result<Self> {
        Chart::ensure_same(big_phi.chart(), xi.chart())?;
        Chart::ensure_same(big_phi.chart(), eta.chart())?;
        Ok(Gapc { name: name.into(), big_phi, xi, eta })
    }

    pub fn chart(&self) -> &ChartRef {
        self.big_phi.chart()
    }

    /// F = diag(J, J*).
    pub fn f(&self) -> GenOp {
        let j = form_tensor_vector(&self.eta, &self.xi).expect("same chart");
        let n = self.chart().dim();
        GenOp::from_blocks(
            self.chart(),
            j.matrix(),
            &SMatrix::zeros(n, n),
            &SMatrix::zeros(n, n),
            &j.matrix().transpose(),
        )
        .expect("chart dimension")
    }

    /// diag(I − J, (I − J)*).
    pub fn target_square(&self) -> GenOp {
        GenOp::identity(self.chart()).sub(&self.f()).expect("same chart")
    }
}

pub(crate) fn endo_residual(label: &str, e: &Endo, sampler: &Sampler) -> Result<crate::report::CheckItem> {
    let mut r = Residuals::new();
    r.tensor("", e);
    r.evaluate(label, sampler, &e.chart().coords)
}

/// Axioms φ² = I − η⊗ξ, η(ξ) = 1 and the derived identities φξ = 0, η∘φ = 0.
pub fn check_apc(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    let c = s.chart();
    let mut rep = CheckReport::new(format!("apc {}", s.name));
    let target = Endo::identity(c).sub(&s.j())?;
    rep.push(endo_residual("phi^2 = I - eta(x)xi", &s.phi.square().sub(&target)?, sampler)?);
    let mut unit = Residuals::new();
    unit.push("eta(xi)", &s.eta.on(&s.xi)? - &Scalar::one());
    rep.push(unit.evaluate("eta(xi) = 1", sampler, &c.coords)?);
    let mut r = Residuals::new();
    r.tensor("", &s.phi.apply(&s.xi)?);
    rep.push(r.evaluate("phi xi = 0", sampler, &c.coords)?);
    let mut r = Residuals::new();
    r.tensor("", &dual_endo_apply(&s.phi, &s.eta)?);
    rep.push(r.evaluate("eta o phi = 0", sampler, &c.coords)?);
    Ok(rep)
}

/// Compatibility g(φX,φY) = −g(X,Y) + η(X)η(Y) and its consequences.
pub fn check_apc_metric(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    let g = s.g.as_ref().ok_or_else(|| Error::Precondition(format!("structure `{}` has no metric", s.name)))?;
    let c = s.chart();
    let mut rep = CheckReport::new(format!("apc metric {}", s.name));
    let mut compat = Residuals::new();
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            let (x, y) = (VectorField::coordinate(c, i), VectorField::coordinate(c, j));
            let lhs = g.on(&s.phi.apply(&x)?, &s.phi.apply(&y)?)?;
            let rhs = &(-g.on(&x, &y)?) + &(&s.eta.on(&x)? * &s.eta.on(&y)?);
            compat.push(format!("({},{})", c.vector_label(i), c.vector_label(j)), &lhs - &rhs);
        }
    }
    rep.push(compat.evaluate("g(phi X,phi Y) = -g(X,Y) + eta(X)eta(Y)", sampler, &c.coords)?);
    let mut r = Residuals::new();
    r.tensor("", &g.flat(&s.xi)?.sub(&s.eta)?);
    rep.push(r.evaluate("i_xi g = eta", sampler, &c.coords)?);
    let mut r = Residuals::new();
    r.push("g(xi,xi)", &g.on(&s.xi, &s.xi)? - &Scalar::one());
    rep.push(r.evaluate("g(xi,xi) = 1", sampler, &c.coords)?);
    rep.push(metric_skewness(g, &s.phi)?.evaluate("g(phi X,Y) + g(X,phi Y) = 0", sampler, &c.coords)?);
    Ok(rep)
}

/// The induced structure Φ = diag(φ, −φ*); refuses structures failing the axioms.
pub fn induce_gapc(s: &Apc, sampler: &Sampler) -> Result<Gapc> {
    let rep = check_apc(s, sampler)?;
    if !rep.passed() {
        return Err(Error::Precondition(format!(
            "`{}` is not almost paracontact (failing: {})",
            s.name,
            rep.failing().join(", ")
        )));
    }
    Ok(induce_unchecked(s))
}

pub(crate) fn induce_unchecked(s: &Apc) -> Gapc {
    Gapc {
        name: format!("induced {}", s.name),
        big_phi: GenEndo::diagonal(s.phi.clone()),
        xi: s.xi.clone(),
        eta: s.eta.clone(),
    }
}

pub const GAPC_SKEW: &str = "(1) g0(Phi A,C) = -g0(A,Phi C)";
pub const GAPC_SQUARE: &str = "(2) Phi^2 = diag(I - eta(x)xi, (I - eta(x)xi)^*)";
pub const GAPC_F: &str = "(3) Phi F = 0";
pub const GAPC_NORM: &str = "(4) |xi + eta|_g0 = 1";

/// The four defining conditions of a generalized almost paracontact structure.
pub fn check_gapc(gs: &Gapc, sampler: &Sampler) -> Result<CheckReport> {
    let c = gs.chart();
    let coords = &c.coords;
    let mut rep = CheckReport::new(format!("gapc {}", gs.name));
    let op = gs.big_phi.to_op();

    let mut skew = Residuals::new();
    let f = frame(c);
    for (i, (la, a)) in f.iter().enumerate() {
        for (lb, b) in &f[i..] {
            let r = &g0_pair(&gen_endo_apply(&gs.big_phi, a)?, b)? + &g0_pair(a, &gen_endo_apply(&gs.big_phi, b)?)?;
            skew.push(format!("({la},{lb})"), r);
        }
    }
    rep.push(skew.evaluate(GAPC_SKEW, sampler, coords)?);

    let mut sq = Residuals::new();
    sq.tensor("", &op.square().sub(&gs.target_square())?);
    rep.push(sq.evaluate(GAPC_SQUARE, sampler, coords)?);

    let mut pf = Residuals::new();
    pf.tensor("", &op.compose(&gs.f())?);
    rep.push(pf.evaluate(GAPC_F, sampler, coords)?);

    let xe = GenSection::new(gs.xi.clone(), gs.eta.clone())?;
    let mut norm = Residuals::new();
    norm.push("g0(xi+eta,xi+eta)", &g0_pair(&xe, &xe)? - &Scalar::one());
    rep.push(norm.evaluate(GAPC_NORM, sampler, coords)?);
    Ok(rep)
}

/// The block form of the conditions in terms of (φ, β, B, ξ, η).
pub fn gapc_block_conditions(gs: &Gapc, sampler: &Sampler) -> Result<CheckReport> {
    let c = gs.chart();
    let coords = &c.coords;
    let n = c.dim();
    let mut rep = CheckReport::new(format!("gapc blocks {}", gs.name));
    let phi = gs.big_phi.phi.matrix();
    let q = gs.big_phi.beta.matrix();
    let bm = gs.big_phi.b.matrix();
    // B acting as X ↦ B(X,·)
    let l = bm.transpose();
    let j = form_tensor_vector(&gs.eta, &gs.xi)?;
    let i_minus_j = SMatrix::identity(n).sub(j.matrix());
    let phit = phi.transpose();

    let push = |label: &str, m: SMatrix, rep: &mut CheckReport| -> Result<()> {
        let mut r = Residuals::new();
        r.tensor("", &Endo::new(c, m)?);
        rep.push(r.evaluate(label, sampler, coords)?);
        Ok(())
    };
    push("phi^2 + beta B = I - eta(x)xi", phi.mul(phi).add(&q.mul(&l)).sub(&i_minus_j), &mut rep)?;
    push(
        "B beta + (phi^*)^2 = (I - eta(x)xi)^*",
        l.mul(q).add(&phit.mul(&phit)).sub(&i_minus_j.transpose()),
        &mut rep,
    )?;
    push("phi beta - beta phi^* = 0", phi.mul(q).sub(&q.mul(&phit)), &mut rep)?;
    push("B phi - phi^* B = 0", l.mul(phi).sub(&phit.mul(&l)), &mut rep)?;

    let pair_residual = |m: SMatrix, label: &dyn Fn(usize, usize) -> String| {
        let mut r = Residuals::new();
        for i in 0..n {
            for k in 0..n {
                r.push(label(i, k), m.get(i, k).clone());
            }
        }
        r
    };
    // β(α, φ*γ) − β(φ*α, γ) on dual frame pairs: β φᵀ − φ β
    let r = pair_residual(q.mul(&phit).sub(&phi.mul(q)), &|i, k| format!("({},{})", c.form_label(i), c.form_label(k)));
    rep.push(r.evaluate("beta(alpha,phi^* gamma) = beta(phi^* alpha,gamma)", sampler, coords)?);
    // B(X, φY) − B(φX, Y): B φ − φᵀ B
    let r =
        pair_residual(bm.mul(phi).sub(&phit.mul(bm)), &|i, k| format!("({},{})", c.vector_label(i), c.vector_label(k)));
    rep.push(r.evaluate("B(X,phi Y) = B(phi X,Y)", sampler, coords)?);

    let mut r = Residuals::new();
    r.tensor("", &gs.big_phi.beta.contract(&gs.eta)?);
    rep.push(r.evaluate("beta(eta,.) = 0", sampler, coords)?);
    let mut r = Residuals::new();
    r.tensor("", &gs.big_phi.b.contract(&gs.xi)?);
    rep.push(r.evaluate("B(xi,.) = 0", sampler, coords)?);
    let mut r = Residuals::new();
    r.tensor("", &gs.big_phi.phi.apply(&gs.xi)?);
    rep.push(r.evaluate("phi xi = 0", sampler, coords)?);
    let mut r = Residuals::new();
    r.tensor("", &dual_endo_apply(&gs.big_phi.phi, &gs.eta)?);
    rep.push(r.evaluate("eta o phi = 0", sampler, coords)?);
    let mut r = Residuals::new();
    r.push("eta(xi)", &gs.eta.on(&gs.xi)? - &Scalar::one());
    rep.push(r.evaluate("eta(xi) = 1", sampler, coords)?);
    Ok(rep)
}

/// Φ²(X+α) = (X+α) − [η(X)ξ + α(ξ)η] on every frame section, for the
/// induced structure.
pub fn check_induced_square(s: &Apc, sampler: &Sampler) -> Result<CheckReport> {
    let c = s.chart();
    let phi = GenEndo::diagonal(s.phi.clone());
    let mut rep = CheckReport::new(format!("induced square {}", s.name));
    let mut r = Residuals::new();
    for (label, a) in frame(c) {
        let lhs = gen_endo_apply(&phi, &gen_endo_apply(&phi, &a)?)?;
        let correction = GenSection::new(s.xi.scale(&s.eta.on(&a.vf)?), s.eta.scale(&a.form.on(&s.xi)?))?;
        let rhs = a.sub(&correction)?;
        r.tensor(&label, &lhs.sub(&rhs)?);
    }
    rep.push(r.evaluate("Phi^2(X+alpha) = (X+alpha) - [eta(X)xi + alpha(xi)eta]", sampler, &c.coords)?);
    Ok(rep)
}
