//! Lie-Cartan calculus on a single chart.
//!
//! Conventions: `d` and `∧` carry no 1/2 factor, so
//! `dα(X,Y) = X(α(Y)) − Y(α(X)) − α([X,Y])` and `(η∧θ)_ij = η_i θ_j − η_j θ_i`.

use super::chart::{Chart, ChartRef};
use super::fields::{Bivector, Components, Endo, Metric, OneForm, TwoForm, VectorField};
use super::matrix::SMatrix;
use crate::error::{Error, Result};
use crate::symkernel::Scalar;

/// [X, Y]^i = Σ_j (X^j ∂_j Y^i − Y^j ∂_j X^i).
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    Chart::ensure_same(x.chart(), y.chart())?;
    let comps = (0..x.chart().dim()).map(|i| &x.apply(y.comp(i)) - &y.apply(x.comp(i))).collect();
    VectorField::new(x.chart(), comps)
}

/// A form of degree 0, 1 or 2.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Zero(ChartRef, Scalar),
    One(OneForm),
    Two(TwoForm),
}

impl Form {
    pub fn degree(&self) -> usize {
        match self {
            Form::Zero(..) => 0,
            Form::One(_) => 1,
            Form::Two(_) => 2,
        }
    }
}

pub fn d0(chart: &ChartRef, f: &Scalar) -> OneForm {
    let comps = chart.coords.iter().map(|v| f.diff(v)).collect();
    OneForm::new(chart, comps).expect("one component per coordinate")
}

/// (dα)_ij = ∂_i α_j − ∂_j α_i.
pub fn d1(a: &OneForm) -> TwoForm {
    let c = a.chart();
    let n = c.dim();
    let m = SMatrix::from_fn(n, n, |i, j| &a.comp(j).diff(&c.coords[i]) - &a.comp(i).diff(&c.coords[j]));
    TwoForm::new(c, m).expect("antisymmetric by construction")
}

pub fn exterior_derivative(w: &Form) -> Result<Form> {
    match w {
        Form::Zero(c, f) => Ok(Form::One(d0(c, f))),
        Form::One(a) => Ok(Form::Two(d1(a))),
        Form::Two(_) => Err(Error::UnsupportedDegree(2)),
    }
}

/// i_X ω = ω(X, ·).
pub fn interior_two(x: &VectorField, w: &TwoForm) -> Result<OneForm> {
    w.contract(x)
}

/// L_X α = i_X dα + d(α(X)).
pub fn lie_derivative_oneform(x: &VectorField, a: &OneForm) -> Result<OneForm> {
    Chart::ensure_same(x.chart(), a.chart())?;
    let first = interior_two(x, &d1(a))?;
    first.add(&d0(a.chart(), &a.on(x)?))
}

/// (L_X φ)(Y) = [X, φY] − φ[X, Y], assembled on coordinate fields.
pub fn lie_derivative_endo(x: &VectorField, phi: &Endo) -> Result<Endo> {
    Chart::ensure_same(x.chart(), phi.chart())?;
    let c = x.chart();
    let cols = (0..c.dim())
        .map(|j| {
            let dj = VectorField::coordinate(c, j);
            lie_bracket(x, &phi.column(j))?.sub(&phi.apply(&lie_bracket(x, &dj)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Endo::from_columns(c, &cols)
}

/// (φ*α)(X) = α(φX); components φᵀα.
pub fn dual_endo_apply(phi: &Endo, a: &OneForm) -> Result<OneForm> {
    Chart::ensure_same(phi.chart(), a.chart())?;
    OneForm::new(a.chart(), phi.matrix().transpose().mul_vec(a.comps()))
}

/// (i_X g)(Y) = g(X, Y).
pub fn interior_product_metric(x: &VectorField, g: &Metric) -> Result<OneForm> {
    g.flat(x)
}

pub fn flat(g: &Metric, x: &VectorField) -> Result<OneForm> {
    g.flat(x)
}

pub fn sharp(g: &Metric, a: &OneForm) -> Result<VectorField> {
    g.sharp(a)
}

/// (X∧Y)^ij = X^i Y^j − X^j Y^i.
pub fn wedge_vv(x: &VectorField, y: &VectorField) -> Result<Bivector> {
    Chart::ensure_same(x.chart(), y.chart())?;
    let n = x.chart().dim();
    let m = SMatrix::from_fn(n, n, |i, j| &(x.comp(i) * y.comp(j)) - &(x.comp(j) * y.comp(i)));
    Bivector::new(x.chart(), m)
}

/// (α∧γ)_ij = α_i γ_j − α_j γ_i.
pub fn wedge_ff(a: &OneForm, b: &OneForm) -> Result<TwoForm> {
    Chart::ensure_same(a.chart(), b.chart())?;
    let n = a.chart().dim();
    let m = SMatrix::from_fn(n, n, |i, j| &(a.comp(i) * b.comp(j)) - &(a.comp(j) * b.comp(i)));
    TwoForm::new(a.chart(), m)
}

/// The endomorphism α⊗X : Y ↦ α(Y) X.
pub fn form_tensor_vector(a: &OneForm, x: &VectorField) -> Result<Endo> {
    Chart::ensure_same(a.chart(), x.chart())?;
    let n = a.chart().dim();
    Endo::new(a.chart(), SMatrix::from_fn(n, n, |i, j| x.comp(i) * a.comp(j)))
}

/// N_φ(X,Y) = [φX,φY] + φ²[X,Y] − φ[φX,Y] − φ[X,φY].
pub fn nijenhuis_endo(phi: &Endo, x: &VectorField, y: &VectorField) -> Result<VectorField> {
    Chart::ensure_same(phi.chart(), x.chart())?;
    Chart::ensure_same(phi.chart(), y.chart())?;
    let px = phi.apply(x)?;
    let py = phi.apply(y)?;
    let t1 = lie_bracket(&px, &py)?;
    let t2 = phi.square().apply(&lie_bracket(x, y)?)?;
    let t3 = phi.apply(&lie_bracket(&px, y)?)?;
    let t4 = phi.apply(&lie_bracket(x, &py)?)?;
    t1.add(&t2)?.sub(&t3)?.sub(&t4)
}

/// M×ℝ with the extra coordinate appended last.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductChart {
    pub base: ChartRef,
    pub chart: ChartRef,
    /// Name of the line coordinate; `t` unless that collides.
    pub t: String,
    pub note: Option<String>,
}

pub fn product_with_line(base: &ChartRef) -> Result<ProductChart> {
    let mut t = "t".to_string();
    let mut k = 1;
    while base.index(&t).is_some() {
        t = format!("t{k}");
        k += 1;
    }
    let note =
        (t != "t").then(|| format!("coordinate `t` already used on {}; line coordinate renamed to `{t}`", base.name));
    let mut coords = base.coords.clone();
    coords.push(t.clone());
    let chart = Chart::new(format!("{}xR", base.name), coords)?;
    Ok(ProductChart { base: base.clone(), chart, t, note })
}

impl ProductChart {
    fn t_index(&self) -> usize {
        self.base.dim()
    }

    fn check(&self, c: &ChartRef) -> Result<()> {
        Chart::ensure_same(&self.base, c)
    }

    fn pad_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        out.push(Scalar::zero());
        out
    }

    fn pad_matrix(&self, m: &SMatrix) -> SMatrix {
        let n = self.base.dim();
        SMatrix::from_fn(n + 1, n + 1, |i, j| if i < n && j < n { m.get(i, j).clone() } else { Scalar::zero() })
    }

    pub fn d_dt(&self) -> VectorField {
        VectorField::coordinate(&self.chart, self.t_index())
    }

    pub fn dt(&self) -> OneForm {
        OneForm::coordinate(&self.chart, self.t_index())
    }

    pub fn lift_vf(&self, x: &VectorField) -> Result<VectorField> {
        self.check(x.chart())?;
        VectorField::new(&self.chart, self.pad_vec(x.comps()))
    }

    pub fn lift_form(&self, a: &OneForm) -> Result<OneForm> {
        self.check(a.chart())?;
        OneForm::new(&self.chart, self.pad_vec(a.comps()))
    }

    pub fn lift_endo(&self, e: &Endo) -> Result<Endo> {
        self.check(e.chart())?;
        Endo::new(&self.chart, self.pad_matrix(e.matrix()))
    }

    pub fn lift_two(&self, b: &TwoForm) -> Result<TwoForm> {
        self.check(b.chart())?;
        TwoForm::new(&self.chart, self.pad_matrix(b.matrix()))
    }

    pub fn lift_bivector(&self, b: &Bivector) -> Result<Bivector> {
        self.check(b.chart())?;
        Bivector::new(&self.chart, self.pad_matrix(b.matrix()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn r3() -> ChartRef {
        Chart::named("R3", &["x", "y", "z"])
    }

    fn vf(c: &ChartRef, comps: &[&str]) -> VectorField {
        VectorField::new(c, comps.iter().map(|t| s(t)).collect()).unwrap()
    }

    fn form(c: &ChartRef, comps: &[&str]) -> OneForm {
        OneForm::new(c, comps.iter().map(|t| s(t)).collect()).unwrap()
    }

    /// S1: φ∂x = ∂y, φ∂y = ∂x + y∂z, φ∂z = 0.
    fn s1_phi(c: &ChartRef) -> Endo {
        Endo::from_columns(c, &[vf(c, &["0", "1", "0"]), vf(c, &["1", "0", "y"]), vf(c, &["0", "0", "0"])]).unwrap()
    }

    #[test]
    fn brackets() {
        let c = r3();
        let (dx, dy) = (vf(&c, &["1", "0", "0"]), vf(&c, &["0", "1", "0"]));
        assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
        assert_eq!(lie_bracket(&dy, &vf(&c, &["1", "0", "y"])).unwrap(), vf(&c, &["0", "0", "1"]));
        let x = vf(&c, &["sin(y)", "x*z", "exp(x)"]);
        assert!(lie_bracket(&x, &x).unwrap().is_zero());
        let other = Chart::named("R3b", &["x", "y", "z"]);
        assert!(matches!(lie_bracket(&x, &VectorField::zero(&other)), Err(Error::ChartMismatch { .. })));
    }

    #[test]
    fn exterior_derivatives() {
        let c = r3();
        assert!(d1(&form(&c, &["0", "0", "1"])).is_zero());
        let deta = d1(&form(&c, &["-y", "0", "1"]));
        assert_eq!(deta.on(&vf(&c, &["1", "0", "0"]), &vf(&c, &["0", "1", "0"])).unwrap(), s("1"));
        assert_eq!(d0(&c, &s("x*y")), form(&c, &["y", "x", "0"]));
        assert!(matches!(exterior_derivative(&Form::Two(deta)), Err(Error::UnsupportedDegree(2))));
        let f = s("sin(x*y) + exp(z)*x^3");
        assert!(d1(&d0(&c, &f)).is_zero());
    }

    #[test]
    fn lie_derivatives() {
        let c = r3();
        let eta = form(&c, &["-y", "0", "1"]);
        assert!(lie_derivative_oneform(&vf(&c, &["0", "0", "1"]), &eta).unwrap().is_zero());
        assert_eq!(lie_derivative_oneform(&vf(&c, &["0", "1", "0"]), &eta).unwrap(), form(&c, &["-1", "0", "0"]));
        assert!(lie_derivative_oneform(&VectorField::zero(&c), &eta).unwrap().is_zero());
        let s2 = Endo::from_columns(
            &c,
            &[vf(&c, &["0", "exp(z)", "0"]), vf(&c, &["exp(-z)", "0", "0"]), VectorField::zero(&c)],
        )
        .unwrap();
        let l = lie_derivative_endo(&vf(&c, &["0", "0", "1"]), &s2).unwrap();
        assert_eq!(l.column(0), vf(&c, &["0", "exp(z)", "0"]));
        assert!(lie_derivative_endo(&vf(&c, &["x", "y^2", "1"]), &Endo::identity(&c)).unwrap().is_zero());
    }

    #[test]
    fn dual_and_metric_contractions() {
        let c = r3();
        let s0 = Endo::from_columns(&c, &[vf(&c, &["0", "1", "0"]), vf(&c, &["1", "0", "0"]), VectorField::zero(&c)])
            .unwrap();
        assert_eq!(dual_endo_apply(&s0, &form(&c, &["1", "0", "0"])).unwrap(), form(&c, &["0", "1", "0"]));
        assert!(dual_endo_apply(&s0, &form(&c, &["0", "0", "1"])).unwrap().is_zero());
        let g = Metric::diagonal(&c, vec![s("1"), s("-1"), s("1")]).unwrap();
        assert_eq!(interior_product_metric(&vf(&c, &["0", "0", "1"]), &g).unwrap(), form(&c, &["0", "0", "1"]));
        assert_eq!(interior_product_metric(&vf(&c, &["1", "0", "0"]), &g).unwrap(), form(&c, &["1", "0", "0"]));
    }

    #[test]
    fn wedges_and_product_chart() {
        let c = r3();
        let p = product_with_line(&c).unwrap();
        assert_eq!(p.chart.coords, vec!["x", "y", "z", "t"]);
        let dz = p.lift_vf(&vf(&c, &["0", "0", "1"])).unwrap();
        assert!(p.lift_vf(&vf(&c, &["0", "0", "1"])).unwrap().comp(3).is_zero());
        let w = wedge_vv(&dz, &p.d_dt()).unwrap();
        assert_eq!((w.comp(2, 3), w.comp(3, 2)), (&s("1"), &s("-1")));
        let f = wedge_ff(&p.lift_form(&form(&c, &["0", "0", "1"])).unwrap(), &p.dt()).unwrap();
        assert_eq!((f.comp(2, 3), f.comp(3, 2)), (&s("1"), &s("-1")));
        assert!(wedge_vv(&dz, &dz).unwrap().is_zero());
        let ct = Chart::named("Rt", &["t", "x"]);
        let q = product_with_line(&ct).unwrap();
        assert_eq!(q.t, "t1");
        assert!(q.note.is_some());
    }

    #[test]
    fn nijenhuis_of_s1() {
        let c = r3();
        let phi = s1_phi(&c);
        let (dx, dy) = (vf(&c, &["1", "0", "0"]), vf(&c, &["0", "1", "0"]));
        assert_eq!(nijenhuis_endo(&phi, &dx, &dy).unwrap(), vf(&c, &["0", "0", "1"]));
        assert!(nijenhuis_endo(&phi, &dx, &dx).unwrap().is_zero());
        let f = s("x");
        let lhs = nijenhuis_endo(&phi, &dx.scale(&f), &dy).unwrap();
        assert_eq!(lhs, nijenhuis_endo(&phi, &dx, &dy).unwrap().scale(&f));
    }
}
