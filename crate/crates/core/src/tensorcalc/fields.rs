//! Coordinate-frame tensor fields. Components are canonical scalars.

use nalgebra::{DMatrix, SymmetricEigen};

use super::chart::{Chart, ChartRef};
use super::matrix::SMatrix;
use crate::error::{Error, Result};
use crate::symkernel::{Point, Sampler, Scalar};

/// Labelled components, used to turn any tensor into residual entries.
pub trait Components {
    fn chart(&self) -> &ChartRef;
    fn labelled(&self) -> Vec<(String, Scalar)>;

    fn is_zero(&self) -> bool {
        self.labelled().iter().all(|(_, s)| s.is_zero())
    }
}

fn check_len(chart: &ChartRef, got: usize) -> Result<()> {
    if got == chart.dim() {
        Ok(())
    } else {
        Err(Error::Dimension { expected: chart.dim(), got })
    }
}

fn check_square(chart: &ChartRef, m: &SMatrix) -> Result<()> {
    check_len(chart, m.rows())?;
    check_len(chart, m.cols())
}

fn zip_with(a: &[Scalar], b: &[Scalar], f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    chart: ChartRef,
    comps: Vec<Scalar>,
}

impl VectorField {
    pub fn new(chart: &ChartRef, comps: Vec<Scalar>) -> Result<Self> {
        check_len(chart, comps.len())?;
        Ok(VectorField { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        VectorField { chart: chart.clone(), comps: vec![Scalar::zero(); chart.dim()] }
    }

    /// The coordinate field d/dx^i.
    pub fn coordinate(chart: &ChartRef, i: usize) -> Self {
        let mut v = VectorField::zero(chart);
        v.comps[i] = Scalar::one();
        v
    }

    pub fn comps(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Scalar {
        &self.comps[i]
    }

    pub fn add(&self, o: &VectorField) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(VectorField { chart: self.chart.clone(), comps: zip_with(&self.comps, &o.comps, |a, b| a + b) })
    }

    pub fn sub(&self, o: &VectorField) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(VectorField { chart: self.chart.clone(), comps: zip_with(&self.comps, &o.comps, |a, b| a - b) })
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * k).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    /// Directional derivative X(f).
    pub fn apply(&self, f: &Scalar) -> Scalar {
        self.comps.iter().zip(&self.chart.coords).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * &f.diff(v)).sum()
    }
}

impl Components for VectorField {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        self.comps.iter().enumerate().map(|(i, c)| (self.chart.vector_label(i), c.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    chart: ChartRef,
    comps: Vec<Scalar>,
}

impl OneForm {
    pub fn new(chart: &ChartRef, comps: Vec<Scalar>) -> Result<Self> {
        check_len(chart, comps.len())?;
        Ok(OneForm { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        OneForm { chart: chart.clone(), comps: vec![Scalar::zero(); chart.dim()] }
    }

    /// The coordinate form dx^i.
    pub fn coordinate(chart: &ChartRef, i: usize) -> Self {
        let mut v = OneForm::zero(chart);
        v.comps[i] = Scalar::one();
        v
    }

    pub fn comps(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Scalar {
        &self.comps[i]
    }

    pub fn add(&self, o: &OneForm) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(OneForm { chart: self.chart.clone(), comps: zip_with(&self.comps, &o.comps, |a, b| a + b) })
    }

    pub fn sub(&self, o: &OneForm) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(OneForm { chart: self.chart.clone(), comps: zip_with(&self.comps, &o.comps, |a, b| a - b) })
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        OneForm { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * k).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    /// α(X).
    pub fn on(&self, x: &VectorField) -> Result<Scalar> {
        Chart::ensure_same(&self.chart, x.chart())?;
        Ok(dot(&self.comps, x.comps()))
    }
}

impl Components for OneForm {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        self.comps.iter().enumerate().map(|(i, c)| (self.chart.form_label(i), c.clone())).collect()
    }
}

fn antisymmetric(m: &SMatrix) -> Result<()> {
    for i in 0..m.rows() {
        for j in i..m.cols() {
            if !(m.get(i, j) + m.get(j, i)).is_zero() {
                return Err(Error::NotAntisymmetric(i, j));
            }
        }
    }
    Ok(())
}

fn matrix_labels(m: &SMatrix, label: impl Fn(usize, usize) -> String) -> Vec<(String, Scalar)> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push((label(i, j), m.get(i, j).clone()));
        }
    }
    out
}

macro_rules! matrix_field_ops {
    ($t:ident) => {
        impl $t {
            pub fn matrix(&self) -> &SMatrix {
                &self.m
            }

            pub fn comp(&self, i: usize, j: usize) -> &Scalar {
                self.m.get(i, j)
            }

            pub fn zero(chart: &ChartRef) -> Self {
                $t { chart: chart.clone(), m: SMatrix::zeros(chart.dim(), chart.dim()) }
            }

            pub fn add(&self, o: &$t) -> Result<Self> {
                Chart::ensure_same(&self.chart, &o.chart)?;
                Ok($t { chart: self.chart.clone(), m: self.m.add(&o.m) })
            }

            pub fn sub(&self, o: &$t) -> Result<Self> {
                Chart::ensure_same(&self.chart, &o.chart)?;
                Ok($t { chart: self.chart.clone(), m: self.m.sub(&o.m) })
            }

            pub fn scale(&self, k: &Scalar) -> Self {
                $t { chart: self.chart.clone(), m: self.m.scale(k) }
            }

            pub fn neg(&self) -> Self {
                $t { chart: self.chart.clone(), m: self.m.neg() }
            }
        }
    };
}

/// Antisymmetric covariant 2-tensor; component (i,j) is B(d/dx^i, d/dx^j).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    chart: ChartRef,
    m: SMatrix,
}

matrix_field_ops!(TwoForm);

impl TwoForm {
    pub fn new(chart: &ChartRef, m: SMatrix) -> Result<Self> {
        check_square(chart, &m)?;
        antisymmetric(&m)?;
        Ok(TwoForm { chart: chart.clone(), m })
    }

    /// B(X, Y).
    pub fn on(&self, x: &VectorField, y: &VectorField) -> Result<Scalar> {
        Chart::ensure_same(&self.chart, x.chart())?;
        Chart::ensure_same(&self.chart, y.chart())?;
        Ok(dot(x.comps(), &self.m.mul_vec(y.comps())))
    }

    /// The 1-form B(X, ·).
    pub fn contract(&self, x: &VectorField) -> Result<OneForm> {
        Chart::ensure_same(&self.chart, x.chart())?;
        OneForm::new(&self.chart, self.m.transpose().mul_vec(x.comps()))
    }
}

impl Components for TwoForm {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        let c = &self.chart;
        matrix_labels(&self.m, |i, j| format!("({},{})", c.form_label(i), c.form_label(j)))
    }
}

/// Antisymmetric contravariant 2-tensor; component (i,j) is β(dx^i, dx^j).
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector {
    chart: ChartRef,
    m: SMatrix,
}

matrix_field_ops!(Bivector);

impl Bivector {
    pub fn new(chart: &ChartRef, m: SMatrix) -> Result<Self> {
        check_square(chart, &m)?;
        antisymmetric(&m)?;
        Ok(Bivector { chart: chart.clone(), m })
    }

    /// β(α, γ).
    pub fn on(&self, a: &OneForm, c: &OneForm) -> Result<Scalar> {
        Chart::ensure_same(&self.chart, a.chart())?;
        Chart::ensure_same(&self.chart, c.chart())?;
        Ok(dot(a.comps(), &self.m.mul_vec(c.comps())))
    }

    /// The vector field β(α) with components Σ_j β^ij α_j.
    pub fn contract(&self, a: &OneForm) -> Result<VectorField> {
        Chart::ensure_same(&self.chart, a.chart())?;
        VectorField::new(&self.chart, self.m.mul_vec(a.comps()))
    }
}

impl Components for Bivector {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        let c = &self.chart;
        matrix_labels(&self.m, |i, j| format!("({},{})", c.vector_label(i), c.vector_label(j)))
    }
}

/// A (1,1) tensor; column j holds the components of φ(d/dx^j).
#[derive(Clone, Debug, PartialEq)]
pub struct Endo {
    chart: ChartRef,
    m: SMatrix,
}

matrix_field_ops!(Endo);

impl Endo {
    pub fn new(chart: &ChartRef, m: SMatrix) -> Result<Self> {
        check_square(chart, &m)?;
        Ok(Endo { chart: chart.clone(), m })
    }

    pub fn identity(chart: &ChartRef) -> Self {
        Endo { chart: chart.clone(), m: SMatrix::identity(chart.dim()) }
    }

    /// Builds φ from the images of the coordinate fields.
    pub fn from_columns(chart: &ChartRef, images: &[VectorField]) -> Result<Self> {
        check_len(chart, images.len())?;
        for v in images {
            Chart::ensure_same(chart, v.chart())?;
        }
        Ok(Endo {
            chart: chart.clone(),
            m: SMatrix::from_fn(chart.dim(), chart.dim(), |i, j| images[j].comp(i).clone()),
        })
    }

    pub fn apply(&self, x: &VectorField) -> Result<VectorField> {
        Chart::ensure_same(&self.chart, x.chart())?;
        VectorField::new(&self.chart, self.m.mul_vec(x.comps()))
    }

    pub fn column(&self, j: usize) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.m.column(j) }
    }

    /// self ∘ other.
    pub fn compose(&self, o: &Endo) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(Endo { chart: self.chart.clone(), m: self.m.mul(&o.m) })
    }

    pub fn square(&self) -> Self {
        Endo { chart: self.chart.clone(), m: self.m.mul(&self.m) }
    }
}

impl Components for Endo {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        let c = &self.chart;
        matrix_labels(&self.m, |i, j| format!("{} -> {}", c.vector_label(j), c.vector_label(i)))
    }
}

/// Signature counts (positive, negative) of a metric, sampled pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    /// Set when different sample points gave different signatures.
    pub varies: bool,
}

/// Symmetric nondegenerate covariant 2-tensor with its inverse cached.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    chart: ChartRef,
    m: SMatrix,
    inv: SMatrix,
}

impl Metric {
    pub fn new(chart: &ChartRef, m: SMatrix) -> Result<Self> {
        check_square(chart, &m)?;
        for i in 0..m.rows() {
            for j in i + 1..m.cols() {
                if !(m.get(i, j) - m.get(j, i)).is_zero() {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let inv = m.inverse().map_err(|_| Error::DegenerateMetric)?;
        Ok(Metric { chart: chart.clone(), m, inv })
    }

    pub fn diagonal(chart: &ChartRef, entries: Vec<Scalar>) -> Result<Self> {
        check_len(chart, entries.len())?;
        Metric::new(chart, SMatrix::diagonal(entries))
    }

    pub fn matrix(&self) -> &SMatrix {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &SMatrix {
        &self.inv
    }

    pub fn comp(&self, i: usize, j: usize) -> &Scalar {
        self.m.get(i, j)
    }

    /// g(X, Y).
    pub fn on(&self, x: &VectorField, y: &VectorField) -> Result<Scalar> {
        Chart::ensure_same(&self.chart, x.chart())?;
        Chart::ensure_same(&self.chart, y.chart())?;
        Ok(dot(x.comps(), &self.m.mul_vec(y.comps())))
    }

    /// ♭(X) = i_X g.
    pub fn flat(&self, x: &VectorField) -> Result<OneForm> {
        Chart::ensure_same(&self.chart, x.chart())?;
        OneForm::new(&self.chart, self.m.mul_vec(x.comps()))
    }

    /// ♯(α), the inverse of ♭.
    pub fn sharp(&self, a: &OneForm) -> Result<VectorField> {
        Chart::ensure_same(&self.chart, a.chart())?;
        VectorField::new(&self.chart, self.inv.mul_vec(a.comps()))
    }

    fn numeric(&self, p: &Point) -> Result<DMatrix<f64>> {
        let n = self.chart.dim();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.m.get(i, j).eval(p)?;
            }
        }
        Ok(out)
    }

    /// Eigenvalue sign counts at the sampler's points.
    pub fn signature(&self, sampler: &Sampler) -> Result<Signature> {
        let vars = self.chart.coords.iter().cloned().collect();
        let counts = sampler.sample(&vars, |p| {
            let m = self.numeric(p)?;
            if m.iter().any(|v| !v.is_finite()) {
                return Ok(None);
            }
            let eig = SymmetricEigen::new(m).eigenvalues;
            let pos = eig.iter().filter(|v| **v > 0.0).count();
            Ok(Some((pos, eig.len() - pos)))
        })?;
        let (positive, negative) = counts.first().map(|(_, c)| *c).unwrap_or((0, 0));
        let varies = counts.iter().any(|(_, c)| *c != (positive, negative));
        Ok(Signature { positive, negative, varies })
    }
}

impl Components for Metric {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        let c = &self.chart;
        matrix_labels(&self.m, |i, j| format!("({},{})", c.form_label(i), c.form_label(j)))
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

    #[test]
    fn constructors_validate() {
        let c = r3();
        assert!(matches!(VectorField::new(&c, vec![s("1")]), Err(Error::Dimension { expected: 3, got: 1 })));
        let m = SMatrix::from_rows(vec![vec![s("0"), s("1")], vec![s("1"), s("0")]]);
        let c2 = Chart::named("R2", &["x", "y"]);
        assert!(matches!(TwoForm::new(&c2, m.clone()), Err(Error::NotAntisymmetric(0, 1))));
        assert!(Metric::new(&c2, m).is_ok());
        let deg = SMatrix::from_rows(vec![vec![s("x"), s("x")], vec![s("x"), s("x")]]);
        assert!(matches!(Metric::new(&c2, deg), Err(Error::DegenerateMetric)));
    }

    #[test]
    fn contractions_use_the_first_slot() {
        let c = r3();
        let dx = OneForm::coordinate(&c, 0);
        let dz = OneForm::coordinate(&c, 2);
        let mut m = SMatrix::zeros(3, 3);
        m.set(0, 2, s("1"));
        m.set(2, 0, s("-1"));
        let beta = Bivector::new(&c, m.clone()).unwrap();
        assert_eq!(beta.contract(&dz).unwrap(), VectorField::coordinate(&c, 0));
        assert_eq!(beta.on(&dx, &dz).unwrap(), s("1"));
        let b = TwoForm::new(&c, m).unwrap();
        let dzx = VectorField::coordinate(&c, 2);
        assert_eq!(b.contract(&dzx).unwrap(), dx.neg());
        assert_eq!(
            b.contract(&dzx).unwrap().on(&VectorField::coordinate(&c, 0)).unwrap(),
            b.on(&dzx, &VectorField::coordinate(&c, 0)).unwrap()
        );
    }

    #[test]
    fn musical_isomorphisms() {
        let c = r3();
        let g = Metric::diagonal(&c, vec![s("1"), s("-1"), s("1")]).unwrap();
        assert_eq!(g.flat(&VectorField::coordinate(&c, 1)).unwrap(), OneForm::coordinate(&c, 1).neg());
        assert_eq!(g.sharp(&OneForm::coordinate(&c, 2)).unwrap(), VectorField::coordinate(&c, 2));
        assert_eq!(g.flat(&VectorField::coordinate(&c, 0)).unwrap(), OneForm::coordinate(&c, 0));
        let x = VectorField::new(&c, vec![s("y"), s("exp(z)"), s("-3/2")]).unwrap();
        assert_eq!(g.sharp(&g.flat(&x).unwrap()).unwrap(), x);
        let sig = g.signature(&Sampler::default()).unwrap();
        assert_eq!(sig, Signature { positive: 2, negative: 1, varies: false });
    }

    #[test]
    fn endo_columns() {
        let c = r3();
        let d = |i| VectorField::coordinate(&c, i);
        let phi =
            Endo::from_columns(&c, &[d(1), d(0).add(&d(2).scale(&s("y"))).unwrap(), VectorField::zero(&c)]).unwrap();
        assert_eq!(phi.comp(2, 1), &s("y"));
        assert_eq!(phi.apply(&d(0)).unwrap(), d(1));
        assert_eq!(phi.square().apply(&d(0)).unwrap(), d(0).add(&d(2).scale(&s("y"))).unwrap());
    }
}
