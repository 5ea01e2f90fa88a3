//! Block operators on TM ⊕ T*M.
//!
//! In stacked coordinates (vector components, then form components) an
//! operator is a 2n×2n matrix `[[ul, ur], [ll, lr]]`. A bivector β acts as the
//! map α ↦ β(α) with matrix β^ij; a 2-form B acts as X ↦ B(X,·), whose matrix
//! is Bᵀ; the dual φ* has matrix φᵀ.

use super::section::{stacked_label, GenSection};
use crate::error::{Error, Result};
use crate::symkernel::Scalar;
use crate::tensorcalc::{Bivector, Chart, ChartRef, Components, Endo, SMatrix, TwoForm};

/// A general linear operator on TM ⊕ T*M.
#[derive(Clone, Debug, PartialEq)]
pub struct GenOp {
    chart: ChartRef,
    m: SMatrix,
}

impl GenOp {
    pub fn new(chart: &ChartRef, m: SMatrix) -> Result<Self> {
        let n2 = 2 * chart.dim();
        if m.rows() != n2 || m.cols() != n2 {
            return Err(Error::Dimension { expected: n2, got: m.rows().max(m.cols()) });
        }
        Ok(GenOp { chart: chart.clone(), m })
    }

    pub fn from_blocks(chart: &ChartRef, ul: &SMatrix, ur: &SMatrix, ll: &SMatrix, lr: &SMatrix) -> Result<Self> {
        GenOp::new(chart, SMatrix::from_blocks(ul, ur, ll, lr))
    }

    pub fn identity(chart: &ChartRef) -> Self {
        GenOp { chart: chart.clone(), m: SMatrix::identity(2 * chart.dim()) }
    }

    pub fn matrix(&self) -> &SMatrix {
        &self.m
    }

    fn n(&self) -> usize {
        self.chart.dim()
    }

    pub fn ul(&self) -> SMatrix {
        self.m.block(0, 0, self.n(), self.n())
    }

    pub fn ur(&self) -> SMatrix {
        self.m.block(0, self.n(), self.n(), self.n())
    }

    pub fn ll(&self) -> SMatrix {
        self.m.block(self.n(), 0, self.n(), self.n())
    }

    pub fn lr(&self) -> SMatrix {
        self.m.block(self.n(), self.n(), self.n(), self.n())
    }

    pub fn apply(&self, a: &GenSection) -> Result<GenSection> {
        Chart::ensure_same(&self.chart, a.chart())?;
        GenSection::from_stacked(&self.chart, self.m.mul_vec(&a.stacked()))
    }

    /// self ∘ other.
    pub fn compose(&self, o: &GenOp) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(GenOp { chart: self.chart.clone(), m: self.m.mul(&o.m) })
    }

    pub fn add(&self, o: &GenOp) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(GenOp { chart: self.chart.clone(), m: self.m.add(&o.m) })
    }

    pub fn sub(&self, o: &GenOp) -> Result<Self> {
        Chart::ensure_same(&self.chart, &o.chart)?;
        Ok(GenOp { chart: self.chart.clone(), m: self.m.sub(&o.m) })
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        GenOp { chart: self.chart.clone(), m: self.m.scale(k) }
    }

    pub fn square(&self) -> Self {
        GenOp { chart: self.chart.clone(), m: self.m.mul(&self.m) }
    }
}

impl Components for GenOp {
    fn chart(&self) -> &ChartRef {
        &self.chart
    }

    /// Entry (i, j) is labelled "frame section j -> component i".
    fn labelled(&self) -> Vec<(String, Scalar)> {
        let n2 = self.m.rows();
        let mut out = Vec::with_capacity(n2 * n2);
        for j in 0..n2 {
            for i in 0..n2 {
                let label = format!("{} -> {}", stacked_label(&self.chart, j), stacked_label(&self.chart, i));
                out.push((label, self.m.get(i, j).clone()));
            }
        }
        out
    }
}

/// Block endomorphism `[[φ, β], [B, −φ*]]`; the lower-right block is derived.
#[derive(Clone, Debug, PartialEq)]
pub struct GenEndo {
    pub phi: Endo,
    pub beta: Bivector,
    pub b: TwoForm,
}

impl GenEndo {
    pub fn new(phi: Endo, beta: Bivector, b: TwoForm) -> Result<Self> {
        Chart::ensure_same(phi.chart(), beta.chart())?;
        Chart::ensure_same(phi.chart(), b.chart())?;
        Ok(GenEndo { phi, beta, b })
    }

    /// The induced structure diag(φ, −φ*).
    pub fn diagonal(phi: Endo) -> Self {
        let c = phi.chart().clone();
        GenEndo { phi, beta: Bivector::zero(&c), b: TwoForm::zero(&c) }
    }

    pub fn chart(&self) -> &ChartRef {
        self.phi.chart()
    }

    pub fn to_op(&self) -> GenOp {
        let phi = self.phi.matrix();
        GenOp {
            chart: self.chart().clone(),
            m: SMatrix::from_blocks(phi, self.beta.matrix(), &self.b.matrix().transpose(), &phi.transpose().neg()),
        }
    }

    /// Re-extracts (φ, β, B) from a block operator, checking the shape.
    pub fn from_op(op: &GenOp) -> Result<Self> {
        let c = op.chart().clone();
        let ul = op.ul();
        let skew = op.lr().add(&ul.transpose());
        if !skew.is_zero() {
            let at = (0..c.dim())
                .flat_map(|i| (0..c.dim()).map(move |j| (i, j)))
                .find(|&(i, j)| !skew.get(i, j).is_zero())
                .expect("some entry is nonzero");
            return Err(Error::SkewnessViolation(format!(
                "entry ({}, {}) of lr + ulᵀ is {}",
                c.form_label(at.0),
                c.form_label(at.1),
                skew.get(at.0, at.1)
            )));
        }
        let beta =
            Bivector::new(&c, op.ur()).map_err(|e| Error::SkewnessViolation(format!("upper-right block: {e}")))?;
        let b = TwoForm::new(&c, op.ll().transpose())
            .map_err(|e| Error::SkewnessViolation(format!("lower-left block: {e}")))?;
        Ok(GenEndo { phi: Endo::new(&c, ul)?, beta, b })
    }

    pub fn apply(&self, a: &GenSection) -> Result<GenSection> {
        gen_endo_apply(self, a)
    }

    pub fn sub(&self, o: &GenEndo) -> Result<Self> {
        GenEndo::new(self.phi.sub(&o.phi)?, self.beta.sub(&o.beta)?, self.b.sub(&o.b)?)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        GenEndo { phi: self.phi.scale(k), beta: self.beta.scale(k), b: self.b.scale(k) }
    }

    pub fn add(&self, o: &GenEndo) -> Result<Self> {
        GenEndo::new(self.phi.add(&o.phi)?, self.beta.add(&o.beta)?, self.b.add(&o.b)?)
    }
}

impl Components for GenEndo {
    fn chart(&self) -> &ChartRef {
        self.phi.chart()
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        let mut out: Vec<(String, Scalar)> = Vec::new();
        out.extend(self.phi.labelled().into_iter().map(|(l, s)| (format!("phi {l}"), s)));
        out.extend(self.beta.labelled().into_iter().map(|(l, s)| (format!("beta {l}"), s)));
        out.extend(self.b.labelled().into_iter().map(|(l, s)| (format!("B {l}"), s)));
        out
    }
}

/// (X, α) ↦ (φX + β(α), B(X,·) − φ*α).
pub fn gen_endo_apply(p: &GenEndo, a: &GenSection) -> Result<GenSection> {
    Chart::ensure_same(p.chart(), a.chart())?;
    let vf = p.phi.apply(&a.vf)?.add(&p.beta.contract(&a.form)?)?;
    let phi_star = crate::tensorcalc::dual_endo_apply(&p.phi, &a.form)?;
    let form = p.b.contract(&a.vf)?.sub(&phi_star)?;
    GenSection::new(vf, form)
}

/// e^B = [[I, 0], [B, I]].
pub fn exp_b(b: &TwoForm) -> GenOp {
    let n = b.chart().dim();
    GenOp {
        chart: b.chart().clone(),
        m: SMatrix::from_blocks(
            &SMatrix::identity(n),
            &SMatrix::zeros(n, n),
            &b.matrix().transpose(),
            &SMatrix::identity(n),
        ),
    }
}

/// e^β = [[I, β], [0, I]].
pub fn exp_beta(beta: &Bivector) -> GenOp {
    let n = beta.chart().dim();
    GenOp {
        chart: beta.chart().clone(),
        m: SMatrix::from_blocks(&SMatrix::identity(n), beta.matrix(), &SMatrix::zeros(n, n), &SMatrix::identity(n)),
    }
}

/// Φ_B = e^B Φ e^{−B}, by block-matrix conjugation.
pub fn b_transform(p: &GenEndo, b2: &TwoForm) -> Result<GenEndo> {
    Chart::ensure_same(p.chart(), b2.chart())?;
    let conj = exp_b(b2).compose(&p.to_op())?.compose(&exp_b(&b2.neg()))?;
    GenEndo::from_op(&conj)
}

/// Φ_β = e^β Φ e^{−β}, by block-matrix conjugation.
pub fn beta_transform(p: &GenEndo, beta2: &Bivector) -> Result<GenEndo> {
    Chart::ensure_same(p.chart(), beta2.chart())?;
    let conj = exp_beta(beta2).compose(&p.to_op())?.compose(&exp_beta(&beta2.neg()))?;
    GenEndo::from_op(&conj)
}

/// Closed-form blocks of Φ_B, written with maps (B₂ acting as X ↦ B₂(X,·)):
/// φ − βB₂, β, B₂φ + φ*B₂ + B − B₂βB₂.
pub fn b_transform_closed_form(p: &GenEndo, b2: &TwoForm) -> Result<GenEndo> {
    Chart::ensure_same(p.chart(), b2.chart())?;
    let c = p.chart();
    let phi = p.phi.matrix();
    let beta = p.beta.matrix();
    let k = b2.matrix().transpose();
    let ul = phi.sub(&beta.mul(&k));
    let ll = k.mul(phi).add(&phi.transpose().mul(&k)).add(&p.b.matrix().transpose()).sub(&k.mul(beta).mul(&k));
    GenEndo::new(Endo::new(c, ul)?, p.beta.clone(), TwoForm::new(c, ll.transpose())?)
}

/// Closed-form blocks of Φ_β: φ + β₂B, β − φβ₂ − β₂φ* − β₂Bβ₂, B.
pub fn beta_transform_closed_form(p: &GenEndo, beta2: &Bivector) -> Result<GenEndo> {
    Chart::ensure_same(p.chart(), beta2.chart())?;
    let c = p.chart();
    let phi = p.phi.matrix();
    let q = beta2.matrix();
    let l = p.b.matrix().transpose();
    let ul = phi.add(&q.mul(&l));
    let ur = p.beta.matrix().sub(&phi.mul(q)).sub(&q.mul(&phi.transpose())).sub(&q.mul(&l).mul(q));
    GenEndo::new(Endo::new(c, ul)?, Bivector::new(c, ur)?, p.b.clone())
}

#[cfg(test)]
mod tests {
    use super::super::section::{frame, g0_pair};
    use super::*;
    use crate::tensorcalc::{OneForm, VectorField};

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn r3() -> ChartRef {
        Chart::named("R3", &["x", "y", "z"])
    }

    fn s0_phi(c: &ChartRef) -> Endo {
        let d = |i| VectorField::coordinate(c, i);
        Endo::from_columns(c, &[d(1), d(0), VectorField::zero(c)]).unwrap()
    }

    fn two(c: &ChartRef, i: usize, j: usize, v: &str) -> SMatrix {
        let mut m = SMatrix::zeros(c.dim(), c.dim());
        m.set(i, j, s(v));
        m.set(j, i, -s(v));
        m
    }

    fn sample_endo(c: &ChartRef) -> GenEndo {
        GenEndo::new(
            Endo::new(c, SMatrix::from_fn(3, 3, |i, j| s(&format!("{}*x + {}", i + 1, j)))).unwrap(),
            Bivector::new(c, two(c, 0, 2, "y").add(&two(c, 1, 2, "1/3"))).unwrap(),
            TwoForm::new(c, two(c, 0, 1, "exp(z)")).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn apply_matches_block_matrix() {
        let c = r3();
        let p = sample_endo(&c);
        for (_, a) in frame(&c) {
            assert_eq!(gen_endo_apply(&p, &a).unwrap(), p.to_op().apply(&a).unwrap());
        }
        let phi = GenEndo::diagonal(s0_phi(&c));
        let a = GenSection::new(VectorField::coordinate(&c, 0), OneForm::coordinate(&c, 0)).unwrap();
        let expected = GenSection::new(VectorField::coordinate(&c, 1), OneForm::coordinate(&c, 1).neg()).unwrap();
        assert_eq!(phi.apply(&a).unwrap(), expected);
        assert!(phi.apply(&GenSection::zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn every_gen_endo_is_g0_skew() {
        let c = r3();
        let p = sample_endo(&c);
        let f = frame(&c);
        for (_, a) in &f {
            for (_, b) in &f {
                let r = &g0_pair(&p.apply(a).unwrap(), b).unwrap() + &g0_pair(a, &p.apply(b).unwrap()).unwrap();
                assert!(r.is_zero());
            }
        }
    }

    #[test]
    fn op_round_trip_and_skewness_violation() {
        let c = r3();
        let p = sample_endo(&c);
        assert_eq!(GenEndo::from_op(&p.to_op()).unwrap(), p);
        let sq = p.to_op().square();
        assert!(matches!(GenEndo::from_op(&sq), Err(Error::SkewnessViolation(_))));
    }

    #[test]
    fn transforms_match_closed_forms_and_invert() {
        let c = r3();
        let p = sample_endo(&c);
        let b2 = TwoForm::new(&c, two(&c, 1, 2, "x*y").add(&two(&c, 0, 2, "sin(x)"))).unwrap();
        let pb = b_transform(&p, &b2).unwrap();
        assert!(pb.sub(&b_transform_closed_form(&p, &b2).unwrap()).unwrap().is_zero());
        assert!(b_transform(&pb, &b2.neg()).unwrap().sub(&p).unwrap().is_zero());
        let q = Bivector::new(&c, two(&c, 0, 1, "z")).unwrap();
        let pq = beta_transform(&p, &q).unwrap();
        assert!(pq.sub(&beta_transform_closed_form(&p, &q).unwrap()).unwrap().is_zero());
        assert!(beta_transform(&pq, &q.neg()).unwrap().sub(&p).unwrap().is_zero());
        assert_eq!(b_transform(&p, &TwoForm::zero(&c)).unwrap(), p);
    }

    #[test]
    fn b_field_preserves_g0() {
        let c = r3();
        let e = exp_b(&TwoForm::new(&c, two(&c, 0, 1, "x^2 - z")).unwrap());
        let f = frame(&c);
        for (_, a) in &f {
            for (_, b) in &f {
                let lhs = g0_pair(&e.apply(a).unwrap(), &e.apply(b).unwrap()).unwrap();
                assert_eq!(lhs, g0_pair(a, b).unwrap());
            }
        }
    }
}
