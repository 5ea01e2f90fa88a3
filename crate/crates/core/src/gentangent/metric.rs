use super::endo::GenOp;
use super::section::{frame, g0_pair, GenSection};
use crate::error::Result;
use crate::report::{CheckItem, CheckReport, Residuals};
use crate::symkernel::Sampler;
use crate::tensorcalc::{Chart, ChartRef, Components, Endo, Metric, SMatrix, VectorField};

/// 𝒢 = [[φ, ♯_{g1}], [♭_{g2}, φ*]].
#[derive(Clone, Debug, PartialEq)]
pub struct GenMetric {
    pub phi: Endo,
    pub g1: Metric,
    pub g2: Metric,
}

impl GenMetric {
    pub fn new(phi: Endo, g1: Metric, g2: Metric) -> Result<Self> {
        Chart::ensure_same(phi.chart(), g1.chart())?;
        Chart::ensure_same(phi.chart(), g2.chart())?;
        Ok(GenMetric { phi, g1, g2 })
    }

    pub fn chart(&self) -> &ChartRef {
        self.phi.chart()
    }

    pub fn to_op(&self) -> GenOp {
        let phi = self.phi.matrix();
        GenOp::from_blocks(self.chart(), phi, self.g1.inverse_matrix(), self.g2.matrix(), &phi.transpose())
            .expect("blocks have chart dimension")
    }

    pub fn apply(&self, a: &GenSection) -> Result<GenSection> {
        self.to_op().apply(a)
    }
}

/// 𝒢_g̃ = [[0, ♯], [♭, 0]].
pub fn gen_metric_from_riemannian(g: &Metric) -> GenMetric {
    let c = g.chart();
    GenMetric { phi: Endo::zero(c), g1: g.clone(), g2: g.clone() }
}

fn skewness(g: &Metric, phi: &Endo) -> Result<Residuals> {
    let c = g.chart();
    let mut res = Residuals::new();
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            let (x, y) = (VectorField::coordinate(c, i), VectorField::coordinate(c, j));
            let r = &g.on(&x, &phi.apply(&y)?)? + &g.on(&phi.apply(&x)?, &y)?;
            res.push(format!("({},{})", c.vector_label(i), c.vector_label(j)), r);
        }
    }
    Ok(res)
}

fn signature_note(g: &Metric, sampler: &Sampler) -> Result<String> {
    let sig = g.signature(sampler)?;
    let mut note = format!("signature ({},{})", sig.positive, sig.negative);
    if sig.varies {
        note.push_str(", varies over the sample");
    } else if sig.negative == 0 {
        note.push_str(", positive definite");
    } else {
        note.push_str(", indefinite");
    }
    Ok(note)
}

/// Checks g₀-invariance, 𝒢² = I and the equivalent block system.
pub fn check_gen_metric(gm: &GenMetric, sampler: &Sampler) -> Result<CheckReport> {
    let c = gm.chart();
    let coords = &c.coords;
    let op = gm.to_op();
    let mut report = CheckReport::new("generalized metric");

    let mut inv = Residuals::new();
    let f = frame(c);
    for (i, (la, a)) in f.iter().enumerate() {
        for (lb, b) in &f[i..] {
            let r = &g0_pair(&op.apply(a)?, &op.apply(b)?)? - &g0_pair(a, b)?;
            inv.push(format!("({la},{lb})"), r);
        }
    }
    report.push(inv.evaluate("g0(GA,GC) = g0(A,C)", sampler, coords)?);

    let mut sq = Residuals::new();
    sq.extend("", op.square().sub(&GenOp::identity(c))?.labelled());
    report.push(sq.evaluate("G^2 = I", sampler, coords)?);

    let sharp_flat = gm.g1.inverse_matrix().mul(gm.g2.matrix());
    let target = SMatrix::identity(c.dim()).sub(&sharp_flat);
    let resid = Endo::new(c, gm.phi.square().matrix().sub(&target))?;
    let mut eq = Residuals::new();
    eq.extend("", resid.labelled());
    report.push(eq.evaluate("phi^2 = I - sharp_g1 flat_g2", sampler, coords)?);

    report.push(skewness(&gm.g1, &gm.phi)?.evaluate("g1(X,phi Y) + g1(phi X,Y) = 0", sampler, coords)?);
    report.push(skewness(&gm.g2, &gm.phi)?.evaluate("g2(X,phi Y) + g2(phi X,Y) = 0", sampler, coords)?);

    report.push(CheckItem::info("g1 signature", signature_note(&gm.g1, sampler)?));
    report.push(CheckItem::info("g2 signature", signature_note(&gm.g2, sampler)?));
    Ok(report)
}

/// Helper shared by compatibility checks: g(φX, Y) + g(X, φY) on frame pairs.
pub(crate) fn metric_skewness(g: &Metric, phi: &Endo) -> Result<Residuals> {
    skewness(g, phi)
}
