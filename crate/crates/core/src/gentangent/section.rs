use crate::error::Result;
use crate::symkernel::Scalar;
use crate::tensorcalc::{d0, lie_bracket, lie_derivative_oneform, Chart, ChartRef, Components, OneForm, VectorField};

/// A section X + α of TM ⊕ T*M.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSection {
    pub vf: VectorField,
    pub form: OneForm,
}

impl GenSection {
    pub fn new(vf: VectorField, form: OneForm) -> Result<Self> {
        Chart::ensure_same(vf.chart(), form.chart())?;
        Ok(GenSection { vf, form })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        GenSection { vf: VectorField::zero(chart), form: OneForm::zero(chart) }
    }

    pub fn vector(vf: VectorField) -> Self {
        let form = OneForm::zero(vf.chart());
        GenSection { vf, form }
    }

    pub fn covector(form: OneForm) -> Self {
        let vf = VectorField::zero(form.chart());
        GenSection { vf, form }
    }

    pub fn chart(&self) -> &ChartRef {
        self.vf.chart()
    }

    /// Components as one vector: vector part first, then the 1-form part.
    pub fn stacked(&self) -> Vec<Scalar> {
        self.vf.comps().iter().chain(self.form.comps()).cloned().collect()
    }

    pub fn from_stacked(chart: &ChartRef, v: Vec<Scalar>) -> Result<Self> {
        let n = chart.dim();
        let (a, b) = v.split_at(n.min(v.len()));
        Ok(GenSection { vf: VectorField::new(chart, a.to_vec())?, form: OneForm::new(chart, b.to_vec())? })
    }

    pub fn add(&self, o: &GenSection) -> Result<Self> {
        Ok(GenSection { vf: self.vf.add(&o.vf)?, form: self.form.add(&o.form)? })
    }

    pub fn sub(&self, o: &GenSection) -> Result<Self> {
        Ok(GenSection { vf: self.vf.sub(&o.vf)?, form: self.form.sub(&o.form)? })
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        GenSection { vf: self.vf.scale(k), form: self.form.scale(k) }
    }
}

impl Components for GenSection {
    fn chart(&self) -> &ChartRef {
        self.vf.chart()
    }

    fn labelled(&self) -> Vec<(String, Scalar)> {
        let mut out = self.vf.labelled();
        out.extend(self.form.labelled());
        out
    }
}

/// The 2n frame sections d/dx^i + 0 followed by 0 + dx^i, with labels.
pub fn frame(chart: &ChartRef) -> Vec<(String, GenSection)> {
    let n = chart.dim();
    let vectors = (0..n).map(|i| (chart.vector_label(i), GenSection::vector(VectorField::coordinate(chart, i))));
    let forms = (0..n).map(|i| (chart.form_label(i), GenSection::covector(OneForm::coordinate(chart, i))));
    vectors.chain(forms).collect()
}

/// Label of stacked component `k` (vector slots, then form slots).
pub fn stacked_label(chart: &ChartRef, k: usize) -> String {
    let n = chart.dim();
    if k < n {
        chart.vector_label(k)
    } else {
        chart.form_label(k - n)
    }
}

/// g₀(X+α, Y+γ) = ½(α(Y) + γ(X)).
pub fn g0_pair(a: &GenSection, c: &GenSection) -> Result<Scalar> {
    let s = &a.form.on(&c.vf)? + &c.form.on(&a.vf)?;
    Ok(&s * &Scalar::from_ratio(1, 2))
}

/// [X+α, Y+γ] = [X,Y] + L_Xγ − L_Yα + ½ d(α(Y) − γ(X)).
pub fn courant_bracket(a: &GenSection, c: &GenSection) -> Result<GenSection> {
    Chart::ensure_same(a.chart(), c.chart())?;
    let vf = lie_bracket(&a.vf, &c.vf)?;
    let half = &(&a.form.on(&c.vf)? - &c.form.on(&a.vf)?) * &Scalar::from_ratio(1, 2);
    let form = lie_derivative_oneform(&a.vf, &c.form)?
        .sub(&lie_derivative_oneform(&c.vf, &a.form)?)?
        .add(&d0(a.chart(), &half))?;
    GenSection::new(vf, form)
}
