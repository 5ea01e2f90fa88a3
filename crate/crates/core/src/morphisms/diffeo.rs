use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gentangent::GenSection;
use crate::symkernel::Scalar;
use crate::tensorcalc::{Chart, ChartRef, Components, OneForm, SMatrix, VectorField};

/// A coordinate diffeomorphism between two charts of the same dimension,
/// given by its forward map and a user-supplied inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Diffeo {
    pub name: String,
    source: ChartRef,
    target: ChartRef,
    /// Target coordinates as functions of the source coordinates.
    forward: Vec<Scalar>,
    /// Source coordinates as functions of the target coordinates.
    inverse: Vec<Scalar>,
}

fn coordinate_map(chart: &ChartRef, values: &[Scalar]) -> BTreeMap<String, Scalar> {
    chart.coords.iter().cloned().zip(values.iter().cloned()).collect()
}

impl Diffeo {
    /// Builds the map and verifies both compositions and the Jacobian.
    pub fn new(
        name: impl Into<String>,
        source: &ChartRef,
        target: &ChartRef,
        forward: Vec<Scalar>,
        inverse: Vec<Scalar>,
    ) -> Result<Self> {
        let name = name.into();
        if source.dim() != target.dim() {
            return Err(Error::Dimension { expected: source.dim(), got: target.dim() });
        }
        for list in [&forward, &inverse] {
            if list.len() != source.dim() {
                return Err(Error::Dimension { expected: source.dim(), got: list.len() });
            }
        }
        let f = Diffeo { name, source: source.clone(), target: target.clone(), forward, inverse };
        f.verify()?;
        Ok(f)
    }

    pub fn identity(chart: &ChartRef) -> Self {
        let ids: Vec<Scalar> = chart.coords.iter().map(|c| Scalar::var(c)).collect();
        Diffeo {
            name: "identity".into(),
            source: chart.clone(),
            target: chart.clone(),
            forward: ids.clone(),
            inverse: ids,
        }
    }

    fn verify(&self) -> Result<()> {
        for (i, c) in self.source.coords.iter().enumerate() {
            for v in self.forward[i].free_vars() {
                if self.source.index(&v).is_none() {
                    return Err(Error::InvalidMap(format!("{}: forward component uses `{v}`", self.name)));
                }
            }
            for v in self.inverse[i].free_vars() {
                if self.target.index(&v).is_none() {
                    return Err(Error::InvalidMap(format!("{}: inverse component uses `{v}`", self.name)));
                }
            }
            let back = self.pull(&self.inverse[i])?;
            if !(&back - &Scalar::var(c)).is_zero() {
                return Err(Error::InvalidMap(format!("{}: inverse o forward gives {c} -> {back}", self.name)));
            }
        }
        for (i, c) in self.target.coords.iter().enumerate() {
            let there = self.push(&self.forward[i])?;
            if !(&there - &Scalar::var(c)).is_zero() {
                return Err(Error::InvalidMap(format!("{}: forward o inverse gives {c} -> {there}", self.name)));
            }
        }
        if self.jacobian().det().is_zero() {
            return Err(Error::InvalidMap(format!("{}: Jacobian determinant vanishes", self.name)));
        }
        Ok(())
    }

    pub fn source(&self) -> &ChartRef {
        &self.source
    }

    pub fn target(&self) -> &ChartRef {
        &self.target
    }

    pub fn forward(&self) -> &[Scalar] {
        &self.forward
    }

    pub fn inverse_components(&self) -> &[Scalar] {
        &self.inverse
    }

    /// f⁻¹ as a map from the target chart back to the source.
    pub fn inverse(&self) -> Diffeo {
        Diffeo {
            name: format!("{}^-1", self.name),
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// g ∘ self.
    pub fn then(&self, g: &Diffeo) -> Result<Diffeo> {
        Chart::ensure_same(&self.target, &g.source)?;
        let forward = g.forward.iter().map(|e| self.pull(e)).collect::<Result<_>>()?;
        let inverse = self.inverse.iter().map(|e| g.push(e)).collect::<Result<_>>()?;
        Diffeo::new(format!("{} o {}", g.name, self.name), &self.source, &g.target, forward, inverse)
    }

    /// Jacobian ∂fⁱ/∂xʲ in source coordinates.
    pub fn jacobian(&self) -> SMatrix {
        let n = self.source.dim();
        SMatrix::from_fn(n, n, |i, j| self.forward[i].diff(&self.source.coords[j]))
    }

    /// h ∘ f for h written in target coordinates.
    pub fn pull(&self, h: &Scalar) -> Result<Scalar> {
        h.substitute(&coordinate_map(&self.target, &self.forward))
    }

    /// h ∘ f⁻¹ for h written in source coordinates.
    pub fn push(&self, h: &Scalar) -> Result<Scalar> {
        h.substitute(&coordinate_map(&self.source, &self.inverse))
    }
}

/// f_*X, re-expressed in target coordinates.
pub fn pushforward_vf(f: &Diffeo, x: &VectorField) -> Result<VectorField> {
    Chart::ensure_same(f.source(), x.chart())?;
    let comps = f.jacobian().mul_vec(x.comps()).iter().map(|c| f.push(c)).collect::<Result<_>>()?;
    VectorField::new(f.target(), comps)
}

/// f*α for α on the target chart; the result lives on the source chart.
pub fn pullback_form(f: &Diffeo, a: &OneForm) -> Result<OneForm> {
    Chart::ensure_same(f.target(), a.chart())?;
    let pulled = a.comps().iter().map(|c| f.pull(c)).collect::<Result<Vec<_>>>()?;
    OneForm::new(f.source(), f.jacobian().transpose().mul_vec(&pulled))
}

/// f̃(X + α) = f_*X + (f⁻¹)*α.
pub fn induced_gen_map(f: &Diffeo, a: &GenSection) -> Result<GenSection> {
    Chart::ensure_same(f.source(), a.chart())?;
    GenSection::new(pushforward_vf(f, &a.vf)?, pullback_form(&f.inverse(), &a.form)?)
}

/// Built-in maps of R³ used by the tests and the example sessions.
pub mod maps {
    use super::*;

    fn v(text: &str) -> Scalar {
        Scalar::parse(text).expect("map components parse")
    }

    fn r3_map(name: &str, chart: &ChartRef, forward: [&str; 3], inverse: [&str; 3]) -> Diffeo {
        Diffeo::new(name, chart, chart, forward.map(v).to_vec(), inverse.map(v).to_vec()).expect("valid catalog map")
    }

    pub fn swap(chart: &ChartRef) -> Diffeo {
        r3_map("swap", chart, ["y", "x", "z"], ["y", "x", "z"])
    }

    pub fn translation(chart: &ChartRef) -> Diffeo {
        r3_map("translation", chart, ["x + 1", "y", "z"], ["x - 1", "y", "z"])
    }

    pub fn scaling(chart: &ChartRef) -> Diffeo {
        r3_map("scaling", chart, ["2*x", "y", "z"], ["x/2", "y", "z"])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parastruct::catalog::r3;

    fn d(i: usize) -> VectorField {
        VectorField::coordinate(&r3(), i)
    }

    #[test]
    fn pushforward_examples() {
        let c = r3();
        assert_eq!(pushforward_vf(&maps::translation(&c), &d(0)).unwrap(), d(0));
        assert_eq!(pushforward_vf(&maps::swap(&c), &d(0)).unwrap(), d(1));
        let dz = OneForm::coordinate(&c, 2);
        assert_eq!(pullback_form(&maps::translation(&c), &dz).unwrap(), dz);
        assert_eq!(pullback_form(&maps::swap(&c), &dz).unwrap(), dz);
        assert_eq!(pushforward_vf(&maps::scaling(&c), &d(0)).unwrap(), d(0).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn pushforward_reexpresses_through_the_inverse() {
        let c = r3();
        let f = maps::translation(&c);
        let x = d(1).scale(&Scalar::var("x"));
        // (f_* (x d/dy)) at f(p) carries the coefficient x(p) = x - 1
        let pushed = pushforward_vf(&f, &x).unwrap();
        assert_eq!(pushed.comp(1), &Scalar::parse("x - 1").unwrap());
    }

    #[test]
    fn pushforward_is_functorial() {
        let c = r3();
        let (f, g) = (maps::swap(&c), maps::translation(&c));
        let gf = f.then(&g).unwrap();
        for i in 0..3 {
            let x = d(i).scale(&Scalar::parse("x*y + z").unwrap());
            let direct = pushforward_vf(&gf, &x).unwrap();
            let stepwise = pushforward_vf(&g, &pushforward_vf(&f, &x).unwrap()).unwrap();
            assert_eq!(direct, stepwise);
        }
    }

    #[test]
    fn pullback_pairs_with_pushforward() {
        let c = r3();
        let f = maps::scaling(&c).then(&maps::swap(&c)).unwrap();
        let a = OneForm::new(&c, vec![Scalar::var("y"), Scalar::parse("x^2").unwrap(), Scalar::one()]).unwrap();
        for i in 0..3 {
            let lhs = pullback_form(&f, &a).unwrap().on(&d(i)).unwrap();
            let rhs = f.pull(&a.on(&pushforward_vf(&f, &d(i)).unwrap()).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rejects_wrong_inverse_and_singular_maps() {
        let c = r3();
        let bad = Diffeo::new("bad", &c, &c, vec![v("2*x"), v("y"), v("z")], vec![v("x"), v("y"), v("z")]);
        assert!(matches!(bad, Err(Error::InvalidMap(_))));
        let stray = Diffeo::new("stray", &c, &c, vec![v("w"), v("y"), v("z")], vec![v("x"), v("y"), v("z")]);
        assert!(matches!(stray, Err(Error::InvalidMap(_))));
        assert!(matches!(
            Diffeo::new("short", &c, &c, vec![v("x")], vec![v("x")]),
            Err(Error::Dimension { expected: 3, got: 1 })
        ));
    }

    fn v(text: &str) -> Scalar {
        Scalar::parse(text).unwrap()
    }

    #[test]
    fn induced_map_on_sections() {
        let c = r3();
        let f = maps::swap(&c);
        let a = GenSection::new(d(0), OneForm::coordinate(&c, 1)).unwrap();
        let img = induced_gen_map(&f, &a).unwrap();
        assert_eq!(img.vf, d(1));
        assert_eq!(img.form, OneForm::coordinate(&c, 0));
        assert_eq!(induced_gen_map(&Diffeo::identity(&c), &a).unwrap(), a);
    }
}
