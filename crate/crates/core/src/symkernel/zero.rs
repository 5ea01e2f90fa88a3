//! Two-tier zero test: exact canonical form first, seeded sampling second.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::{Expr, Point};
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub low: f64,
    pub high: f64,
    /// Extra draws allowed per test when a sample lands on a pole.
    pub max_retries: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { samples: 100, seed: DEFAULT_SEED, tolerance: 1e-8, low: -1.0, high: 1.0, max_retries: 1000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    SymbolicZero,
    NumericZero,
    Nonzero,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::SymbolicZero => "symbolic-zero",
            Tier::NumericZero => "numeric-zero",
            Tier::Nonzero => "nonzero",
        }
    }

    pub fn is_zero(self) -> bool {
        self != Tier::Nonzero
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroVerdict {
    pub tier: Tier,
    pub max_abs_residual: f64,
    pub witness: Option<Point>,
}

impl ZeroVerdict {
    pub fn symbolic() -> Self {
        ZeroVerdict { tier: Tier::SymbolicZero, max_abs_residual: 0.0, witness: None }
    }
}

/// Seeded point sampler. Every test reseeds, so a verdict depends only on the
/// expression, the variable set and the configuration.
#[derive(Clone, Debug, Default)]
pub struct Sampler {
    pub config: SamplerConfig,
}

impl Sampler {
    pub fn new(config: SamplerConfig) -> Self {
        Sampler { config }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, vars: &BTreeSet<String>) -> Point {
        vars.iter().map(|v| (v.clone(), rng.gen_range(self.config.low..=self.config.high))).collect()
    }

    /// Evaluates `values` at `samples` points, resampling any point where one
    /// of them is not finite. Returns the accepted points with their values.
    pub fn sample<T>(
        &self,
        vars: &BTreeSet<String>,
        mut values: impl FnMut(&Point) -> Result<Option<T>>,
    ) -> Result<Vec<(Point, T)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let mut out = Vec::with_capacity(self.config.samples);
        let mut retries = 0;
        while out.len() < self.config.samples {
            let p = self.draw(&mut rng, vars);
            match values(&p)? {
                Some(v) => out.push((p, v)),
                None => {
                    retries += 1;
                    if retries > self.config.max_retries {
                        return Err(Error::Pole(retries - 1));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Zero test for `s`; `coords` are the chart coordinates reported in a
    /// witness (free variables of `s` are always sampled).
    pub fn verdict(&self, s: &Scalar, coords: &[String]) -> Result<ZeroVerdict> {
        if s.is_zero() {
            return Ok(ZeroVerdict::symbolic());
        }
        let mut vars: BTreeSet<String> = coords.iter().cloned().collect();
        vars.extend(s.free_vars());
        let samples = self.sample(&vars, |p| {
            let (n, d, mag) = s.eval_parts(p)?;
            let v = n / d;
            let ok = v.is_finite() && d.abs() > 1e-12 && mag.is_finite();
            Ok(ok.then_some((v, mag / d.abs())))
        })?;
        let mut verdict = ZeroVerdict { tier: Tier::NumericZero, max_abs_residual: 0.0, witness: None };
        let mut worst = 0.0;
        for (p, (v, scale)) in samples {
            verdict.max_abs_residual = f64::max(verdict.max_abs_residual, v.abs());
            let rel = v.abs() / scale.max(1.0);
            if rel > self.config.tolerance && rel > worst {
                worst = rel;
                verdict.tier = Tier::Nonzero;
                verdict.witness = Some(p);
            }
        }
        Ok(verdict)
    }
}

/// Zero test on a raw expression tree.
pub fn expr_is_zero(e: &Expr, config: &SamplerConfig) -> Result<ZeroVerdict> {
    let s = Scalar::from_expr(e)?;
    Sampler::new(config.clone()).verdict(&s, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::parser::expr_parse;

    fn verdict(text: &str) -> ZeroVerdict {
        expr_is_zero(&expr_parse(text).unwrap(), &SamplerConfig::default()).unwrap()
    }

    #[test]
    fn tiers() {
        assert_eq!(verdict("0").tier, Tier::SymbolicZero);
        assert_eq!(verdict("sin(x)^2 + cos(x)^2 - 1").tier, Tier::SymbolicZero);
        let v = verdict("x*y - 1");
        assert_eq!(v.tier, Tier::Nonzero);
        let w = v.witness.unwrap();
        assert!((w["x"] * w["y"] - 1.0).abs() > 1e-8);
    }

    #[test]
    fn numeric_tier_catches_identities_outside_the_rewrite_set() {
        // the double-angle identity is not a canonical rewrite
        let v = verdict("sin(2*x) - 2*sin(x)*cos(x)");
        assert_eq!(v.tier, Tier::NumericZero);
        assert!(v.max_abs_residual < 1e-12);
    }

    #[test]
    fn poles_are_resampled() {
        let v = verdict("(x - x)/y + 1/(x^2 + 1) - 1/(x^2 + 1)");
        assert_eq!(v.tier, Tier::SymbolicZero);
        let s = Scalar::parse("1/(x^2 + 1)").unwrap();
        let cfg = SamplerConfig { low: 0.0, high: 0.0, max_retries: 3, ..SamplerConfig::default() };
        let q = Scalar::parse("1/x").unwrap();
        assert!(matches!(Sampler::new(cfg.clone()).verdict(&q, &[]), Err(Error::Pole(3))));
        assert_eq!(Sampler::new(cfg).verdict(&s, &[]).unwrap().tier, Tier::Nonzero);
    }

    #[test]
    fn deterministic() {
        let a = verdict("x + y^2 - z");
        let b = verdict("x + y^2 - z");
        assert_eq!(a, b);
    }

    #[test]
    fn tier_serializes_kebab_case() {
        assert_eq!(serde_json::to_string(&Tier::NumericZero).unwrap(), "\"numeric-zero\"");
    }
}
