//! Check reports: labelled residual items, their verdicts and witnesses.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::symkernel::{Point, Sampler, Scalar, Tier};
use crate::tensorcalc::Components;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemKind {
    /// A residual that must vanish.
    Residual,
    /// An implication "hypothesis ⇒ consequence"; fails only if the
    /// hypothesis holds and the consequence does not.
    Logic,
    /// Reported data that does not affect the verdict.
    Info,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    NumericPass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::NumericPass => "numeric-pass",
            Verdict::Fail => "fail",
        }
    }

    pub fn is_pass(self) -> bool {
        self != Verdict::Fail
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: Point,
    /// Which component or frame pair produced the residual.
    pub location: String,
    pub value: f64,
    /// Canonical form of the offending component.
    pub expression: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub kind: ItemKind,
    pub tier: Tier,
    pub max_abs_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckItem {
    pub fn passed(&self) -> bool {
        self.tier.is_zero()
    }

    pub fn logic(label: impl Into<String>, hypothesis: bool, consequence: bool) -> CheckItem {
        let note = match (hypothesis, consequence) {
            (false, _) => "hypothesis unmet",
            (true, true) => "hypothesis holds, consequence holds",
            (true, false) => "hypothesis holds, consequence fails",
        };
        CheckItem {
            label: label.into(),
            kind: ItemKind::Logic,
            tier: if hypothesis && !consequence { Tier::Nonzero } else { Tier::SymbolicZero },
            max_abs_residual: 0.0,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn info(label: impl Into<String>, note: impl Into<String>) -> CheckItem {
        CheckItem {
            label: label.into(),
            kind: ItemKind::Info,
            tier: Tier::SymbolicZero,
            max_abs_residual: 0.0,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn into_info(mut self) -> CheckItem {
        self.kind = ItemKind::Info;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckItem {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), items: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, item: CheckItem) -> &CheckItem {
        self.items.push(item);
        self.items.last().expect("just pushed")
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends the items of `other`, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut it in other.items {
            it.label = format!("{prefix}: {}", it.label);
            self.items.push(it);
        }
        self.notes.extend(other.notes);
    }

    pub fn verdict(&self) -> Verdict {
        let counted = self.items.iter().filter(|i| i.kind != ItemKind::Info);
        let mut v = Verdict::Pass;
        for it in counted {
            match it.tier {
                Tier::Nonzero => return Verdict::Fail,
                Tier::NumericZero => v = Verdict::NumericPass,
                Tier::SymbolicZero => {}
            }
        }
        v
    }

    pub fn passed(&self) -> bool {
        self.verdict().is_pass()
    }

    pub fn item(&self, label: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.label == label)
    }

    /// Labels of counted items that failed.
    pub fn failing(&self) -> Vec<&str> {
        self.items.iter().filter(|i| i.kind != ItemKind::Info && !i.passed()).map(|i| i.label.as_str()).collect()
    }
}

/// Collects labelled scalar components that should all vanish and turns them
/// into a single [`CheckItem`].
#[derive(Clone, Debug, Default)]
pub struct Residuals {
    entries: Vec<(String, Scalar)>,
}

impl Residuals {
    pub fn new() -> Self {
        Residuals::default()
    }

    pub fn push(&mut self, location: impl Into<String>, value: Scalar) {
        self.entries.push((location.into(), value));
    }

    pub fn extend(&mut self, prefix: &str, entries: impl IntoIterator<Item = (String, Scalar)>) {
        for (loc, v) in entries {
            let loc = if prefix.is_empty() { loc } else { format!("{prefix} {loc}") };
            self.entries.push((loc, v));
        }
    }

    /// Adds every component of a tensor-like value.
    pub fn tensor(&mut self, prefix: &str, t: &impl Components) {
        self.extend(prefix, t.labelled());
    }

    pub fn entries(&self) -> &[(String, Scalar)] {
        &self.entries
    }

    pub fn all_symbolic_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_zero())
    }

    /// Worst tier over all components; the witness is taken from the first
    /// nonzero component in insertion order.
    pub fn evaluate(&self, label: impl Into<String>, sampler: &Sampler, coords: &[String]) -> Result<CheckItem> {
        let mut item = CheckItem {
            label: label.into(),
            kind: ItemKind::Residual,
            tier: Tier::SymbolicZero,
            max_abs_residual: 0.0,
            witness: None,
            note: None,
        };
        for (loc, v) in &self.entries {
            let verdict = sampler.verdict(v, coords)?;
            item.max_abs_residual = item.max_abs_residual.max(verdict.max_abs_residual);
            item.tier = item.tier.max(verdict.tier);
            if item.witness.is_none() {
                if let Some(point) = verdict.witness {
                    item.witness = Some(Witness {
                        value: v.eval(&point)?,
                        point,
                        location: loc.clone(),
                        expression: v.to_string(),
                    });
                }
            }
        }
        Ok(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_ignores_info_and_respects_logic() {
        let mut r = CheckReport::new("demo");
        r.push(CheckItem::info("signature", "(2,1)"));
        assert_eq!(r.verdict(), Verdict::Pass);
        r.push(CheckItem::logic("implication", false, false));
        assert_eq!(r.verdict(), Verdict::Pass);
        r.push(CheckItem::logic("implication", true, false));
        assert_eq!(r.verdict(), Verdict::Fail);
        assert_eq!(r.failing(), vec!["implication"]);
    }

    #[test]
    fn residual_witness_points_at_first_offender() {
        let mut res = Residuals::new();
        res.push("a", Scalar::zero());
        res.push("b", Scalar::parse("x + 2").unwrap());
        let item = res.evaluate("r", &Sampler::default(), &["x".into()]).unwrap();
        assert_eq!(item.tier, Tier::Nonzero);
        let w = item.witness.unwrap();
        assert_eq!(w.location, "b");
        assert_eq!(w.expression, "2 + x");
        assert!((w.value - (w.point["x"] + 2.0)).abs() < 1e-15);
    }
}
