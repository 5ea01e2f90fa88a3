use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symkernel::parser::FUNCTIONS;

/// A single global coordinate chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    pub name: String,
    pub coords: Vec<String>,
}

pub type ChartRef = Arc<Chart>;

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new(name: impl Into<String>, coords: Vec<String>) -> Result<ChartRef> {
        let name = name.into();
        if coords.is_empty() {
            return Err(Error::InvalidChart(format!("chart `{name}` has no coordinates")));
        }
        let mut seen = BTreeSet::new();
        for c in &coords {
            if !is_identifier(c) || FUNCTIONS.contains(&c.as_str()) {
                return Err(Error::InvalidChart(format!("`{c}` is not a valid coordinate name")));
            }
            if !seen.insert(c) {
                return Err(Error::InvalidChart(format!("coordinate `{c}` repeated in chart `{name}`")));
            }
        }
        Ok(Arc::new(Chart { name, coords }))
    }

    /// Shorthand for tests and the built-in catalog.
    pub fn named(name: &str, coords: &[&str]) -> ChartRef {
        Chart::new(name, coords.iter().map(|c| c.to_string()).collect()).expect("valid built-in chart")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn index(&self, coord: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == coord)
    }

    pub fn vector_label(&self, i: usize) -> String {
        format!("d/d{}", self.coords[i])
    }

    pub fn form_label(&self, i: usize) -> String {
        format!("d{}", self.coords[i])
    }

    pub fn ensure_same(a: &ChartRef, b: &ChartRef) -> Result<()> {
        if Arc::ptr_eq(a, b) || a == b {
            Ok(())
        } else {
            Err(Error::ChartMismatch { left: a.name.clone(), right: b.name.clone() })
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.coords.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Chart::new("R0", vec![]).is_err());
        assert!(Chart::new("R2", vec!["x".into(), "x".into()]).is_err());
        assert!(Chart::new("R1", vec!["sin".into()]).is_err());
        let c = Chart::named("R3", &["x", "y", "z"]);
        assert_eq!(c.dim(), 3);
        assert_eq!(c.index("z"), Some(2));
        assert_eq!(c.vector_label(0), "d/dx");
        let d = Chart::named("R3b", &["x", "y", "z"]);
        assert!(matches!(Chart::ensure_same(&c, &d), Err(Error::ChartMismatch { .. })));
    }
}
