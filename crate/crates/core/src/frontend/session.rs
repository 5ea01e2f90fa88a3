use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::morphisms::Diffeo;
use crate::parastruct::{Apc, Gapc};
use crate::symkernel::{Expr, Scalar};
use crate::tensorcalc::{Bivector, Chart, ChartRef, Components, Endo, Metric, OneForm, TwoForm, VectorField};

/// A named value declared in a session.
#[derive(Clone, Debug, PartialEq)]
pub enum Object {
    Chart(ChartRef),
    VectorField(VectorField),
    OneForm(OneForm),
    TwoForm(TwoForm),
    Bivector(Bivector),
    Metric(Metric),
    Endo(Endo),
    /// The structure and the names of its (φ, ξ, η[, g]) parts.
    Apc(Apc, Vec<String>),
    /// The structure and the names of its (φ, β, B, ξ, η) parts.
    Gapc(Gapc, Vec<String>),
    Map(Diffeo),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Chart(_) => "manifold",
            Object::VectorField(_) => "vectorfield",
            Object::OneForm(_) => "oneform",
            Object::TwoForm(_) => "twoform",
            Object::Bivector(_) => "bivector",
            Object::Metric(_) => "metric",
            Object::Endo(_) => "endo",
            Object::Apc(..) => "apc structure",
            Object::Gapc(..) => "gapc structure",
            Object::Map(_) => "map",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: String,
    pub object: Object,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Classical,
    Generalized,
    Both,
}

impl Via {
    pub fn as_str(self) -> &'static str {
        match self {
            Via::Classical => "classical",
            Via::Generalized => "generalized",
            Via::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenMetricSpec {
    /// 𝒢 built from a single metric: [[0, ♯], [♭, 0]].
    Riemannian(String),
    /// 𝒢 = [[φ, ♯_{g1}], [♭_{g2}, φ*]].
    Blocks { phi: String, g1: String, g2: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Apc(String),
    ApcMetric(String),
    Gapc(String),
    Blocks(String),
    /// `via` is kept as written so printing round-trips; absent means classical.
    Normal(String, Option<Via>),
    Equiv(String),
    Compat {
        structure: String,
        metric: String,
    },
    BTransform {
        structure: String,
        form: String,
    },
    BetaTransform {
        structure: String,
        bivector: String,
    },
    Morphism {
        map: String,
        source: String,
        target: String,
    },
    Family {
        first: String,
        second: String,
        param: String,
    },
    GenMetric(GenMetricSpec),
    Products(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub check: Check,
    pub expect_fail: bool,
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check ")?;
        match &self.check {
            Check::Apc(s) => write!(f, "apc {s}"),
            Check::ApcMetric(s) => write!(f, "apcmetric {s}"),
            Check::Gapc(s) => write!(f, "gapc {s}"),
            Check::Blocks(s) => write!(f, "blocks {s}"),
            Check::Normal(s, None) => write!(f, "normal {s}"),
            Check::Normal(s, Some(v)) => write!(f, "normal {s} via {}", v.as_str()),
            Check::Equiv(s) => write!(f, "equiv {s}"),
            Check::Compat { structure, metric } => write!(f, "compat {structure} with {metric}"),
            Check::BTransform { structure, form } => write!(f, "btransform {structure} with {form}"),
            Check::BetaTransform { structure, bivector } => write!(f, "betatransform {structure} with {bivector}"),
            Check::Morphism { map, source, target } => write!(f, "morphism {map} : {source} -> {target}"),
            Check::Family { first, second, param } => write!(f, "family {first} {second} with {param}"),
            Check::GenMetric(GenMetricSpec::Riemannian(g)) => write!(f, "genmetric {g}"),
            Check::GenMetric(GenMetricSpec::Blocks { phi, g1, g2 }) => write!(f, "genmetric ({phi}, {g1}, {g2})"),
            Check::Products(s) => write!(f, "products {s}"),
        }?;
        if self.expect_fail {
            write!(f, " expect fail")?;
        }
        Ok(())
    }
}

/// Every declaration and directive form of the session language.
pub const PRODUCTIONS: [&str; 29] = [
    "manifold",
    "vectorfield",
    "oneform",
    "twoform",
    "bivector",
    "metric",
    "endo",
    "structure apc",
    "structure apc with metric",
    "structure gapc",
    "map",
    "check apc",
    "check apcmetric",
    "check gapc",
    "check blocks",
    "check normal",
    "check normal via classical",
    "check normal via generalized",
    "check normal via both",
    "check equiv",
    "check compat",
    "check btransform",
    "check betatransform",
    "check morphism",
    "check family",
    "check genmetric",
    "check genmetric blocks",
    "check products",
    "expect fail",
];

/// A parsed session: declarations in order and the directives to run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Session {
    pub name: String,
    pub decls: Vec<Decl>,
    pub directives: Vec<Directive>,
}

fn unknown(name: &str) -> Error {
    Error::UnknownIdentifier { name: name.to_string(), line: 0, col: 0 }
}

fn wrong_kind(name: &str, want: &str, got: &Object) -> Error {
    Error::Precondition(format!("`{name}` is a {}, expected {want}", got.kind()))
}

impl Session {
    pub fn new(name: impl Into<String>) -> Self {
        Session { name: name.into(), ..Session::default() }
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.decls.iter().find(|d| d.name == name).map(|d| &d.object)
    }

    pub fn declare(&mut self, name: impl Into<String>, object: Object) -> Result<()> {
        let name = name.into();
        if self.get(&name).is_some() {
            return Err(Error::Precondition(format!("`{name}` is already declared")));
        }
        self.decls.push(Decl { name, object });
        Ok(())
    }

    pub fn chart(&self, name: &str) -> Result<&ChartRef> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Chart(c) => Ok(c),
            other => Err(wrong_kind(name, "a manifold", other)),
        }
    }

    pub fn apc(&self, name: &str) -> Result<&Apc> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Apc(s, _) => Ok(s),
            other => Err(wrong_kind(name, "an apc structure", other)),
        }
    }

    pub fn metric(&self, name: &str) -> Result<&Metric> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Metric(g) => Ok(g),
            other => Err(wrong_kind(name, "a metric", other)),
        }
    }

    pub fn endo(&self, name: &str) -> Result<&Endo> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Endo(e) => Ok(e),
            other => Err(wrong_kind(name, "an endo", other)),
        }
    }

    pub fn two_form(&self, name: &str) -> Result<&TwoForm> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::TwoForm(b) => Ok(b),
            other => Err(wrong_kind(name, "a twoform", other)),
        }
    }

    pub fn bivector(&self, name: &str) -> Result<&Bivector> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Bivector(b) => Ok(b),
            other => Err(wrong_kind(name, "a bivector", other)),
        }
    }

    pub fn map(&self, name: &str) -> Result<&Diffeo> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Map(f) => Ok(f),
            other => Err(wrong_kind(name, "a map", other)),
        }
    }

    pub fn vector_field(&self, name: &str) -> Result<&VectorField> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::VectorField(v) => Ok(v),
            other => Err(wrong_kind(name, "a vectorfield", other)),
        }
    }

    pub fn one_form(&self, name: &str) -> Result<&OneForm> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::OneForm(a) => Ok(a),
            other => Err(wrong_kind(name, "a oneform", other)),
        }
    }

    /// An APC or GAPC structure; returns the chart it lives on.
    pub fn structure_chart(&self, name: &str) -> Result<&ChartRef> {
        match self.get(name).ok_or_else(|| unknown(name))? {
            Object::Apc(s, _) => Ok(s.chart()),
            Object::Gapc(g, _) => Ok(g.chart()),
            other => Err(wrong_kind(name, "a structure", other)),
        }
    }

    /// Builds `structure apc NAME = (phi, xi, eta[, g])` from declared parts.
    pub fn declare_apc(&mut self, name: &str, parts: Vec<String>) -> Result<()> {
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Precondition(format!(
                "apc `{name}` takes (phi, xi, eta[, g]), got {} parts",
                parts.len()
            )));
        }
        let g = parts.get(3).map(|n| self.metric(n).cloned()).transpose()?;
        let apc = Apc::new(
            name,
            self.endo(&parts[0])?.clone(),
            self.vector_field(&parts[1])?.clone(),
            self.one_form(&parts[2])?.clone(),
            g,
        )?;
        self.declare(name, Object::Apc(apc, parts))
    }

    /// Builds `structure gapc NAME = (phi, beta, B, xi, eta)` from declared parts.
    pub fn declare_gapc(&mut self, name: &str, parts: Vec<String>) -> Result<()> {
        if parts.len() != 5 {
            return Err(Error::Precondition(format!(
                "gapc `{name}` takes (phi, beta, B, xi, eta), got {} parts",
                parts.len()
            )));
        }
        let big_phi = crate::gentangent::GenEndo::new(
            self.endo(&parts[0])?.clone(),
            self.bivector(&parts[1])?.clone(),
            self.two_form(&parts[2])?.clone(),
        )?;
        let gapc = Gapc::new(name, big_phi, self.vector_field(&parts[3])?.clone(), self.one_form(&parts[4])?.clone())?;
        self.declare(name, Object::Gapc(gapc, parts))
    }

    /// Resolves every name a directive refers to before accepting it.
    pub fn push_directive(&mut self, d: Directive) -> Result<()> {
        match &d.check {
            Check::Apc(s) | Check::ApcMetric(s) | Check::Normal(s, _) | Check::Equiv(s) | Check::Products(s) => {
                self.apc(s)?;
            }
            Check::Gapc(s) | Check::Blocks(s) => {
                self.structure_chart(s)?;
            }
            Check::Compat { structure, metric } => {
                Chart::ensure_same(self.structure_chart(structure)?, self.metric(metric)?.chart())?;
            }
            Check::BTransform { structure, form } => {
                Chart::ensure_same(self.apc(structure)?.chart(), self.two_form(form)?.chart())?;
            }
            Check::BetaTransform { structure, bivector } => {
                Chart::ensure_same(self.apc(structure)?.chart(), self.bivector(bivector)?.chart())?;
            }
            Check::Morphism { map, source, target } => {
                let f = self.map(map)?;
                Chart::ensure_same(f.source(), self.apc(source)?.chart())?;
                Chart::ensure_same(f.target(), self.apc(target)?.chart())?;
            }
            Check::Family { first, second, param } => {
                let c = self.apc(first)?.chart();
                Chart::ensure_same(c, self.apc(second)?.chart())?;
                if c.index(param).is_some() {
                    return Err(Error::Precondition(format!(
                        "family parameter `{param}` is a coordinate of {}",
                        c.name
                    )));
                }
            }
            Check::GenMetric(GenMetricSpec::Riemannian(g)) => {
                self.metric(g)?;
            }
            Check::GenMetric(GenMetricSpec::Blocks { phi, g1, g2 }) => {
                let c = self.endo(phi)?.chart();
                Chart::ensure_same(c, self.metric(g1)?.chart())?;
                Chart::ensure_same(c, self.metric(g2)?.chart())?;
            }
        }
        self.directives.push(d);
        Ok(())
    }

    /// The declaration and directive forms this session uses.
    pub fn productions(&self) -> BTreeSet<&'static str> {
        let mut out = BTreeSet::new();
        for d in &self.decls {
            out.insert(match &d.object {
                Object::Chart(_) => "manifold",
                Object::VectorField(_) => "vectorfield",
                Object::OneForm(_) => "oneform",
                Object::TwoForm(_) => "twoform",
                Object::Bivector(_) => "bivector",
                Object::Metric(_) => "metric",
                Object::Endo(_) => "endo",
                Object::Apc(s, _) if s.g.is_some() => "structure apc with metric",
                Object::Apc(..) => "structure apc",
                Object::Gapc(..) => "structure gapc",
                Object::Map(_) => "map",
            });
        }
        for d in &self.directives {
            if d.expect_fail {
                out.insert("expect fail");
            }
            out.insert(match &d.check {
                Check::Apc(_) => "check apc",
                Check::ApcMetric(_) => "check apcmetric",
                Check::Gapc(_) => "check gapc",
                Check::Blocks(_) => "check blocks",
                Check::Normal(_, None) => "check normal",
                Check::Normal(_, Some(Via::Classical)) => "check normal via classical",
                Check::Normal(_, Some(Via::Generalized)) => "check normal via generalized",
                Check::Normal(_, Some(Via::Both)) => "check normal via both",
                Check::Equiv(_) => "check equiv",
                Check::Compat { .. } => "check compat",
                Check::BTransform { .. } => "check btransform",
                Check::BetaTransform { .. } => "check betatransform",
                Check::Morphism { .. } => "check morphism",
                Check::Family { .. } => "check family",
                Check::GenMetric(GenMetricSpec::Riemannian(_)) => "check genmetric",
                Check::GenMetric(GenMetricSpec::Blocks { .. }) => "check genmetric blocks",
                Check::Products(_) => "check products",
            });
        }
        out
    }
}

/// A coefficient as it appears in front of a basis element.
fn coefficient(s: &Scalar) -> String {
    let e = s.to_expr();
    match &e {
        Expr::Num(_) | Expr::Var(_) => e.to_string(),
        Expr::Neg(inner) if matches!(**inner, Expr::Var(_)) => e.to_string(),
        _ => format!("({e})"),
    }
}

/// `c1*b1 + c2*b2 - ...`, or `0` when every component vanishes.
fn combination(comps: &[Scalar], basis: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, c) in comps.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            basis(i)
        } else if (-c).is_one() {
            format!("-{}", basis(i))
        } else {
            format!("{}*{}", coefficient(c), basis(i))
        };
        match (out.is_empty(), term.strip_prefix('-')) {
            (true, _) => out.push_str(&term),
            (false, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (false, None) => {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn entries(chart: &Chart, m: &crate::tensorcalc::SMatrix, diagonal: bool) -> String {
    let n = chart.dim();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in i..n {
            if (j > i || diagonal) && !m.get(i, j).is_zero() {
                parts.push(format!("({},{}) = {}", chart.coords[i], chart.coords[j], m.get(i, j)));
            }
        }
    }
    if parts.is_empty() {
        "{ }".into()
    } else {
        format!("{{ {} }}", parts.join("; "))
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = &self.name;
        match &self.object {
            Object::Chart(c) => write!(f, "manifold {name} coords {}", c.coords.join(" ")),
            Object::VectorField(v) => {
                let c = v.chart();
                write!(
                    f,
                    "vectorfield {name} on {} = {}",
                    c.name,
                    combination(v.comps(), |i| format!("d/d{}", c.coords[i]))
                )
            }
            Object::OneForm(a) => {
                let c = a.chart();
                write!(f, "oneform {name} on {} = {}", c.name, combination(a.comps(), |i| format!("d{}", c.coords[i])))
            }
            Object::TwoForm(b) => {
                write!(f, "twoform {name} on {} {}", b.chart().name, entries(b.chart(), b.matrix(), false))
            }
            Object::Bivector(b) => {
                write!(f, "bivector {name} on {} {}", b.chart().name, entries(b.chart(), b.matrix(), false))
            }
            Object::Metric(g) => {
                write!(f, "metric {name} on {} {}", g.chart().name, entries(g.chart(), g.matrix(), true))
            }
            Object::Endo(e) => {
                let c = e.chart();
                let cols: Vec<String> = (0..c.dim())
                    .map(|j| {
                        let img = combination(&e.matrix().column(j), |i| format!("d{}", c.coords[i]));
                        format!("d{} -> {img}", c.coords[j])
                    })
                    .collect();
                write!(f, "endo {name} on {} {{ {} }}", c.name, cols.join("; "))
            }
            Object::Apc(_, parts) => write!(f, "structure apc {name} = ({})", parts.join(", ")),
            Object::Gapc(_, parts) => write!(f, "structure gapc {name} = ({})", parts.join(", ")),
            Object::Map(m) => {
                let show = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
                write!(
                    f,
                    "map {name} : {} -> {} {{ forward: {}; inverse: {} }}",
                    m.source().name,
                    m.target().name,
                    show(m.forward()),
                    show(m.inverse_components())
                )
            }
        }
    }
}

impl fmt::Display for Session {
    /// The session in its own language; parsing the output gives an equal session.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        if !self.decls.is_empty() && !self.directives.is_empty() {
            writeln!(f)?;
        }
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
