//! Session files for the built-in structures.

use super::session::{Check, Directive, Object, Session, Via};
use crate::error::Result;
use crate::parastruct::{catalog, Apc};

/// A one-line summary used by the `catalog` command.
pub fn describe(s: &Apc) -> String {
    let c = s.chart();
    let show = |v: &[crate::symkernel::Scalar]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    format!(
        "{}: chart {} ({}), xi = ({}), eta = ({}){}",
        s.name,
        c.name,
        c.coords.join(" "),
        show(s.xi.comps()),
        show(s.eta.comps()),
        if s.g.is_some() { ", with metric" } else { "" }
    )
}

/// Declarations for one structure plus the definition and normality checks.
/// `normal` says whether the structure is expected to pass the normality and
/// product-structure checks.
pub fn structure_session(s: &Apc, normal: bool) -> Result<Session> {
    let mut out = Session::new(s.name.clone());
    out.declare(s.chart().name.clone(), Object::Chart(s.chart().clone()))?;
    out.declare("phi", Object::Endo(s.phi.clone()))?;
    out.declare("xi", Object::VectorField(s.xi.clone()))?;
    out.declare("eta", Object::OneForm(s.eta.clone()))?;
    let mut parts = vec!["phi".to_string(), "xi".into(), "eta".into()];
    if let Some(g) = &s.g {
        out.declare("g", Object::Metric(g.clone()))?;
        parts.push("g".into());
    }
    out.declare_apc(&s.name, parts)?;
    let name = s.name.clone();
    let mut checks = vec![(Check::Apc(name.clone()), false)];
    if s.g.is_some() {
        checks.push((Check::ApcMetric(name.clone()), false));
    }
    checks.extend([
        (Check::Gapc(name.clone()), false),
        (Check::Blocks(name.clone()), false),
        (Check::Normal(name.clone(), Some(Via::Both)), !normal),
        (Check::Products(name), !normal),
    ]);
    for (check, expect_fail) in checks {
        out.push_directive(Directive { check, expect_fail })?;
    }
    Ok(out)
}

/// The built-in structures with their session files.
pub fn catalog_sessions() -> Result<Vec<Session>> {
    [(catalog::s0(), true), (catalog::s1(), true), (catalog::s2(), false)]
        .iter()
        .map(|(s, normal)| structure_session(s, *normal))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_session, run_session};
    use crate::symkernel::SamplerConfig;

    #[test]
    fn catalog_sessions_round_trip_and_pass() {
        for s in catalog_sessions().unwrap() {
            let text = s.to_string();
            let mut again = parse_session(&text).unwrap();
            again.name = s.name.clone();
            assert_eq!(again, s, "{text}");
            let run = run_session(&again, &SamplerConfig::default(), false);
            assert_eq!(run.exit_code(), 0, "{}", s.name);
        }
    }

    #[test]
    fn describes_structures() {
        assert_eq!(describe(&catalog::s1()), "S1: chart R3 (x y z), xi = (0, 0, 1), eta = (-y, 0, 1), with metric");
    }
}
