use std::fmt::Write as _;

use serde::Serialize;

use super::session::{Check, Directive, GenMetricSpec, Object, Session, Via};
use crate::error::{Error, Result};
use crate::gentangent::{check_gen_metric, gen_metric_from_riemannian, GenMetric};
use crate::morphisms::{check_gen_commutation, check_paracontactomorphism};
use crate::normality::{classical_normality, generalized_normality, normality_equivalence, product_structures_report};
use crate::parastruct::{
    b_invariance, b_sufficiency, beta_invariance, beta_sufficiency, check_apc, check_apc_metric, check_gapc,
    check_induced_square, compatibility_check, gapc_block_conditions, induce_gapc, one_param_family, Gapc,
};
use crate::report::{CheckItem, CheckReport, ItemKind, Verdict, Witness};
use crate::symkernel::{Sampler, SamplerConfig, Tier};

/// Reports produced by one directive, or the error that stopped it.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectiveOutcome {
    pub directive: String,
    pub expect_fail: bool,
    pub reports: Vec<CheckReport>,
    pub error: Option<String>,
}

impl DirectiveOutcome {
    /// Whether any report failed; with `strict`, numeric passes count as failures.
    pub fn failed(&self, strict: bool) -> bool {
        self.reports.iter().any(|r| !verdict_ok(r.verdict(), strict))
    }

    /// Errors are never an expected outcome.
    pub fn ok(&self, strict: bool) -> bool {
        self.error.is_none() && self.failed(strict) == self.expect_fail
    }
}

fn verdict_ok(v: Verdict, strict: bool) -> bool {
    match v {
        Verdict::Pass => true,
        Verdict::NumericPass => !strict,
        Verdict::Fail => false,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionRun {
    pub session: String,
    pub config: SamplerConfig,
    pub strict: bool,
    pub outcomes: Vec<DirectiveOutcome>,
}

impl SessionRun {
    pub fn reports(&self) -> impl Iterator<Item = &CheckReport> {
        self.outcomes.iter().flat_map(|o| o.reports.iter())
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.ok(self.strict))
    }

    /// Process exit status: 0 when every directive met its expectation.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn induced(session: &Session, name: &str, sampler: &Sampler) -> Result<Gapc> {
    match session.get(name) {
        Some(Object::Apc(s, _)) => induce_gapc(s, sampler),
        Some(Object::Gapc(g, _)) => Ok(g.clone()),
        _ => Err(Error::Precondition(format!("`{name}` is not a structure"))),
    }
}

fn dispatch(session: &Session, d: &Directive, sampler: &Sampler) -> Result<Vec<CheckReport>> {
    Ok(match &d.check {
        Check::Apc(s) => vec![check_apc(session.apc(s)?, sampler)?],
        Check::ApcMetric(s) => vec![check_apc_metric(session.apc(s)?, sampler)?],
        Check::Gapc(s) => {
            let mut out = Vec::new();
            if let Ok(apc) = session.apc(s) {
                out.push(check_induced_square(apc, sampler)?);
            }
            out.push(check_gapc(&induced(session, s, sampler)?, sampler)?);
            out
        }
        Check::Blocks(s) => vec![gapc_block_conditions(&induced(session, s, sampler)?, sampler)?],
        Check::Normal(s, via) => {
            let apc = session.apc(s)?;
            match via.unwrap_or(Via::Classical) {
                Via::Classical => vec![classical_normality(apc, sampler)?],
                Via::Generalized => vec![generalized_normality(apc, sampler)?],
                Via::Both => vec![
                    classical_normality(apc, sampler)?,
                    generalized_normality(apc, sampler)?,
                    normality_equivalence(apc, sampler)?,
                ],
            }
        }
        Check::Equiv(s) => vec![normality_equivalence(session.apc(s)?, sampler)?],
        Check::Compat { structure, metric } => {
            vec![compatibility_check(&induced(session, structure, sampler)?, session.metric(metric)?, sampler)?]
        }
        Check::BTransform { structure, form } => {
            let (s, b) = (session.apc(structure)?, session.two_form(form)?);
            vec![b_invariance(b, s, sampler)?, b_sufficiency(b, s, sampler)?]
        }
        Check::BetaTransform { structure, bivector } => {
            let (s, b) = (session.apc(structure)?, session.bivector(bivector)?);
            vec![beta_invariance(b, s, sampler)?, beta_sufficiency(b, s, sampler)?]
        }
        Check::Morphism { map, source, target } => {
            let (f, s1, s2) = (session.map(map)?, session.apc(source)?, session.apc(target)?);
            vec![check_paracontactomorphism(f, s1, s2, sampler)?, check_gen_commutation(f, s1, s2, sampler)?]
        }
        Check::Family { first, second, param } => {
            vec![one_param_family(session.apc(first)?, session.apc(second)?, param, sampler)?.1]
        }
        Check::GenMetric(GenMetricSpec::Riemannian(g)) => {
            vec![check_gen_metric(&gen_metric_from_riemannian(session.metric(g)?), sampler)?]
        }
        Check::GenMetric(GenMetricSpec::Blocks { phi, g1, g2 }) => {
            let gm =
                GenMetric::new(session.endo(phi)?.clone(), session.metric(g1)?.clone(), session.metric(g2)?.clone())?;
            vec![check_gen_metric(&gm, sampler)?]
        }
        Check::Products(s) => vec![product_structures_report(session.apc(s)?, sampler)?],
    })
}

/// Executes the directives in order. A directive whose checker refuses its
/// input records the error and execution continues.
pub fn run_session(session: &Session, config: &SamplerConfig, strict: bool) -> SessionRun {
    let sampler = Sampler::new(config.clone());
    let outcomes = session
        .directives
        .iter()
        .map(|d| {
            let (reports, error) = match dispatch(session, d, &sampler) {
                Ok(r) => (r, None),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            DirectiveOutcome { directive: d.to_string(), expect_fail: d.expect_fail, reports, error }
        })
        .collect();
    SessionRun { session: session.name.clone(), config: config.clone(), strict, outcomes }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonItem<'a> {
    label: &'a str,
    kind: ItemKind,
    tier: Tier,
    max_abs_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    directive: &'a str,
    name: &'a str,
    items: Vec<JsonItem<'a>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: &'a Vec<String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonRun<'a> {
    session: &'a str,
    seed: u64,
    samples: usize,
    tolerance: f64,
    strict: bool,
    reports: Vec<JsonReport<'a>>,
    passed: bool,
}

fn json_item(it: &CheckItem) -> JsonItem<'_> {
    JsonItem {
        label: &it.label,
        kind: it.kind,
        tier: it.tier,
        max_abs_residual: it.max_abs_residual,
        witness: it.witness.as_ref(),
        note: it.note.as_deref(),
    }
}

static NO_NOTES: Vec<String> = Vec::new();

fn emit_json(run: &SessionRun) -> String {
    let mut reports = Vec::new();
    for o in &run.outcomes {
        let expected = o.expect_fail.then_some("fail");
        if let Some(err) = &o.error {
            reports.push(JsonReport {
                directive: &o.directive,
                name: &o.directive,
                items: Vec::new(),
                notes: &NO_NOTES,
                verdict: Verdict::Fail.as_str(),
                expected,
                error: Some(err),
            });
        }
        for r in &o.reports {
            reports.push(JsonReport {
                directive: &o.directive,
                name: &r.name,
                items: r.items.iter().map(json_item).collect(),
                notes: &r.notes,
                verdict: r.verdict().as_str(),
                expected,
                error: None,
            });
        }
    }
    let doc = JsonRun {
        session: &run.session,
        seed: run.config.seed,
        samples: run.config.samples,
        tolerance: run.config.tolerance,
        strict: run.strict,
        reports,
        passed: run.passed(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report types serialize");
    s.push('\n');
    s
}

fn item_line(out: &mut String, it: &CheckItem) {
    let mark = match (it.kind, it.passed()) {
        (ItemKind::Info, _) => "info",
        (_, true) => "ok  ",
        (_, false) => "FAIL",
    };
    let _ = write!(out, "    {mark} {:<14} {}", it.tier.as_str(), it.label);
    if it.max_abs_residual > 0.0 {
        let _ = write!(out, "  (max |r| = {:.3e})", it.max_abs_residual);
    }
    out.push('\n');
    if let Some(n) = &it.note {
        let _ = writeln!(out, "         {n}");
    }
    if let Some(w) = &it.witness {
        let pt: Vec<String> = w.point.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
        let _ = writeln!(
            out,
            "         witness at {}: {} = {:.6e} at ({})",
            w.location,
            w.expression,
            w.value,
            pt.join(", ")
        );
    }
}

fn emit_text(run: &SessionRun) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "session {} (seed {}, {} samples, tolerance {:e})",
        run.session, run.config.seed, run.config.samples, run.config.tolerance
    );
    for o in &run.outcomes {
        out.push('\n');
        let _ = writeln!(out, "{}", o.directive);
        if let Some(err) = &o.error {
            let _ = writeln!(out, "  error: {err}");
        }
        for r in &o.reports {
            let _ = writeln!(out, "  {}: {}", r.name, r.verdict());
            for it in &r.items {
                item_line(&mut out, it);
            }
            for n in &r.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        let status = match (o.ok(run.strict), o.expect_fail) {
            (true, false) => "ok",
            (true, true) => "ok (failure expected)",
            (false, true) => "UNEXPECTED PASS",
            (false, false) => "FAILED",
        };
        let _ = writeln!(out, "  => {status}");
    }
    let ok = run.outcomes.iter().filter(|o| o.ok(run.strict)).count();
    let _ =
        writeln!(out, "\n{ok}/{} directives ok: {}", run.outcomes.len(), if run.passed() { "pass" } else { "fail" });
    out
}

pub fn emit_report(run: &SessionRun, format: Format) -> String {
    match format {
        Format::Text => emit_text(run),
        Format::Json => emit_json(run),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_session;

    const SRC: &str = "manifold R3 coords x y z
vectorfield xi on R3 = d/dz
oneform eta on R3 = dz
endo phi on R3 { dx -> exp(z)*dy; dy -> exp(-z)*dx; dz -> 0 }
structure apc S2 = (phi, xi, eta)
check apc S2
check normal S2 expect fail
";

    #[test]
    fn empty_session_json() {
        let run = run_session(&Session::new("empty"), &SamplerConfig::default(), false);
        let v: serde_json::Value = serde_json::from_str(&emit_report(&run, Format::Json)).unwrap();
        assert_eq!(v["reports"], serde_json::json!([]));
        assert_eq!(v["session"], "empty");
        assert_eq!(v["seed"], 20_240_917);
        assert_eq!(run.exit_code(), 0);
    }

    #[test]
    fn s2_failure_serializes_a_witness() {
        let run = run_session(&parse_session(SRC).unwrap(), &SamplerConfig::default(), false);
        assert_eq!(run.exit_code(), 0);
        let v: serde_json::Value = serde_json::from_str(&emit_report(&run, Format::Json)).unwrap();
        let normal = &v["reports"][1];
        assert_eq!(normal["verdict"], "fail");
        assert_eq!(normal["expected"], "fail");
        let item = normal["items"].as_array().unwrap().iter().find(|i| i["label"] == "L_xi phi = 0").unwrap();
        assert_eq!(item["tier"], "nonzero");
        assert_eq!(item["witness"]["location"], "(xi,d/dx) d/dy");
        assert!(item["witness"]["point"]["z"].is_f64());
    }

    #[test]
    fn text_lists_items_in_order_and_output_is_deterministic() {
        let s = parse_session(SRC).unwrap();
        let cfg = SamplerConfig::default();
        let a = emit_report(&run_session(&s, &cfg, false), Format::Text);
        let b = emit_report(&run_session(&s, &cfg, false), Format::Text);
        assert_eq!(a, b);
        let p1 = a.find("phi^2 = I - eta(x)xi").unwrap();
        let p2 = a.find("eta(xi) = 1").unwrap();
        assert!(p1 < p2);
        assert!(a.contains("ok (failure expected)"));
    }

    #[test]
    fn exit_status_tracks_expectations() {
        let s = parse_session(&SRC.replace(" expect fail", "")).unwrap();
        assert_eq!(run_session(&s, &SamplerConfig::default(), false).exit_code(), 1);
        let s = parse_session(&SRC.replace("check apc S2", "check apc S2 expect fail")).unwrap();
        assert_eq!(run_session(&s, &SamplerConfig::default(), false).exit_code(), 1);
    }

    #[test]
    fn refused_input_is_reported_and_execution_continues() {
        let src = "manifold R3 coords x y z
vectorfield xi on R3 = d/dz
oneform eta on R3 = dz
endo id on R3 { dx -> dx; dy -> dy; dz -> dz }
structure apc I = (id, xi, eta)
check normal I
check apc I expect fail
";
        let run = run_session(&parse_session(src).unwrap(), &SamplerConfig::default(), false);
        assert!(run.outcomes[0].error.as_deref().unwrap().contains("not almost paracontact"));
        assert!(run.outcomes[1].ok(false));
        assert_eq!(run.exit_code(), 1);
    }

    #[test]
    fn strict_demotes_numeric_passes() {
        let mut r = CheckReport::new("r");
        let mut it = CheckItem::info("x", "n");
        it.kind = ItemKind::Residual;
        it.tier = Tier::NumericZero;
        r.push(it);
        let o = DirectiveOutcome { directive: "d".into(), expect_fail: false, reports: vec![r], error: None };
        assert!(o.ok(false));
        assert!(!o.ok(true));
    }
}
