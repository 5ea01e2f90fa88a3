//! Checks shared by the integration tests and the acceptance harness. Each
//! returns `Err` with a description of the first violation.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use paracontact::frontend::{emit_report, parse_session, run_session, Format, Session, PRODUCTIONS};
use paracontact::parastruct::catalog;
use paracontact::symkernel::random::{random_expr, rewrite_equivalent};
use paracontact::symkernel::{Point, SamplerConfig, Scalar};
use paracontact::tensorcalc::{d0, d1, lie_bracket, Components, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 20_240_917;
pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_point(rng: &mut ChaCha8Rng) -> Point {
    VARS.iter().map(|v| (v.to_string(), rng.gen_range(-1.0..1.0))).collect()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Pairs (e, e') where e' is e after an identity-preserving rewrite: the
/// canonical forms must agree, and agreeing canonical forms must agree
/// pointwise. Also checks that simplification respects addition.
pub fn canonical_pairs(pairs: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let e = random_expr(&mut rng, &VARS, 3);
        let f = rewrite_equivalent(&mut rng, &VARS, &e);
        let (se, sf) =
            (Scalar::from_expr(&e).map_err(|x| x.to_string())?, Scalar::from_expr(&f).map_err(|x| x.to_string())?);
        if !(&se - &sf).is_zero() {
            return Err(format!("canonical forms differ: {e} vs {f}"));
        }
        let g = random_expr(&mut rng, &VARS, 3);
        let sg = Scalar::from_expr(&g).map_err(|x| x.to_string())?;
        let sum = &se + &sg;
        for _ in 0..3 {
            let p = random_point(&mut rng);
            let val = |x: &Scalar| x.eval(&p).map_err(|e| e.to_string());
            let ev = |x: &paracontact::symkernel::Expr| x.eval(&p).map_err(|e| e.to_string());
            let (a, b) = (ev(&e)?, ev(&f)?);
            if !close(a, b, 1e-8) {
                return Err(format!("{e} = {a} but {f} = {b} at {p:?}"));
            }
            if !close(val(&se)?, a, 1e-8) {
                return Err(format!("canonical form of {e} disagrees at {p:?}"));
            }
            let (s, direct) = (val(&sum)?, a + ev(&g)?);
            if !close(s, direct, 1e-10) {
                return Err(format!("simplify({e} + {g}) = {s}, expected {direct} at {p:?}"));
            }
        }
    }
    Ok(())
}

/// Symbolic derivatives against central differences with h = 1e-6.
pub fn finite_differences(exprs: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    for _ in 0..exprs {
        let e = random_expr(&mut rng, &VARS, 3);
        for v in VARS {
            let de = e.diff(v);
            let p = random_point(&mut rng);
            let shifted = |dx: f64| {
                let mut q = p.clone();
                *q.get_mut(v).expect("coordinate") += dx;
                e.eval(&q).map_err(|x| x.to_string())
            };
            let fd = (shifted(h)? - shifted(-h)?) / (2.0 * h);
            let exact = de.eval(&p).map_err(|x| x.to_string())?;
            if !close(exact, fd, 1e-5) {
                return Err(format!("d/d{v} {e}: symbolic {exact}, finite difference {fd}"));
            }
        }
    }
    Ok(())
}

/// d(df) = 0 for random scalars and for the catalog components.
pub fn d_squared(scalars: usize, seed: u64) -> Result<(), String> {
    let c = catalog::r3();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs: Vec<Scalar> = Vec::new();
    for _ in 0..scalars {
        fs.push(Scalar::from_expr(&random_expr(&mut rng, &VARS, 3)).map_err(|e| e.to_string())?);
    }
    for s in catalog::structures() {
        fs.extend(s.eta.comps().iter().cloned());
        fs.extend(s.phi.matrix().column(1));
    }
    for f in fs {
        let dd = d1(&d0(&c, &f));
        if !dd.is_zero() {
            return Err(format!("d(d({f})) = {dd:?}"));
        }
    }
    Ok(())
}

/// Coordinate fields, Reeb fields and the columns of every catalog φ.
pub fn catalog_fields() -> Vec<VectorField> {
    let c = catalog::r3();
    let mut out: Vec<VectorField> = (0..3).map(|i| VectorField::coordinate(&c, i)).collect();
    for s in catalog::structures() {
        out.push(s.xi.clone());
        out.extend((0..3).map(|j| s.phi.column(j)));
    }
    out.push(
        VectorField::new(
            &c,
            vec![Scalar::parse("sin(x)").unwrap(), Scalar::parse("y*z").unwrap(), Scalar::parse("exp(x - y)").unwrap()],
        )
        .unwrap(),
    );
    out.retain(|v| !v.is_zero());
    let mut seen = BTreeSet::new();
    out.retain(|v| seen.insert(format!("{v:?}")));
    out
}

/// [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0 on every triple of catalog fields.
pub fn jacobi_catalog() -> Result<usize, String> {
    let fields = catalog_fields();
    let br = |a: &VectorField, b: &VectorField| lie_bracket(a, b).map_err(|e| e.to_string());
    let mut count = 0;
    for (i, x) in fields.iter().enumerate() {
        for (j, y) in fields.iter().enumerate().skip(i + 1) {
            for z in fields.iter().skip(j + 1) {
                let terms = [br(x, &br(y, z)?)?, br(y, &br(z, x)?)?, br(z, &br(x, y)?)?];
                let sum = terms[0].add(&terms[1]).and_then(|s| s.add(&terms[2])).map_err(|e| e.to_string())?;
                if !sum.is_zero() {
                    return Err(format!("Jacobi fails on {x:?}, {y:?}, {z:?}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("sessions")
}

pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("sessions directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "para"))
        .collect();
    files.sort();
    files
}

pub fn load(path: &std::path::Path) -> Result<Session, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut s = parse_session(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    s.name = path.file_name().expect("file name").to_string_lossy().into_owned();
    Ok(s)
}

/// Every corpus file parses, survives print-and-reparse, and runs with every
/// directive ending as expected.
pub fn corpus_runs() -> Result<usize, String> {
    let files = corpus_files();
    if files.is_empty() {
        return Err("no session files".into());
    }
    for path in &files {
        let s = load(path)?;
        let mut again = parse_session(&s.to_string()).map_err(|e| format!("{}: reparse: {e}", path.display()))?;
        again.name = s.name.clone();
        if again != s {
            return Err(format!("{}: printed session does not parse back to itself", path.display()));
        }
        let run = run_session(&s, &SamplerConfig::default(), false);
        if run.exit_code() != 0 {
            let bad: Vec<_> = run.outcomes.iter().filter(|o| !o.ok(false)).map(|o| o.directive.clone()).collect();
            return Err(format!("{}: directives not ok: {}", path.display(), bad.join("; ")));
        }
    }
    Ok(files.len())
}

/// Two runs with the default seed emit byte-identical JSON.
pub fn json_deterministic() -> Result<(), String> {
    for path in corpus_files() {
        let s = load(&path)?;
        let once = emit_report(&run_session(&s, &SamplerConfig::default(), false), Format::Json);
        let twice = emit_report(&run_session(&s, &SamplerConfig::default(), false), Format::Json);
        if once != twice {
            return Err(format!("{}: JSON differs between runs", path.display()));
        }
        serde_json::from_str::<serde_json::Value>(&once)
            .map_err(|e| format!("{}: invalid JSON: {e}", path.display()))?;
    }
    Ok(())
}

/// The corpus exercises every grammar production.
pub fn productions_covered() -> Result<(), String> {
    let mut used = BTreeSet::new();
    for path in corpus_files() {
        used.extend(load(&path)?.productions());
    }
    let all: BTreeSet<&str> = PRODUCTIONS.iter().copied().collect();
    let missing: Vec<_> = all.difference(&used).collect();
    if !missing.is_empty() {
        return Err(format!("productions not exercised: {missing:?}"));
    }
    Ok(())
}
