//! Line-oriented session parser. Each statement starts on a new line; brace
//! blocks may span lines, with entries separated by `;` or line breaks.

use super::session::{Check, Directive, GenMetricSpec, Object, Session, Via};
use crate::error::{Error, Result};
use crate::morphisms::Diffeo;
use crate::symkernel::lexer::{tokenize, Cursor, Tok, Token};
use crate::symkernel::parser::{parse_expr, parse_term, Scope};
use crate::symkernel::Scalar;
use crate::tensorcalc::{Bivector, Chart, ChartRef, Endo, Metric, OneForm, SMatrix, TwoForm, VectorField};

/// Attaches a source position to errors raised while building a value.
fn at<T>(t: &Token, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Syntax { .. } => e,
        Error::UnknownIdentifier { name, line: 0, .. } => Error::UnknownIdentifier { name, line: t.line, col: t.col },
        Error::UnknownIdentifier { .. } => e,
        other => Error::Session { line: t.line, msg: other.to_string() },
    })
}

fn keyword(cur: &mut Cursor<'_>, word: &str) -> Result<()> {
    match &cur.peek().tok {
        Tok::Ident(s) if s == word => {
            cur.next();
            Ok(())
        }
        other => Err(cur.error_here(format!("expected `{word}`, found {}", other.describe()))),
    }
}

fn is_keyword(cur: &Cursor<'_>, word: &str) -> bool {
    matches!(&cur.peek().tok, Tok::Ident(s) if s == word)
}

fn end_of_statement(cur: &mut Cursor<'_>) -> Result<()> {
    match cur.peek().tok {
        Tok::Newline => {
            cur.next();
            Ok(())
        }
        Tok::Eof => Ok(()),
        ref other => Err(cur.error_here(format!("expected end of line, found {}", other.describe()))),
    }
}

/// Basis elements recognised inside linear combinations.
#[derive(Clone, Copy, PartialEq)]
enum Basis {
    /// `d/dc`.
    Vector,
    /// `dc` standing for a 1-form.
    Form,
    /// `dc` or `d/dc`, both standing for ∂/∂c (images in an endo block).
    EndoImage,
}

fn coord_of_d(chart: &Chart, name: &str) -> Option<usize> {
    name.strip_prefix('d').and_then(|c| chart.index(c))
}

/// Index and token length of a basis element starting `k` tokens ahead.
fn basis_at(cur: &Cursor<'_>, k: usize, chart: &Chart, basis: Basis) -> Option<(usize, usize)> {
    let Tok::Ident(first) = &cur.peek_at(k).tok else { return None };
    if basis != Basis::Form && first == "d" && cur.peek_at(k + 1).tok == Tok::Slash {
        if let Tok::Ident(dc) = &cur.peek_at(k + 2).tok {
            return coord_of_d(chart, dc).map(|i| (i, 3));
        }
    }
    if basis != Basis::Vector {
        return coord_of_d(chart, first).map(|i| (i, 1));
    }
    None
}

fn skip(cur: &mut Cursor<'_>, n: usize) {
    for _ in 0..n {
        cur.next();
    }
}

fn scalar_expr(cur: &mut Cursor<'_>, chart: &Chart) -> Result<Scalar> {
    let t = cur.peek();
    let e = parse_expr(cur, Scope::of(&chart.coords))?;
    at(t, Scalar::from_expr(&e))
}

/// `c1*b1 + c2*b2 - ...`, or a bare `0`.
fn combination(cur: &mut Cursor<'_>, chart: &Chart, basis: Basis) -> Result<Vec<Scalar>> {
    let mut comps = vec![Scalar::zero(); chart.dim()];
    let mut first = true;
    loop {
        let mut negative = false;
        if !first && !matches!(cur.peek().tok, Tok::Plus | Tok::Minus) {
            return Ok(comps);
        }
        if !first || matches!(cur.peek().tok, Tok::Plus | Tok::Minus) {
            negative = cur.next().tok == Tok::Minus;
        }
        first = false;
        while basis_at(cur, 1, chart, basis).is_some() && cur.peek().tok == Tok::Minus {
            cur.next();
            negative = !negative;
        }
        let (coeff, index) = if let Some((i, len)) = basis_at(cur, 0, chart, basis) {
            skip(cur, len);
            (Scalar::one(), Some(i))
        } else {
            let t = cur.peek();
            let e = parse_term(cur, Scope::of(&chart.coords), &|c| basis_at(c, 1, chart, basis).is_some())?;
            let s = at(t, Scalar::from_expr(&e))?;
            if cur.peek().tok == Tok::Star {
                cur.next();
                let (i, len) = basis_at(cur, 0, chart, basis).expect("stop predicate saw a basis element");
                skip(cur, len);
                (s, Some(i))
            } else if s.is_zero() {
                (s, None)
            } else {
                let what = match basis {
                    Basis::Form => "dc",
                    Basis::Vector => "d/dc",
                    Basis::EndoImage => "dc or d/dc",
                };
                return Err(cur.error_here(format!("expected `*` and a basis element ({what}) after the coefficient")));
            }
        };
        if let Some(i) = index {
            let term = if negative { -coeff } else { coeff };
            comps[i] = &comps[i] + &term;
        }
    }
}

/// Skips separators inside a brace block; returns false at the closing brace.
fn next_entry(cur: &mut Cursor<'_>) -> Result<bool> {
    loop {
        match cur.peek().tok {
            Tok::Newline | Tok::Semi => {
                cur.next();
            }
            Tok::RBrace => {
                cur.next();
                return Ok(false);
            }
            Tok::Eof => return Err(cur.error_here("unterminated `{` block")),
            _ => return Ok(true),
        }
    }
}

fn entry_end(cur: &mut Cursor<'_>) -> Result<()> {
    match cur.peek().tok {
        Tok::Newline | Tok::Semi | Tok::RBrace => Ok(()),
        ref other => Err(cur.error_here(format!("expected `;`, `}}` or end of line, found {}", other.describe()))),
    }
}

fn coordinate(cur: &mut Cursor<'_>, chart: &Chart) -> Result<usize> {
    let (name, t) = cur.expect_ident()?;
    chart.index(name).ok_or_else(|| Error::UnknownIdentifier { name: name.to_string(), line: t.line, col: t.col })
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    Anti,
    Sym,
}

/// `{ (ci,cj) = expr; ... }` with the mirrored entry completed; contradictory
/// entries are rejected.
fn pair_block(cur: &mut Cursor<'_>, chart: &Chart, sym: Symmetry) -> Result<SMatrix> {
    let n = chart.dim();
    let mut m = SMatrix::zeros(n, n);
    let mut set = vec![vec![false; n]; n];
    cur.expect(&Tok::LBrace)?;
    while next_entry(cur)? {
        let t = cur.peek();
        cur.expect(&Tok::LParen)?;
        let i = coordinate(cur, chart)?;
        cur.expect(&Tok::Comma)?;
        let j = coordinate(cur, chart)?;
        cur.expect(&Tok::RParen)?;
        cur.expect(&Tok::Equals)?;
        let v = scalar_expr(cur, chart)?;
        entry_end(cur)?;
        let conflict = |msg: String| Error::Session { line: t.line, msg };
        if i == j && sym == Symmetry::Anti && !v.is_zero() {
            return Err(conflict(format!(
                "diagonal entry ({0},{0}) of an antisymmetric tensor must be 0",
                chart.coords[i]
            )));
        }
        let mirror = if sym == Symmetry::Anti { -&v } else { v.clone() };
        for (a, b, w) in [(i, j, &v), (j, i, &mirror)] {
            if set[a][b] && m.get(a, b) != w {
                return Err(conflict(format!(
                    "entry ({},{}) conflicts with an earlier entry",
                    chart.coords[i], chart.coords[j]
                )));
            }
            set[a][b] = true;
            m.set(a, b, w.clone());
        }
    }
    Ok(m)
}

fn endo_block(cur: &mut Cursor<'_>, chart: &ChartRef) -> Result<Endo> {
    let n = chart.dim();
    let mut cols: Vec<Option<Vec<Scalar>>> = vec![None; n];
    cur.expect(&Tok::LBrace)?;
    while next_entry(cur)? {
        let t = cur.peek();
        let Some((j, len)) = basis_at(cur, 0, chart, Basis::EndoImage) else {
            return Err(cur.error_here("expected a basis vector `dc` on the left of `->`"));
        };
        skip(cur, len);
        cur.expect(&Tok::Arrow)?;
        let img = combination(cur, chart, Basis::EndoImage)?;
        entry_end(cur)?;
        if cols[j].replace(img).is_some() {
            return Err(Error::Session { line: t.line, msg: format!("image of d{} given twice", chart.coords[j]) });
        }
    }
    let m = SMatrix::from_fn(n, n, |i, j| cols[j].as_ref().map_or(Scalar::zero(), |c| c[i].clone()));
    Endo::new(chart, m)
}

fn name_list(cur: &mut Cursor<'_>) -> Result<Vec<String>> {
    cur.expect(&Tok::LParen)?;
    let mut out = vec![cur.expect_ident()?.0.to_string()];
    while cur.eat(&Tok::Comma) {
        out.push(cur.expect_ident()?.0.to_string());
    }
    cur.expect(&Tok::RParen)?;
    Ok(out)
}

fn expr_list(cur: &mut Cursor<'_>, chart: &Chart) -> Result<Vec<Scalar>> {
    let mut out = vec![scalar_expr(cur, chart)?];
    while cur.eat(&Tok::Comma) {
        out.push(scalar_expr(cur, chart)?);
    }
    Ok(out)
}

/// Coordinate names must not collide with the basis spellings `d`, `dc`.
fn validate_chart(chart: &Chart) -> std::result::Result<(), String> {
    for c in &chart.coords {
        if c == "d" || coord_of_d(chart, c).is_some() {
            return Err(format!("coordinate `{c}` clashes with a basis element name"));
        }
    }
    Ok(())
}

struct Parser<'a> {
    cur: Cursor<'a>,
    session: Session,
}

impl<'a> Parser<'a> {
    fn chart_ref(&mut self) -> Result<ChartRef> {
        keyword(&mut self.cur, "on")?;
        let (name, t) = self.cur.expect_ident()?;
        at(t, self.session.chart(name).cloned())
    }

    fn declare(&mut self, t: &Token, name: &str, obj: Result<Object>) -> Result<()> {
        let obj = at(t, obj)?;
        at(t, self.session.declare(name, obj))
    }

    fn statement(&mut self) -> Result<()> {
        let start = self.cur.peek();
        let (word, _) = self.cur.expect_ident()?;
        match word {
            "manifold" => {
                let (name, _) = self.cur.expect_ident()?;
                keyword(&mut self.cur, "coords")?;
                let mut coords = Vec::new();
                while let Tok::Ident(c) = &self.cur.peek().tok {
                    coords.push(c.clone());
                    self.cur.next();
                }
                let chart = at(start, Chart::new(name, coords))?;
                validate_chart(&chart).map_err(|msg| Error::Session { line: start.line, msg })?;
                self.declare(start, name, Ok(Object::Chart(chart)))?;
            }
            "vectorfield" | "oneform" => {
                let (name, _) = self.cur.expect_ident()?;
                let chart = self.chart_ref()?;
                self.cur.expect(&Tok::Equals)?;
                let obj = if word == "vectorfield" {
                    let comps = combination(&mut self.cur, &chart, Basis::Vector)?;
                    VectorField::new(&chart, comps).map(Object::VectorField)
                } else {
                    let comps = combination(&mut self.cur, &chart, Basis::Form)?;
                    OneForm::new(&chart, comps).map(Object::OneForm)
                };
                self.declare(start, name, obj)?;
            }
            "twoform" | "bivector" | "metric" => {
                let (name, _) = self.cur.expect_ident()?;
                let chart = self.chart_ref()?;
                let sym = if word == "metric" { Symmetry::Sym } else { Symmetry::Anti };
                let m = pair_block(&mut self.cur, &chart, sym)?;
                let obj = match word {
                    "twoform" => TwoForm::new(&chart, m).map(Object::TwoForm),
                    "bivector" => Bivector::new(&chart, m).map(Object::Bivector),
                    _ => Metric::new(&chart, m).map(Object::Metric),
                };
                self.declare(start, name, obj)?;
            }
            "endo" => {
                let (name, _) = self.cur.expect_ident()?;
                let chart = self.chart_ref()?;
                let e = endo_block(&mut self.cur, &chart)?;
                self.declare(start, name, Ok(Object::Endo(e)))?;
            }
            "structure" => {
                let (kind, kt) = self.cur.expect_ident()?;
                let (name, _) = self.cur.expect_ident()?;
                self.cur.expect(&Tok::Equals)?;
                let parts = name_list(&mut self.cur)?;
                let r = match kind {
                    "apc" => self.session.declare_apc(name, parts),
                    "gapc" => self.session.declare_gapc(name, parts),
                    other => {
                        return Err(Error::Syntax {
                            line: kt.line,
                            col: kt.col,
                            msg: format!("unknown structure kind `{other}`; expected `apc` or `gapc`"),
                        })
                    }
                };
                at(start, r)?;
            }
            "map" => {
                let (name, _) = self.cur.expect_ident()?;
                self.cur.expect(&Tok::Colon)?;
                let (src, st) = self.cur.expect_ident()?;
                let source = at(st, self.session.chart(src).cloned())?;
                self.cur.expect(&Tok::Arrow)?;
                let (tgt, tt) = self.cur.expect_ident()?;
                let target = at(tt, self.session.chart(tgt).cloned())?;
                self.cur.expect(&Tok::LBrace)?;
                self.cur.skip_newlines();
                keyword(&mut self.cur, "forward")?;
                self.cur.expect(&Tok::Colon)?;
                let forward = expr_list(&mut self.cur, &source)?;
                if !self.cur.eat(&Tok::Semi) {
                    self.cur.expect(&Tok::Newline)?;
                }
                self.cur.skip_newlines();
                keyword(&mut self.cur, "inverse")?;
                self.cur.expect(&Tok::Colon)?;
                let inverse = expr_list(&mut self.cur, &target)?;
                self.cur.eat(&Tok::Semi);
                self.cur.skip_newlines();
                self.cur.expect(&Tok::RBrace)?;
                let f = Diffeo::new(name, &source, &target, forward, inverse).map(Object::Map);
                self.declare(start, name, f)?;
            }
            "check" => {
                let check = self.check()?;
                let expect_fail = if is_keyword(&self.cur, "expect") {
                    self.cur.next();
                    keyword(&mut self.cur, "fail")?;
                    true
                } else {
                    false
                };
                at(start, self.session.push_directive(Directive { check, expect_fail }))?;
            }
            other => {
                return Err(Error::Syntax {
                    line: start.line,
                    col: start.col,
                    msg: format!("unknown statement `{other}`"),
                })
            }
        }
        end_of_statement(&mut self.cur)
    }

    fn ident(&mut self) -> Result<String> {
        Ok(self.cur.expect_ident()?.0.to_string())
    }

    fn with(&mut self) -> Result<String> {
        keyword(&mut self.cur, "with")?;
        self.ident()
    }

    fn check(&mut self) -> Result<Check> {
        let (kind, kt) = self.cur.expect_ident()?;
        Ok(match kind {
            "apc" => Check::Apc(self.ident()?),
            "apcmetric" => Check::ApcMetric(self.ident()?),
            "gapc" => Check::Gapc(self.ident()?),
            "blocks" => Check::Blocks(self.ident()?),
            "equiv" => Check::Equiv(self.ident()?),
            "products" => Check::Products(self.ident()?),
            "normal" => {
                let s = self.ident()?;
                let via = if is_keyword(&self.cur, "via") {
                    self.cur.next();
                    let (v, vt) = self.cur.expect_ident()?;
                    Some(match v {
                        "classical" => Via::Classical,
                        "generalized" => Via::Generalized,
                        "both" => Via::Both,
                        other => {
                            return Err(Error::Syntax {
                                line: vt.line,
                                col: vt.col,
                                msg: format!("unknown method `{other}`; expected classical, generalized or both"),
                            })
                        }
                    })
                } else {
                    None
                };
                Check::Normal(s, via)
            }
            "compat" => Check::Compat { structure: self.ident()?, metric: self.with()? },
            "btransform" => Check::BTransform { structure: self.ident()?, form: self.with()? },
            "betatransform" => Check::BetaTransform { structure: self.ident()?, bivector: self.with()? },
            "morphism" => {
                let map = self.ident()?;
                self.cur.expect(&Tok::Colon)?;
                let source = self.ident()?;
                self.cur.expect(&Tok::Arrow)?;
                Check::Morphism { map, source, target: self.ident()? }
            }
            "family" => Check::Family { first: self.ident()?, second: self.ident()?, param: self.with()? },
            "genmetric" => {
                if self.cur.peek().tok == Tok::LParen {
                    let t = self.cur.peek();
                    let parts = name_list(&mut self.cur)?;
                    let [phi, g1, g2]: [String; 3] = parts.try_into().map_err(|_| Error::Syntax {
                        line: t.line,
                        col: t.col,
                        msg: "genmetric takes (phi, g1, g2)".into(),
                    })?;
                    Check::GenMetric(GenMetricSpec::Blocks { phi, g1, g2 })
                } else {
                    Check::GenMetric(GenMetricSpec::Riemannian(self.ident()?))
                }
            }
            other => return Err(Error::Syntax { line: kt.line, col: kt.col, msg: format!("unknown check `{other}`") }),
        })
    }
}

/// Parses and resolves a session. Names must be declared before use.
pub fn parse_session(text: &str) -> Result<Session> {
    let toks = tokenize(text)?;
    let mut p = Parser { cur: Cursor::new(&toks), session: Session::new("session") };
    loop {
        p.cur.skip_newlines();
        if p.cur.peek().tok == Tok::Eof {
            return Ok(p.session);
        }
        p.statement()?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parastruct::catalog;

    const S1: &str = "manifold R3 coords x y z
oneform eta on R3 = dz - y*dx
vectorfield xi on R3 = d/dz
endo phi on R3 { dx -> dy; dy -> dx + y*dz; dz -> 0 }
metric g on R3 {
  (x,x) = 1 + y^2; (x,z) = -y
  (y,y) = -1
  (z,z) = 1
}
structure apc S1 = (phi, xi, eta, g)
check apc S1
";

    #[test]
    fn manifold_declares_a_chart() {
        let s = parse_session("manifold R3 coords x y z").unwrap();
        assert_eq!(s.chart("R3").unwrap().dim(), 3);
    }

    #[test]
    fn oneform_components() {
        let s = parse_session(S1).unwrap();
        let eta = s.one_form("eta").unwrap();
        assert_eq!(eta.comps(), &[Scalar::parse("-y").unwrap(), Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn endo_columns_and_catalog_agreement() {
        let s = parse_session(S1).unwrap();
        assert_eq!(s.endo("phi").unwrap(), &catalog::s1().phi);
        assert_eq!(s.apc("S1").unwrap(), &catalog::s1());
    }

    #[test]
    fn round_trip() {
        let s = parse_session(S1).unwrap();
        let printed = s.to_string();
        let again = parse_session(&printed).unwrap();
        assert_eq!(s, again, "{printed}");
        assert_eq!(printed, again.to_string());
    }

    #[test]
    fn antisymmetry_is_completed_and_conflicts_rejected() {
        let base = "manifold R3 coords x y z\n";
        let s = parse_session(&format!("{base}twoform B on R3 {{ (x,y) = 1; (y,x) = -1 }}")).unwrap();
        let b = s.two_form("B").unwrap();
        assert_eq!(b.comp(1, 0), &Scalar::from_int(-1));
        let err = parse_session(&format!("{base}twoform B on R3 {{ (x,y) = 1; (y,x) = 1 }}")).unwrap_err();
        assert!(matches!(err, Error::Session { line: 2, .. }), "{err:?}");
        let err = parse_session(&format!("{base}bivector b on R3 {{ (x,x) = 1 }}")).unwrap_err();
        assert!(matches!(err, Error::Session { line: 2, .. }));
        let s =
            parse_session(&format!("{base}metric g on R3 {{ (x,y) = z; (x,x) = 1; (y,y) = 1; (z,z) = 1 }}")).unwrap();
        assert_eq!(s.metric("g").unwrap().comp(1, 0), &Scalar::var("z"));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_session("manifold R3 coords x y z\noneform a on R3 = w*dx").unwrap_err();
        assert_eq!(err, Error::UnknownIdentifier { name: "w".into(), line: 2, col: 19 });
        let err = parse_session("manifold R3 coords x y z\ncheck apc S").unwrap_err();
        assert_eq!(err, Error::UnknownIdentifier { name: "S".into(), line: 2, col: 1 });
        let err = parse_session("manifold R3 coords x y z\nmanifold R3 coords a").unwrap_err();
        assert!(matches!(err, Error::Session { line: 2, .. }));
        let err = parse_session("manifold R3 coords x y z\noneform a on R3 = x").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = parse_session("manifold R2 coords x y\nmanifold R3 coords x y z\nvectorfield v on R2 = d/dx\nendo p on R3 { dx -> dx }\nstructure apc S = (p, v, v)").unwrap_err();
        assert!(matches!(err, Error::Session { line: 5, .. }), "{err:?}");
        let err = parse_session("frobnicate").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, col: 1, .. }));
        let err = parse_session("manifold M coords x dx").unwrap_err();
        assert!(matches!(err, Error::Session { .. }));
    }

    #[test]
    fn combination_forms() {
        let s = parse_session(
            "manifold R3 coords x y z
vectorfield v on R3 = -d/dx + 1/2*d/dy - (x + y)*d/dz
vectorfield w on R3 = 0
oneform a on R3 = 2*x*dx + - dy + dy + exp(z)*dz
endo p on R3 { d/dx -> d/dy; dy -> 2*dx }",
        )
        .unwrap();
        let v = s.vector_field("v").unwrap();
        assert_eq!(v.comps(), &[Scalar::from_int(-1), Scalar::from_ratio(1, 2), Scalar::parse("-x - y").unwrap()]);
        assert!(crate::tensorcalc::Components::is_zero(s.vector_field("w").unwrap()));
        let a = s.one_form("a").unwrap();
        assert_eq!(a.comps(), &[Scalar::parse("2*x").unwrap(), Scalar::zero(), Scalar::parse("exp(z)").unwrap()]);
        let p = s.endo("p").unwrap();
        assert_eq!(p.comp(1, 0), &Scalar::one());
        assert_eq!(p.comp(0, 1), &Scalar::from_int(2));
        assert!(p.comp(2, 2).is_zero());
        let again = parse_session(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn directives_resolve_names() {
        let src = format!(
            "{S1}twoform B on R3 {{ (x,y) = 1 }}
map f : R3 -> R3 {{ forward: x + 1, y, z; inverse: x - 1, y, z }}
check normal S1 via both
check btransform S1 with B expect fail
check morphism f : S1 -> S1
check family S1 S1 with t
check genmetric (phi, g, g)
"
        );
        let s = parse_session(&src).unwrap();
        assert_eq!(s.directives.len(), 6);
        assert!(s.directives[2].expect_fail);
        assert_eq!(s.directives[3].to_string(), "check morphism f : S1 -> S1");
        assert_eq!(parse_session(&s.to_string()).unwrap(), s);
        let bad = format!("{S1}check btransform S1 with g");
        assert!(matches!(parse_session(&bad), Err(Error::Session { .. })));
        let bad = format!("{S1}check family S1 S1 with x");
        assert!(matches!(parse_session(&bad), Err(Error::Session { .. })));
    }
}
