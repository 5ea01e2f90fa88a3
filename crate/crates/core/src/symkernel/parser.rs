//! Recursive-descent parser for scalar expressions.
//!
//! Precedence, tightest first: `^` (integer exponent), unary `-`, `*` `/`,
//! binary `+` `-`. An integer literal followed by `/` and another integer
//! literal at the start of a product is read as one rational constant, so
//! `1/2*(x+y)` is `mul(1/2, x + y)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::expr::Expr;
use super::lexer::{tokenize, Cursor, Tok};
use crate::error::{Error, Result};

pub const FUNCTIONS: [&str; 3] = ["sin", "cos", "exp"];

/// Which identifiers may appear as coordinates. `None` accepts anything.
#[derive(Clone, Copy)]
pub struct Scope<'a> {
    pub coords: Option<&'a [String]>,
}

impl<'a> Scope<'a> {
    pub fn any() -> Self {
        Scope { coords: None }
    }

    pub fn of(coords: &'a [String]) -> Self {
        Scope { coords: Some(coords) }
    }

    fn allows(&self, name: &str) -> bool {
        self.coords.is_none_or(|c| c.iter().any(|n| n == name))
    }
}

/// Parses a complete expression; trailing tokens are an error.
pub fn expr_parse(text: &str) -> Result<Expr> {
    parse_in(text, Scope::any())
}

pub fn parse_in(text: &str, scope: Scope<'_>) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks);
    let e = parse_expr(&mut cur, scope)?;
    cur.skip_newlines();
    match &cur.peek().tok {
        Tok::Eof => Ok(e),
        other => Err(cur.error_here(format!("unexpected {}", other.describe()))),
    }
}

pub fn parse_expr(cur: &mut Cursor<'_>, scope: Scope<'_>) -> Result<Expr> {
    let mut lhs = parse_term(cur, scope, &|_| false)?;
    loop {
        match cur.peek().tok {
            Tok::Plus => {
                cur.next();
                let rhs = parse_term(cur, scope, &|_| false)?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            }
            Tok::Minus => {
                cur.next();
                let rhs = parse_term(cur, scope, &|_| false)?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            }
            _ => return Ok(lhs),
        }
    }
}

/// Parses a product chain. `stop` is consulted whenever a `*` is next: if it
/// reports that the tokens after the `*` start something that is not a
/// scalar factor (a basis element in the session grammar), the chain ends and
/// the `*` is left for the caller.
pub fn parse_term(cur: &mut Cursor<'_>, scope: Scope<'_>, stop: &dyn Fn(&Cursor<'_>) -> bool) -> Result<Expr> {
    let mut lhs = match rational_literal(cur)? {
        Some(r) => Expr::Num(r),
        None => parse_factor(cur, scope)?,
    };
    loop {
        match cur.peek().tok {
            Tok::Star => {
                if stop(cur) {
                    return Ok(lhs);
                }
                cur.next();
                let rhs = parse_factor(cur, scope)?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            }
            Tok::Slash => {
                cur.next();
                let rhs = parse_factor(cur, scope)?;
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            }
            _ => return Ok(lhs),
        }
    }
}

fn rational_literal(cur: &mut Cursor<'_>) -> Result<Option<BigRational>> {
    let (Tok::Int(p), Tok::Slash, Tok::Int(q)) = (&cur.peek().tok, &cur.peek_at(1).tok, &cur.peek_at(2).tok) else {
        return Ok(None);
    };
    if cur.peek_at(3).tok == Tok::Caret {
        return Ok(None);
    }
    if q.is_zero() {
        cur.next();
        cur.next();
        return Err(cur.error_here("zero denominator in rational literal"));
    }
    let r = BigRational::new(p.clone(), q.clone());
    cur.next();
    cur.next();
    cur.next();
    Ok(Some(r))
}

fn parse_factor(cur: &mut Cursor<'_>, scope: Scope<'_>) -> Result<Expr> {
    if cur.eat(&Tok::Minus) {
        let inner = parse_factor(cur, scope)?;
        return Ok(Expr::Neg(Box::new(inner)));
    }
    let base = parse_primary(cur, scope)?;
    if cur.eat(&Tok::Caret) {
        let negative = cur.eat(&Tok::Minus);
        let t = cur.next();
        let Tok::Int(k) = &t.tok else {
            return Err(Error::Syntax { line: t.line, col: t.col, msg: "exponent must be an integer literal".into() });
        };
        let k = k.to_i32().filter(|k| *k <= 64).ok_or_else(|| Error::Syntax {
            line: t.line,
            col: t.col,
            msg: "exponent too large".into(),
        })?;
        return Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }));
    }
    Ok(base)
}

fn parse_primary(cur: &mut Cursor<'_>, scope: Scope<'_>) -> Result<Expr> {
    let t = cur.peek();
    match &t.tok {
        Tok::Int(i) => {
            cur.next();
            Ok(Expr::Num(BigRational::from_integer(BigInt::clone(i))))
        }
        Tok::LParen => {
            cur.next();
            let e = parse_expr(cur, scope)?;
            cur.expect(&Tok::RParen)?;
            Ok(e)
        }
        Tok::Ident(name) if FUNCTIONS.contains(&name.as_str()) => {
            cur.next();
            cur.expect(&Tok::LParen)?;
            let arg = Box::new(parse_expr(cur, scope)?);
            cur.expect(&Tok::RParen)?;
            Ok(match name.as_str() {
                "sin" => Expr::Sin(arg),
                "cos" => Expr::Cos(arg),
                _ => Expr::Exp(arg),
            })
        }
        Tok::Ident(name) => {
            if !scope.allows(name) {
                return Err(Error::UnknownIdentifier { name: name.clone(), line: t.line, col: t.col });
            }
            cur.next();
            Ok(Expr::Var(name.clone()))
        }
        other => Err(cur.error_here(format!("expected an expression, found {}", other.describe()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into(), "t".into()]
    }

    #[test]
    fn atoms_and_grammar() {
        let c = coords();
        assert_eq!(parse_in("z", Scope::of(&c)).unwrap(), Expr::var("z"));
        assert!(matches!(
            parse_in("dz", Scope::of(&c)),
            Err(Error::UnknownIdentifier { ref name, .. }) if name == "dz"
        ));
        let e = parse_in("1/2*(x+y)", Scope::of(&c)).unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                Box::new(Expr::rat(1, 2)),
                Box::new(Expr::Add(Box::new(Expr::var("x")), Box::new(Expr::var("y"))))
            )
        );
        let e = parse_in("cos(t)*sin(t)", Scope::of(&c)).unwrap();
        assert_eq!(
            e,
            Expr::Mul(Box::new(Expr::Cos(Box::new(Expr::var("t")))), Box::new(Expr::Sin(Box::new(Expr::var("t")))))
        );
    }

    #[test]
    fn precedence() {
        let e = expr_parse("-x^2").unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::var("x")), 2))));
        let e = expr_parse("x/2/3").unwrap();
        assert_eq!(
            e,
            Expr::Div(Box::new(Expr::Div(Box::new(Expr::var("x")), Box::new(Expr::int(2)))), Box::new(Expr::int(3)))
        );
        let e = expr_parse("1/2^3").unwrap();
        assert_eq!(e, Expr::Div(Box::new(Expr::int(1)), Box::new(Expr::Pow(Box::new(Expr::int(2)), 3))));
        let e = expr_parse("x^-1").unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::var("x")), -1));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match expr_parse("x +\n  * y") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 4)),
            other => panic!("unexpected {other:?}"),
        }
        match expr_parse("(x + y") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 7)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(expr_parse("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(expr_parse("x^y"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn print_parse_fixed_point() {
        for src in [
            "1/2*(x+y)",
            "-1/2",
            "(1)/2",
            "x*(1/3) - -y",
            "exp(-z)*cos(2*t)^2",
            "1/2/3 + x^-2",
            "-(x - y)*-(1/5)",
            "sin(x)/(1 + y^2)",
        ] {
            let once = expr_parse(src).unwrap();
            let printed = once.to_string();
            let twice = expr_parse(&printed).unwrap();
            assert_eq!(once, twice, "{src} printed as {printed}");
            assert_eq!(printed, twice.to_string());
        }
    }
}
