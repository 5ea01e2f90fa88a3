use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A point in a chart: coordinate name to value.
pub type Point = BTreeMap<String, f64>;

/// Expression tree as written by users. Canonicalisation lives in
/// [`Scalar`](super::Scalar); the tree keeps the exact shape that was parsed
/// so printing and re-parsing is a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;

impl Expr {
    pub fn int(i: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn rat(p: i64, q: i64) -> Expr {
        Expr::Num(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    fn is_zero_lit(&self) -> bool {
        matches!(self, Expr::Num(r) if r.is_zero())
    }

    fn is_one_lit(&self) -> bool {
        matches!(self, Expr::Num(r) if r.is_one())
    }

    // Light folding so derivative trees stay readable; canonical
    // simplification is `Scalar`'s job.
    fn add(a: Expr, b: Expr) -> Expr {
        if a.is_zero_lit() {
            b
        } else if b.is_zero_lit() {
            a
        } else {
            Expr::Add(Box::new(a), Box::new(b))
        }
    }

    fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_zero_lit() {
            a
        } else if a.is_zero_lit() {
            Expr::Neg(Box::new(b))
        } else {
            Expr::Sub(Box::new(a), Box::new(b))
        }
    }

    fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_zero_lit() || b.is_zero_lit() {
            Expr::int(0)
        } else if a.is_one_lit() {
            b
        } else if b.is_one_lit() {
            a
        } else {
            Expr::Mul(Box::new(a), Box::new(b))
        }
    }

    /// Partial derivative with respect to the coordinate `v`.
    pub fn diff(&self, v: &str) -> Expr {
        match self {
            Expr::Num(_) => Expr::int(0),
            Expr::Var(name) => Expr::int(if name == v { 1 } else { 0 }),
            Expr::Add(a, b) => Expr::add(a.diff(v), b.diff(v)),
            Expr::Sub(a, b) => Expr::sub(a.diff(v), b.diff(v)),
            Expr::Mul(a, b) => Expr::add(Expr::mul(a.diff(v), (**b).clone()), Expr::mul((**a).clone(), b.diff(v))),
            Expr::Div(a, b) => {
                let num = Expr::sub(Expr::mul(a.diff(v), (**b).clone()), Expr::mul((**a).clone(), b.diff(v)));
                if num.is_zero_lit() {
                    return num;
                }
                Expr::Div(Box::new(num), Box::new(Expr::Pow(b.clone(), 2)))
            }
            Expr::Pow(base, k) => {
                let db = base.diff(v);
                if db.is_zero_lit() || *k == 0 {
                    return Expr::int(0);
                }
                let lowered = if *k == 1 { Expr::int(1) } else { Expr::Pow(base.clone(), k - 1) };
                Expr::mul(Expr::mul(Expr::int(*k as i64), lowered), db)
            }
            Expr::Neg(a) => {
                let da = a.diff(v);
                if da.is_zero_lit() {
                    da
                } else {
                    Expr::Neg(Box::new(da))
                }
            }
            Expr::Sin(a) => Expr::mul(Expr::Cos(a.clone()), a.diff(v)),
            Expr::Cos(a) => {
                let da = a.diff(v);
                if da.is_zero_lit() {
                    return da;
                }
                Expr::Neg(Box::new(Expr::mul(Expr::Sin(a.clone()), da)))
            }
            Expr::Exp(a) => Expr::mul(Expr::Exp(a.clone()), a.diff(v)),
        }
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        Ok(match self {
            Expr::Num(r) => r.to_f64().unwrap_or(f64::NAN),
            Expr::Var(name) => *p.get(name).ok_or_else(|| Error::Unbound(name.clone()))?,
            Expr::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Expr::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Expr::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Expr::Div(a, b) => a.eval(p)? / b.eval(p)?,
            Expr::Pow(a, k) => a.eval(p)?.powi(*k),
            Expr::Neg(a) => -a.eval(p)?,
            Expr::Sin(a) => a.eval(p)?.sin(),
            Expr::Cos(a) => a.eval(p)?.cos(),
            Expr::Exp(a) => a.eval(p)?.exp(),
        })
    }

    pub fn free_vars(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.free_vars(out),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
            Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
            Expr::Neg(_) => PREC_UNARY,
            Expr::Pow(..) => PREC_POW,
            Expr::Num(r) if r.is_negative() => PREC_UNARY,
            _ => u8::MAX,
        }
    }

    // `leading` marks the first factor of a multiplicative chain, the only
    // place a bare `p/q` literal re-parses as a single rational.
    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: u8, leading: bool) -> fmt::Result {
        if let Expr::Num(r) = self {
            if r.is_integer() && !r.is_negative() {
                return write!(f, "{}", r.numer());
            }
            let bare = !r.is_negative() && leading && ctx <= PREC_MUL;
            return if bare { write!(f, "{}/{}", r.numer(), r.denom()) } else { write!(f, "({r})") };
        }
        let own = self.prec();
        let paren = own < ctx;
        if paren {
            f.write_str("(")?;
        }
        let lead = leading || paren;
        match self {
            Expr::Var(v) => f.write_str(v)?,
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, PREC_ADD, lead)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                let rhs_ctx = if matches!(**b, Expr::Neg(_)) { PREC_POW } else { PREC_ADD + 1 };
                b.write(f, rhs_ctx, true)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                let int_lit = |e: &Expr| matches!(e, Expr::Num(r) if r.is_integer() && !r.is_negative());
                if lead && matches!(self, Expr::Div(..)) && int_lit(a) && int_lit(b) {
                    // keep `(1)/2` from re-parsing as the literal 1/2
                    write!(f, "({a})")?;
                } else {
                    a.write(f, PREC_MUL, lead)?;
                }
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                let rhs_ctx = if matches!(**b, Expr::Neg(_)) { PREC_POW } else { PREC_MUL + 1 };
                b.write(f, rhs_ctx, false)?;
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, PREC_UNARY, false)?;
            }
            Expr::Pow(a, k) => {
                a.write(f, PREC_POW + 1, false)?;
                write!(f, "^{k}")?;
            }
            Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                let name = match self {
                    Expr::Sin(_) => "sin",
                    Expr::Cos(_) => "cos",
                    _ => "exp",
                };
                write!(f, "{name}(")?;
                a.write(f, 0, true)?;
                f.write_str(")")?;
            }
            Expr::Num(_) => unreachable!(),
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0, true)
    }
}
