//! Canonical scalar functions of chart coordinates.
//!
//! A [`Scalar`] is a quotient `num / den` of polynomials with rational
//! coefficients over the atoms `x` (coordinate), `sin(u)`, `cos(u)` and
//! `exp(u)`, where the arguments `u` are themselves canonical.
//!
//! Polynomial parts are kept fully expanded with three rewrites applied on
//! every product:
//!
//! - `cos(u)^2` is replaced by `1 - sin(u)^2`, so `cos` never appears with an
//!   exponent above one; this is a normal form modulo `sin^2 + cos^2 = 1`.
//! - all `exp` factors of a monomial merge into a single `exp(sum)`, which makes
//!   `exp(u)*exp(-u)` collapse to 1.
//! - trig arguments are sign-normalised: `sin(-u) = -sin(u)`, `cos(-u) = cos(u)`.
//!
//! For `den = 1` the representation is unique. Quotients are normalised
//! (monomial content cancelled, denominator made monic) but two equal quotients
//! may still differ structurally; [`Scalar::is_zero`] is exact regardless
//! because it only inspects the numerator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::expr::{Expr, Point};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Var(String),
    Sin(Box<Scalar>),
    Cos(Box<Scalar>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial {
    atoms: BTreeMap<Atom, u32>,
    exp: Option<Box<Scalar>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Poly(BTreeMap<Monomial, BigRational>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

impl Monomial {
    fn is_one(&self) -> bool {
        self.atoms.is_empty() && self.exp.is_none()
    }

    fn exp_only(arg: Scalar) -> Monomial {
        Monomial { atoms: BTreeMap::new(), exp: if arg.is_zero() { None } else { Some(Box::new(arg)) } }
    }

    fn mul_raw(&self, other: &Monomial) -> Monomial {
        let mut atoms = self.atoms.clone();
        for (a, k) in &other.atoms {
            *atoms.entry(a.clone()).or_insert(0) += k;
        }
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => {
                let s = &**a + &**b;
                if s.is_zero() {
                    None
                } else {
                    Some(Box::new(s))
                }
            }
        };
        Monomial { atoms, exp }
    }

    /// Expands `cos(u)^k`, `k >= 2`, through `cos^2 = 1 - sin^2`.
    fn reduced(self) -> Vec<(Monomial, BigRational)> {
        let high: Vec<(Box<Scalar>, u32)> = self
            .atoms
            .iter()
            .filter_map(|(a, k)| match a {
                Atom::Cos(u) if *k >= 2 => Some((u.clone(), *k)),
                _ => None,
            })
            .collect();
        let mut out = vec![(self, BigRational::one())];
        for (u, k) in high {
            let m = k / 2;
            let mut next = Vec::new();
            for (mono, c) in out {
                for i in 0..=m {
                    let mut mm = mono.clone();
                    let cos = Atom::Cos(u.clone());
                    if k % 2 == 1 {
                        mm.atoms.insert(cos, 1);
                    } else {
                        mm.atoms.remove(&cos);
                    }
                    if i > 0 {
                        *mm.atoms.entry(Atom::Sin(u.clone())).or_insert(0) += 2 * i;
                    }
                    let mut coeff = BigRational::from_integer(binomial(BigInt::from(m), BigInt::from(i)));
                    if i % 2 == 1 {
                        coeff = -coeff;
                    }
                    next.push((mm, &c * coeff));
                }
            }
            out = next;
        }
        out
    }

    fn eval(&self, p: &Point) -> Result<f64> {
        let mut v = 1.0;
        for (a, k) in &self.atoms {
            let base = match a {
                Atom::Var(name) => *p.get(name).ok_or_else(|| Error::Unbound(name.clone()))?,
                Atom::Sin(u) => u.eval(p)?.sin(),
                Atom::Cos(u) => u.eval(p)?.cos(),
            };
            v *= base.powi(*k as i32);
        }
        if let Some(u) = &self.exp {
            v *= u.eval(p)?.exp();
        }
        Ok(v)
    }

    fn to_scalar(&self) -> Scalar {
        let mut p = Poly::default();
        p.0.insert(self.clone(), BigRational::one());
        Scalar { num: p, den: Poly::one() }
    }

    fn diff(&self, v: &str) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, k) in &self.atoms {
            let da = match a {
                Atom::Var(name) if name == v => Scalar::one(),
                Atom::Var(_) => continue,
                Atom::Sin(u) => {
                    let du = u.diff(v);
                    if du.is_zero() {
                        continue;
                    }
                    &Scalar::cos((**u).clone()) * &du
                }
                Atom::Cos(u) => {
                    let du = u.diff(v);
                    if du.is_zero() {
                        continue;
                    }
                    -(&Scalar::sin((**u).clone()) * &du)
                }
            };
            let mut rest = self.clone();
            if *k == 1 {
                rest.atoms.remove(a);
            } else {
                rest.atoms.insert(a.clone(), k - 1);
            }
            acc = &acc + &(&(&rest.to_scalar() * &da) * &Scalar::from_int(*k as i64));
        }
        if let Some(u) = &self.exp {
            let du = u.diff(v);
            if !du.is_zero() {
                acc = &acc + &(&self.to_scalar() * &du);
            }
        }
        acc
    }

    fn to_expr(&self) -> Option<Expr> {
        let mut factors: Vec<Expr> = Vec::new();
        for (a, k) in &self.atoms {
            let base = match a {
                Atom::Var(n) => Expr::Var(n.clone()),
                Atom::Sin(u) => Expr::Sin(Box::new(u.to_expr())),
                Atom::Cos(u) => Expr::Cos(Box::new(u.to_expr())),
            };
            factors.push(if *k == 1 { base } else { Expr::Pow(Box::new(base), *k as i32) });
        }
        if let Some(u) = &self.exp {
            factors.push(Expr::Exp(Box::new(u.to_expr())));
        }
        factors.into_iter().reduce(|a, b| Expr::Mul(Box::new(a), Box::new(b)))
    }
}

impl Poly {
    fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    fn constant(c: BigRational) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.0.insert(Monomial::default(), c);
        }
        p
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::default();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let c = c1 * c2;
                for (m, k) in m1.mul_raw(m2).reduced() {
                    out.add_term(m, &c * k);
                }
            }
        }
        out
    }

    // Multiplying by a pure exponential or dividing by atom content never
    // needs the cos reduction, and is injective on monomials.
    fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (f(m), c.clone())).collect())
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.0.iter().next()
    }

    fn eval(&self, p: &Point) -> Result<(f64, f64)> {
        let (mut v, mut mag) = (0.0, 0.0);
        for (m, c) in &self.0 {
            let t = c.to_f64().unwrap_or(f64::NAN) * m.eval(p)?;
            v += t;
            mag += t.abs();
        }
        Ok((v, mag))
    }

    fn diff(&self, v: &str) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.0 {
            let dm = m.diff(v);
            if !dm.is_zero() {
                acc = &acc + &(&dm * &Scalar::from_rational(c.clone()));
            }
        }
        acc
    }

    fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        for (m, c) in &self.0 {
            let mag = Expr::Num(c.abs());
            let term = match m.to_expr() {
                None => mag,
                Some(body) if c.abs().is_one() => body,
                Some(body) => Expr::Mul(Box::new(mag), Box::new(body)),
            };
            out = Some(match out {
                None if c.is_negative() => Expr::Neg(Box::new(term)),
                None => term,
                Some(acc) if c.is_negative() => Expr::Sub(Box::new(acc), Box::new(term)),
                Some(acc) => Expr::Add(Box::new(acc), Box::new(term)),
            });
        }
        out.unwrap_or_else(|| Expr::int(0))
    }

    fn visit_vars(&self, out: &mut BTreeSet<String>) {
        for m in self.0.keys() {
            for a in m.atoms.keys() {
                match a {
                    Atom::Var(n) => {
                        out.insert(n.clone());
                    }
                    Atom::Sin(u) | Atom::Cos(u) => u.visit_vars(out),
                }
            }
            if let Some(u) = &m.exp {
                u.visit_vars(out);
            }
        }
    }

    fn substitute(&self, map: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.0 {
            let mut term = Scalar::from_rational(c.clone());
            for (a, k) in &m.atoms {
                let base = match a {
                    Atom::Var(n) => map.get(n).cloned().unwrap_or_else(|| Scalar::var(n)),
                    Atom::Sin(u) => Scalar::sin(u.substitute(map)?),
                    Atom::Cos(u) => Scalar::cos(u.substitute(map)?),
                };
                term = &term * &base.powi(*k as i32)?;
            }
            if let Some(u) = &m.exp {
                term = &term * &Scalar::exp(u.substitute(map)?);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: Poly::default(), den: Poly::one() }
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(i: i64) -> Scalar {
        Scalar::from_rational(rat(i))
    }

    pub fn from_ratio(p: i64, q: i64) -> Scalar {
        Scalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(c: BigRational) -> Scalar {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn var(name: &str) -> Scalar {
        let mut atoms = BTreeMap::new();
        atoms.insert(Atom::Var(name.to_string()), 1);
        Monomial { atoms, exp: None }.to_scalar()
    }

    /// Canonical form is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn is_negative_leading(&self) -> bool {
        self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }

    pub fn sin(arg: Scalar) -> Scalar {
        if arg.is_zero() {
            return Scalar::zero();
        }
        if arg.is_negative_leading() {
            return -Scalar::sin(-arg);
        }
        let mut atoms = BTreeMap::new();
        atoms.insert(Atom::Sin(Box::new(arg)), 1);
        Monomial { atoms, exp: None }.to_scalar()
    }

    pub fn cos(arg: Scalar) -> Scalar {
        if arg.is_zero() {
            return Scalar::one();
        }
        if arg.is_negative_leading() {
            return Scalar::cos(-arg);
        }
        let mut atoms = BTreeMap::new();
        atoms.insert(Atom::Cos(Box::new(arg)), 1);
        Monomial { atoms, exp: None }.to_scalar()
    }

    pub fn exp(arg: Scalar) -> Scalar {
        Monomial::exp_only(arg).to_scalar()
    }

    fn from_parts(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            return Scalar { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let (mut num, mut den) = (num, den);

        // Clear the exponential of the leading denominator monomial.
        if let Some(e) = den.leading().and_then(|(m, _)| m.exp.clone()) {
            let inv = Monomial::exp_only(-*e);
            num = num.map_monomials(|m| m.mul_raw(&inv));
            den = den.map_monomials(|m| m.mul_raw(&inv));
        }

        // Cancel atom content shared by every monomial of num and den.
        let mut content: Option<BTreeMap<Atom, u32>> = None;
        for m in num.0.keys().chain(den.0.keys()) {
            content = Some(match content {
                None => m.atoms.clone(),
                Some(c) => c.into_iter().filter_map(|(a, k)| m.atoms.get(&a).map(|j| (a, k.min(*j)))).collect(),
            });
        }
        if let Some(content) = content.filter(|c| !c.is_empty()) {
            let strip = |m: &Monomial| {
                let mut out = m.clone();
                for (a, k) in &content {
                    let e = out.atoms.get_mut(a).expect("content atom present");
                    *e -= k;
                    if *e == 0 {
                        out.atoms.remove(a);
                    }
                }
                out
            };
            num = num.map_monomials(strip);
            den = den.map_monomials(strip);
        }

        if let Some(c) = den.as_constant() {
            return Scalar { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let lead = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lead.is_one() {
            let k = lead.recip();
            num = num.scale(&k);
            den = den.scale(&k);
        }

        if num.0.len() == den.0.len() && num.0.keys().eq(den.0.keys()) {
            let mut ratios = num.0.values().zip(den.0.values()).map(|(a, b)| a / b);
            let first = ratios.next().expect("nonempty");
            if ratios.all(|r| r == first) {
                return Scalar::from_rational(first);
            }
        }
        Scalar { num, den }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::from_parts(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn powi(&self, k: i32) -> Result<Scalar> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Partial derivative with respect to coordinate `v`.
    pub fn diff(&self, v: &str) -> Scalar {
        if !self.depends_on(v) {
            return Scalar::zero();
        }
        if self.den.is_one() {
            return self.num.diff(v);
        }
        let n = Scalar { num: self.num.clone(), den: Poly::one() };
        let d = Scalar { num: self.den.clone(), den: Poly::one() };
        let top = &(&n.diff(v) * &d) - &(&n * &d.diff(v));
        top.checked_div(&(&d * &d)).expect("denominator is nonzero")
    }

    pub fn depends_on(&self, v: &str) -> bool {
        self.free_vars().contains(v)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut out);
        out
    }

    fn visit_vars(&self, out: &mut BTreeSet<String>) {
        self.num.visit_vars(out);
        self.den.visit_vars(out);
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        let (n, _) = self.num.eval(p)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let (d, _) = self.den.eval(p)?;
        Ok(n / d)
    }

    /// Numerator value, denominator value and the sum of absolute term
    /// values of the numerator (a scale for relative residuals).
    pub fn eval_parts(&self, p: &Point) -> Result<(f64, f64, f64)> {
        let (n, mag) = self.num.eval(p)?;
        let d = if self.den.is_one() { 1.0 } else { self.den.eval(p)?.0 };
        Ok((n, d, mag))
    }

    /// Simultaneous substitution of coordinates by scalars.
    pub fn substitute(&self, map: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let n = self.num.substitute(map)?;
        if self.den.is_one() {
            return Ok(n);
        }
        n.checked_div(&self.den.substitute(map)?)
    }

    pub fn from_expr(e: &Expr) -> Result<Scalar> {
        Ok(match e {
            Expr::Num(r) => Scalar::from_rational(r.clone()),
            Expr::Var(v) => Scalar::var(v),
            Expr::Add(a, b) => &Scalar::from_expr(a)? + &Scalar::from_expr(b)?,
            Expr::Sub(a, b) => &Scalar::from_expr(a)? - &Scalar::from_expr(b)?,
            Expr::Mul(a, b) => &Scalar::from_expr(a)? * &Scalar::from_expr(b)?,
            Expr::Div(a, b) => Scalar::from_expr(a)?.checked_div(&Scalar::from_expr(b)?)?,
            Expr::Pow(a, k) => Scalar::from_expr(a)?.powi(*k)?,
            Expr::Neg(a) => -Scalar::from_expr(a)?,
            Expr::Sin(a) => Scalar::sin(Scalar::from_expr(a)?),
            Expr::Cos(a) => Scalar::cos(Scalar::from_expr(a)?),
            Expr::Exp(a) => Scalar::exp(Scalar::from_expr(a)?),
        })
    }

    pub fn to_expr(&self) -> Expr {
        let n = self.num.to_expr();
        if self.den.is_one() {
            n
        } else {
            Expr::Div(Box::new(n), Box::new(self.den.to_expr()))
        }
    }

    pub fn parse(text: &str) -> Result<Scalar> {
        Scalar::from_expr(&super::parser::expr_parse(text)?)
    }
}

/// Canonical simplification of an expression tree.
pub fn expr_simplify(e: &Expr) -> Result<Expr> {
    Ok(Scalar::from_expr(e)?.to_expr())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Scalar { num: self.num.add(&o.num), den: Poly::one() };
            }
            return Scalar::from_parts(self.num.add(&o.num), self.den.clone());
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Scalar::from_parts(num, self.den.mul(&o.den))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: Poly::one() };
        }
        Scalar::from_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl From<i64> for Scalar {
    fn from(i: i64) -> Scalar {
        Scalar::from_int(i)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}
