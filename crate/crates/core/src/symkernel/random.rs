//! Random expression trees for property tests, and rewrites that change the
//! shape of a tree without changing the function it denotes.

use rand::seq::SliceRandom;
use rand::Rng;

use super::expr::Expr;

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    Expr::rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// A coordinate-linear argument `a x + b y + c` for the transcendental atoms.
fn linear<R: Rng + ?Sized>(rng: &mut R, vars: &[&str]) -> Expr {
    let mut out = small_rational(rng);
    for v in vars {
        if rng.gen_bool(0.5) {
            let term = Expr::Mul(bx(small_rational(rng)), bx(Expr::var(v)));
            out = Expr::Add(bx(out), bx(term));
        }
    }
    out
}

/// A random expression over `vars`. Divisions use denominators of the form
/// `2 + e^2`, so the result has no poles on the reals; transcendental
/// functions take coordinate-linear arguments.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            Expr::var(vars.choose(rng).expect("at least one variable"))
        } else {
            small_rational(rng)
        };
    }
    let sub = |rng: &mut R| random_expr(rng, vars, depth - 1);
    match rng.gen_range(0..9) {
        0 => Expr::Add(bx(sub(rng)), bx(sub(rng))),
        1 => Expr::Sub(bx(sub(rng)), bx(sub(rng))),
        2 | 3 => Expr::Mul(bx(sub(rng)), bx(sub(rng))),
        4 => {
            let den = Expr::Add(bx(Expr::int(2)), bx(Expr::Pow(bx(sub(rng)), 2)));
            Expr::Div(bx(sub(rng)), bx(den))
        }
        5 => Expr::Pow(bx(sub(rng)), rng.gen_range(2..=3)),
        6 => Expr::Neg(bx(sub(rng))),
        _ => {
            let arg = bx(linear(rng, vars));
            match rng.gen_range(0..3) {
                0 => Expr::Sin(arg),
                1 => Expr::Cos(arg),
                _ => Expr::Exp(arg),
            }
        }
    }
}

/// Apply one identity-preserving rewrite at the root of `e`, recursing into
/// a child first when the root is a binary node.
pub fn rewrite_equivalent<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], e: &Expr) -> Expr {
    let inner = match e {
        Expr::Add(a, b) if rng.gen_bool(0.5) => Expr::Add(bx(rewrite_equivalent(rng, vars, a)), b.clone()),
        Expr::Mul(a, b) if rng.gen_bool(0.5) => Expr::Mul(a.clone(), bx(rewrite_equivalent(rng, vars, b))),
        _ => e.clone(),
    };
    let r = random_expr(rng, vars, 1);
    match rng.gen_range(0..6) {
        0 => match inner {
            Expr::Add(a, b) => Expr::Add(b, a),
            Expr::Mul(a, b) => Expr::Mul(b, a),
            other => Expr::Add(bx(Expr::int(0)), bx(other)),
        },
        1 => Expr::Sub(bx(Expr::Add(bx(inner), bx(r.clone()))), bx(r)),
        2 => {
            let q = Expr::Add(bx(Expr::int(1)), bx(Expr::Pow(bx(r), 2)));
            Expr::Div(bx(Expr::Mul(bx(inner), bx(q.clone()))), bx(q))
        }
        3 => {
            let u = linear(rng, vars);
            let pyth = Expr::Sub(
                bx(Expr::Add(bx(Expr::Pow(bx(Expr::Sin(bx(u.clone()))), 2)), bx(Expr::Pow(bx(Expr::Cos(bx(u))), 2)))),
                bx(Expr::int(1)),
            );
            Expr::Add(bx(inner), bx(pyth))
        }
        4 => {
            let u = linear(rng, vars);
            let one = Expr::Mul(bx(Expr::Exp(bx(u.clone()))), bx(Expr::Exp(bx(Expr::Neg(bx(u))))));
            Expr::Mul(bx(one), bx(inner))
        }
        _ => match inner {
            Expr::Mul(a, b) if matches!(*b, Expr::Add(..)) => {
                let Expr::Add(c, d) = *b else { unreachable!() };
                Expr::Add(bx(Expr::Mul(a.clone(), c)), bx(Expr::Mul(a, d)))
            }
            // inner = r inner + (1 - r) inner
            other => Expr::Add(
                bx(Expr::Mul(bx(r.clone()), bx(other.clone()))),
                bx(Expr::Mul(bx(Expr::Sub(bx(Expr::int(1)), bx(r))), bx(other))),
            ),
        },
    }
}
