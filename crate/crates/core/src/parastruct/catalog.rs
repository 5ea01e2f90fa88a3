//! Built-in structures on R³ used by the tests, the acceptance harness and
//! the `catalog` command.

use super::structures::{Apc, Gapc, GAPC_F, GAPC_SQUARE};
use crate::gentangent::GenEndo;
use crate::symkernel::Scalar;
use crate::tensorcalc::{
    wedge_ff, wedge_vv, Bivector, Chart, ChartRef, Endo, Metric, OneForm, SMatrix, TwoForm, VectorField,
};

pub fn r3() -> ChartRef {
    Chart::named("R3", &["x", "y", "z"])
}

fn s(text: &str) -> Scalar {
    Scalar::parse(text).expect("catalog expressions parse")
}

fn matrix(rows: [[&str; 3]; 3]) -> SMatrix {
    SMatrix::from_rows(rows.iter().map(|r| r.iter().map(|e| s(e)).collect()).collect())
}

fn dz() -> OneForm {
    OneForm::coordinate(&r3(), 2)
}

fn d_dz() -> VectorField {
    VectorField::coordinate(&r3(), 2)
}

fn metric(rows: [[&str; 3]; 3]) -> Metric {
    Metric::new(&r3(), matrix(rows)).expect("catalog metrics are symmetric and nondegenerate")
}

fn swap_xy() -> Endo {
    Endo::new(&r3(), matrix([["0", "1", "0"], ["1", "0", "0"], ["0", "0", "0"]])).expect("3x3")
}

/// Flat structure: φ swaps ∂x and ∂y, ξ = ∂z, η = dz, g = diag(1, −1, 1).
pub fn s0() -> Apc {
    let g = metric([["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]]);
    Apc::new("S0", swap_xy(), d_dz(), dz(), Some(g)).expect("same chart")
}

/// Contact-type normal structure with η = dz − y dx.
pub fn s1() -> Apc {
    let c = r3();
    let phi = Endo::new(&c, matrix([["0", "1", "0"], ["1", "0", "0"], ["0", "y", "0"]])).expect("3x3");
    let eta = OneForm::new(&c, vec![s("-y"), Scalar::zero(), Scalar::one()]).expect("3 components");
    let g = metric([["1 + y^2", "0", "-y"], ["0", "-1", "0"], ["-y", "0", "1"]]);
    Apc::new("S1", phi, d_dz(), eta, Some(g)).expect("same chart")
}

/// Non-normal structure: φ∂x = e^z ∂y, φ∂y = e^{−z} ∂x.
pub fn s2() -> Apc {
    let phi = Endo::new(&r3(), matrix([["0", "exp(-z)", "0"], ["exp(z)", "0", "0"], ["0", "0", "0"]])).expect("3x3");
    let g = metric([["exp(z)", "0", "0"], ["0", "-exp(-z)", "0"], ["0", "0", "1"]]);
    Apc::new("S2", phi, d_dz(), dz(), Some(g)).expect("same chart")
}

pub fn structures() -> Vec<Apc> {
    vec![s0(), s1(), s2()]
}

/// The checker a negative example is run through.
#[derive(Clone, Debug)]
pub enum NegativeCase {
    Apc(Apc),
    ApcMetric(Apc),
    Gapc(Gapc),
    Blocks(Gapc),
}

/// A deliberately broken structure and the exact set of items it must fail.
#[derive(Clone, Debug)]
pub struct Negative {
    pub name: &'static str,
    pub case: NegativeCase,
    pub expected: Vec<&'static str>,
}

fn s0_gapc(name: &str, beta: Bivector, b: TwoForm) -> Gapc {
    Gapc::new(name, GenEndo::new(swap_xy(), beta, b).expect("same chart"), d_dz(), dz()).expect("same chart")
}

pub fn negatives() -> Vec<Negative> {
    let c = r3();
    let (dx, d_dx) = (OneForm::coordinate(&c, 0), VectorField::coordinate(&c, 0));
    let doubled = Apc::new("2 phi_S0", swap_xy().scale(&Scalar::from_int(2)), d_dz(), dz(), None).expect("same chart");
    let identity = Apc::new("identity", Endo::identity(&c), d_dz(), dz(), None).expect("same chart");
    let mut euclid = s0();
    euclid.name = "S0 euclidean".into();
    euclid.g = Some(metric([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));
    let b_xi = s0_gapc("S0 with B = dz^dx", Bivector::zero(&c), wedge_ff(&dz(), &dx).expect("same chart"));
    let beta_eta =
        s0_gapc("S0 with beta = d/dx^d/dz", wedge_vv(&d_dx, &d_dz()).expect("same chart"), TwoForm::zero(&c));
    vec![
        Negative { name: "doubled phi", case: NegativeCase::Apc(doubled), expected: vec!["phi^2 = I - eta(x)xi"] },
        Negative {
            name: "identity phi",
            case: NegativeCase::Apc(identity),
            expected: vec!["phi^2 = I - eta(x)xi", "phi xi = 0", "eta o phi = 0"],
        },
        Negative {
            name: "euclidean metric",
            case: NegativeCase::ApcMetric(euclid),
            expected: vec!["g(phi X,phi Y) = -g(X,Y) + eta(X)eta(Y)", "g(phi X,Y) + g(X,phi Y) = 0"],
        },
        Negative {
            name: "B not killing xi",
            case: NegativeCase::Blocks(b_xi.clone()),
            expected: vec!["B phi - phi^* B = 0", "B(X,phi Y) = B(phi X,Y)", "B(xi,.) = 0"],
        },
        Negative { name: "B not killing xi", case: NegativeCase::Gapc(b_xi), expected: vec![GAPC_SQUARE, GAPC_F] },
        Negative {
            name: "beta not killing eta",
            case: NegativeCase::Blocks(beta_eta.clone()),
            expected: vec![
                "phi beta - beta phi^* = 0",
                "beta(alpha,phi^* gamma) = beta(phi^* alpha,gamma)",
                "beta(eta,.) = 0",
            ],
        },
        Negative {
            name: "beta not killing eta",
            case: NegativeCase::Gapc(beta_eta),
            expected: vec![GAPC_SQUARE, GAPC_F],
        },
    ]
}
