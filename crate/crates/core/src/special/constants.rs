//! Closed-form constants and thresholds for Neumann eigenvalues of convex bodies.

use std::f64::consts::PI;

use serde::Serialize;

use super::bessel::{bessel_zero, bessel_zeros, eval};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`constants`].
pub const MAX_DIM: usize = 20;

/// Two routes to `x_m` must agree to this absolute tolerance.
pub const XM_AGREEMENT: f64 = 1e-8;

/// A named closed-form expression together with its value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Formula {
    pub expression: String,
    pub value: f64,
}

impl Formula {
    fn new(expression: impl Into<String>, value: f64) -> Self {
        Self {
            expression: expression.into(),
            value,
        }
    }
}

/// `Γ(n/2)` for a positive integer `n`: factorial for even `n`, `√π (n-2)!!/2^{(n-1)/2}` for odd `n`.
pub fn gamma_half_integer(n: usize) -> f64 {
    assert!(n >= 1, "Γ(n/2) requires n >= 1");
    if n % 2 == 0 {
        (1..n / 2).map(|k| k as f64).product()
    } else {
        // Γ(1/2) = √π, Γ(m + 1/2) = (m - 1/2) Γ(m - 1/2)
        let m = (n - 1) / 2;
        (0..m).fold(PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
    }
}

/// `j_{0,1}`, used by all planar thresholds.
pub fn j01() -> f64 {
    bessel_zero(0.0, 1).expect("first zero of J_0 is always bracketed")
}

/// Width/diameter threshold below which the first `k` planar Neumann eigenvalues are simple:
/// `π / (4 (j_{0,1} + (k-1)π/2))`.
pub fn eps_k(k: usize) -> Formula {
    let j = j01();
    Formula::new(
        format!("pi/(4*(j01+({k}-1)*pi/2))"),
        PI / (4.0 * (j + (k as f64 - 1.0) * PI / 2.0)),
    )
}

/// Upper bound for the k-th Neumann eigenvalue of a diameter-one convex body in `R^n`.
pub fn kroger_bound(n: usize, k: usize) -> Result<Formula> {
    if n < 2 || k < 1 {
        return Err(Error::Invalid(format!("need n >= 2 and k >= 1, got n={n}, k={k}")));
    }
    if n == 2 {
        let j = j01();
        let v = j + (k as f64 - 1.0) * PI / 2.0;
        return Ok(Formula::new(format!("4*(j01+({k}-1)*pi/2)^2"), 4.0 * v * v));
    }
    let nu = (n as f64 - 2.0) / 2.0;
    if k % 2 == 1 {
        let idx = k.div_ceil(2);
        let j = bessel_zero(nu, idx)?;
        Ok(Formula::new(format!("4*j_{{{nu},{idx}}}^2"), 4.0 * j * j))
    } else {
        let zs = bessel_zeros(nu, k / 2 + 1)?.zeros;
        let s = zs[k / 2 - 1] + zs[k / 2];
        Ok(Formula::new(
            format!("(j_{{{nu},{}}}+j_{{{nu},{}}})^2", k / 2, k / 2 + 1),
            s * s,
        ))
    }
}

/// Width threshold from the collapsing-segment route:
/// `2(π - j_{0,1})(kπ + j_{0,1}) / ((k+1)²π² [(k+1)²π² + 1])`.
pub fn alt_simplicity_threshold(k: usize) -> Formula {
    let j = j01();
    let kf = k as f64;
    let s = (kf + 1.0) * (kf + 1.0) * PI * PI;
    Formula::new(
        format!("2*(pi-j01)*({k}*pi+j01)/(({k}+1)^2*pi^2*(({k}+1)^2*pi^2+1))"),
        2.0 * (PI - j) * (kf * PI + j) / (s * (s + 1.0)),
    )
}

/// Lower bound `π²/(4ε²)` for any multiple Neumann eigenvalue of a planar convex body of width `ε`.
pub fn multiple_eigenvalue_floor(width: f64) -> Formula {
    Formula::new("pi^2/(4*eps^2)", PI * PI / (4.0 * width * width))
}

/// Dimension-dependent constants.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionalConstants {
    pub n: usize,
    /// Order `ν = (n-2)/2`.
    pub order: f64,
    /// First minimum point of `t^{-ν} J_ν(t)`, via the derivative identity (`j_{ν+1,1}`).
    pub x_m: f64,
    /// Same point by direct minimization.
    pub x_m_direct: f64,
    pub c_n: Formula,
    pub delta_n: Formula,
    pub manifold_c: Formula,
    pub eps_k: Vec<Formula>,
    pub kroger: Vec<Formula>,
}

/// `t^{-ν} J_ν(t)`, continuous at 0.
fn reduced_bessel(nu: f64, t: f64) -> f64 {
    if t == 0.0 {
        (0.5f64).powf(nu) / libm::tgamma(nu + 1.0)
    } else {
        t.powf(-nu) * eval(nu, t)
    }
}

/// Golden-section minimization followed by a value-only Newton polish with
/// fourth-order central differences.
fn minimize_direct(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-6 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let mut x = 0.5 * (a + b);
    let h = 1e-3;
    for _ in 0..8 {
        let d1 = (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let step = d1 / d2;
        x -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    x
}

pub fn constants(n: usize, kmax: usize) -> Result<DimensionalConstants> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::OutOfRange(format!("dimension {n} outside [2, {MAX_DIM}]")));
    }
    let nu = (n as f64 - 2.0) / 2.0;
    let zeros = bessel_zeros(nu, 2)?.zeros;
    let x_m = bessel_zero(nu + 1.0, 1)?;
    let x_m_direct = minimize_direct(|t| reduced_bessel(nu, t), 0.0, zeros[1]);
    if (x_m - x_m_direct).abs() > XM_AGREEMENT {
        return Err(Error::CrossCheck(format!(
            "x_m routes disagree for n={n}: j_(ν+1,1)={x_m}, direct={x_m_direct}"
        )));
    }
    let c_n = -gamma_half_integer(n) * (2.0 / x_m).powf(nu) * eval(nu, x_m);
    let delta = c_n.sqrt() / (8f64.sqrt() * zeros[0]);
    let kroger = (1..=kmax)
        .map(|k| kroger_bound(n, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(DimensionalConstants {
        n,
        order: nu,
        x_m,
        x_m_direct,
        c_n: Formula::new("-Gamma(n/2)*(2/x_m)^((n-2)/2)*J_((n-2)/2)(x_m)", c_n),
        delta_n: Formula::new("sqrt(C_n)/(sqrt(8)*j_((n-2)/2,1))", delta),
        manifold_c: Formula::new("C_n/18", c_n / 18.0),
        eps_k: (1..=kmax).map(eps_k).collect(),
        kroger,
    })
}
