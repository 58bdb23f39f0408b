//! Bessel functions of the first kind for real order and argument, and their zeros.
//!
//! Three evaluation regimes:
//! - ascending power series where the terms do not cancel badly (`x² < 4(ν+1)`),
//! - Hankel's asymptotic expansion for large arguments,
//! - Miller's backward recurrence, normalized by the Neumann-type identity
//!   `(x/2)^ν0 = Σ_k (ν0+2k) Γ(ν0+k)/k! J_{ν0+2k}(x)`, everywhere else.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_ORDER: f64 = 50.0;
pub const MAX_ARG: f64 = 500.0;

/// Bisection stops once the bracket is this small (relative to the root).
const ROOT_TOL: f64 = 1e-15;

fn check_range(nu: f64, x: f64) -> Result<()> {
    if !(0.0..=MAX_ORDER).contains(&nu) || nu.is_nan() {
        return Err(Error::OutOfRange(format!("order {nu} outside [0, {MAX_ORDER}]")));
    }
    if !(0.0..=MAX_ARG).contains(&x) || x.is_nan() {
        return Err(Error::OutOfRange(format!("argument {x} outside [0, {MAX_ARG}]")));
    }
    Ok(())
}

/// `J_ν(x)` for `0 <= ν <= 50`, `0 <= x <= 500`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_range(nu, x)?;
    Ok(eval(nu, x))
}

/// `J_ν'(x)`, using `J_ν' = (ν/x) J_ν - J_{ν+1}`.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    check_range(nu, x)?;
    if nu + 1.0 > MAX_ORDER + 1.0 {
        return Err(Error::OutOfRange(format!("order {nu} too large for derivative")));
    }
    if x == 0.0 {
        return Ok(if nu == 1.0 {
            0.5
        } else if nu == 0.0 || nu > 1.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    Ok(nu / x * eval(nu, x) - eval(nu + 1.0, x))
}

pub(crate) fn eval(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x * x < 4.0 * (nu + 1.0) {
        series(nu, x)
    } else if x >= asymptotic_threshold(nu) {
        hankel(nu, x)
    } else {
        miller(nu, x)
    }
}

/// Smallest argument at which the Hankel expansion is used.
pub(crate) fn asymptotic_threshold(nu: f64) -> f64 {
    30.0 + nu * nu
}

pub(crate) fn series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powf(nu) / libm::tgamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        term *= -q / (k as f64 * (k as f64 + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

pub(crate) fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() > prev || a == 0.0 {
            break;
        }
        prev = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

pub(crate) fn miller(nu: f64, x: f64) -> f64 {
    let n = nu.floor() as usize;
    let nu0 = nu - n as f64;
    let top = (n as f64).max(x);
    let mut big_n = n + x.ceil() as usize + 40 + (40.0 * top).sqrt().ceil() as usize;
    if big_n % 2 == 1 {
        big_n += 1;
    }
    let mut f = vec![0.0f64; big_n + 2];
    f[big_n] = 1e-300_f64.sqrt();
    for j in (1..=big_n).rev() {
        let order = nu0 + j as f64;
        f[j - 1] = 2.0 * order / x * f[j] - f[j + 1];
        if f[j - 1].abs() > 1e250 {
            for v in f[j - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    // normalization sum over even offsets
    let gamma0 = libm::tgamma(nu0 + 1.0);
    let mut sum = gamma0 * f[0];
    let mut g = gamma0; // Γ(ν0 + k) / k! at k = 1
    let mut k = 1usize;
    while 2 * k <= big_n {
        sum += (nu0 + 2.0 * k as f64) * g * f[2 * k];
        g *= (nu0 + k as f64) / (k as f64 + 1.0);
        k += 1;
    }
    f[n] * (0.5 * x).powf(nu0) / sum
}

/// Finds successive sign changes of `f` above `start`, scanning with `step`,
/// and refines each by bisection. `max_gap` bounds the search for each root.
pub(crate) fn scan_roots(
    f: impl Fn(f64) -> f64,
    start: f64,
    first_window: f64,
    max_gap: f64,
    count: usize,
    step: f64,
) -> Result<Vec<f64>> {
    let mut roots = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a);
    for k in 0..count {
        let limit = if k == 0 { start + first_window } else { a + max_gap };
        let mut b = a + step;
        let mut fb = f(b);
        while fa.signum() == fb.signum() && fb != 0.0 {
            if b > limit {
                return Err(Error::Bracket(format!(
                    "no sign change for root {} in ({a}, {limit}); last value {fb:e}",
                    k + 1
                )));
            }
            a = b;
            fa = fb;
            b += step;
            fb = f(b);
        }
        let root = bisect(&f, a, b, fa)?;
        roots.push(root);
        a = root + 0.5 * step;
        fa = f(a);
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= ROOT_TOL * m.abs().max(1.0) || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Positive zeros of `J_ν` in increasing order.
#[derive(Debug, Clone, Serialize)]
pub struct BesselZeroTable {
    pub order: f64,
    pub zeros: Vec<f64>,
    /// Largest `|J_ν(j)|` over the tabulated zeros.
    pub tolerance: f64,
}

/// The first `count` positive zeros of `J_ν`.
pub fn bessel_zeros(nu: f64, count: usize) -> Result<BesselZeroTable> {
    check_range(nu, 0.0)?;
    if count == 0 {
        return Err(Error::Invalid("zero count must be at least 1".into()));
    }
    // j_{ν,1} > ν, and J_ν > 0 on (0, j_{ν,1}); consecutive zeros are less than π + ν apart
    let start = if nu == 0.0 { 0.0 } else { nu };
    let first_window = 3.0 * nu.cbrt() + 4.0;
    let zeros = scan_roots(
        |t| eval(nu, t),
        start,
        first_window,
        PI + nu,
        count,
        0.25,
    )?;
    if let Some(z) = zeros.last() {
        if *z > MAX_ARG {
            return Err(Error::OutOfRange(format!("zero {z} beyond supported argument range")));
        }
    }
    let tolerance = zeros
        .iter()
        .map(|&z| eval(nu, z).abs())
        .fold(0.0, f64::max);
    Ok(BesselZeroTable {
        order: nu,
        zeros,
        tolerance,
    })
}

/// `j_{ν,k}`, the k-th positive zero of `J_ν` (`k >= 1`).
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Invalid("zero index starts at 1".into()));
    }
    Ok(bessel_zeros(nu, k)?.zeros[k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.3, 1.0, 2.5, 7.0, 15.0, 40.0, 120.0, 480.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - exact).abs() < 2e-14, "x={x}: {got} vs {exact}");
        }
    }

    #[test]
    fn out_of_range() {
        assert!(bessel_j(51.0, 1.0).is_err());
        assert!(bessel_j(1.0, 501.0).is_err());
        assert!(bessel_j(-0.5, 1.0).is_err());
    }

    #[test]
    fn regimes_agree_on_overlap() {
        for &nu in &[0.0, 0.5, 1.0, 2.5, 7.0] {
            let lo = (4.0 * (nu + 1.0f64)).sqrt();
            for i in 0..20 {
                let x = lo * (0.6 + 0.04 * i as f64);
                let s = series(nu, x);
                let m = miller(nu, x);
                assert!((s - m).abs() < 1e-14, "nu={nu} x={x}: {s} vs {m}");
            }
            let hi = asymptotic_threshold(nu);
            for i in 0..20 {
                let x = hi + 3.0 * i as f64;
                let h = hankel(nu, x);
                let m = miller(nu, x);
                assert!((h - m).abs() < 5e-15, "nu={nu} x={x}: {h} vs {m}");
            }
        }
    }

    #[test]
    fn first_zeros() {
        assert!((bessel_zero(0.0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-13);
        assert!((bessel_zero(1.0, 1).unwrap() - 3.831_705_970_207_512).abs() < 1e-13);
        assert!((bessel_zero(0.0, 2).unwrap() - 5.520_078_110_286_311).abs() < 1e-13);
        assert!((bessel_zero(0.5, 3).unwrap() - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn zero_table_is_increasing() {
        let t = bessel_zeros(3.5, 12).unwrap();
        assert!(t.zeros.windows(2).all(|w| w[1] > w[0]));
        assert!(t.tolerance < 1e-10);
    }

    #[test]
    fn large_order_zero() {
        // j_{50,1} ≈ 57.1167
        let z = bessel_zero(50.0, 1).unwrap();
        assert!((z - 57.116_899_160_119).abs() < 1e-9, "{z}");
    }
}
