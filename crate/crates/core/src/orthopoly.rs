//! Chebyshev and ultraspherical polynomials.
//!
//! Ultraspherical polynomials `P_m^(λ)` use the standard normalization
//! `P_m^(λ)(1) = C(m + 2λ - 1, m)` everywhere. Derivatives of `T_n` are
//! expressed through them as `T_n^(k) = n 2^(k-1) (k-1)! P_{n-k}^(k)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::xprec::{ln_gamma_signed, log_binomial, log_factorial, LogScaled};

/// Magnitude above which the recurrence folds its state into the log scale.
const RESCALE_AT: f64 = 1.942_426_395_587_863_4e130; // e^300

/// A validated `(n, k)` pair: Chebyshev degree `n`, derivative order `k`,
/// with `n >= k + 2` so that `T_n^(k+1)` has a positive-degree zero set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    n: u32,
    k: u32,
}

impl Index {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if u64::from(n) < u64::from(k) + 2 {
            return Err(Error::domain(format!("need n >= k + 2, got n = {n}, k = {k}")));
        }
        Ok(Index { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n = {}, k = {})", self.n, self.k)
    }
}

/// `T_n(x) = cos(n arccos x)` for `|x| <= 1`.
pub fn chebyshev_t(n: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("chebyshev_t needs |x| <= 1, got {x}")));
    }
    // T_n(-x) = (-1)^n T_n(x) keeps the angle in [0, π/2].
    let (y, flip) = if x < 0.0 { (-x, n % 2 == 1) } else { (x, false) };
    let theta = ((1.0 - y) * (1.0 + y)).sqrt().atan2(y);
    let nf = f64::from(n);
    let hi = nf * theta;
    let lo = nf.mul_add(theta, -hi);
    let v = hi.cos() - hi.sin() * lo;
    Ok(if flip { -v } else { v })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > -0.5 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("ultraspherical parameter must exceed -1/2, got {lambda}")))
    }
}

/// `P_m^(λ)(x)` by the three-term recurrence
/// `(j+1) P_{j+1} = 2(j+λ) x P_j - (j+2λ-1) P_{j-1}`, rescaled on the fly.
pub fn gegenbauer(m: u32, lambda: f64, x: f64) -> Result<LogScaled> {
    check_lambda(lambda)?;
    Ok(gegenbauer_unchecked(m, lambda, x))
}

pub(crate) fn gegenbauer_unchecked(m: u32, lambda: f64, x: f64) -> LogScaled {
    if m == 0 {
        return LogScaled::ONE;
    }
    let mut prev = 1.0f64;
    let mut curr = 2.0 * lambda * x;
    let mut shift = 0.0f64;
    for j in 1..m {
        let jf = f64::from(j);
        let next = (2.0 * (jf + lambda) * x * curr - (jf + 2.0 * lambda - 1.0) * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
        let mag = curr.abs();
        if mag > RESCALE_AT {
            prev /= mag;
            curr /= mag;
            shift += mag.ln();
        }
    }
    LogScaled::from_f64(curr).scale_log(shift)
}

/// `P_m^(λ)(1) = C(m + 2λ - 1, m)`.
pub fn gegenbauer_at_one(m: u32, lambda: f64) -> Result<LogScaled> {
    check_lambda(lambda)?;
    if m == 0 {
        return Ok(LogScaled::ONE);
    }
    let two_lambda = 2.0 * lambda;
    if two_lambda == 0.0 {
        return Ok(LogScaled::ZERO);
    }
    if two_lambda >= 1.0 && two_lambda == two_lambda.round() {
        let top = u64::from(m) + two_lambda as u64 - 1;
        return Ok(LogScaled::from_log(log_binomial(top, i64::from(m))?));
    }
    // Γ(m + 2λ) / (Γ(m + 1) Γ(2λ)); Γ(2λ) < 0 for -1 < 2λ < 0.
    let (num, s_num) = ln_gamma_signed(f64::from(m) + two_lambda);
    let (den, s_den) = ln_gamma_signed(two_lambda);
    Ok(LogScaled::from_parts(s_num * s_den, num - den - log_factorial(u64::from(m))))
}

/// `T_n^(k)(x) = n 2^(k-1) (k-1)! P_{n-k}^(k)(x)` for `1 <= k <= n`.
pub fn chebyshev_derivative(n: u32, k: u32, x: f64) -> Result<LogScaled> {
    if k == 0 || k > n {
        return Err(Error::domain(format!(
            "chebyshev_derivative needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("chebyshev_derivative needs |x| <= 1, got {x}")));
    }
    let prefactor = f64::from(n).ln()
        + f64::from(k - 1) * std::f64::consts::LN_2
        + log_factorial(u64::from(k - 1));
    Ok(gegenbauer_unchecked(n - k, f64::from(k), x).scale_log(prefactor))
}

/// Derivative `d/dx P_m^(λ) = 2λ P_{m-1}^(λ+1)`.
pub fn gegenbauer_derivative(m: u32, lambda: f64, x: f64) -> Result<LogScaled> {
    check_lambda(lambda)?;
    Ok(gegenbauer_derivative_unchecked(m, lambda, x))
}

pub(crate) fn gegenbauer_derivative_unchecked(m: u32, lambda: f64, x: f64) -> LogScaled {
    if m == 0 {
        return LogScaled::ZERO;
    }
    LogScaled::from_f64(2.0 * lambda) * gegenbauer_unchecked(m - 1, lambda + 1.0, x)
}

/// Relative residual of the ultraspherical differential equation
/// `(1-x²) y'' - (2λ+1) x y' + m(m+2λ) y = 0` at `x`, with both derivatives
/// taken from the exact derivative relation.
///
/// The residual is divided by the largest of the three terms (and at least
/// 1), so it measures cancellation error rather than the local size of `y`.
pub fn ode_residual(m: u32, lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let mf = f64::from(m);
    let y = gegenbauer_unchecked(m, lambda, x);
    let dy = gegenbauer_derivative_unchecked(m, lambda, x);
    let d2y = if m >= 2 {
        LogScaled::from_f64(2.0 * lambda * 2.0 * (lambda + 1.0))
            * gegenbauer_unchecked(m - 2, lambda + 2.0, x)
    } else {
        LogScaled::ZERO
    };
    let terms = [
        LogScaled::from_f64((1.0 - x) * (1.0 + x)) * d2y,
        LogScaled::from_f64(-(2.0 * lambda + 1.0) * x) * dy,
        LogScaled::from_f64(mf * (mf + 2.0 * lambda)) * y,
    ];
    let scale = terms
        .iter()
        .map(|t| t.logmag())
        .fold(0.0f64, f64::max);
    let mut sum = 0.0;
    for t in terms {
        sum += t.scale_log(-scale).to_f64()?;
    }
    Ok(sum.abs())
}
