//! The normalized largest critical value `tau(n, k)`.
//!
//! Two independent routes are provided:
//!
//! * [`tau_direct`] evaluates `|T_n^(k)(ω)| / T_n^(k)(1)` at the rightmost
//!   zero `ω` of `T_n^(k+1)`;
//! * [`tau_closed_form`] uses the exact representation
//!
//! ```text
//! tau² = (2k-1)!!/(2k)!! · n/(n-k) · 1/C(n+k, n-k) · 1/((1-ω²)^k S(n, k+1; ω))
//! ```
//!
//! where `S(n, k; x) = 1 + Σ_{m=1}^{k-1} (2m-1)!!/(2m)!! (k-m)_{2m}
//! (1-x²)^{-m} Π_{j=1}^{m} 1/(n²-j²)` is the correction sum of the
//! Schaeffer-Duffin majorant.
//!
//! The closed form depends on `ω` to first order while the direct route is
//! stationary there, so the two agree to about `1e-12` and any disagreement
//! beyond `1e-9` points at a wrong root.

use crate::error::{Error, Result};
use crate::orthopoly::{chebyshev_derivative, Index};
use crate::roots::omega;
use crate::xprec::{log_binomial, log_double_factorial, LogScaled, Parity, LN_F64_MAX};

/// Which route produced a [`TauValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauValue {
    pub value: f64,
    pub route: Route,
    pub omega: f64,
    /// `S(n, k+1; ω)` for the closed-form route.
    pub s_value: Option<f64>,
}

fn one_minus_square(x: f64) -> f64 {
    (1.0 - x) * (1.0 + x)
}

/// `ln S(n, k; x)`.
///
/// Terms are built in log space, shifted by the largest one and summed in
/// ascending `m`; they are all positive.
pub fn log_s_sum(n: u32, k: u32, x: f64) -> Result<f64> {
    if k == 0 || n <= k {
        return Err(Error::domain(format!("S-sum needs n > k >= 1, got n = {n}, k = {k}")));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::domain(format!("S-sum needs |x| < 1, got {x}")));
    }
    let ln_gap = one_minus_square(x).ln();
    let nf = f64::from(n);
    let kf = f64::from(k);
    let mut logs = Vec::with_capacity(k as usize);
    logs.push(0.0f64);
    let mut log_term = 0.0f64;
    for m in 1..k {
        let mf = f64::from(m);
        // term_m / term_{m-1} = (2m-1)/(2m) · (k+m-1)(k-m) / ((1-x²)(n-m)(n+m))
        log_term += ((2.0 * mf - 1.0) / (2.0 * mf)).ln()
            + ((kf + mf - 1.0) * (kf - mf)).ln()
            - ln_gap
            - ((nf - mf) * (nf + mf)).ln();
        logs.push(log_term);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok(top + sum.ln())
}

/// `S(n, k; x)` as a plain `f64`.
pub fn s_sum(n: u32, k: u32, x: f64) -> Result<f64> {
    let l = log_s_sum(n, k, x)?;
    if l > LN_F64_MAX {
        return Err(Error::Overflow(l));
    }
    Ok(l.exp())
}

/// `ln((2k-1)!! / (2k)!!)`.
pub(crate) fn log_central_ratio(k: u32) -> f64 {
    log_double_factorial(u64::from(k), Parity::Odd) - log_double_factorial(u64::from(k), Parity::Even)
}

/// `ln C(n+k, n-k)`.
fn log_binomial_span(n: u32, k: u32) -> Result<f64> {
    log_binomial(u64::from(n) + u64::from(k), i64::from(n) - i64::from(k))
}

/// Closed-form `tau(n, k)` evaluated at a given `ω`.
///
/// Exposed so that callers sharing one root between several quantities do
/// not solve for it twice.
pub fn tau_closed_form_at(index: Index, omega: f64) -> Result<TauValue> {
    let n = index.n();
    let k = index.k();
    if k == 0 {
        return Ok(TauValue {
            value: 1.0,
            route: Route::ClosedForm,
            omega,
            s_value: None,
        });
    }
    let log_s = log_s_sum(n, k + 1, omega)?;
    let nf = f64::from(n);
    let kf = f64::from(k);
    let log_tau_sq = log_central_ratio(k) + (nf / (nf - kf)).ln()
        - log_binomial_span(n, k)?
        - kf * one_minus_square(omega).ln()
        - log_s;
    Ok(TauValue {
        value: (0.5 * log_tau_sq).exp(),
        route: Route::ClosedForm,
        omega,
        s_value: Some(log_s.exp()),
    })
}

/// `tau(n, k)` from the exact closed-form representation.
pub fn tau_closed_form(n: u32, k: u32) -> Result<TauValue> {
    let index = Index::new(n, k)?;
    if k == 0 {
        return tau_closed_form_at(index, 1.0);
    }
    let w = omega(index)?.omega;
    tau_closed_form_at(index, w)
}

/// Direct `tau(n, k)` at a given `ω`.
pub fn tau_direct_at(index: Index, omega: f64) -> Result<TauValue> {
    let n = index.n();
    let k = index.k();
    if k == 0 {
        return Ok(TauValue {
            value: 1.0,
            route: Route::Direct,
            omega,
            s_value: None,
        });
    }
    let at_omega = chebyshev_derivative(n, k, omega)?;
    let at_one = chebyshev_derivative(n, k, 1.0)?;
    Ok(TauValue {
        value: at_omega.abs().ratio(at_one)?,
        route: Route::Direct,
        omega,
        s_value: None,
    })
}

/// `tau(n, k) = |T_n^(k)(ω)| / T_n^(k)(1)` by direct evaluation.
/// `k = 0` returns exactly 1: every interior extremum of `T_n` is `±1`.
pub fn tau_direct(n: u32, k: u32) -> Result<TauValue> {
    let index = Index::new(n, k)?;
    if k == 0 {
        return tau_direct_at(index, 1.0);
    }
    let w = omega(index)?.omega;
    tau_direct_at(index, w)
}

/// Squared Schaeffer-Duffin majorant
/// `D²(n, k; x) = n²(n²-1²)...(n²-(k-1)²) (1-x²)^{-k} S(n, k; x)`.
pub fn majorant_d2(n: u32, k: u32, x: f64) -> Result<LogScaled> {
    if k < 2 || k >= n {
        return Err(Error::domain(format!("majorant needs 2 <= k < n, got n = {n}, k = {k}")));
    }
    let log_s = log_s_sum(n, k, x)?;
    let nf = f64::from(n);
    let log_prod: f64 = (0..k)
        .map(|j| {
            let jf = f64::from(j);
            ((nf - jf) * (nf + jf)).ln()
        })
        .sum();
    Ok(LogScaled::from_log(log_prod - f64::from(k) * one_minus_square(x).ln() + log_s))
}

/// Upper bound on `tau(n, k)` from the majorant at `ω`:
/// `tau² <= (2k-1)!!/(2k)!! · (n+k)/n · 1/C(n+k, n-k) · S(n, k; ω) / (1-ω²)^k`.
///
/// For `k = 1` the same expression with `S(n, 1) = 1` is evaluated; that
/// case lies outside the range where the majorant is classically stated.
pub fn tau_upper_schaeffer_duffin_at(index: Index, omega: f64) -> Result<f64> {
    let n = index.n();
    let k = index.k();
    if k == 0 {
        return Err(Error::domain("majorant bound needs k >= 1"));
    }
    let nf = f64::from(n);
    let kf = f64::from(k);
    let log_rhs = log_central_ratio(k) + ((nf + kf) / nf).ln() - log_binomial_span(n, k)?
        + log_s_sum(n, k, omega)?
        - kf * one_minus_square(omega).ln();
    Ok((0.5 * log_rhs).exp())
}

pub fn tau_upper_schaeffer_duffin(n: u32, k: u32) -> Result<f64> {
    let index = Index::new(n, k)?;
    let w = omega(index)?.omega;
    tau_upper_schaeffer_duffin_at(index, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn s_sum_examples() {
        for n in [2u32, 5, 100] {
            assert_eq!(s_sum(n, 1, 0.3).unwrap(), 1.0);
        }
        assert_relative_eq!(s_sum(4, 2, (1.0f64 / 6.0).sqrt()).unwrap(), 1.08, max_relative = 1e-14);
        assert_relative_eq!(s_sum(4, 2, 0.0).unwrap(), 16.0 / 15.0, max_relative = 1e-15);
        assert!(s_sum(4, 2, 1.0).is_err());
        assert!(s_sum(4, 4, 0.0).is_err());
        assert!(s_sum(4, 0, 0.0).is_err());
    }

    #[test]
    fn s_sum_overflow_is_reported() {
        let x = 1.0 - 1e-15;
        assert!(log_s_sum(400, 300, x).unwrap() > LN_F64_MAX);
        assert!(matches!(s_sum(400, 300, x), Err(Error::Overflow(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_relative_eq!(tau_closed_form(3, 1).unwrap().value, 1.0 / 3.0, epsilon = 1e-15);
        let t = tau_closed_form(4, 1).unwrap();
        assert_relative_eq!(t.value, (2.0f64 / 27.0).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(t.s_value.unwrap(), 27.0 / 25.0, epsilon = 1e-14);
        assert_eq!(t.route, Route::ClosedForm);
        assert_relative_eq!(tau_closed_form(5, 1).unwrap().value, 0.25, epsilon = 1e-14);
        assert_eq!(tau_closed_form(7, 0).unwrap().value, 1.0);
        assert!(tau_closed_form(4, 3).is_err());
    }

    #[test]
    fn direct_examples() {
        for n in 2..10 {
            assert_eq!(tau_direct(n, 0).unwrap().value, 1.0);
        }
        // |T_4'(ω)| / 16 with ω² = 1/6 is (32 / (3 sqrt 6)) / 16.
        let expected = 32.0 / (3.0 * 6f64.sqrt()) / 16.0;
        let t = tau_direct(4, 1).unwrap();
        assert_relative_eq!(t.value, expected, epsilon = 1e-15);
        assert_eq!(t.route, Route::Direct);
        assert_relative_eq!(tau_direct(3, 1).unwrap().value, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn majorant_examples() {
        let d = majorant_d2(4, 2, 0.0).unwrap().to_f64().unwrap();
        assert_relative_eq!(d, 256.0, max_relative = 1e-14);
        let t = chebyshev_derivative(5, 2, 0.5).unwrap().to_f64().unwrap();
        assert!(majorant_d2(5, 2, 0.5).unwrap().to_f64().unwrap() >= t * t);
        let t = chebyshev_derivative(6, 3, 0.0).unwrap().to_f64().unwrap();
        assert!(majorant_d2(6, 3, 0.0).unwrap().to_f64().unwrap() >= t * t);
        assert!(majorant_d2(6, 1, 0.0).is_err());
        assert!(majorant_d2(6, 2, -1.0).is_err());
    }

    #[test]
    fn schaeffer_duffin_examples() {
        let b = tau_upper_schaeffer_duffin(4, 1).unwrap();
        assert_relative_eq!(b, 0.075f64.sqrt(), epsilon = 1e-14);
        assert!(b >= tau_direct(4, 1).unwrap().value);
        assert!(tau_upper_schaeffer_duffin(3, 1).unwrap() >= 1.0 / 3.0 - 1e-15);
        assert!(tau_upper_schaeffer_duffin(6, 2).unwrap() >= tau_direct(6, 2).unwrap().value);
    }
}
