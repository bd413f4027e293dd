//! Closed-form bounds on `tau(n, k)` and `tau_k*`, the hypergeometric
//! closed forms of the S-sums at `x = 0`, and Whipple's `3F2` sum.
//!
//! Products of the form `(n+k-1)(n+k-3)...(n-k+1)` (k factors, stepping
//! down by two) appear throughout; they are written `D(n, k)` below.

use crate::error::{Error, Result};
use crate::orthopoly::Index;
use crate::roots::omega;
use crate::tau::{log_central_ratio, log_s_sum, tau_upper_schaeffer_duffin_at};
use crate::xprec::{ln_gamma_signed, log_double_factorial, log_factorial, log_product_step2, Parity};

/// Largest number of terms [`terminating_3f2`] will sum.
pub const MAX_3F2_TERMS: u64 = 100_000;

/// Upper bounds on `tau(n, k)`, all evaluated at the same `ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBounds {
    /// Majorant bound `sqrt(D²(ω) / [T_n^(k)(1)]²)`.
    pub schaeffer_duffin: f64,
    /// Majorant bound combined with the exact form, ratio `S(n,k)/S(n,k+1)` at `ω`.
    pub combined: f64,
    /// `(2k-1)!! / D(n, k) · (1-ω²)^{-k/2}`.
    pub omega_bound: f64,
    /// `(2k-1)!! / D(n, k) · (n/(k+2))^k`, free of `ω`.
    pub uniform: f64,
    /// `k = 1`: the majorant bound is evaluated outside its classical range.
    pub extended_domain: bool,
}

impl UpperBounds {
    pub fn min(&self) -> f64 {
        self.schaeffer_duffin
            .min(self.combined)
            .min(self.omega_bound)
            .min(self.uniform)
    }

    pub fn as_array(&self) -> [(&'static str, f64); 4] {
        [
            ("schaeffer_duffin", self.schaeffer_duffin),
            ("combined", self.combined),
            ("omega_bound", self.omega_bound),
            ("uniform", self.uniform),
        ]
    }
}

/// Every bound for one index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSet {
    pub upper: UpperBounds,
    pub lower: f64,
    /// Upper bound on `tau(n, k) / tau(n+1, k)`.
    pub ratio: f64,
}

impl BoundSet {
    /// `lower <= tau <= every upper bound`.
    pub fn sandwiches(&self, tau: f64) -> bool {
        self.lower <= tau && self.upper.as_array().iter().all(|&(_, b)| tau <= b)
    }
}

/// `ln D(n, k) = ln((n+k-1)(n+k-3)...(n-k+1))`.
fn log_descending(n: u32, k: u32) -> f64 {
    log_product_step2(f64::from(n) + f64::from(k) - 1.0, u64::from(k))
}

/// `ln((2k-1)!! / D(n, k))`.
fn log_lower(n: u32, k: u32) -> f64 {
    log_double_factorial(u64::from(k), Parity::Odd) - log_descending(n, k)
}

/// Upper bounds at a given `ω`.
pub fn upper_bounds_at(index: Index, omega: f64) -> Result<UpperBounds> {
    let n = index.n();
    let k = index.k();
    if k == 0 {
        return Err(Error::domain("bounds need k >= 1"));
    }
    let nf = f64::from(n);
    let kf = f64::from(k);
    let log_gap = ((1.0 - omega) * (1.0 + omega)).ln();

    let schaeffer_duffin = tau_upper_schaeffer_duffin_at(index, omega)?;

    let log_binom = crate::xprec::log_binomial(u64::from(n + k), i64::from(n - k))?;
    let log_s_ratio = log_s_sum(n, k, omega)? - log_s_sum(n, k + 1, omega)?;
    let log_combined_sq = 0.5 * ((nf + kf) / (nf - kf)).ln() + log_central_ratio(k) - log_binom
        - kf * log_gap
        + 0.5 * log_s_ratio;
    let combined = (0.5 * log_combined_sq).exp();

    let base = log_lower(n, k);
    let omega_bound = (base - 0.5 * kf * log_gap).exp();
    let uniform = (base + kf * (nf / (kf + 2.0)).ln()).exp();

    Ok(UpperBounds {
        schaeffer_duffin,
        combined,
        omega_bound,
        uniform,
        extended_domain: k == 1,
    })
}

pub fn upper_bounds(n: u32, k: u32) -> Result<UpperBounds> {
    let index = Index::new(n, k)?;
    let w = omega(index)?.omega;
    upper_bounds_at(index, w)
}

/// `tau(n, k) >= (2k-1)!! / ((n+k-1)(n+k-3)...(n-k+1))`.
pub fn lower_bound(n: u32, k: u32) -> Result<f64> {
    Index::new(n, k)?;
    if k == 0 {
        return Ok(1.0);
    }
    Ok(log_lower(n, k).exp())
}

/// `tau(n, k) / tau(n+1, k) <= ((n+k)(n+k-2)...(n-k+2)) / ((n+k-1)(n+k-3)...(n-k+1))`.
pub fn ratio_bound(n: u32, k: u32) -> Result<f64> {
    Index::new(n, k)?;
    Ok((log_descending(n + 1, k) - log_descending(n, k)).exp())
}

pub fn bound_set_at(index: Index, omega: f64) -> Result<BoundSet> {
    let (n, k) = (index.n(), index.k());
    Ok(BoundSet {
        upper: upper_bounds_at(index, omega)?,
        lower: lower_bound(n, k)?,
        ratio: ratio_bound(n, k)?,
    })
}

pub fn bound_set(n: u32, k: u32) -> Result<BoundSet> {
    let index = Index::new(n, k)?;
    let w = omega(index)?.omega;
    bound_set_at(index, w)
}

/// `tau_k* <= (2k-1)!! / (k+2)^k`.
pub fn tau_star_upper(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("tau_star_upper needs k >= 1"));
    }
    let kf = f64::from(k);
    Ok((log_double_factorial(u64::from(k), Parity::Odd) - kf * (kf + 2.0).ln()).exp())
}

/// Non-positive integer value of `x`, if any.
fn non_positive_integer(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.round() && x > -(u64::MAX as f64) {
        Some((-x) as u64)
    } else {
        None
    }
}

/// Terminating `3F2(a, b, c; d, e; 1)`.
///
/// One of `a, b, c` must be a non-positive integer `-N` with
/// `N <= terms`; the sum then has `N + 1` terms. Lower parameters must not
/// reach zero before the series stops.
pub fn terminating_3f2(a: f64, b: f64, c: f64, d: f64, e: f64, terms: u64) -> Result<f64> {
    let stop = [a, b, c]
        .into_iter()
        .filter_map(non_positive_integer)
        .min()
        .ok_or_else(|| Error::domain("3F2 series does not terminate"))?;
    if stop > terms || stop > MAX_3F2_TERMS {
        return Err(Error::domain(format!(
            "3F2 series needs {stop} terms, limit is {}",
            terms.min(MAX_3F2_TERMS)
        )));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for j in 0..stop {
        let jf = j as f64;
        let den = (d + jf) * (e + jf) * (jf + 1.0);
        if den == 0.0 {
            return Err(Error::domain(format!(
                "3F2 lower parameter hits a non-positive integer at term {j}"
            )));
        }
        term *= (a + jf) * (b + jf) * (c + jf) / den;
        sum += term;
    }
    Ok(sum)
}

/// Which S-sum [`s_at_zero_closed`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SVariant {
    /// `S(m, k; 0)`
    K,
    /// `S(m, k+1; 0)`
    KPlusOne,
}

/// Closed forms of the S-sums at the origin, valid for `m > k + 1`:
///
/// ```text
/// S(m, k; 0)   = m (m+k-2)(m+k-4)...(m-k+2) / ((m+k-1)(m+k-3)...(m-k+1))
/// S(m, k+1; 0) = m (m+k-1)(m+k-3)...(m-k+1) / ((m+k)(m+k-2)...(m-k))
/// ```
pub fn s_at_zero_closed(m: u32, k: u32, variant: SVariant) -> Result<f64> {
    if k == 0 || m <= k + 1 {
        return Err(Error::domain(format!(
            "closed S-sum needs m > k + 1 and k >= 1, got m = {m}, k = {k}"
        )));
    }
    let mf = f64::from(m);
    let kf = f64::from(k);
    let k64 = u64::from(k);
    let log = match variant {
        SVariant::K => {
            mf.ln() + log_product_step2(mf + kf - 2.0, k64 - 1) - log_product_step2(mf + kf - 1.0, k64)
        }
        SVariant::KPlusOne => {
            mf.ln() + log_product_step2(mf + kf - 1.0, k64) - log_product_step2(mf + kf, k64 + 1)
        }
    };
    Ok(log.exp())
}

/// Leading Laurent coefficient of `Γ` at `x0 + slope·ε` as `ε → 0`:
/// `(ln|coef|, sign(coef), pole order)`.
fn gamma_germ(x0: f64, slope: f64) -> (f64, i8, i32) {
    match non_positive_integer(x0) {
        // Γ(-N + sε) ≈ (-1)^N / (N! s ε)
        Some(order) => {
            let sign = if order % 2 == 0 { 1 } else { -1 } * if slope < 0.0 { -1 } else { 1 };
            (-log_factorial(order) - slope.abs().ln(), sign, 1)
        }
        None => {
            let (l, s) = ln_gamma_signed(x0);
            (l, s, 0)
        }
    }
}

/// Whipple's sum
///
/// ```text
/// 3F2(a, 1-a, c; d, 2c+1-d; 1) = 2^{1-2c} π Γ(d) Γ(2c+1-d)
///     / (Γ((a+d)/2) Γ((a+1+2c-d)/2) Γ((1-a+d)/2) Γ((2+2c-a-d)/2))
/// ```
///
/// When Gamma arguments sit on poles the right-hand side is taken as its
/// limit in `d`; the terminating left-hand side is continuous in `d` there.
/// Net poles in the denominator give 0; net poles in the numerator are a
/// domain error.
pub fn whipple_3f2(a: f64, c: f64, d: f64) -> Result<f64> {
    let e = 2.0 * c + 1.0 - d;
    let numerator = [gamma_germ(d, 1.0), gamma_germ(e, -1.0)];
    let denominator = [
        gamma_germ(0.5 * (a + d), 0.5),
        gamma_germ(0.5 * (a + e), -0.5),
        gamma_germ(0.5 * (1.0 - a + d), 0.5),
        gamma_germ(0.5 * (1.0 + e - a), -0.5),
    ];
    let order: i32 = numerator.iter().map(|g| g.2).sum::<i32>() - denominator.iter().map(|g| g.2).sum::<i32>();
    if order > 0 {
        return Err(Error::domain(format!(
            "Whipple closed form has a pole at a = {a}, c = {c}, d = {d}"
        )));
    }
    if order < 0 {
        return Ok(0.0);
    }
    let mut log = (1.0 - 2.0 * c) * std::f64::consts::LN_2 + std::f64::consts::PI.ln();
    let mut sign = 1i8;
    for g in numerator {
        log += g.0;
        sign *= g.1;
    }
    for g in denominator {
        log -= g.0;
        sign *= g.1;
    }
    Ok(f64::from(sign) * log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::{s_sum, tau_direct};
    use approx::assert_relative_eq;

    #[test]
    fn upper_bound_examples() {
        let u = upper_bounds(4, 1).unwrap();
        assert_relative_eq!(u.omega_bound, 0.25 * (5.0f64 / 6.0).powf(-0.5), epsilon = 1e-15);
        assert_relative_eq!(u.uniform, 1.0 / 3.0, epsilon = 1e-15);
        assert!(u.extended_domain);
        let tau = tau_direct(4, 1).unwrap().value;
        assert!(tau <= u.omega_bound && tau <= u.uniform);

        let u = upper_bounds(3, 1).unwrap();
        for (_, b) in u.as_array() {
            assert!(b >= 1.0 / 3.0 - 1e-15);
        }
        let u = upper_bounds(10, 2).unwrap();
        assert!(u.omega_bound <= u.uniform);
        assert!(!u.extended_domain);
    }

    #[test]
    fn lower_bound_examples() {
        assert_relative_eq!(lower_bound(4, 1).unwrap(), 0.25, epsilon = 1e-16);
        assert_relative_eq!(lower_bound(3, 1).unwrap(), 1.0 / 3.0, epsilon = 1e-16);
        assert_relative_eq!(lower_bound(5, 1).unwrap(), 0.2, epsilon = 1e-16);
        for k in 1..30 {
            assert_relative_eq!(lower_bound(k + 2, k).unwrap(), 1.0 / f64::from(2 * k + 1), max_relative = 1e-14);
        }
    }

    #[test]
    fn ratio_bound_examples() {
        assert_relative_eq!(ratio_bound(4, 1).unwrap(), 1.25, epsilon = 1e-15);
        assert_relative_eq!(ratio_bound(5, 2).unwrap(), 35.0 / 24.0, epsilon = 1e-15);
        for k in 1..10 {
            for n in k + 2..k + 30 {
                assert!(ratio_bound(n, k).unwrap() > 1.0);
            }
        }
    }

    #[test]
    fn tau_star_upper_examples() {
        assert_relative_eq!(tau_star_upper(1).unwrap(), 1.0 / 3.0, epsilon = 1e-16);
        assert_relative_eq!(tau_star_upper(2).unwrap(), 3.0 / 16.0, epsilon = 1e-16);
        assert!(tau_star_upper(1).unwrap() >= 0.217_233_628);
        assert!(tau_star_upper(0).is_err());
    }

    #[test]
    fn terminating_3f2_examples() {
        assert_eq!(terminating_3f2(1.3, 2.7, 0.0, 4.1, 5.2, 10).unwrap(), 1.0);
        assert_relative_eq!(
            terminating_3f2(2.0, -1.0, 0.5, 5.0, -3.0, 10).unwrap(),
            16.0 / 15.0,
            epsilon = 1e-15
        );
        let (k, m) = (2.0, 5.0);
        assert_relative_eq!(
            terminating_3f2(k, 1.0 - k, 0.5, 1.0 + m, 1.0 - m, 10).unwrap(),
            s_sum(5, 2, 0.0).unwrap(),
            epsilon = 1e-15
        );
        assert!(terminating_3f2(0.5, 1.5, 2.5, 1.0, 1.0, 10).is_err());
        assert!(terminating_3f2(-20.0, 1.0, 1.0, 1.0, 1.0, 10).is_err());
        assert!(terminating_3f2(-4.0, 1.0, 1.0, -2.0, 1.0, 10).is_err());
    }

    #[test]
    fn s_at_zero_examples() {
        assert_relative_eq!(s_at_zero_closed(4, 1, SVariant::KPlusOne).unwrap(), 16.0 / 15.0, epsilon = 1e-15);
        assert_relative_eq!(s_at_zero_closed(5, 1, SVariant::K).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(s_at_zero_closed(6, 2, SVariant::K).unwrap(), 36.0 / 35.0, epsilon = 1e-15);
        assert_relative_eq!(s_at_zero_closed(6, 2, SVariant::K).unwrap(), s_sum(6, 2, 0.0).unwrap(), epsilon = 1e-15);
        assert!(s_at_zero_closed(3, 2, SVariant::K).is_err());
    }

    #[test]
    fn whipple_examples() {
        assert_relative_eq!(whipple_3f2(2.0, 0.5, 5.0).unwrap(), 16.0 / 15.0, epsilon = 1e-14);
        assert_relative_eq!(whipple_3f2(2.0, 0.5, 7.0).unwrap(), 36.0 / 35.0, epsilon = 1e-14);
        assert_relative_eq!(whipple_3f2(1.0, 0.5, 5.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(whipple_3f2(1.0, 0.3, 2.7).unwrap(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn whipple_generic_parameters() {
        // a = -2 terminates after two terms: 1 + (-2)(3)c/(d e) + (-2)(-1)(3)(4)c(c+1)/(d(d+1) e(e+1) 2).
        let (a, c, d) = (-2.0f64, 0.7f64, 2.3f64);
        let e = 2.0 * c + 1.0 - d;
        let direct = terminating_3f2(a, 1.0 - a, c, d, e, 10).unwrap();
        assert_relative_eq!(whipple_3f2(a, c, d).unwrap(), direct, max_relative = 1e-13);
    }

    #[test]
    fn whipple_pole_conventions() {
        // (1-a+d)/2 = -1 is an uncompensated reciprocal pole; the series
        // 3F2(5, -4, 1; 2, 1; 1) = 1 - 10 + 30 - 35 + 14 vanishes as well.
        assert_eq!(whipple_3f2(5.0, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(terminating_3f2(5.0, -4.0, 1.0, 2.0, 1.0, 10).unwrap(), 0.0);
        // e = 2c + 1 - d = 0 is a pole of the numerator only.
        assert!(matches!(whipple_3f2(4.0, 0.5, 2.0), Err(Error::Domain(_))));
    }
}
