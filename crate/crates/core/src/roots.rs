//! Zeros of ultraspherical polynomials.
//!
//! The rightmost zero `ω(n, k)` of `T_n^(k+1)` is the largest zero of
//! `P_{n-k-1}^(k+1)`. It is found by Newton's method started to the right
//! of all zeros, where the iteration is monotone, with a bisection
//! fallback whose predicate is a Sturm count on the symmetric Jacobi
//! matrix. The Sturm count tells exactly how many zeros lie above a point,
//! so the bracket never slips onto the second-largest zero even when the
//! a priori interval contains several.

use crate::error::{Error, Result};
use crate::orthopoly::{gegenbauer_derivative_unchecked, gegenbauer_unchecked, gegenbauer_at_one, Index};

const MAX_ITERATIONS: usize = 200;

/// Location of the largest zero together with its certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaResult {
    pub omega: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// `|P(ω)| / P(1)`.
    pub residual: f64,
    pub iterations: usize,
}

/// Two-sided a priori bounds on `ω(n, k)`:
/// `(2k+3)(2k+5) / (n² + 3k² + 12k + 11) >= 1 - ω² >= ((k+2)/n)²`.
pub fn omega_bracket(n: u32, k: u32) -> Result<(f64, f64)> {
    Index::new(n, k)?;
    let nf = f64::from(n);
    let kf = f64::from(k);
    let upper_gap = (2.0 * kf + 3.0) * (2.0 * kf + 5.0) / (nf * nf + 3.0 * kf * kf + 12.0 * kf + 11.0);
    let lower_gap = ((kf + 2.0) / nf).powi(2);
    let lo = (1.0 - upper_gap).max(0.0).sqrt();
    let hi = (1.0 - lower_gap).sqrt();
    Ok((lo, hi))
}

/// Squared off-diagonal entries of the Jacobi matrix of the monic
/// ultraspherical recurrence `x p_j = p_{j+1} + β_j p_{j-1}`, `j = 1..m-1`.
pub(crate) fn jacobi_beta(m: usize, lambda: f64) -> Vec<f64> {
    (1..m)
        .map(|j| {
            let jf = j as f64;
            if j == 1 {
                1.0 / (2.0 * (1.0 + lambda))
            } else {
                jf * (jf + 2.0 * lambda - 1.0) / (4.0 * (jf + lambda) * (jf + lambda - 1.0))
            }
        })
        .collect()
}

/// Number of eigenvalues of the zero-diagonal Jacobi matrix below `x`.
pub(crate) fn sturm_count_below(beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for &b in beta {
        let prev = if d == 0.0 { f64::MIN_POSITIVE } else { d };
        d = -x - b / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Newton correction `P(x) / P'(x)`; zero when `P(x)` vanishes exactly.
fn newton_correction(m: u32, lambda: f64, x: f64) -> Result<f64> {
    let p = gegenbauer_unchecked(m, lambda, x);
    if p.is_zero() {
        return Ok(0.0);
    }
    let dp = gegenbauer_derivative_unchecked(m, lambda, x);
    p.ratio(dp)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > -0.5 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("ultraspherical parameter must exceed -1/2, got {lambda}")))
    }
}

/// Largest zero of `P_m^(λ)`.
///
/// For integer `λ >= 1` the a priori bracket of [`omega_bracket`] with
/// `n = m + λ`, `k = λ - 1` is used; otherwise the search starts on `(0, 1)`.
pub fn largest_zero(m: u32, lambda: f64) -> Result<OmegaResult> {
    check_lambda(lambda)?;
    if m == 0 {
        return Err(Error::domain("largest_zero needs degree m >= 1"));
    }
    if m == 1 {
        return Ok(OmegaResult {
            omega: 0.0,
            bracket_lo: 0.0,
            bracket_hi: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let (lo, hi) = if lambda >= 1.0 && lambda == lambda.round() && lambda < f64::from(u32::MAX) {
        let k = lambda as u32 - 1;
        omega_bracket(m + k + 1, k)?
    } else {
        (0.0, 1.0)
    };
    refine_largest(m, lambda, lo, hi)
}

/// Largest zero of `P_{n-k-1}^(k+1)`, i.e. the rightmost zero of `T_n^(k+1)`.
pub fn omega(index: Index) -> Result<OmegaResult> {
    let n = index.n();
    let k = index.k();
    largest_zero(n - k - 1, f64::from(k) + 1.0)
}

fn refine_largest(m: u32, lambda: f64, lo: f64, hi: f64) -> Result<OmegaResult> {
    let beta = jacobi_beta(m as usize, lambda);
    let mu = m as usize;
    let above = |x: f64| mu - sturm_count_below(&beta, x);

    let (mut lo, mut hi) = (lo, hi);
    // The a priori bounds are theorems; guard them against rounding anyway.
    if above(lo) == 0 {
        lo = 0.0;
    }
    if above(hi) > 0 {
        hi = 1.0;
    }

    let mut x = hi;
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence {
                what: "largest zero search",
                iterations: MAX_ITERATIONS,
            });
        }
        let step = newton_correction(m, lambda, x)?;
        if step.abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            x -= step;
            break;
        }
        let newton = x - step;
        let candidate = if newton.is_finite() && newton >= lo && newton <= hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if candidate == x {
            break;
        }
        if above(candidate) >= 1 {
            lo = candidate;
        } else {
            hi = candidate;
        }
        x = candidate;
        if hi - lo <= 2.0 * f64::EPSILON * hi.abs() {
            break;
        }
    }

    let bracket_lo = lo.min(x);
    let bracket_hi = hi.max(x);
    let at_one = gegenbauer_at_one(m, lambda)?;
    let residual = gegenbauer_unchecked(m, lambda, x).abs().ratio(at_one)?;
    Ok(OmegaResult {
        omega: x,
        bracket_lo,
        bracket_hi,
        residual,
        iterations,
    })
}

/// True if `P_m^(λ)` keeps one sign at `points` equispaced points of
/// `(ω, 1]`.
pub fn no_sign_change_above(m: u32, lambda: f64, omega: f64, points: u32) -> bool {
    let reference = gegenbauer_unchecked(m, lambda, 1.0).sign();
    (1..=points).all(|i| {
        let x = omega + (1.0 - omega) * f64::from(i) / f64::from(points);
        gegenbauer_unchecked(m, lambda, x).sign() == reference
    })
}

/// All zeros of `P_m^(λ)` in ascending order, as eigenvalues of the Jacobi
/// matrix isolated by Sturm bisection and polished by one Newton step.
/// The result is exactly symmetric about 0.
pub fn all_zeros(m: u32, lambda: f64) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    if m == 0 {
        return Err(Error::domain("all_zeros needs degree m >= 1"));
    }
    let mu = m as usize;
    let beta = jacobi_beta(mu, lambda);
    let half = mu / 2;
    let mut positive = Vec::with_capacity(half);
    // The i-th largest eigenvalue, i = 0..half, all positive.
    for i in 0..half {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut iterations = 0;
        while hi - lo > 2.0 * f64::EPSILON * hi {
            iterations += 1;
            if iterations > 2 * MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    what: "Sturm bisection",
                    iterations,
                });
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if mu - sturm_count_below(&beta, mid) > i {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        if lambda != 0.0 {
            let step = newton_correction(m, lambda, x)?;
            if step.abs() <= hi - lo + 4.0 * f64::EPSILON {
                x -= step;
            }
        }
        positive.push(x);
    }
    let mut zeros = Vec::with_capacity(mu);
    zeros.extend(positive.iter().map(|&x| -x));
    if mu % 2 == 1 {
        zeros.push(0.0);
    }
    zeros.extend(positive.iter().rev().copied());
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bracket_examples() {
        let (lo, hi) = omega_bracket(4, 1).unwrap();
        assert_relative_eq!(hi, 7f64.sqrt() / 4.0, epsilon = 1e-15);
        assert!(lo <= (1.0f64 / 6.0).sqrt() && (1.0f64 / 6.0).sqrt() <= hi);
        let (lo, hi) = omega_bracket(3, 1).unwrap();
        assert_eq!(lo, 0.0);
        assert_eq!(hi, 0.0);
        assert!(omega_bracket(3, 2).is_err());
        for k in 0..20 {
            for n in k + 2..k + 60 {
                let (lo, hi) = omega_bracket(n, k).unwrap();
                assert!(lo <= hi, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn largest_zero_examples() {
        let r = largest_zero(1, 3.7).unwrap();
        assert_eq!(r.omega, 0.0);
        let r = largest_zero(2, 2.0).unwrap();
        assert_relative_eq!(r.omega, (1.0f64 / 6.0).sqrt(), epsilon = 1e-15);
        let r = largest_zero(3, 2.0).unwrap();
        assert_relative_eq!(r.omega, (3.0f64 / 8.0).sqrt(), epsilon = 1e-15);
        assert!(r.bracket_lo <= r.omega && r.omega <= r.bracket_hi);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn largest_zero_of_chebyshev_u() {
        // U_m has zeros cos(jπ/(m+1)).
        for m in [2u32, 5, 17, 100, 513] {
            let r = largest_zero(m, 1.0).unwrap();
            let exact = (std::f64::consts::PI / f64::from(m + 1)).cos();
            assert!((r.omega - exact).abs() < 2e-15, "m = {m}");
        }
    }

    #[test]
    fn largest_zero_non_integer_lambda() {
        // Legendre P_2 has zero 1/sqrt(3).
        let r = largest_zero(2, 0.5).unwrap();
        assert_relative_eq!(r.omega, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let zeros = all_zeros(9, 3.3).unwrap();
        let r = largest_zero(9, 3.3).unwrap();
        assert!((zeros[8] - r.omega).abs() < 1e-14);
    }

    #[test]
    fn omega_certificates_hold() {
        for k in [0u32, 1, 2, 5, 13, 40] {
            for n in [k + 2, k + 3, k + 10, k + 77, k + 200] {
                let r = omega(Index::new(n, k).unwrap()).unwrap();
                let (lo, hi) = omega_bracket(n, k).unwrap();
                if n > k + 2 {
                    // The lower bound is attained when n = k + 3.
                    assert!(lo <= r.omega + 1e-15 && r.omega < hi, "n = {n}, k = {k}");
                } else {
                    assert_eq!(r.omega, 0.0);
                }
                assert!(r.residual <= 1e-12);
                assert!(no_sign_change_above(n - k - 1, f64::from(k + 1), r.omega, 32));
            }
        }
    }

    #[test]
    fn all_zeros_examples() {
        let z = all_zeros(2, 1.0).unwrap();
        assert_relative_eq!(z[0], -0.5, epsilon = 1e-15);
        assert_relative_eq!(z[1], 0.5, epsilon = 1e-15);
        assert_eq!(all_zeros(1, 3.0).unwrap(), vec![0.0]);
        let z = all_zeros(5, 2.0).unwrap();
        let r = largest_zero(5, 2.0).unwrap();
        assert!((z[4] - r.omega).abs() < 1e-12);
        for (a, b) in z.iter().zip(z.iter().rev()) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn all_zeros_chebyshev_t() {
        // λ = 0 is the first-kind Chebyshev weight: zeros cos((2j-1)π/(2m)).
        let m = 12u32;
        let z = all_zeros(m, 0.0).unwrap();
        for (j, x) in z.iter().rev().enumerate() {
            let exact = (std::f64::consts::PI * (2 * j + 1) as f64 / (2.0 * f64::from(m))).cos();
            assert!((x - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn sturm_counts_are_monotone() {
        let beta = jacobi_beta(30, 2.5);
        let mut last = 0;
        for i in 0..=200 {
            let x = -1.0 + 2.0 * f64::from(i) / 200.0;
            let c = sturm_count_below(&beta, x);
            assert!(c >= last);
            last = c;
        }
        assert_eq!(sturm_count_below(&beta, -1.0), 0);
        assert_eq!(sturm_count_below(&beta, 1.0), 30);
    }
}
