//! The limit `tau_k* = lim_{n→∞} tau(n, k)` and asymptotic forms.
//!
//! Exactly, `tau_k* = (2k-1)!! / (j^k sqrt(S*))` where `j = j_{k+1/2,1}` is
//! the first positive zero of the Bessel function `J_{k+1/2}` and
//! `S* = Σ_{m=0}^{k} a_m q^{2m}` with `q = (k+1)/j` and
//! `a_m = (2m-1)!!/(2m)!! · (k+m)!/(k-m)! · (k+1)^{-2m}`.
//!
//! For large `k`, `tau_k* ≈ A (2/e)^{k+1/2} e^{-a k^{1/3}} k^{-1/6}` with
//! `a = 2^{-1/3} |i_1|` (`i_1` the first zero of the Airy function) and
//! `A = (∫_0^∞ e^{-x³/3 - 2ax} dx / sqrt(πx))^{-1/2}`. Asymptotic values
//! returned here are leading terms only.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::orthopoly::Index;
use crate::quadrature::golub_welsch;
use crate::xprec::{log_double_factorial, log_factorial, Parity};

/// First negative zero of the Airy function `Ai`.
pub const AIRY_FIRST_ZERO: f64 = -2.338_107_410_459_767;

/// `λ = (k + 1/2)/n` must stay below `1 - UNIFORM_GATE` for the uniform
/// asymptotic formula.
pub const UNIFORM_GATE: f64 = 0.05;

const NEWTON_LIMIT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticConstants {
    /// First negative zero of `Ai`.
    pub airy_i1: f64,
    /// `2^{-1/3} |i_1|`.
    pub a: f64,
    /// The integral constant.
    pub big_a: f64,
}

/// Terms of the limit sum `S*` for one `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarTerms {
    pub k: u32,
    /// `(k + 1) / j_{k+1/2,1}`.
    pub q: f64,
    /// `a_m` for `m = 0..=k`.
    pub coeffs: Vec<f64>,
    pub s_star: f64,
}

/// Spherical Bessel functions `(j_l(x), j_{l-1}(x))` by upward recurrence;
/// `j_{-1}(x) = cos(x)/x`. Adequate for `x` at least about `0.9 (l + 1/2)`.
fn spherical_bessel_pair(l: u32, x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let mut prev = c / x;
    let mut curr = s / x;
    for i in 0..l {
        let next = f64::from(2 * i + 1) / x * curr - prev;
        prev = curr;
        curr = next;
    }
    (curr, prev)
}

/// `j_l(x)` and its derivative `j_{l-1}(x) - (l+1)/x · j_l(x)`.
fn spherical_bessel_with_derivative(l: u32, x: f64) -> (f64, f64) {
    let (jl, jlm1) = spherical_bessel_pair(l, x);
    (jl, jlm1 - f64::from(l + 1) / x * jl)
}

/// Three-term expansion `ν + a ν^{1/3} + (3a²/10) ν^{-1/3}` of the first
/// Bessel zero.
pub fn first_zero_expansion(nu: f64) -> f64 {
    let a = constants().a;
    nu + a * nu.cbrt() + 0.3 * a * a / nu.cbrt()
}

/// First positive zero of `J_ν` for half-integer `ν = k + 1/2`.
///
/// `J_{k+1/2}` is proportional to the spherical Bessel function `j_k`,
/// which is elementary. A 64-point scan of `[ν, ν + 4ν^{1/3} + 5]` isolates
/// the first sign change, then safeguarded Newton polishes it.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    let k = nu - 0.5;
    if !(k >= 0.0 && k == k.round() && k < f64::from(u32::MAX)) {
        return Err(Error::domain(format!(
            "bessel_first_zero needs a half-integer order >= 1/2, got {nu}"
        )));
    }
    let l = k as u32;
    let start = nu;
    let width = 4.0 * nu.cbrt() + 5.0;
    let f = |x: f64| spherical_bessel_pair(l, x).0;

    let mut lo = start;
    let mut f_lo = f(lo);
    let mut hi = None;
    for i in 1..=64 {
        let x = start + width * f64::from(i) / 64.0;
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() != f_lo.signum() {
            hi = Some(x);
            break;
        }
        lo = x;
        f_lo = fx;
    }
    let mut hi = hi.ok_or(Error::NoConvergence {
        what: "Bessel zero scan",
        iterations: 64,
    })?;

    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_LIMIT {
        let (fx, dfx) = spherical_bessel_with_derivative(l, x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence {
        what: "Bessel zero Newton iteration",
        iterations: NEWTON_LIMIT,
    })
}

/// Integrand of the constant `A` after the substitution `x = t²`.
fn big_a_integrand(a: f64, t: f64) -> f64 {
    let t2 = t * t;
    2.0 / std::f64::consts::PI.sqrt() * (-(t2 * t2 * t2) / 3.0 - 2.0 * a * t2).exp()
}

/// Smallest `t` with `t⁶/3 + 2a t² > 46`, beyond which the integrand is
/// below `1e-20`.
fn big_a_cutoff(a: f64) -> f64 {
    let g = |t: f64| t.powi(6) / 3.0 + 2.0 * a * t * t - 46.0;
    let (mut lo, mut hi) = (0.0f64, 4.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn compute_constants() -> AsymptoticConstants {
    let airy_i1 = AIRY_FIRST_ZERO;
    let a = airy_i1.abs() / 2f64.cbrt();
    let cutoff = big_a_cutoff(a);
    // Composite 20-point Gauss-Legendre, doubling panels to convergence.
    let rule = golub_welsch(0.5, 20).expect("Gauss-Legendre rule");
    let composite = |panels: u32| -> f64 {
        let h = cutoff / f64::from(panels);
        (0..panels)
            .map(|p| {
                let left = h * f64::from(p);
                0.5 * h
                    * rule.integrate(|s| big_a_integrand(a, left + 0.5 * h * (s + 1.0)))
            })
            .sum()
    };
    let mut panels = 2;
    let mut value = composite(panels);
    loop {
        panels *= 2;
        let refined = composite(panels);
        let done = (refined - value).abs() < 1e-14 || panels >= 1 << 12;
        value = refined;
        if done {
            break;
        }
    }
    AsymptoticConstants {
        airy_i1,
        a,
        big_a: value.powf(-0.5),
    }
}

/// The constants `i_1`, `a` and `A`, computed once.
pub fn constants() -> AsymptoticConstants {
    static CACHE: OnceLock<AsymptoticConstants> = OnceLock::new();
    *CACHE.get_or_init(compute_constants)
}

/// The terms of `S*` for a given `k`.
pub fn s_star(k: u32) -> Result<StarTerms> {
    if k == 0 {
        return Err(Error::domain("s_star needs k >= 1"));
    }
    let j = bessel_first_zero(f64::from(k) + 0.5)?;
    let kp1 = f64::from(k) + 1.0;
    let q = kp1 / j;
    let k64 = u64::from(k);
    let coeffs: Vec<f64> = (0..=k64)
        .map(|m| {
            (log_double_factorial(m, Parity::Odd) - log_double_factorial(m, Parity::Even)
                + log_factorial(k64 + m)
                - log_factorial(k64 - m)
                - 2.0 * m as f64 * kp1.ln())
            .exp()
        })
        .collect();
    let log_q2 = 2.0 * q.ln();
    let s_star = coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| c * (m as f64 * log_q2).exp())
        .sum();
    Ok(StarTerms { k, q, coeffs, s_star })
}

/// `tau_k* = (2k-1)!! / (j^k sqrt(S*))`.
pub fn tau_star_exact(k: u32) -> Result<f64> {
    let terms = s_star(k)?;
    let j = (f64::from(k) + 1.0) / terms.q;
    let log = log_double_factorial(u64::from(k), Parity::Odd)
        - f64::from(k) * j.ln()
        - 0.5 * terms.s_star.ln();
    Ok(log.exp())
}

/// Leading term `A (2/e)^{k+1/2} e^{-a k^{1/3}} k^{-1/6}`.
pub fn tau_star_asymptotic(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("tau_star_asymptotic needs k >= 1"));
    }
    let c = constants();
    let kf = f64::from(k);
    let log = c.big_a.ln() + (kf + 0.5) * (std::f64::consts::LN_2 - 1.0) - c.a * kf.cbrt() - kf.ln() / 6.0;
    Ok(log.exp())
}

/// `ln ρ_λ = (1+λ) ln(2/(1+λ)) + (1-λ) ln((1-λ)/2)`.
pub fn log_rho(lambda: f64) -> f64 {
    (1.0 + lambda) * (2.0 / (1.0 + lambda)).ln() + (1.0 - lambda) * ((1.0 - lambda) / 2.0).ln()
}

/// Leading term of the asymptotic formula uniform in `n` and `k`:
/// `A ρ_λ^{n/2} e^{-a (1-λ²)^{1/3} k^{1/3}} (1/k² - 1/n²)^{1/12}` with
/// `λ = (k + 1/2)/n`, gated to `λ < 1 - UNIFORM_GATE`.
pub fn tau_asymptotic_uniform(n: u32, k: u32) -> Result<f64> {
    Index::new(n, k)?;
    if k == 0 {
        return Err(Error::domain("uniform asymptotic needs k >= 1"));
    }
    let nf = f64::from(n);
    let kf = f64::from(k);
    let lambda = (kf + 0.5) / nf;
    if lambda >= 1.0 - UNIFORM_GATE {
        return Err(Error::domain(format!(
            "uniform asymptotic needs (k + 1/2)/n < {}, got {lambda}",
            1.0 - UNIFORM_GATE
        )));
    }
    let c = constants();
    let log = c.big_a.ln() + 0.5 * nf * log_rho(lambda)
        - c.a * ((1.0 - lambda) * (1.0 + lambda)).cbrt() * kf.cbrt()
        + (1.0 / (kf * kf) - 1.0 / (nf * nf)).ln() / 12.0;
    Ok(log.exp())
}
