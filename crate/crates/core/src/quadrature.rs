//! Gauss-Gegenbauer quadrature for the weight `(1-x²)^{λ-1/2}` on `[-1, 1]`.
//!
//! Three independent constructions of the weights are provided: the closed
//! form of Petras for integer `λ`, the classical representation through
//! `P_{n+1}^(λ-1)` (with the Szegő form it comes from), and a Golub-Welsch
//! oracle built on a symmetric tridiagonal eigensolver.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::orthopoly::{gegenbauer, gegenbauer_derivative};
use crate::roots::{all_zeros, jacobi_beta};
use crate::xprec::{ln_gamma, log_binomial, log_double_factorial, Parity};

/// An `n`-point Gauss rule. Nodes are ascending and weights aligned with them.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRule {
    pub lambda: f64,
    pub n: u32,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    /// `Σ w_ν f(x_ν)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `α_m(λ) = ((2m-1)!!)² C(m+λ-1, 2m)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaCoeff {
    pub m: u32,
    pub lambda: u32,
    pub value: f64,
}

pub fn alpha_coeff(m: u32, lambda: u32) -> AlphaCoeff {
    let top = i64::from(m) + i64::from(lambda) - 1;
    let value = if 2 * i64::from(m) > top {
        0.0
    } else {
        let log = 2.0 * log_double_factorial(u64::from(m), Parity::Odd)
            + log_binomial(top as u64, 2 * i64::from(m)).expect("binomial in range");
        log.exp()
    };
    AlphaCoeff { m, lambda, value }
}

/// `∫_{-1}^{1} (1-x²)^{λ-1/2} dx = sqrt(π) Γ(λ+1/2) / Γ(λ+1)`.
pub fn zeroth_moment(lambda: f64) -> f64 {
    (0.5 * std::f64::consts::PI.ln() + ln_gamma(lambda + 0.5) - ln_gamma(lambda + 1.0)).exp()
}

/// `∫_{-1}^{1} x^{2j} (1-x²)^{λ-1/2} dx = Γ(j+1/2) Γ(λ+1/2) / Γ(j+λ+1)`.
pub fn even_moment(lambda: f64, j: u32) -> f64 {
    let jf = f64::from(j);
    (ln_gamma(jf + 0.5) + ln_gamma(lambda + 0.5) - ln_gamma(jf + lambda + 1.0)).exp()
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::domain("a quadrature rule needs n >= 1 nodes"))
    } else {
        Ok(())
    }
}

/// Petras's closed form for integer `λ >= 0`:
/// `a_ν = π/(n+λ) (1-x²)^λ (1 + Σ_{m=1}^{λ-1} α_m(λ) / ((1-x²)^m Π_{j=1}^{m} ((n+λ)² - j²)))`.
pub fn petras_weights(lambda: u32, n: u32) -> Result<QuadRule> {
    check_n(n)?;
    let lf = f64::from(lambda);
    let nodes = all_zeros(n, lf)?;
    let shift = f64::from(n) + lf;
    let alphas: Vec<f64> = (1..lambda).map(|m| alpha_coeff(m, lambda).value).collect();
    let weights = nodes
        .iter()
        .map(|&x| {
            let gap = (1.0 - x) * (1.0 + x);
            let mut sum = 1.0;
            let mut scale = 1.0;
            for (i, &alpha) in alphas.iter().enumerate() {
                let j = (i + 1) as f64;
                scale /= gap * (shift - j) * (shift + j);
                if alpha == 0.0 {
                    break;
                }
                sum += alpha * scale;
            }
            std::f64::consts::PI / shift * gap.powi(lambda as i32) * sum
        })
        .collect();
    Ok(QuadRule {
        lambda: lf,
        n,
        nodes,
        weights,
    })
}

/// Classical representation for real `λ > 1`:
/// `a_ν = 2^{4-2λ} π Γ(n+2λ-1) / ((n+1)(n+2λ-1) Γ²(λ-1) Γ(n+2)) · (1-x²) / [P_{n+1}^(λ-1)(x)]²`.
pub fn classical_weights(lambda: f64, n: u32) -> Result<QuadRule> {
    check_n(n)?;
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("classical weights need λ > 1, got {lambda}")));
    }
    let nodes = all_zeros(n, lambda)?;
    let nf = f64::from(n);
    let log_const = (4.0 - 2.0 * lambda) * std::f64::consts::LN_2
        + std::f64::consts::PI.ln()
        + ln_gamma(nf + 2.0 * lambda - 1.0)
        - (nf + 1.0).ln()
        - (nf + 2.0 * lambda - 1.0).ln()
        - 2.0 * ln_gamma(lambda - 1.0)
        - ln_gamma(nf + 2.0);
    let weights = nodes
        .iter()
        .map(|&x| {
            let p = gegenbauer(n + 1, lambda - 1.0, x)?;
            let log = log_const + ((1.0 - x) * (1.0 + x)).ln() - 2.0 * p.logmag();
            Ok(log.exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(QuadRule {
        lambda,
        n,
        nodes,
        weights,
    })
}

/// Szegő form for real `λ > 0`:
/// `a_ν = 2^{2-2λ} π Γ(n+2λ) / (Γ²(λ) Γ(n+1)) / ((1-x²) [P_n^(λ)'(x)]²)`.
pub fn szego_weights(lambda: f64, n: u32) -> Result<QuadRule> {
    check_n(n)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("Szegő weights need λ > 0, got {lambda}")));
    }
    let nodes = all_zeros(n, lambda)?;
    let nf = f64::from(n);
    let log_const = (2.0 - 2.0 * lambda) * std::f64::consts::LN_2
        + std::f64::consts::PI.ln()
        + ln_gamma(nf + 2.0 * lambda)
        - 2.0 * ln_gamma(lambda)
        - ln_gamma(nf + 1.0);
    let weights = nodes
        .iter()
        .map(|&x| {
            let dp = gegenbauer_derivative(n, lambda, x)?;
            let log = log_const - ((1.0 - x) * (1.0 + x)).ln() - 2.0 * dp.logmag();
            Ok(log.exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(QuadRule {
        lambda,
        n,
        nodes,
        weights,
    })
}

/// Golub-Welsch rule for real `λ > -1/2`.
///
/// Nodes are the eigenvalues of the symmetric Jacobi matrix, symmetrized
/// about 0. Weights use `μ0 / Σ_j p_j(x)²` over the orthonormal polynomials,
/// which equals the squared first eigenvector component but keeps full
/// relative accuracy for tiny weights.
pub fn golub_welsch(lambda: f64, n: u32) -> Result<QuadRule> {
    check_n(n)?;
    if !(lambda > -0.5 && lambda.is_finite()) {
        return Err(Error::domain(format!("Golub-Welsch needs λ > -1/2, got {lambda}")));
    }
    let size = n as usize;
    let beta = jacobi_beta(size, lambda);
    let off: Vec<f64> = beta.iter().map(|b| b.sqrt()).collect();
    let mut jacobi = DMatrix::<f64>::zeros(size, size);
    for (i, &b) in off.iter().enumerate() {
        jacobi[(i, i + 1)] = b;
        jacobi[(i + 1, i)] = b;
    }
    let eigen = jacobi.symmetric_eigen();
    let mut raw: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence {
            what: "tridiagonal eigensolver",
            iterations: 0,
        });
    }
    raw.sort_by(f64::total_cmp);
    let nodes: Vec<f64> = (0..size)
        .map(|i| {
            let x = 0.5 * (raw[i] - raw[size - 1 - i]);
            if 2 * i + 1 == size {
                0.0
            } else {
                x
            }
        })
        .collect();
    let mu0 = zeroth_moment(lambda);
    let weights = nodes
        .iter()
        .map(|&x| {
            // sqrt(β_{j+1}) p_{j+1} = x p_j - sqrt(β_j) p_{j-1}, p_0 = 1.
            let (mut prev, mut curr) = (0.0f64, 1.0f64);
            let mut sum = 1.0;
            for j in 0..off.len() {
                let back = if j == 0 { 0.0 } else { off[j - 1] };
                let next = (x * curr - back * prev) / off[j];
                prev = curr;
                curr = next;
                sum += curr * curr;
            }
            mu0 / sum
        })
        .collect();
    Ok(QuadRule {
        lambda,
        n,
        nodes,
        weights,
    })
}

/// Largest relative deviation between two weight vectors of equal length.
pub fn max_relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max)
}
