//! Overflow-free scalars and combinatorial building blocks.
//!
//! Double factorials, binomials and ultraspherical values reach magnitudes
//! far beyond `f64::MAX` for moderate `(n, k)`. They are carried as a sign
//! and the natural log of the magnitude, and only converted back to `f64`
//! at the end of a computation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use crate::error::{Error, Result};

/// `ln(f64::MAX)`; conversions above this overflow.
pub const LN_F64_MAX: f64 = 709.782_712_893_384;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Double factorials below this argument are computed by direct products.
const DOUBLE_FACTORIAL_LOOP_MAX: u64 = 64;

/// Binomials with `min(q, p - q)` up to this size are computed by products.
const BINOMIAL_LOOP_MAX: u64 = 64;

/// A real number stored as `sign * exp(logmag)`.
///
/// `sign == 0` is exact zero and `logmag` is then meaningless.
#[derive(Clone, Copy, Debug)]
pub struct LogScaled {
    sign: i8,
    logmag: f64,
}

impl LogScaled {
    pub const ZERO: LogScaled = LogScaled {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: LogScaled = LogScaled {
        sign: 1,
        logmag: 0.0,
    };

    /// Builds a value from a sign in `{-1, 0, 1}` and a log-magnitude.
    pub fn from_parts(sign: i8, logmag: f64) -> Self {
        match sign.cmp(&0) {
            Ordering::Equal => Self::ZERO,
            Ordering::Greater => LogScaled { sign: 1, logmag },
            Ordering::Less => LogScaled { sign: -1, logmag },
        }
    }

    /// Positive value with the given log-magnitude.
    pub fn from_log(logmag: f64) -> Self {
        LogScaled { sign: 1, logmag }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogScaled {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn logmag(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.logmag
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Converts back to `f64`, refusing values that would overflow.
    pub fn to_f64(&self) -> Result<f64> {
        if self.sign == 0 {
            return Ok(0.0);
        }
        if self.logmag > LN_F64_MAX || self.logmag.is_nan() {
            return Err(Error::Overflow(self.logmag));
        }
        Ok(f64::from(self.sign) * self.logmag.exp())
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogScaled {
                sign: 1,
                logmag: self.logmag,
            }
        }
    }

    /// Multiplies by `exp(shift)`.
    pub fn scale_log(self, shift: f64) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogScaled {
                sign: self.sign,
                logmag: self.logmag + shift,
            }
        }
    }

    pub fn powi(self, e: i32) -> Self {
        if e == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return self;
        }
        let sign = if self.sign < 0 && e % 2 != 0 { -1 } else { 1 };
        LogScaled {
            sign,
            logmag: self.logmag * f64::from(e),
        }
    }

    /// Square root of the magnitude; the sign is dropped.
    pub fn sqrt_abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogScaled {
                sign: 1,
                logmag: 0.5 * self.logmag,
            }
        }
    }

    /// `self / other` as a plain `f64`, for ratios known to be moderate.
    pub fn ratio(self, other: LogScaled) -> Result<f64> {
        (self / other).to_f64()
    }
}

impl PartialEq for LogScaled {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.logmag == other.logmag)
    }
}

impl Mul for LogScaled {
    type Output = LogScaled;
    fn mul(self, rhs: LogScaled) -> LogScaled {
        if self.sign == 0 || rhs.sign == 0 {
            return LogScaled::ZERO;
        }
        LogScaled {
            sign: self.sign * rhs.sign,
            logmag: self.logmag + rhs.logmag,
        }
    }
}

impl Div for LogScaled {
    type Output = LogScaled;
    /// Division by zero yields an infinite log-magnitude, which `to_f64`
    /// reports as an overflow.
    fn div(self, rhs: LogScaled) -> LogScaled {
        if self.sign == 0 {
            return LogScaled::ZERO;
        }
        if rhs.sign == 0 {
            return LogScaled {
                sign: self.sign,
                logmag: f64::INFINITY,
            };
        }
        LogScaled {
            sign: self.sign * rhs.sign,
            logmag: self.logmag - rhs.logmag,
        }
    }
}

impl Neg for LogScaled {
    type Output = LogScaled;
    fn neg(self) -> LogScaled {
        LogScaled {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl fmt::Display for LogScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let log10 = self.logmag / std::f64::consts::LN_10;
                let exponent = log10.floor();
                let mantissa = 10f64.powf(log10 - exponent);
                let sign = if s < 0 { "-" } else { "" };
                write!(f, "{sign}{mantissa:.15}e{exponent}")
            }
        }
    }
}

/// Running product of moderate factors, folded into a log whenever the
/// plain `f64` accumulator leaves a safe range.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LogProduct {
    mantissa: f64,
    shift: f64,
}

impl LogProduct {
    const HI: f64 = 1e280;
    const LO: f64 = 1e-280;

    pub(crate) fn new() -> Self {
        LogProduct {
            mantissa: 1.0,
            shift: 0.0,
        }
    }

    pub(crate) fn mul(&mut self, factor: f64) {
        self.mantissa *= factor;
        let m = self.mantissa.abs();
        if m > Self::HI || (m < Self::LO && m != 0.0) {
            self.shift += m.ln();
            self.mantissa = self.mantissa.signum();
        }
    }

    pub(crate) fn finish(self) -> LogScaled {
        LogScaled::from_f64(self.mantissa).scale_log(self.shift)
    }
}

/// Which double factorial [`log_double_factorial`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// `(2m - 1)!!`
    Odd,
    /// `(2m)!!`
    Even,
}

/// `ln Γ(x)`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `ln |Γ(x)|` together with the sign of `Γ(x)`.
pub fn ln_gamma_signed(x: f64) -> (f64, i8) {
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1 } else { 1 })
}

/// `ln m!`.
pub fn log_factorial(m: u64) -> f64 {
    if m <= DOUBLE_FACTORIAL_LOOP_MAX {
        let mut p = LogProduct::new();
        for i in 2..=m {
            p.mul(i as f64);
        }
        p.finish().logmag()
    } else {
        ln_gamma(m as f64 + 1.0)
    }
}

/// `ln((2m-1)!!)` for [`Parity::Odd`] and `ln((2m)!!)` for [`Parity::Even`].
pub fn log_double_factorial(m: u64, parity: Parity) -> f64 {
    if m == 0 {
        return 0.0;
    }
    if m <= DOUBLE_FACTORIAL_LOOP_MAX {
        let mut p = LogProduct::new();
        let start = match parity {
            Parity::Odd => 1,
            Parity::Even => 2,
        };
        let mut f = start;
        while f <= 2 * m {
            p.mul(f as f64);
            f += 2;
        }
        return p.finish().logmag();
    }
    let mf = m as f64;
    let ln_even = mf * std::f64::consts::LN_2 + ln_gamma(mf + 1.0);
    match parity {
        Parity::Even => ln_even,
        // (2m-1)!! = (2m)! / (2m)!!
        Parity::Odd => ln_gamma(2.0 * mf + 1.0) - ln_even,
    }
}

/// Pochhammer symbol `(a)_j = a (a+1) ... (a+j-1)`.
pub fn log_pochhammer(a: f64, j: u64) -> LogScaled {
    if j == 0 {
        return LogScaled::ONE;
    }
    if a <= 0.0 && a == a.round() && -a < j as f64 {
        return LogScaled::ZERO;
    }
    let mut p = LogProduct::new();
    for i in 0..j {
        p.mul(a + i as f64);
    }
    p.finish()
}

/// Stirling-series remainder `ln Γ(x) - [(x - 1/2) ln x - x + ln sqrt(2π)]`
/// for `x >= 10`.
fn stirling_remainder(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    (1.0 / 12.0
        + r * (-1.0 / 360.0
            + r * (1.0 / 1260.0
                + r * (-1.0 / 1680.0
                    + r * (1.0 / 1188.0 + r * (-691.0 / 360_360.0 + r / 156.0))))))
        / x
}

/// `ln B(a, b)` for `a, b >= 10`, arranged so that the large `ln Γ` terms
/// cancel analytically.
fn log_beta_large(a: f64, b: f64) -> f64 {
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    let corr = stirling_remainder(p) + stirling_remainder(q) - stirling_remainder(p + q);
    -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / (p + q)).ln()
        + q * (-p / (p + q)).ln_1p()
}

/// `ln C(p, q)` for `0 <= q <= p`.
pub fn log_binomial(p: u64, q: i64) -> Result<f64> {
    if q < 0 || q as u64 > p {
        return Err(Error::domain(format!(
            "binomial C({p}, {q}) needs 0 <= q <= p"
        )));
    }
    let q = q as u64;
    let small = q.min(p - q);
    if small <= BINOMIAL_LOOP_MAX {
        let mut prod = LogProduct::new();
        let base = (p - small) as f64;
        for i in 1..=small {
            prod.mul((base + i as f64) / i as f64);
        }
        return Ok(prod.finish().logmag());
    }
    // C(p, q) = 1 / ((p + 1) B(p - q + 1, q + 1))
    let pf = p as f64;
    let qf = q as f64;
    Ok(-(pf + 1.0).ln() - log_beta_large(pf - qf + 1.0, qf + 1.0))
}

/// `ln` of `top (top-2) (top-4) ...` with `count` factors, all positive.
/// The empty product is 1.
pub fn log_product_step2(top: f64, count: u64) -> f64 {
    let mut p = LogProduct::new();
    for i in 0..count {
        p.mul(top - 2.0 * i as f64);
    }
    p.finish().logmag()
}
