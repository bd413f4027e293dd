//! Largest critical values of derivatives of Chebyshev polynomials.
//!
//! For `n >= k + 2` the quantity `tau(n, k)` is the ratio of the largest
//! interior critical value of `T_n^(k)` to its endpoint value `T_n^(k)(1)`.
//! The crate evaluates it directly (by locating the rightmost zero of
//! `T_n^(k+1)` and evaluating `T_n^(k)` there) and through an exact closed
//! form derived from closed-form Gauss-Gegenbauer weights, together with a
//! family of upper and lower bounds, the limit `tau_k* = lim tau(n, k)` and
//! its large-`k` asymptotics.
//!
//! Module map:
//!
//! * [`xprec`]: sign + log-magnitude scalars and combinatorial helpers.
//! * [`orthopoly`]: Chebyshev and ultraspherical (Gegenbauer) polynomials.
//! * [`roots`]: largest and all zeros of ultraspherical polynomials.
//! * [`tau`]: the two routes to `tau(n, k)` and the pointwise majorant.
//! * [`bounds`]: closed-form bounds, terminating `3F2` sums and Whipple's sum.
//! * [`asympt`]: `tau_k*`, the Bessel zero it needs and the asymptotic forms.
//! * [`quadrature`]: Gauss-Gegenbauer rules by three constructions.
//! * [`verify`]: the acceptance checks shared by the CLI and the test suite.
//! * [`cli`]: the `cheby-critical` command line front end.

pub mod asympt;
pub mod bounds;
pub mod cli;
mod error;
pub mod orthopoly;
pub mod quadrature;
pub mod roots;
pub mod tau;
pub mod verify;
pub mod xprec;

pub use error::{Error, Result};
pub use orthopoly::Index;
pub use xprec::LogScaled;
