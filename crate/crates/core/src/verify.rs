//! The acceptance suite, shared by the `verify` subcommand and the
//! integration tests.
//!
//! Each criterion returns a [`CriterionReport`]. The quick mode runs the
//! reference grids; the full mode widens them.
//!
//! Inequalities that are attained with equality (the lower bound at
//! `n = k + 2`, for one) are checked with a relative slack of [`SLACK`].

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::asympt::{bessel_first_zero, constants, tau_star_asymptotic, tau_star_exact};
use crate::bounds::{bound_set_at, s_at_zero_closed, terminating_3f2, whipple_3f2, SVariant};
use crate::cli::{render_table, Column, Format, NRange, SweepSpec};
use crate::error::Result;
use crate::orthopoly::Index;
use crate::quadrature::{
    classical_weights, even_moment, golub_welsch, max_relative_deviation, petras_weights, zeroth_moment,
};
use crate::roots::omega;
use crate::tau::{s_sum, tau_closed_form_at, tau_direct_at};

/// Relative slack for non-strict inequalities.
pub const SLACK: f64 = 1e-12;

const WHIPPLE_SEED: u64 = 0x5eed_03f2;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    pub full: bool,
    /// Added to every `ω` before evaluation; nonzero only to check that the
    /// suite notices a wrong root.
    pub omega_perturbation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {:<28} {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + SLACK * b.abs()
}

/// One `(n, k)` cell of the main grid.
#[derive(Clone, Copy, Debug)]
struct Cell {
    direct: f64,
    closed: f64,
    sandwich_ok: bool,
    ratio_bound: f64,
}

fn cell(n: u32, k: u32, perturbation: f64) -> Result<Cell> {
    let index = Index::new(n, k)?;
    let w = omega(index)?.omega + perturbation;
    let direct = tau_direct_at(index, w)?.value;
    let closed = tau_closed_form_at(index, w)?.value;
    let bounds = bound_set_at(index, w)?;
    let sandwich_ok =
        le(bounds.lower, direct) && bounds.upper.as_array().iter().all(|&(_, b)| le(direct, b));
    Ok(Cell {
        direct,
        closed,
        sandwich_ok,
        ratio_bound: bounds.ratio,
    })
}

/// Cells `n = k+2 ..= k+span+1` for one `k`, one more than the grid so that
/// consecutive ratios cover it.
fn column(k: u32, span: u32, perturbation: f64) -> Result<Vec<Cell>> {
    (k + 2..=k + span + 1).map(|n| cell(n, k, perturbation)).collect()
}

fn grid(opts: &VerifyOptions) -> (u32, u32) {
    if opts.full {
        (100, 600)
    } else {
        (60, 200)
    }
}

fn main_grid(opts: &VerifyOptions) -> Result<Vec<(u32, Vec<Cell>)>> {
    let (k_max, span) = grid(opts);
    (1..=k_max)
        .into_par_iter()
        .map(|k| column(k, span, opts.omega_perturbation).map(|c| (k, c)))
        .collect()
}

/// Closed form against direct evaluation.
pub fn criterion_1(opts: &VerifyOptions) -> CriterionReport {
    timed(1, "exact formula equivalence", || {
        let (_, span) = grid(opts);
        let columns = main_grid(opts)?;
        let mut worst = (0.0f64, 0, 0);
        for (k, cells) in &columns {
            for (i, c) in cells.iter().take(span as usize).enumerate() {
                let rel = ((c.closed - c.direct) / c.direct).abs();
                if !(rel <= worst.0) {
                    worst = (rel, *k + 2 + i as u32, *k);
                }
            }
        }
        Ok((
            worst.0 <= 1e-9,
            format!("max rel diff {:.3e} at n = {}, k = {}", worst.0, worst.1, worst.2),
        ))
    })
}

/// `tau(k+2, k) = 1/(2k+1)` by both routes.
pub fn criterion_2(opts: &VerifyOptions) -> CriterionReport {
    timed(2, "golden value 1/(2k+1)", || {
        let k_max = if opts.full { 200 } else { 50 };
        let mut worst = 0.0f64;
        for k in 1..=k_max {
            let c = cell(k + 2, k, opts.omega_perturbation)?;
            let want = 1.0 / f64::from(2 * k + 1);
            worst = worst.max((c.direct - want).abs()).max((c.closed - want).abs());
        }
        Ok((worst <= 1e-12, format!("max abs error {worst:.3e} for k <= {k_max}")))
    })
}

/// `lower <= tau <= every upper bound`.
pub fn criterion_3(opts: &VerifyOptions) -> CriterionReport {
    timed(3, "bound sandwich", || {
        let (_, span) = grid(opts);
        let columns = main_grid(opts)?;
        let mut checked = 0usize;
        let violations: Vec<(u32, u32)> = columns
            .iter()
            .flat_map(|(k, cells)| {
                checked += span as usize;
                cells
                    .iter()
                    .take(span as usize)
                    .enumerate()
                    .filter(|(_, c)| !c.sandwich_ok)
                    .map(move |(i, _)| (k + 2 + i as u32, *k))
            })
            .collect();
        Ok((
            violations.is_empty(),
            format!(
                "{} violations in {checked} cells{}",
                violations.len(),
                violations.first().map(|(n, k)| format!(", first at n = {n}, k = {k}")).unwrap_or_default()
            ),
        ))
    })
}

/// Strict decrease in `n` and the ratio bound.
pub fn criterion_4(opts: &VerifyOptions) -> CriterionReport {
    timed(4, "monotonicity and ratio", || {
        let columns = main_grid(opts)?;
        let mut decrease = 0usize;
        let mut ratio = 0usize;
        for (_, cells) in &columns {
            for pair in cells.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                if !(a.direct > b.direct) {
                    decrease += 1;
                }
                if !le(a.direct / b.direct, a.ratio_bound) {
                    ratio += 1;
                }
            }
        }
        Ok((
            decrease == 0 && ratio == 0,
            format!("{decrease} monotonicity and {ratio} ratio violations"),
        ))
    })
}

/// Petras, classical and Golub-Welsch weights, and moment exactness.
pub fn criterion_5(opts: &VerifyOptions) -> CriterionReport {
    timed(5, "quadrature identity", || {
        let (lambdas, sizes): (&[u32], &[u32]) = if opts.full {
            (&[1, 2, 3, 4, 6, 8, 12, 16], &[1, 2, 4, 8, 16, 32, 64, 128])
        } else {
            (&[1, 2, 3, 4, 6, 8], &[1, 2, 4, 8, 16, 32, 64])
        };
        let mut weight_dev = 0.0f64;
        let mut moment_dev = 0.0f64;
        for &lambda in lambdas {
            let lf = f64::from(lambda);
            for &n in sizes {
                let petras = petras_weights(lambda, n)?;
                let oracle = golub_welsch(lf, n)?;
                weight_dev = weight_dev.max(max_relative_deviation(&petras.weights, &oracle.weights));
                if lambda > 1 {
                    let classical = classical_weights(lf, n)?;
                    weight_dev = weight_dev
                        .max(max_relative_deviation(&classical.weights, &oracle.weights))
                        .max(max_relative_deviation(&classical.weights, &petras.weights));
                }
                let mu0 = zeroth_moment(lf);
                for degree in 0..2 * n {
                    let got = petras.integrate(|x| x.powi(degree as i32));
                    let dev = if degree % 2 == 0 {
                        let want = even_moment(lf, degree / 2);
                        ((got - want) / want).abs()
                    } else {
                        (got / mu0).abs()
                    };
                    moment_dev = moment_dev.max(dev);
                }
            }
        }
        Ok((
            weight_dev <= 1e-10 && moment_dev <= 1e-10,
            format!("max weight dev {weight_dev:.3e}, max moment dev {moment_dev:.3e}"),
        ))
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Closed forms of the S-sums at 0, and Whipple against the series.
pub fn criterion_6(opts: &VerifyOptions) -> CriterionReport {
    timed(6, "hypergeometric closed forms", || {
        let m_max = 200u32;
        let samples = if opts.full { 2000 } else { 200 };
        let worst_grid = (3..=m_max)
            .into_par_iter()
            .map(|m| -> Result<f64> {
                let mut worst = 0.0f64;
                for k in 1..m - 1 {
                    let mf = f64::from(m);
                    let kf = f64::from(k);
                    worst = worst
                        .max(rel(s_at_zero_closed(m, k, SVariant::K)?, s_sum(m, k, 0.0)?))
                        .max(rel(s_at_zero_closed(m, k, SVariant::KPlusOne)?, s_sum(m, k + 1, 0.0)?))
                        .max(rel(
                            whipple_3f2(kf, 0.5, mf + 1.0)?,
                            terminating_3f2(kf, 1.0 - kf, 0.5, mf + 1.0, 1.0 - mf, u64::from(k))?,
                        ));
                }
                Ok(worst)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);

        let mut rng = ChaCha8Rng::seed_from_u64(WHIPPLE_SEED);
        let mut worst_random = 0.0f64;
        for _ in 0..samples {
            let m: u32 = rng.gen_range(3..=120);
            let k: u32 = rng.gen_range(1..=30.min(m - 2));
            let (kf, mf) = (f64::from(k), f64::from(m));
            let closed = whipple_3f2(kf, 0.5, mf + 1.0)?;
            let series = terminating_3f2(kf, 1.0 - kf, 0.5, mf + 1.0, 1.0 - mf, u64::from(k))?;
            worst_random = worst_random.max(rel(closed, series));
        }
        Ok((
            worst_grid <= 1e-11 && worst_random <= 1e-11,
            format!("grid max rel {worst_grid:.3e}, {samples} random max rel {worst_random:.3e}"),
        ))
    })
}

/// The constants `a` and `A`.
pub fn criterion_7(_opts: &VerifyOptions) -> CriterionReport {
    timed(7, "asymptotic constants", || {
        let c = constants();
        Ok((
            (c.a - 1.8558).abs() <= 5e-5 && (c.big_a - 1.3951).abs() <= 5e-5,
            format!("a = {:.10}, A = {:.10}", c.a, c.big_a),
        ))
    })
}

/// `tau_1*` in closed form, and `tau(2000, k)` just above `tau_k*`.
pub fn criterion_8(opts: &VerifyOptions) -> CriterionReport {
    timed(8, "limit consistency", || {
        let j = bessel_first_zero(1.5)?;
        let t1 = tau_star_exact(1)?;
        let err1 = (t1 - 1.0 / (1.0 + j * j).sqrt()).abs();
        let tan_err = (j.tan() - j).abs() / j;
        let mut gaps = Vec::new();
        let mut ok = err1 <= 1e-12 && tan_err <= 1e-12;
        for k in 1..=5u32 {
            let index = Index::new(2000, k)?;
            let w = omega(index)?.omega + opts.omega_perturbation;
            let direct = tau_direct_at(index, w)?.value;
            let star = tau_star_exact(k)?;
            let gap = (direct - star) / star;
            ok &= gap > 0.0 && gap < 0.01;
            gaps.push(format!("{gap:.2e}"));
        }
        Ok((
            ok,
            format!("|tau_1* - 1/sqrt(1+j²)| = {err1:.1e}, relative gaps [{}]", gaps.join(", ")),
        ))
    })
}

/// `|asymptotic/exact - 1| k^{1/6}` bounded and non-increasing.
pub fn criterion_9(opts: &VerifyOptions) -> CriterionReport {
    timed(9, "asymptotic trend", || {
        let ks: &[u32] = if opts.full {
            &[8, 16, 32, 64, 128, 256, 512]
        } else {
            &[8, 16, 32, 64, 128]
        };
        let scaled = ks
            .iter()
            .map(|&k| {
                let r = tau_star_asymptotic(k)? / tau_star_exact(k)?;
                Ok((r - 1.0).abs() * f64::from(k).powf(1.0 / 6.0))
            })
            .collect::<Result<Vec<f64>>>()?;
        let bounded = scaled.iter().all(|&s| s <= 5.0);
        let monotone = scaled.windows(2).all(|w| w[1] <= w[0]);
        let shown: Vec<String> = scaled.iter().map(|s| format!("{s:.4}")).collect();
        Ok((bounded && monotone, format!("scaled errors [{}]", shown.join(", "))))
    })
}

/// `table` output does not depend on the worker count.
pub fn criterion_10(opts: &VerifyOptions) -> CriterionReport {
    timed(10, "table determinism", || {
        let spec = SweepSpec {
            k_min: 1,
            k_max: if opts.full { 30 } else { 8 },
            n_range: NRange::Auto,
            columns: Column::ALL.to_vec(),
            format: Format::Csv,
        };
        let one = render_table(&spec, 1)?;
        let many = render_table(&spec, 4)?;
        let json_one = render_table(&SweepSpec { format: Format::Json, ..spec.clone() }, 1)?;
        let json_many = render_table(&SweepSpec { format: Format::Json, ..spec }, 3)?;
        Ok((
            one == many && json_one == json_many,
            format!("{} CSV bytes, {} JSON bytes", one.len(), json_one.len()),
        ))
    })
}

/// Every criterion in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    vec![
        criterion_1(opts),
        criterion_2(opts),
        criterion_3(opts),
        criterion_4(opts),
        criterion_5(opts),
        criterion_6(opts),
        criterion_7(opts),
        criterion_8(opts),
        criterion_9(opts),
        criterion_10(opts),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbed_root_is_caught() {
        let opts = VerifyOptions {
            full: false,
            omega_perturbation: 1e-6,
        };
        assert!(!criterion_2(&opts).passed);
    }

    #[test]
    fn cell_matches_golden_value() {
        let c = cell(3, 1, 0.0).unwrap();
        assert!((c.direct - 1.0 / 3.0).abs() < 1e-15);
        assert!(c.sandwich_ok);
    }
}
