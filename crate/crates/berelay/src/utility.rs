//! The alpha-fair utility family.
//!
//! `U(r) = r^(1-alpha) / (1-alpha)` for `alpha != 1` and `U(r) = ln r` at
//! `alpha = 1`, interpolating sum-rate maximization (`alpha = 0`),
//! proportional fairness (`alpha = 1`) and max-min fairness (`alpha -> inf`).
//! Utilities are dimensionless; rates are in Mbps throughout the crate.

use crate::error::{Error, Result};

/// Objective selector for the pairwise allocation solvers.
///
/// The max-min marker never evaluates [`alpha_utility`]; it selects a
/// dedicated solver objective (the formula is meaningless at alpha = inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fairness {
    /// Alpha-fair utility with the given nonnegative parameter.
    Alpha(f64),
    /// Maximize the minimum rate of the pair.
    MaxMin,
}

impl Fairness {
    pub fn alpha(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "fairness parameter must be finite and nonnegative, got {alpha}"
            )));
        }
        Ok(Fairness::Alpha(alpha))
    }
}

/// Alpha-fair utility of a rate.
///
/// Uses the natural logarithm at `alpha = 1`; any other base rescales all
/// utilities by a positive constant and leaves every allocation and matching
/// decision unchanged. A zero rate under `alpha >= 1` maps to the
/// negative-infinity sentinel (the utility is unbounded below there).
///
/// Panics if `rate` or `alpha` is negative.
pub fn alpha_utility(rate: f64, alpha: f64) -> f64 {
    assert!(rate >= 0.0, "rate must be nonnegative, got {rate}");
    assert!(alpha >= 0.0, "alpha must be nonnegative, got {alpha}");
    if alpha == 1.0 {
        // ln(0) is -inf, which is exactly the sentinel we want.
        return rate.ln();
    }
    if rate == 0.0 && alpha > 1.0 {
        return f64::NEG_INFINITY;
    }
    rate.powf(1.0 - alpha) / (1.0 - alpha)
}

/// Utility gain of a cooperating pair over its non-cooperative rates:
/// `U(r_s_be) + U(r_f_be) - U(r_s_in) - U(r_f_in)`.
///
/// This is the quantity used both as the pairwise solver objective and as the
/// edge weight of the cooperation graph. Summed as per-node differences so
/// that unchanged rates contribute exactly zero.
pub fn pair_utility_gain(r_s_be: f64, r_f_be: f64, r_s_in: f64, r_f_in: f64, alpha: f64) -> f64 {
    (alpha_utility(r_s_be, alpha) - alpha_utility(r_s_in, alpha))
        + (alpha_utility(r_f_be, alpha) - alpha_utility(r_f_in, alpha))
}
