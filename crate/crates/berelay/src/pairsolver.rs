//! Single sender/forwarder bandwidth-exchange allocation.
//!
//! A sender `s` hands part of its bandwidth to a forwarder `f`; in return
//! `f` relays a rate `r_c` of `s`'s traffic toward the access point over its
//! own uplink. For a bandwidth split `(w_s, w_f)` with
//! `w_s + w_f = w_s_in + w_f_in`, the achievable rate pairs satisfy
//!
//! ```text
//! r_s <= min(R_sf(w_s), R_s0(w_s) + r_c)      relay or direct path
//! r_c + r_f <= R_f0(w_f)                      forwarder uplink budget
//! ```
//!
//! where `R_sf`, `R_s0`, `R_f0` are the Shannon rates of the
//! sender-forwarder, sender-AP and forwarder-AP links. The solvers here
//! maximize one of three objectives over `(w_s, r_c)` subject to that rate
//! region:
//!
//! * [`solve_alpha_fair`]: summed alpha-fair utility, neither node dropping
//!   below its initial rate;
//! * [`solve_maxmin`]: the minimum of the two rates, same constraints;
//! * [`solve_minrate_feasible`]: sum rate with both rates held above a given
//!   floor instead of the initial rates; infeasibility is a normal return.
//!
//! All three objectives are concave in `(w_s, r_c)` jointly, so each reduces
//! to a golden-section search over `w_s` wrapping a golden-section search
//! over `r_c`, after the feasible `w_s` interval is located by bisection.

use crate::error::{Error, Result};
use crate::netmodel::direct_rate;
use crate::numeric::{bisect_lower, bisect_upper, golden_section_max};
use crate::utility::{alpha_utility, pair_utility_gain};

/// Default convergence tolerance, in objective units.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Gains at or below this threshold are reported as exactly zero and the
/// solvers return the untouched initial allocation.
pub const GAIN_SNAP: f64 = 1e-9;

const FEAS_XTOL: f64 = 1e-9;
const FEAS_SLACK: f64 = 1e-12;

/// One candidate sender/forwarder pairing, with the fields the rate region
/// depends on. Build through [`PairProblem::new`]; `r_s_in` and `r_f_in` are
/// always the direct rates recomputable from the other fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairProblem {
    /// Sender's initial bandwidth, MHz.
    pub w_s_in: f64,
    /// Forwarder's initial bandwidth, MHz.
    pub w_f_in: f64,
    /// Transmit power of both nodes, mW.
    pub p: f64,
    /// Sender-to-AP link gain, MHz/mW.
    pub rho_s0: f64,
    /// Forwarder-to-AP link gain, MHz/mW.
    pub rho_f0: f64,
    /// Sender-to-forwarder link gain, MHz/mW.
    pub rho_sf: f64,
    /// Sender's initial direct rate, Mbps.
    pub r_s_in: f64,
    /// Forwarder's initial direct rate, Mbps.
    pub r_f_in: f64,
    /// Fairness parameter for the alpha-fair objective.
    pub alpha: f64,
}

/// The three link capacities at a given bandwidth split, Mbps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkRates {
    pub r_sf: f64,
    pub r_s0: f64,
    pub r_f0: f64,
}

impl PairProblem {
    pub fn new(
        w_s_in: f64,
        w_f_in: f64,
        p: f64,
        rho_s0: f64,
        rho_f0: f64,
        rho_sf: f64,
        alpha: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("w_s_in", w_s_in),
            ("w_f_in", w_f_in),
            ("p", p),
            ("rho_s0", rho_s0),
            ("rho_f0", rho_f0),
            ("rho_sf", rho_sf),
            ("alpha", alpha),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        let problem = PairProblem {
            w_s_in,
            w_f_in,
            p,
            rho_s0,
            rho_f0,
            rho_sf,
            r_s_in: direct_rate(w_s_in, p, rho_s0),
            r_f_in: direct_rate(w_f_in, p, rho_f0),
            alpha,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Check the eligibility preconditions and internal consistency.
    pub fn validate(&self) -> Result<()> {
        if self.p <= 0.0 || self.w_total() <= 0.0 {
            return Err(Error::Precondition(
                "power and total bandwidth must be positive".into(),
            ));
        }
        if self.rho_sf < self.rho_s0 {
            return Err(Error::Precondition(format!(
                "forwarder ineligible: rho_sf = {} < rho_s0 = {}",
                self.rho_sf, self.rho_s0
            )));
        }
        if self.rho_f0 < self.rho_s0 {
            return Err(Error::Precondition(format!(
                "forwarder ineligible: rho_f0 = {} < rho_s0 = {}",
                self.rho_f0, self.rho_s0
            )));
        }
        if self.r_s_in != direct_rate(self.w_s_in, self.p, self.rho_s0)
            || self.r_f_in != direct_rate(self.w_f_in, self.p, self.rho_f0)
        {
            return Err(Error::Precondition(
                "initial rates are inconsistent with bandwidths and gains".into(),
            ));
        }
        if self.alpha >= 1.0 && (self.r_s_in == 0.0 || self.r_f_in == 0.0) {
            return Err(Error::Precondition(format!(
                "alpha = {} needs strictly positive initial rates (got {}, {})",
                self.alpha, self.r_s_in, self.r_f_in
            )));
        }
        Ok(())
    }

    /// Combined bandwidth of the pair, MHz.
    pub fn w_total(&self) -> f64 {
        self.w_s_in + self.w_f_in
    }

    /// The three link capacities when the sender holds `w_s` and the
    /// forwarder `w_f` MHz.
    pub fn link_rates(&self, w_s: f64, w_f: f64) -> LinkRates {
        LinkRates {
            r_sf: direct_rate(w_s, self.p, self.rho_sf),
            r_s0: direct_rate(w_s, self.p, self.rho_s0),
            r_f0: direct_rate(w_f, self.p, self.rho_f0),
        }
    }
}

/// A resolved pairwise allocation: the bandwidth split, the achieved rates,
/// the relayed rate and the objective gain over the initial operating point.
///
/// `gain` is measured in the units of the objective that produced the
/// allocation: utility for [`solve_alpha_fair`], minimum-rate improvement
/// for [`solve_maxmin`], sum-rate improvement for [`solve_minrate_feasible`]
/// (which may be negative when the rate floor forces a rebalance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAllocation {
    pub w_s_be: f64,
    pub w_f_be: f64,
    pub r_s_be: f64,
    pub r_f_be: f64,
    pub r_c: f64,
    pub gain: f64,
}

impl PairAllocation {
    /// The no-cooperation operating point: initial bandwidths, initial
    /// rates, nothing relayed. Feasible for every valid problem.
    pub fn initial(problem: &PairProblem) -> Self {
        PairAllocation {
            w_s_be: problem.w_s_in,
            w_f_be: problem.w_f_in,
            r_s_be: problem.r_s_in,
            r_f_be: problem.r_f_in,
            r_c: 0.0,
            gain: 0.0,
        }
    }

    /// Whether the allocation sits inside the pair's rate region and
    /// bandwidth budget, with `tol` slack on every constraint.
    pub fn satisfies_constraints(&self, problem: &PairProblem, tol: f64) -> bool {
        let lr = problem.link_rates(self.w_s_be, self.w_f_be);
        self.w_s_be >= 0.0
            && self.w_f_be >= 0.0
            && self.r_c >= -tol
            && self.w_s_be + self.w_f_be <= problem.w_total() + tol
            && self.r_s_be <= lr.r_sf.min(lr.r_s0 + self.r_c) + tol
            && self.r_c + self.r_f_be <= lr.r_f0 + tol
    }
}

/// Objective selector, shared by the solvers and the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairObjective {
    /// Summed alpha-fair utility; rates floored at the initial rates.
    AlphaFair,
    /// Minimum of the two rates; rates floored at the initial rates.
    MaxMin,
    /// Sum rate; both rates floored at the given minimum instead.
    SumWithMinRate(f64),
}

impl PairObjective {
    /// Lower bounds the two achieved rates must meet.
    pub(crate) fn floors(&self, problem: &PairProblem) -> (f64, f64) {
        match self {
            PairObjective::AlphaFair | PairObjective::MaxMin => (problem.r_s_in, problem.r_f_in),
            PairObjective::SumWithMinRate(r_min) => (*r_min, *r_min),
        }
    }

    /// Objective value at a rate pair.
    pub(crate) fn value(&self, r_s: f64, r_f: f64, alpha: f64) -> f64 {
        match self {
            PairObjective::AlphaFair => alpha_utility(r_s, alpha) + alpha_utility(r_f, alpha),
            PairObjective::MaxMin => r_s.min(r_f),
            PairObjective::SumWithMinRate(_) => r_s + r_f,
        }
    }

    /// Gain convention: objective value relative to the initial rates.
    pub(crate) fn gain(&self, r_s: f64, r_f: f64, problem: &PairProblem) -> f64 {
        match self {
            PairObjective::AlphaFair => {
                pair_utility_gain(r_s, r_f, problem.r_s_in, problem.r_f_in, problem.alpha)
            }
            PairObjective::MaxMin => r_s.min(r_f) - problem.r_s_in.min(problem.r_f_in),
            PairObjective::SumWithMinRate(_) => r_s + r_f - (problem.r_s_in + problem.r_f_in),
        }
    }
}

/// Maximize the summed alpha-fair utility of the pair over the rate region,
/// keeping both nodes at or above their initial rates.
///
/// The returned gain is within `tol` of the global maximum. Gains at or
/// below [`GAIN_SNAP`] collapse to the exact initial allocation, which also
/// resolves flat zero-gain optima in favor of the point closest to the
/// initial bandwidths.
pub fn solve_alpha_fair(problem: &PairProblem, tol: f64) -> Result<PairAllocation> {
    Ok(solve(problem, PairObjective::AlphaFair, tol)?
        .expect("initial point is always feasible for the alpha-fair objective"))
}

/// Maximize `min(r_s, r_f)` over the same constraint set as
/// [`solve_alpha_fair`]. The problem's `alpha` field is not consulted.
pub fn solve_maxmin(problem: &PairProblem, tol: f64) -> Result<PairAllocation> {
    Ok(solve(problem, PairObjective::MaxMin, tol)?
        .expect("initial point is always feasible for the max-min objective"))
}

/// Maximize the sum rate with both rates held at or above `r_min`; the
/// initial-rate floors do not apply. Returns `None` when no point of the
/// rate region satisfies both minimums.
pub fn solve_minrate_feasible(
    problem: &PairProblem,
    r_min: f64,
    tol: f64,
) -> Result<Option<PairAllocation>> {
    if !(r_min >= 0.0) || !r_min.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "r_min must be finite and nonnegative, got {r_min}"
        )));
    }
    solve(problem, PairObjective::SumWithMinRate(r_min), tol)
}

/// Shared solver core. `None` only for an infeasible minimum-rate objective.
fn solve(problem: &PairProblem, objective: PairObjective, tol: f64) -> Result<Option<PairAllocation>> {
    problem.validate()?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be finite and positive, got {tol}"
        )));
    }
    let w_xtol = tol.clamp(1e-12, 1e-6);
    let w_tot = problem.w_total();
    let (floor_s, floor_f) = objective.floors(problem);

    // Slack of the rate region above the floors at a given sender bandwidth;
    // concave in w_s, so its nonnegative set is an interval.
    let margin = |w_s: f64| -> f64 {
        let lr = problem.link_rates(w_s, w_tot - w_s);
        let lo_c = (floor_s - lr.r_s0).max(0.0);
        (lr.r_sf - floor_s).min(lr.r_f0 - floor_f - lo_c)
    };

    // A feasible anchor inside that interval. The initial split works for
    // the initial-rate floors; a minimum-rate floor needs a search and may
    // come up empty.
    let anchor = match objective {
        PairObjective::AlphaFair | PairObjective::MaxMin => problem.w_s_in,
        PairObjective::SumWithMinRate(_) => {
            let best = golden_section_max(0.0, w_tot, FEAS_XTOL, margin);
            if best.value < 0.0 {
                return Ok(None);
            }
            best.x
        }
    };
    debug_assert!(margin(anchor) >= -FEAS_SLACK);
    let w_lo = bisect_lower(0.0, anchor, FEAS_XTOL, |w| margin(w) >= -FEAS_SLACK);
    let w_hi = bisect_upper(anchor, w_tot, FEAS_XTOL, |w| margin(w) >= -FEAS_SLACK);

    let outer = golden_section_max(w_lo, w_hi, w_xtol, |w_s| {
        inner_max(problem, objective, floor_s, floor_f, w_s)
            .map(|(_, v)| v)
            .unwrap_or(f64::NEG_INFINITY)
    });

    // Tie-break toward the untouched initial allocation when cooperating
    // gains nothing.
    if matches!(
        objective,
        PairObjective::AlphaFair | PairObjective::MaxMin
    ) {
        let init_value = objective.value(problem.r_s_in, problem.r_f_in, problem.alpha);
        if outer.value <= init_value + GAIN_SNAP {
            return Ok(Some(PairAllocation::initial(problem)));
        }
    }

    let Some((r_c, _)) = inner_max(problem, objective, floor_s, floor_f, outer.x) else {
        return Ok(match objective {
            PairObjective::SumWithMinRate(_) => None,
            _ => Some(PairAllocation::initial(problem)),
        });
    };
    let w_s = outer.x;
    let lr = problem.link_rates(w_s, w_tot - w_s);
    let r_s = polish_floor(lr.r_sf.min(lr.r_s0 + r_c), floor_s);
    let r_f = polish_floor(lr.r_f0 - r_c, floor_f);
    Ok(Some(PairAllocation {
        w_s_be: w_s,
        w_f_be: w_tot - w_s,
        r_s_be: r_s,
        r_f_be: r_f,
        r_c,
        gain: objective.gain(r_s, r_f, problem),
    }))
}

/// A binding floor is met exactly at the true optimum; the search can land
/// a hair below it through interval-endpoint rounding. Snap such rates up
/// to the floor so downstream floor comparisons see the mathematical value.
fn polish_floor(r: f64, floor: f64) -> f64 {
    if r < floor && r >= floor - 1e-9 * (1.0 + floor.abs()) {
        floor
    } else {
        r
    }
}

/// Best relayed rate at a fixed bandwidth split: one concave scalar search
/// over `r_c`. Relaying beyond `R_sf - R_s0` can no longer raise the
/// sender's rate, so the search is capped there without loss.
fn inner_max(
    problem: &PairProblem,
    objective: PairObjective,
    floor_s: f64,
    floor_f: f64,
    w_s: f64,
) -> Option<(f64, f64)> {
    let lr = problem.link_rates(w_s, problem.w_total() - w_s);
    let lo_c = (floor_s - lr.r_s0).max(0.0);
    let mut hi_c = (lr.r_f0 - floor_f).min(lr.r_sf - lr.r_s0);
    if hi_c < lo_c {
        if hi_c < lo_c - FEAS_SLACK.max(1e-9 * lo_c.abs()) {
            return None;
        }
        hi_c = lo_c;
    }
    let ctol = 1e-9 * (1.0 + (hi_c - lo_c));
    let best = golden_section_max(lo_c, hi_c, ctol, |r_c| {
        let r_s = lr.r_sf.min(lr.r_s0 + r_c);
        objective.value(r_s, lr.r_f0 - r_c, problem.alpha)
    });
    Some((best.x, best.value))
}

pub mod oracle;
