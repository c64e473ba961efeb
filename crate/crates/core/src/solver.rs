//! Bisection solver for the link-selection threshold `rho`.
//!
//! The relay buffer is stable at maximum throughput when the two hop rates
//! balance: `E[(1-d) C_s] = E[d C_r]`. The difference
//! `g(rho) = E[(1-d) C_s] - E[d C_r]` is monotone non-decreasing in `rho`
//! (raising the threshold selects the source link more often), negative as
//! `rho -> 0` and positive as `rho -> inf`, so a sign-change bracket in
//! `log2(rho)` always exists and bisection is reliable.

use crate::error::{Error, Result};
use crate::rates::{rate_relay_hop, rate_source_hop, BranchPolicy, HopPair};

/// Hard limit for bracket auto-expansion, in `log2(rho)`.
const BRACKET_LIMIT: f64 = 40.0;

/// Tolerances and bracket for [`solve_rho`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSpec {
    /// Stop once `|E[(1-d) C_s] - E[d C_r]| <= rate_tolerance` (bits/slot).
    pub rate_tolerance: f64,
    /// Initial search bracket in `log2(rho)`; auto-expanded on demand up to
    /// `+/-40` before the solver reports failure.
    pub bracket: (f64, f64),
    /// Maximum number of bisection steps.
    pub max_iterations: u32,
}

impl SolverSpec {
    pub fn new(rate_tolerance: f64, bracket: (f64, f64), max_iterations: u32) -> Result<Self> {
        if !(rate_tolerance.is_finite() && rate_tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "rate_tolerance must be positive, got {rate_tolerance}"
            )));
        }
        if !(bracket.0.is_finite() && bracket.1.is_finite() && bracket.0 < bracket.1) {
            return Err(Error::Domain(format!(
                "bracket lower bound must be below the upper bound, got {bracket:?}"
            )));
        }
        if max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be at least 1".into()));
        }
        Ok(Self {
            rate_tolerance,
            bracket,
            max_iterations,
        })
    }
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            rate_tolerance: 1e-9,
            bracket: (-20.0, 20.0),
            max_iterations: 200,
        }
    }
}

/// Solved operating point of the adaptive link-selection scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlsbrSolution {
    /// Threshold that balances the two hop rates.
    pub rho: f64,
    /// Common hop rate at the solution (bits/slot); this is the scheme rate.
    pub rate: f64,
    /// Remaining imbalance `E[(1-d) C_s] - E[d C_r]` at `rho`.
    pub residual: f64,
    /// Bisection steps taken.
    pub iterations: u32,
}

/// Find the `rho` equalizing the two hop rates by bisection on `log2(rho)`.
pub fn solve_rho(hops: &HopPair, spec: &SolverSpec, policy: &BranchPolicy) -> Result<AlsbrSolution> {
    let gap = |log2_rho: f64| -> Result<(f64, f64)> {
        let rho = 2.0_f64.powf(log2_rho);
        let source = rate_source_hop(hops, rho, policy)?;
        let relay = rate_relay_hop(hops, rho, policy)?;
        Ok((source - relay, 0.5 * (source + relay)))
    };

    let (mut lo, mut hi) = spec.bracket;
    let (mut g_lo, _) = gap(lo)?;
    let (mut g_hi, _) = gap(hi)?;

    // Expand whichever end has the wrong sign, geometrically, up to the cap.
    while g_lo > 0.0 && lo > -BRACKET_LIMIT {
        lo = (lo - (hi - lo)).max(-BRACKET_LIMIT);
        g_lo = gap(lo)?.0;
    }
    while g_hi < 0.0 && hi < BRACKET_LIMIT {
        hi = (hi + (hi - lo)).min(BRACKET_LIMIT);
        g_hi = gap(hi)?.0;
    }
    if g_lo > 0.0 || g_hi < 0.0 {
        return Err(Error::NoSignChange(format!(
            "rate gap does not change sign over log2(rho) in [{lo}, {hi}] \
             (g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e})"
        )));
    }

    let mut iterations = 0;
    loop {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (g_mid, rate) = gap(mid)?;
        if g_mid.abs() <= spec.rate_tolerance {
            return Ok(AlsbrSolution {
                rho: 2.0_f64.powf(mid),
                rate,
                residual: g_mid,
                iterations,
            });
        }
        if g_mid > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if iterations >= spec.max_iterations {
            return Err(Error::NoConvergence(format!(
                "bisection did not reach the rate tolerance in {} iterations (log2(rho) = {mid})",
                spec.max_iterations
            )));
        }
    }
}

/// The ALSBR average rate: the common hop rate at the solved threshold.
pub fn alsbr_rate(hops: &HopPair, spec: &SolverSpec, policy: &BranchPolicy) -> Result<f64> {
    Ok(solve_rho(hops, spec, policy)?.rate)
}
