//! Closed-form joint CCDFs and average rates of the three relaying schemes.
//!
//! With `d` the one-bit link-selection variable (`d = 1` when the relay
//! transmits, i.e. `gamma_r / gamma_s >= rho`), the module evaluates:
//!
//! * `ccdf_source_selected` — `Pr(d = 0, gamma_s > x)`;
//! * `ccdf_relay_selected` — `Pr(d = 1, gamma_r > x)`;
//! * `rate_source_hop` / `rate_relay_hop` — `E[(1-d) C_s]` and `E[d C_r]`,
//!   the two sides of the buffer-stability balance;
//! * `rate_cubr` — `1/2 E[min(C_s, C_r)]` for the unbuffered relay;
//! * `rate_cbr` — `1/2 min(E[C_s], E[C_r])` for the conventional buffered
//!   relay;
//! * `asym_rate_*` — the interference-limited (`p_s = p_r = 1`, large
//!   `lambda`) asymptotes of the above;
//! * `appendix_terms` — the six tail integrals whose combination
//!   `T1 - p_s (T2 - T3) - p_r T4 + p_s p_r ((T2 - T3) - T5)` is
//!   `Pr(d = 1, gamma_s > x)`, each independently testable against
//!   quadrature.
//!
//! Every expression splits into two algebraic branches, one valid when
//! `mu_r != rho mu_s` and a limit form when `mu_r = rho mu_s`; the switch is
//! governed by [`BranchPolicy`] because the generic branch loses all
//! precision near equality. Factors `mu/(mu-1)` make `mu = 1` a removable
//! singularity, resolved by a symmetric perturbation average (evaluated at
//! `mu = 1 +/- 1e-4`), which cancels the linear error term.
//!
//! The relay-hop quantities are obtained from the source-hop ones by the hop
//! exchange `p_s <-> p_r`, `lambda_s <-> lambda_r`, `mu_s <-> mu_r`,
//! `rho -> 1/rho`; `rate_relay_hop` is written out directly in relay
//! variables and must agree with the exchanged `rate_source_hop` to rounding
//! error.

use crate::channel::LinkStatistics;
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::special::{dilog, integral_i_rate, integral_j, scaled_e1, RealPositive};
use std::f64::consts::LOG2_E;

/// The two hops of the network, each summarized by `(lambda, mu, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopPair {
    pub source: LinkStatistics,
    pub relay: LinkStatistics,
}

impl HopPair {
    pub fn new(source: LinkStatistics, relay: LinkStatistics) -> Self {
        Self { source, relay }
    }

    /// Swap the roles of the two hops (the variable exchange is completed by
    /// replacing `rho` with `1/rho` at the call site).
    pub fn exchanged(&self) -> Self {
        Self {
            source: self.relay,
            relay: self.source,
        }
    }
}

/// Switching rule between the `mu_r != rho mu_s` branch and its limit form.
///
/// The generic branch carries `(mu_r - rho mu_s)` denominators, so it is
/// numerically unusable near equality even though the limit exists; the
/// policy routes evaluation to the dedicated equal case once
/// `|mu_r - rho mu_s| <= equality_tolerance * max(mu_r, rho mu_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPolicy {
    pub equality_tolerance: f64,
}

impl BranchPolicy {
    pub fn new(equality_tolerance: f64) -> Result<Self> {
        if !(equality_tolerance.is_finite()
            && equality_tolerance > 0.0
            && equality_tolerance < 0.1)
        {
            return Err(Error::Domain(format!(
                "equality_tolerance must lie in (0, 0.1), got {equality_tolerance}"
            )));
        }
        Ok(Self { equality_tolerance })
    }

    fn is_equal(&self, mu_r: f64, rho_mu_s: f64) -> bool {
        (mu_r - rho_mu_s).abs() <= self.equality_tolerance * mu_r.abs().max(rho_mu_s.abs())
    }
}

impl Default for BranchPolicy {
    fn default() -> Self {
        Self {
            equality_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Distinct,
    Equal,
}

/// The six tail integrals of the `Pr(d = 1, gamma_s > x)` decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: f64,
    pub t6: f64,
}

impl AppendixTerms {
    /// Assemble `Pr(d = 1, gamma_s > x)`:
    /// `T1 - p_s (T2 - T3) - p_r T4 + p_s p_r ((T2 - T3) - T5)`.
    pub fn assemble(&self, p_s: f64, p_r: f64) -> f64 {
        let w = self.t2 - self.t3;
        self.t1 - p_s * w - p_r * self.t4 + p_s * p_r * (w - self.t5)
    }
}

// ---------------------------------------------------------------------------
// Derived mean-SNR scales
// ---------------------------------------------------------------------------

/// Harmonic combination of `rho lambda_s` and `lambda_r`:
/// `1/lambda_rho = 1/(rho lambda_s) + 1/lambda_r`.
pub fn lambda_rho(hops: &HopPair, rho: f64) -> Result<f64> {
    check_positive(rho, "rho")?;
    Ok(harmonic(rho * hops.source.lambda(), hops.relay.lambda()))
}

/// End-to-end mean SNR of the non-cognitive case:
/// `1/lambda_e = 1/lambda_s + 1/lambda_r`.
pub fn lambda_e(hops: &HopPair) -> f64 {
    harmonic(hops.source.lambda(), hops.relay.lambda())
}

fn harmonic(a: f64, b: f64) -> f64 {
    1.0 / (1.0 / a + 1.0 / b)
}

// ---------------------------------------------------------------------------
// mu = 1 removable singularity
// ---------------------------------------------------------------------------

const MU_ONE_TOL: f64 = 1e-6;
const MU_ONE_STEP: f64 = 1e-4;

/// Evaluate `f(mu)`, replacing `mu` within `MU_ONE_TOL` of 1 by the symmetric
/// average over `1 +/- MU_ONE_STEP`, which cancels the linear error term of
/// the removable singularity.
fn eval_mu_singular<F: FnMut(f64) -> Result<f64>>(mu: f64, mut f: F) -> Result<f64> {
    if (mu - 1.0).abs() <= MU_ONE_TOL {
        Ok(0.5 * (f(1.0 - MU_ONE_STEP)? + f(1.0 + MU_ONE_STEP)?))
    } else {
        f(mu)
    }
}

// ---------------------------------------------------------------------------
// Joint CCDFs
// ---------------------------------------------------------------------------

/// `exp(c/lambda_rho) E_1((rho x + c)/lambda_rho)`, computed in scaled form so
/// large `c/lambda_rho` cannot overflow.
fn exp_e1_shifted(rho_x: f64, c: f64, l_rho: f64) -> Result<f64> {
    Ok((-rho_x / l_rho).exp() * scaled_e1((rho_x + c) / l_rho)?)
}

/// `Pr(d = 0, gamma_s > x)`: the source link is selected and its SNR exceeds `x`.
pub fn ccdf_source_selected(
    hops: &HopPair,
    rho: f64,
    x: f64,
    policy: &BranchPolicy,
) -> Result<f64> {
    check_positive(rho, "rho")?;
    check_non_negative(x, "x")?;
    let (ls, mus, ps) = unpack(&hops.source);
    let (lr, mur, pr) = unpack(&hops.relay);
    let l_rho = lambda_rho(hops, rho)?;

    let h = l_rho / (rho * ls);
    let ex = (-x / ls).exp();
    let e = (-rho * x / l_rho).exp();
    let m = mus / (x + mus);

    if policy.is_equal(mur, rho * mus) {
        let a = mus / ls;
        let b = mur / lr;
        let a_r = exp_e1_shifted(rho * x, mur, l_rho)?;
        let value = (1.0 - ps) * (ex - (1.0 - pr) * h * e)
            - 0.5 * ps * pr * e * m * m
            + ps * m * (ex - (1.0 - pr) * e + 0.5 * pr * (b - a) * e)
            + (ps * (1.0 - pr) * b - pr * (1.0 - ps) * a + 0.5 * ps * pr * (a * a - b * b))
                * a_r;
        Ok(value)
    } else {
        let d = mur - rho * mus;
        let a_s = exp_e1_shifted(rho * x, rho * mus, l_rho)?;
        let a_r = exp_e1_shifted(rho * x, mur, l_rho)?;
        let k = 1.0 - pr + mur * pr / d;
        let c_s = k + lr * mur * pr / (d * d);
        let c_r = 1.0 - ps - rho * mus * ps / d + (rho * ls) * (rho * mus) * ps / (d * d);
        let value = (1.0 - ps) * (ex - (1.0 - pr) * h * e)
            + ps * m * (ex - k * e)
            + ps * c_s * (rho * mus / lr) * a_s
            - pr * c_r * (mur / (rho * ls)) * a_r;
        Ok(value)
    }
}

/// `Pr(d = 1, gamma_r > x)`: the relay link is selected and its SNR exceeds `x`.
///
/// Obtained from [`ccdf_source_selected`] through the hop exchange.
pub fn ccdf_relay_selected(
    hops: &HopPair,
    rho: f64,
    x: f64,
    policy: &BranchPolicy,
) -> Result<f64> {
    check_positive(rho, "rho")?;
    ccdf_source_selected(&hops.exchanged(), 1.0 / rho, x, policy)
}

// ---------------------------------------------------------------------------
// ALSBR per-hop rates
// ---------------------------------------------------------------------------

/// `E[(1-d) C_s]`: expected rate carried by the source-relay hop under
/// adaptive link selection.
pub fn rate_source_hop(hops: &HopPair, rho: f64, policy: &BranchPolicy) -> Result<f64> {
    check_positive(rho, "rho")?;
    let (ls, mus, ps) = unpack(&hops.source);
    let (lr, mur, pr) = unpack(&hops.relay);
    let branch = if policy.is_equal(mur, rho * mus) {
        Branch::Equal
    } else {
        Branch::Distinct
    };
    eval_mu_singular(mus, |mus| {
        source_hop_rate_at(ls, mus, ps, lr, mur, pr, rho, branch)
    })
}

#[allow(clippy::too_many_arguments)]
fn source_hop_rate_at(
    ls: f64,
    mus: f64,
    ps: f64,
    lr: f64,
    mur: f64,
    pr: f64,
    rho: f64,
    branch: Branch,
) -> Result<f64> {
    let l_rho = harmonic(rho * ls, lr);
    let l_sel = l_rho / rho; // the I_1/J scale of the selected-source terms
    let h = l_rho / (rho * ls);

    let one = RealPositive::new(1.0)?;
    let rp_ls = RealPositive::new(ls)?;
    let rp_lsel = RealPositive::new(l_sel)?;
    let rp_mus = RealPositive::new(mus)?;

    let i1_one_ls = integral_i_rate(1, one, rp_ls)?;
    let i1_mus_ls = integral_i_rate(1, rp_mus, rp_ls)?;
    let i1_one_sel = integral_i_rate(1, one, rp_lsel)?;
    let i1_mus_sel = integral_i_rate(1, rp_mus, rp_lsel)?;

    let f1 = mus / (mus - 1.0);

    match branch {
        Branch::Distinct => {
            let d = mur - rho * mus;
            let k = 1.0 - pr + mur * pr / d;
            let c_s = (k + lr * mur * pr / (d * d)) * (rho * mus * ps / lr);
            let c_r = (1.0 - ps - rho * mus * ps / d + (rho * ls) * (rho * mus) * ps / (d * d))
                * (mur * pr / (rho * ls));
            let mut rate = (1.0 - ps) * (i1_one_ls - (1.0 - pr) * h * i1_one_sel)
                + ps * f1 * (i1_one_ls - i1_mus_ls - k * (i1_one_sel - i1_mus_sel));
            if c_s != 0.0 {
                rate += c_s * integral_j(rp_mus, rp_lsel)?;
            }
            if c_r != 0.0 {
                rate -= c_r * integral_j(RealPositive::new(mur / rho)?, rp_lsel)?;
            }
            Ok(rate)
        }
        Branch::Equal => {
            let a = mus / ls;
            let b = mur / lr;
            let i2_mus_sel = integral_i_rate(2, rp_mus, rp_lsel)?;
            let j_coef =
                ps * (1.0 - pr) * b - pr * (1.0 - ps) * a + 0.5 * ps * pr * (a * a - b * b);
            let mut rate = (1.0 - ps) * (i1_one_ls - (1.0 - pr) * h * i1_one_sel)
                + ps * f1 * (i1_one_ls - i1_mus_ls)
                - ((ps * (1.0 - pr) - 0.5 * ps * pr * (b - a)) * f1 + 0.5 * ps * pr * f1 * f1)
                    * (i1_one_sel - i1_mus_sel)
                + 0.5 * ps * pr * f1 * i2_mus_sel;
            if j_coef != 0.0 {
                rate += j_coef * integral_j(rp_mus, rp_lsel)?;
            }
            Ok(rate)
        }
    }
}

/// `E[d C_r]`: expected rate carried by the relay-destination hop under
/// adaptive link selection.
///
/// Written out directly in relay variables; identical (up to rounding) to
/// `rate_source_hop(&hops.exchanged(), 1/rho, policy)`.
pub fn rate_relay_hop(hops: &HopPair, rho: f64, policy: &BranchPolicy) -> Result<f64> {
    check_positive(rho, "rho")?;
    let (ls, mus, ps) = unpack(&hops.source);
    let (lr, mur, pr) = unpack(&hops.relay);
    let branch = if policy.is_equal(mur, rho * mus) {
        Branch::Equal
    } else {
        Branch::Distinct
    };
    eval_mu_singular(mur, |mur| {
        relay_hop_rate_at(ls, mus, ps, lr, mur, pr, rho, branch)
    })
}

#[allow(clippy::too_many_arguments)]
fn relay_hop_rate_at(
    ls: f64,
    mus: f64,
    ps: f64,
    lr: f64,
    mur: f64,
    pr: f64,
    rho: f64,
    branch: Branch,
) -> Result<f64> {
    let l_rho = harmonic(rho * ls, lr);
    let h = l_rho / lr;

    let one = RealPositive::new(1.0)?;
    let rp_lr = RealPositive::new(lr)?;
    let rp_lrho = RealPositive::new(l_rho)?;
    let rp_mur = RealPositive::new(mur)?;

    let i1_one_lr = integral_i_rate(1, one, rp_lr)?;
    let i1_mur_lr = integral_i_rate(1, rp_mur, rp_lr)?;
    let i1_one_sel = integral_i_rate(1, one, rp_lrho)?;
    let i1_mur_sel = integral_i_rate(1, rp_mur, rp_lrho)?;

    let f1 = mur / (mur - 1.0);

    match branch {
        Branch::Distinct => {
            let d = mur - rho * mus;
            let k = 1.0 - ps - rho * mus * ps / d;
            let c_r = (k + (rho * ls) * (rho * mus) * ps / (d * d)) * (mur * pr / (rho * ls));
            let c_s = (1.0 - pr + mur * pr / d + lr * mur * pr / (d * d))
                * (rho * mus * ps / lr);
            let mut rate = (1.0 - pr) * (i1_one_lr - (1.0 - ps) * h * i1_one_sel)
                + pr * f1 * (i1_one_lr - i1_mur_lr - k * (i1_one_sel - i1_mur_sel));
            if c_r != 0.0 {
                rate += c_r * integral_j(rp_mur, rp_lrho)?;
            }
            if c_s != 0.0 {
                rate -= c_s * integral_j(RealPositive::new(rho * mus)?, rp_lrho)?;
            }
            Ok(rate)
        }
        Branch::Equal => {
            let a = mus / ls;
            let b = mur / lr;
            let i2_mur_sel = integral_i_rate(2, rp_mur, rp_lrho)?;
            let j_coef =
                pr * (1.0 - ps) * a - ps * (1.0 - pr) * b + 0.5 * ps * pr * (b * b - a * a);
            let mut rate = (1.0 - pr) * (i1_one_lr - (1.0 - ps) * h * i1_one_sel)
                + pr * f1 * (i1_one_lr - i1_mur_lr)
                - ((pr * (1.0 - ps) - 0.5 * ps * pr * (a - b)) * f1 + 0.5 * ps * pr * f1 * f1)
                    * (i1_one_sel - i1_mur_sel)
                + 0.5 * ps * pr * f1 * i2_mur_sel;
            if j_coef != 0.0 {
                rate += j_coef * integral_j(rp_mur, rp_lrho)?;
            }
            Ok(rate)
        }
    }
}

// ---------------------------------------------------------------------------
// Conventional schemes
// ---------------------------------------------------------------------------

/// Mean per-slot rate of a single hop, `E[C] = E[log2(1 + gamma)]`.
pub fn hop_mean_rate(link: &LinkStatistics) -> Result<f64> {
    let (lambda, mu, p) = unpack(link);
    eval_mu_singular(mu, |mu| {
        let one = RealPositive::new(1.0)?;
        let rp_l = RealPositive::new(lambda)?;
        let rp_mu = RealPositive::new(mu)?;
        let i1_one = integral_i_rate(1, one, rp_l)?;
        let i1_mu = integral_i_rate(1, rp_mu, rp_l)?;
        Ok((1.0 - p) * i1_one + p * mu / (mu - 1.0) * (i1_one - i1_mu))
    })
}

/// Average rate of the conventional unbuffered relay,
/// `1/2 E[min(C_s, C_r)]`, averaged over the end-to-end CCDF
/// `F_s^c(x) F_r^c(x)`.
///
/// The branch condition degenerates to `mu_r` versus `mu_s` here (no `rho`
/// is involved in the two-slot scheme).
pub fn rate_cubr(hops: &HopPair, policy: &BranchPolicy) -> Result<f64> {
    let (ls, mus, ps) = unpack(&hops.source);
    let (lr, mur, pr) = unpack(&hops.relay);
    let branch = if policy.is_equal(mur, mus) {
        Branch::Equal
    } else {
        Branch::Distinct
    };
    eval_mu_singular(mus, |mus| {
        eval_mu_singular(mur, |mur| cubr_rate_at(ls, mus, ps, lr, mur, pr, branch))
    })
}

fn cubr_rate_at(
    ls: f64,
    mus: f64,
    ps: f64,
    lr: f64,
    mur: f64,
    pr: f64,
    branch: Branch,
) -> Result<f64> {
    let le = harmonic(ls, lr);
    let one = RealPositive::new(1.0)?;
    let rp_le = RealPositive::new(le)?;
    let rp_mus = RealPositive::new(mus)?;
    let i1_one = integral_i_rate(1, one, rp_le)?;
    let i1_mus = integral_i_rate(1, rp_mus, rp_le)?;

    match branch {
        Branch::Distinct => {
            let dm = mur - mus;
            let rp_mur = RealPositive::new(mur)?;
            let i1_mur = integral_i_rate(1, rp_mur, rp_le)?;
            Ok(0.5
                * ((1.0 - ps) * (1.0 - pr) * i1_one
                    + ps * mus / (mus - 1.0) * (1.0 - pr + pr * mur / dm) * (i1_one - i1_mus)
                    + pr * mur / (mur - 1.0) * (1.0 - ps - ps * mus / dm) * (i1_one - i1_mur)))
        }
        Branch::Equal => {
            let f1 = mus / (mus - 1.0);
            let i2_mus = integral_i_rate(2, rp_mus, rp_le)?;
            Ok(0.5
                * ((1.0 - ps) * (1.0 - pr) * i1_one - ps * pr * f1 * i2_mus
                    + ((ps * (1.0 - pr) + pr * (1.0 - ps)) * f1 + ps * pr * f1 * f1)
                        * (i1_one - i1_mus)))
        }
    }
}

/// Average rate of the conventional buffered relay,
/// `1/2 min(E[C_s], E[C_r])`.
pub fn rate_cbr(hops: &HopPair) -> Result<f64> {
    let source = hop_mean_rate(&hops.source)?;
    let relay = hop_mean_rate(&hops.relay)?;
    Ok(0.5 * source.min(relay))
}

// ---------------------------------------------------------------------------
// Interference-limited (high SNR) asymptotes
// ---------------------------------------------------------------------------

/// High-SNR asymptote of `E[(1-d) C_s]` (interference-limited regime,
/// `p_s = p_r = 1`). Branch selection uses the default [`BranchPolicy`].
pub fn asym_rate_source_hop(hops: &HopPair, rho: f64) -> Result<f64> {
    check_positive(rho, "rho")?;
    let mus = hops.source.mu();
    let mur = hops.relay.mu();
    let policy = BranchPolicy::default();
    if policy.is_equal(mur, rho * mus) {
        eval_mu_singular(mus, |mu| {
            Ok(0.5 * mu / (mu - 1.0) * (LOG2_E + (mu - 2.0) / (mu - 1.0) * mu.log2()))
        })
    } else {
        eval_mu_singular(mus, |mu| {
            let d = mur - rho * mu;
            Ok(-rho * mu / d * (mu / (mu - 1.0)) * mu.log2()
                + rho * mu * mur / (d * d)
                    * LOG2_E
                    * (dilog(mu)? - dilog(mur / rho)?))
        })
    }
}

/// High-SNR asymptote of `E[d C_r]`, by hop exchange of
/// [`asym_rate_source_hop`].
pub fn asym_rate_relay_hop(hops: &HopPair, rho: f64) -> Result<f64> {
    check_positive(rho, "rho")?;
    asym_rate_source_hop(&hops.exchanged(), 1.0 / rho)
}

/// High-SNR asymptote of the CUBR rate.
pub fn asym_rate_cubr(hops: &HopPair) -> Result<f64> {
    let mus = hops.source.mu();
    let mur = hops.relay.mu();
    let policy = BranchPolicy::default();
    if policy.is_equal(mur, mus) {
        eval_mu_singular(mus, |mu| {
            let f1 = mu / (mu - 1.0);
            Ok(0.5 * LOG2_E * (-f1 + f1 * f1 * mu.ln()))
        })
    } else {
        // Limit of 1/2 [ (mu_s/(mu_s-1))(mu_r/(mu_r-mu_s)) log2(mu_s)
        //              - (mu_r/(mu_r-1))(mu_s/(mu_r-mu_s)) log2(mu_r) ];
        // consistent with the equal-mu form as mu_r -> mu_s.
        eval_mu_singular(mus, |mus| {
            eval_mu_singular(mur, |mur| {
                Ok(0.5 * mus * mur / (mur - mus)
                    * (mus.log2() / (mus - 1.0) - mur.log2() / (mur - 1.0)))
            })
        })
    }
}

/// High-SNR asymptote of the CBR rate,
/// `1/2 min(mu_s/(mu_s-1) log2(mu_s), mu_r/(mu_r-1) log2(mu_r))`.
pub fn asym_rate_cbr(hops: &HopPair) -> Result<f64> {
    let per_hop = |mu: f64| eval_mu_singular(mu, |m| Ok(m / (m - 1.0) * m.log2()));
    let s = per_hop(hops.source.mu())?;
    let r = per_hop(hops.relay.mu())?;
    Ok(0.5 * s.min(r))
}

// ---------------------------------------------------------------------------
// Appendix term decomposition
// ---------------------------------------------------------------------------

/// Evaluate the six tail integrals behind `Pr(d = 1, gamma_s > x)`.
///
/// Each term equals its defining integral:
///
/// ```text
/// T1 = 1/lambda_s int_x^inf exp(-rho s / lambda_rho) ds
/// T2 = rho/lambda_rho int_x^inf (1 - mu_s/(s+mu_s) - lambda_rho mu_s / (rho (s+mu_s)^2)) exp(-rho s/lambda_rho) ds
/// T3 = rho/lambda_r  int_x^inf (1 - mu_s/(s+mu_s)) exp(-rho s/lambda_rho) ds
/// T4 = 1/lambda_s    int_x^inf (1 - mu_r/(rho s+mu_r)) exp(-rho s/lambda_rho) ds
/// T5 = 1/lambda_s    int_x^inf (1 - mu_s/(s+mu_s) - lambda_s mu_s/(s+mu_s)^2) mu_r/(rho s+mu_r) exp(-rho s/lambda_rho) ds
/// T6 =               int_x^inf rho mu_s / ((s+mu_s)(rho s+mu_r)) exp(-rho s/lambda_rho) ds
/// ```
///
/// In the generic branch `T5 = mu_r/(mu_r - rho mu_s) [(T2 - T3) - T4 + T6]`
/// with `T6 = rho mu_s/(mu_r - rho mu_s) (A_s - A_r)`; at `mu_r = rho mu_s`
/// both collapse to dedicated limit forms.
pub fn appendix_terms(
    hops: &HopPair,
    rho: f64,
    x: f64,
    policy: &BranchPolicy,
) -> Result<AppendixTerms> {
    check_positive(rho, "rho")?;
    check_non_negative(x, "x")?;
    let (ls, mus, _ps) = unpack(&hops.source);
    let (lr, mur, _pr) = unpack(&hops.relay);
    let l_rho = lambda_rho(hops, rho)?;

    let h = l_rho / (rho * ls);
    let e = (-rho * x / l_rho).exp();
    let m = mus / (x + mus);
    let a_s = exp_e1_shifted(rho * x, rho * mus, l_rho)?;
    let a_r = exp_e1_shifted(rho * x, mur, l_rho)?;

    let t1 = h * e;
    let t2 = e * x / (x + mus);
    let t3 = l_rho / lr * (e - rho * mus / l_rho * a_s);
    let t4 = h * (e - mur / l_rho * a_r);

    let (t5, t6) = if policy.is_equal(mur, rho * mus) {
        let a = mus / ls;
        let b = mur / lr;
        let beta_mu = rho * mus / l_rho;
        let t6 = e * m - beta_mu * a_s;
        let t5 = a * a_r - 0.5 * e * m * m + 0.5 * (b - a) * (e * m - beta_mu * a_r);
        (t5, t6)
    } else {
        let d = mur - rho * mus;
        let t6 = rho * mus / d * (a_s - a_r);
        let t5 = mur / d * ((t2 - t3) - t4 + t6);
        (t5, t6)
    };

    Ok(AppendixTerms {
        t1,
        t2,
        t3,
        t4,
        t5,
        t6,
    })
}

fn unpack(link: &LinkStatistics) -> (f64, f64, f64) {
    (link.lambda(), link.mu(), link.p())
}
