//! Rate analysis of buffer-aided relaying in underlay cognitive radio networks.
//!
//! A two-hop secondary network (source, buffered decode-and-forward relay,
//! destination) shares spectrum with a primary receiver under both a peak
//! transmit power constraint and a peak interference constraint. This crate
//! evaluates the average end-to-end rate of three relaying schemes over
//! Rayleigh fading:
//!
//! * **ALSBR** — adaptive link selection with a buffered relay: each slot the
//!   source-relay or relay-destination link transmits, chosen by comparing the
//!   instantaneous SNR ratio against a threshold `rho` solved for buffer
//!   stability at maximum throughput;
//! * **CUBR** — conventional unbuffered relaying, `1/2 E[min(C_s, C_r)]`;
//! * **CBR** — conventional buffered relaying, `1/2 min(E[C_s], E[C_r])`.
//!
//! The crate provides:
//!
//! * exact closed forms for the joint selection/SNR CCDFs and all scheme
//!   rates, plus their high-SNR (interference-limited) asymptotes
//!   ([`rates`]);
//! * the special functions they are built on ([`special`]);
//! * an adaptive-quadrature oracle used to validate every closed form
//!   ([`quad`]);
//! * the channel model and per-hop sufficient statistics ([`channel`]);
//! * the bisection solver for the stability-optimal threshold ([`solver`]);
//! * a slot-level Monte Carlo simulator with an explicit relay queue
//!   ([`sim`]).
//!
//! All analytic operations are pure functions and safe to call concurrently.

pub mod channel;
pub mod error;
pub mod quad;
pub mod rates;
pub mod sim;
pub mod solver;
pub mod special;

pub use channel::{
    derive_link_statistics, sample_snr, snr_ccdf, snr_cdf, snr_pdf, ChannelGains, FadingSample,
    LinkStatistics, NetworkGeometry, SystemParams,
};
pub use error::{Error, Result};
pub use quad::{quadrature, QuadratureSpec};
pub use rates::{
    appendix_terms, asym_rate_cbr, asym_rate_cubr, asym_rate_relay_hop, asym_rate_source_hop,
    ccdf_relay_selected, ccdf_source_selected, hop_mean_rate, lambda_e, lambda_rho, rate_cbr,
    rate_cubr, rate_relay_hop, rate_source_hop, AppendixTerms, BranchPolicy, HopPair,
};
pub use sim::{
    empirical_joint_ccdf, simulate_alsbr, simulate_cbr, simulate_cubr, BufferState, JointCcdfRow,
    SimulationConfig, SimulationResult,
};
pub use solver::{alsbr_rate, solve_rho, AlsbrSolution, SolverSpec};
pub use special::{
    dilog, exp_integral_en, integral_i, integral_i_rate, integral_j, integral_j_asymptotic,
    integral_j_quadrature, integral_j_series, scaled_e1, scaled_en, RealPositive,
    EULER_MASCHERONI,
};
