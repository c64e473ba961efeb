//! Slot-level Monte Carlo simulation of the three relaying schemes.
//!
//! The ALSBR simulator keeps an explicit relay buffer (fluid bits, since the
//! analysis is information-theoretic and capacities are real-valued): when
//! `gamma_r / gamma_s >= rho` the relay transmits `min(C_r, queue)` and the
//! queue drains, otherwise the source transmits `C_s` and the queue grows.
//! The source is assumed saturated. Two throughput figures are reported:
//! `source_side_rate` (the mean of `(1-d) C_s`, the quantity the analysis
//! balances) and `delivered_rate` (bits actually leaving the relay, which
//! differs transiently when the relay is selected on an empty queue).
//!
//! Reproducibility: all randomness comes from ChaCha12 seeded from the config
//! seed, with one documented stream per purpose (see [`stream_rng`]), so runs
//! are bit-identical across platforms and schemes never share draws.
//! Standard errors use batch means over 100 batches, which stays honest for
//! the queue-coupled delivered rate.

use crate::channel::{sample_snr, ChannelGains, SystemParams};
use crate::error::{check_positive, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::LOG2_E;

const BATCHES: u64 = 100;

/// ChaCha12 stream indices, one per consumer of randomness.
const STREAM_ALSBR: u64 = 0;
const STREAM_CUBR: u64 = 1;
const STREAM_CBR_SOURCE: u64 = 2;
const STREAM_CBR_RELAY: u64 = 3;
const STREAM_JOINT_CCDF: u64 = 4;

/// Deterministic per-purpose RNG: ChaCha12 seeded with `seed`, on stream
/// `stream`. Distinct streams never share output for the same seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Slot budget, seed, and warm-up for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// Total slots simulated (>= 1).
    pub slots: u64,
    /// Base seed; all scheme streams derive from it.
    pub seed: u64,
    /// Slots discarded before statistics are collected (< slots). Only the
    /// buffered ALSBR run has a transient; the memoryless schemes ignore it.
    pub warmup_slots: u64,
    /// Optional abscissae for empirical joint-CCDF estimation.
    pub ccdf_grid: Option<Vec<f64>>,
}

impl SimulationConfig {
    /// Build a config with the default warm-up: 1% of the slots, at least
    /// 1000, but always leaving at least one measured slot.
    pub fn new(slots: u64, seed: u64) -> Result<Self> {
        if slots == 0 {
            return Err(Error::Domain("slots must be at least 1".into()));
        }
        let warmup = (slots / 100).max(1000).min(slots - 1);
        Ok(Self {
            slots,
            seed,
            warmup_slots: warmup,
            ccdf_grid: None,
        })
    }

    pub fn with_warmup(mut self, warmup_slots: u64) -> Result<Self> {
        if warmup_slots >= self.slots {
            return Err(Error::Domain(format!(
                "warmup ({warmup_slots}) must be below the slot count ({})",
                self.slots
            )));
        }
        self.warmup_slots = warmup_slots;
        Ok(self)
    }
}

/// Relay queue in fluid bits; never negative.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BufferState {
    queued_bits: f64,
}

impl BufferState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn queued_bits(&self) -> f64 {
        self.queued_bits
    }

    /// Admit an arrival.
    pub fn push(&mut self, bits: f64) {
        debug_assert!(bits >= 0.0);
        self.queued_bits += bits;
    }

    /// Serve up to `capacity` bits; returns the amount actually sent.
    pub fn pull(&mut self, capacity: f64) -> f64 {
        debug_assert!(capacity >= 0.0);
        let sent = capacity.min(self.queued_bits);
        self.queued_bits -= sent;
        debug_assert!(self.queued_bits >= 0.0);
        sent
    }
}

/// Empirical rates and queue statistics of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    /// Mean of `(1-d) C_s` (bits/slot) — arrivals offered to the buffer.
    pub source_side_rate: f64,
    /// Bits leaving the relay per slot (bits/slot).
    pub delivered_rate: f64,
    /// Mean of `d C_r` (bits/slot) — relay capacity usage ignoring emptiness.
    pub relay_side_rate: f64,
    /// Time-averaged queue length (bits).
    pub mean_queue: f64,
    /// Queue length after the final slot (bits).
    pub final_queue: f64,
    /// Fraction of measured slots with the relay link selected.
    pub selection_fraction: f64,
    pub source_side_stderr: f64,
    pub delivered_stderr: f64,
    pub relay_side_stderr: f64,
    /// Mean per-slot queue growth (source side minus delivered).
    pub queue_drift: f64,
    pub queue_drift_stderr: f64,
}

/// Accumulates batch-mean statistics for one per-slot quantity.
struct BatchStat {
    sums: Vec<f64>,
    batch_len: u64,
    index: u64,
}

impl BatchStat {
    fn new(total: u64) -> Self {
        let batches = BATCHES.min(total).max(1);
        Self {
            sums: vec![0.0; batches as usize],
            batch_len: total / batches,
            index: 0,
        }
    }

    /// Number of samples consumed overall (whole batches only).
    fn capacity(&self) -> u64 {
        self.batch_len * self.sums.len() as u64
    }

    fn record(&mut self, value: f64) {
        let batch = (self.index / self.batch_len).min(self.sums.len() as u64 - 1);
        self.sums[batch as usize] += value;
        self.index += 1;
    }

    fn mean(&self) -> f64 {
        self.sums.iter().sum::<f64>() / self.capacity() as f64
    }

    fn stderr(&self) -> f64 {
        let n = self.sums.len() as f64;
        if n < 2.0 {
            return f64::INFINITY;
        }
        let means: Vec<f64> = self
            .sums
            .iter()
            .map(|s| s / self.batch_len as f64)
            .collect();
        let grand = means.iter().sum::<f64>() / n;
        let var = means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }
}

fn capacity_bits(snr: f64) -> f64 {
    snr.ln_1p() * LOG2_E
}

/// Simulate adaptive link selection with a buffered relay.
pub fn simulate_alsbr(
    gains: &ChannelGains,
    sys: &SystemParams,
    rho: f64,
    cfg: &SimulationConfig,
) -> Result<SimulationResult> {
    check_positive(rho, "rho")?;
    let mut rng = stream_rng(cfg.seed, STREAM_ALSBR);
    let mut queue = BufferState::new();

    for _ in 0..cfg.warmup_slots {
        step_alsbr(gains, sys, rho, &mut queue, &mut rng);
    }

    let measured = cfg.slots - cfg.warmup_slots;
    let mut source_side = BatchStat::new(measured);
    let mut delivered = BatchStat::new(measured);
    let mut relay_side = BatchStat::new(measured);
    let mut drift = BatchStat::new(measured);
    let mut selection = BatchStat::new(measured);
    let mut queue_sum = 0.0;
    let n = source_side.capacity();

    for _ in 0..n {
        let slot = step_alsbr(gains, sys, rho, &mut queue, &mut rng);
        source_side.record(slot.arrival);
        delivered.record(slot.sent);
        relay_side.record(slot.relay_capacity_used);
        drift.record(slot.arrival - slot.sent);
        selection.record(if slot.relay_selected { 1.0 } else { 0.0 });
        queue_sum += queue.queued_bits();
    }

    Ok(SimulationResult {
        source_side_rate: source_side.mean(),
        delivered_rate: delivered.mean(),
        relay_side_rate: relay_side.mean(),
        mean_queue: queue_sum / n as f64,
        final_queue: queue.queued_bits(),
        selection_fraction: selection.mean(),
        source_side_stderr: source_side.stderr(),
        delivered_stderr: delivered.stderr(),
        relay_side_stderr: relay_side.stderr(),
        queue_drift: drift.mean(),
        queue_drift_stderr: drift.stderr(),
    })
}

struct SlotOutcome {
    arrival: f64,
    sent: f64,
    relay_capacity_used: f64,
    relay_selected: bool,
}

fn step_alsbr(
    gains: &ChannelGains,
    sys: &SystemParams,
    rho: f64,
    queue: &mut BufferState,
    rng: &mut ChaCha12Rng,
) -> SlotOutcome {
    let gamma_s = sample_snr(gains.omega_hs, gains.omega_gs, sys, rng);
    let gamma_r = sample_snr(gains.omega_hr, gains.omega_gr, sys, rng);
    if gamma_r >= rho * gamma_s {
        // Relay transmits; an empty queue sends nothing this slot.
        let c_r = capacity_bits(gamma_r);
        let sent = queue.pull(c_r);
        SlotOutcome {
            arrival: 0.0,
            sent,
            relay_capacity_used: c_r,
            relay_selected: true,
        }
    } else {
        let c_s = capacity_bits(gamma_s);
        queue.push(c_s);
        SlotOutcome {
            arrival: c_s,
            sent: 0.0,
            relay_capacity_used: 0.0,
            relay_selected: false,
        }
    }
}

/// Simulate the conventional unbuffered relay: one independent `(gamma_s,
/// gamma_r)` pair per two-slot frame, delivering `min(C_s, C_r)` bits per
/// frame. `cfg.slots` counts slots, so `slots/2` frames are run; warm-up does
/// not apply (the scheme is memoryless).
pub fn simulate_cubr(
    gains: &ChannelGains,
    sys: &SystemParams,
    cfg: &SimulationConfig,
) -> Result<SimulationResult> {
    let mut rng = stream_rng(cfg.seed, STREAM_CUBR);
    let frames = (cfg.slots / 2).max(1);
    let mut per_slot = BatchStat::new(frames);
    let mut source_half = BatchStat::new(frames);
    let mut relay_half = BatchStat::new(frames);

    for _ in 0..per_slot.capacity() {
        let c_s = capacity_bits(sample_snr(gains.omega_hs, gains.omega_gs, sys, &mut rng));
        let c_r = capacity_bits(sample_snr(gains.omega_hr, gains.omega_gr, sys, &mut rng));
        per_slot.record(0.5 * c_s.min(c_r));
        source_half.record(0.5 * c_s);
        relay_half.record(0.5 * c_r);
    }

    Ok(SimulationResult {
        source_side_rate: source_half.mean(),
        delivered_rate: per_slot.mean(),
        relay_side_rate: relay_half.mean(),
        mean_queue: 0.0,
        final_queue: 0.0,
        selection_fraction: 0.5,
        source_side_stderr: source_half.stderr(),
        delivered_stderr: per_slot.stderr(),
        relay_side_stderr: relay_half.stderr(),
        queue_drift: 0.0,
        queue_drift_stderr: 0.0,
    })
}

/// Simulate the conventional buffered relay: estimate `E[C_s]` and `E[C_r]`
/// from `cfg.slots` independent draws each (separate streams), then report
/// `1/2 min` of the empirical means. The standard error of the delivered rate
/// is that of the bottleneck hop's mean.
pub fn simulate_cbr(
    gains: &ChannelGains,
    sys: &SystemParams,
    cfg: &SimulationConfig,
) -> Result<SimulationResult> {
    let mut rng_s = stream_rng(cfg.seed, STREAM_CBR_SOURCE);
    let mut rng_r = stream_rng(cfg.seed, STREAM_CBR_RELAY);
    let mut source = BatchStat::new(cfg.slots);
    let mut relay = BatchStat::new(cfg.slots);

    for _ in 0..source.capacity() {
        source.record(capacity_bits(sample_snr(
            gains.omega_hs,
            gains.omega_gs,
            sys,
            &mut rng_s,
        )));
        relay.record(capacity_bits(sample_snr(
            gains.omega_hr,
            gains.omega_gr,
            sys,
            &mut rng_r,
        )));
    }

    let mean_s = source.mean();
    let mean_r = relay.mean();
    let bottleneck_stderr = if mean_s <= mean_r {
        source.stderr()
    } else {
        relay.stderr()
    };

    Ok(SimulationResult {
        source_side_rate: 0.5 * mean_s,
        delivered_rate: 0.5 * mean_s.min(mean_r),
        relay_side_rate: 0.5 * mean_r,
        mean_queue: 0.0,
        final_queue: 0.0,
        selection_fraction: 0.5,
        source_side_stderr: 0.5 * source.stderr(),
        delivered_stderr: 0.5 * bottleneck_stderr,
        relay_side_stderr: 0.5 * relay.stderr(),
        queue_drift: 0.0,
        queue_drift_stderr: 0.0,
    })
}

/// One abscissa of the empirical joint CCDF table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointCcdfRow {
    pub x: f64,
    /// Estimate of `Pr(d = 0, gamma_s > x)`.
    pub source_selected: f64,
    /// Estimate of `Pr(d = 1, gamma_r > x)`.
    pub relay_selected: f64,
    /// Binomial standard errors of the two estimates.
    pub source_stderr: f64,
    pub relay_stderr: f64,
}

/// Monte Carlo estimate of the joint selection/SNR CCDFs on a grid of `x`.
pub fn empirical_joint_ccdf(
    gains: &ChannelGains,
    sys: &SystemParams,
    rho: f64,
    grid: &[f64],
    cfg: &SimulationConfig,
) -> Result<Vec<JointCcdfRow>> {
    check_positive(rho, "rho")?;
    let mut rng = stream_rng(cfg.seed, STREAM_JOINT_CCDF);
    let n = cfg.slots;
    let mut count_source = vec![0u64; grid.len()];
    let mut count_relay = vec![0u64; grid.len()];

    for _ in 0..n {
        let gamma_s = sample_snr(gains.omega_hs, gains.omega_gs, sys, &mut rng);
        let gamma_r = sample_snr(gains.omega_hr, gains.omega_gr, sys, &mut rng);
        if gamma_r >= rho * gamma_s {
            for (i, &x) in grid.iter().enumerate() {
                if gamma_r > x {
                    count_relay[i] += 1;
                }
            }
        } else {
            for (i, &x) in grid.iter().enumerate() {
                if gamma_s > x {
                    count_source[i] += 1;
                }
            }
        }
    }

    let binomial_stderr = |p: f64| (p * (1.0 - p) / n as f64).sqrt();
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let p0 = count_source[i] as f64 / n as f64;
            let p1 = count_relay[i] as f64 / n as f64;
            JointCcdfRow {
                x,
                source_selected: p0,
                relay_selected: p1,
                source_stderr: binomial_stderr(p0),
                relay_stderr: binomial_stderr(p1),
            }
        })
        .collect())
}
