//! The sweep engine: evaluate every `(d_sp, d_rp)` geometry point, solve the
//! selection threshold, compute all scheme rates (optionally validating with
//! Monte Carlo), and emit the dataset as CSV.
//!
//! Rows are independent and evaluated in parallel; output order is the
//! deterministic sweep order (`d_rp` outer, `d_sp` inner) regardless of
//! completion order. Monte Carlo seeds derive from the base seed as
//! `seed + row_index` (wrapping), so datasets are reproducible and rows never
//! share random draws.

use crate::config::ExperimentConfig;
use crate::csvio;
use cogrelay::{
    derive_link_statistics, rate_cbr, rate_cubr, simulate_alsbr, simulate_cbr, simulate_cubr,
    solve_rho, BranchPolicy, HopPair, NetworkGeometry, SimulationConfig, SolverSpec, SystemParams,
};
use rayon::prelude::*;
use std::io::{self, Write};

/// Monte Carlo validation columns of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRates {
    pub alsbr: f64,
    pub alsbr_stderr: f64,
    pub cubr: f64,
    pub cubr_stderr: f64,
    pub cbr: f64,
    pub cbr_stderr: f64,
}

/// One evaluated geometry point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d_sp: f64,
    pub d_rp: f64,
    pub rho: f64,
    pub log2_rho: f64,
    pub rate_alsbr: f64,
    pub rate_cubr: f64,
    pub rate_cbr: f64,
    pub ratio_alsbr_cubr: f64,
    pub ratio_alsbr_cbr: f64,
    pub mc: Option<McRates>,
    /// Set when the solver or a rate evaluation failed; numeric fields are NaN.
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(d_sp: f64, d_rp: f64, error: String) -> Self {
        Self {
            d_sp,
            d_rp,
            rho: f64::NAN,
            log2_rho: f64::NAN,
            rate_alsbr: f64::NAN,
            rate_cubr: f64::NAN,
            rate_cbr: f64::NAN,
            ratio_alsbr_cubr: f64::NAN,
            ratio_alsbr_cbr: f64::NAN,
            mc: None,
            error: Some(error),
        }
    }
}

fn evaluate_row(cfg: &ExperimentConfig, d_sp: f64, d_rp: f64, row_index: u64) -> SweepRow {
    let run = || -> cogrelay::Result<SweepRow> {
        let sys = SystemParams::from_db(cfg.gamma_max_db, cfg.gamma_p_db, cfg.alpha)?;
        let geo = NetworkGeometry::new(cfg.d_sr, cfg.d_rd, d_sp, d_rp);
        let (source, relay) = derive_link_statistics(&sys, &geo)?;
        let hops = HopPair::new(source, relay);
        let policy = BranchPolicy::default();

        let solution = solve_rho(&hops, &SolverSpec::default(), &policy)?;
        let cubr = rate_cubr(&hops, &policy)?;
        let cbr = rate_cbr(&hops)?;

        let mc = match &cfg.mc {
            Some(mc_cfg) => {
                let gains = geo.channel_gains(sys.alpha())?;
                let sim_cfg =
                    SimulationConfig::new(mc_cfg.slots, mc_cfg.seed.wrapping_add(row_index))?;
                let nan = (f64::NAN, f64::NAN);
                let (a, a_se) = if cfg.schemes.alsbr {
                    // The source-side rate is the quantity the analytic ALSBR
                    // column computes; delivered throughput converges to it
                    // but carries the empty-queue transient.
                    let r = simulate_alsbr(&gains, &sys, solution.rho, &sim_cfg)?;
                    (r.source_side_rate, r.source_side_stderr)
                } else {
                    nan
                };
                let (u, u_se) = if cfg.schemes.cubr {
                    let r = simulate_cubr(&gains, &sys, &sim_cfg)?;
                    (r.delivered_rate, r.delivered_stderr)
                } else {
                    nan
                };
                let (b, b_se) = if cfg.schemes.cbr {
                    let r = simulate_cbr(&gains, &sys, &sim_cfg)?;
                    (r.delivered_rate, r.delivered_stderr)
                } else {
                    nan
                };
                Some(McRates {
                    alsbr: a,
                    alsbr_stderr: a_se,
                    cubr: u,
                    cubr_stderr: u_se,
                    cbr: b,
                    cbr_stderr: b_se,
                })
            }
            None => None,
        };

        Ok(SweepRow {
            d_sp,
            d_rp,
            rho: solution.rho,
            log2_rho: solution.rho.log2(),
            rate_alsbr: solution.rate,
            rate_cubr: cubr,
            rate_cbr: cbr,
            ratio_alsbr_cubr: solution.rate / cubr,
            ratio_alsbr_cbr: solution.rate / cbr,
            mc,
            error: None,
        })
    };
    match run() {
        Ok(row) => row,
        Err(e) => SweepRow::failed(d_sp, d_rp, e.to_string()),
    }
}

/// Evaluate the whole sweep. Failed points are reported in their row's
/// `error` field; the sweep always completes.
pub fn run_sweep(cfg: &ExperimentConfig) -> Vec<SweepRow> {
    let points: Vec<(f64, f64)> = cfg
        .d_rp
        .iter()
        .flat_map(|&d_rp| cfg.d_sp.iter().map(move |&d_sp| (d_sp, d_rp)))
        .collect();
    points
        .par_iter()
        .enumerate()
        .map(|(i, &(d_sp, d_rp))| evaluate_row(cfg, d_sp, d_rp, i as u64))
        .collect()
}

pub const BASE_COLUMNS: &[&str] = &[
    "d_sp",
    "d_rp",
    "d_sp_over_d_rp",
    "rho",
    "log2_rho",
    "rate_alsbr",
    "rate_cubr",
    "rate_cbr",
    "ratio_alsbr_cubr",
    "ratio_alsbr_cbr",
];

pub const MC_COLUMNS: &[&str] = &[
    "mc_rate_alsbr",
    "mc_stderr_alsbr",
    "mc_rate_cubr",
    "mc_stderr_cubr",
    "mc_rate_cbr",
    "mc_stderr_cbr",
];

/// Write the sweep dataset as CSV: metadata comments, header, one row per
/// geometry point. Rates are bits/slot; distances and ratios dimensionless.
pub fn write_csv<W: Write>(
    out: &mut W,
    cfg: &ExperimentConfig,
    rows: &[SweepRow],
    extra_meta: &[String],
) -> io::Result<()> {
    let mut meta = vec![
        format!("config: {}", cfg.summary()),
        format!(
            "sweep: d_sp {} points, d_rp {:?}",
            cfg.d_sp.len(),
            cfg.d_rp
        ),
        "units: rates in bits/slot, distances in the configured length unit, rho linear"
            .to_string(),
    ];
    if let Some(mc) = &cfg.mc {
        meta.push(format!(
            "monte-carlo: slots={} seed={} (row seed = seed + row index); \
             mc_rate_alsbr is the selection-balanced source-side rate",
            mc.slots, mc.seed
        ));
    }
    meta.extend_from_slice(extra_meta);
    csvio::write_metadata(out, &meta)?;

    let mut header: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    if cfg.mc.is_some() {
        header.extend(MC_COLUMNS.iter().map(|s| s.to_string()));
    }
    header.push("status".to_string());
    csvio::write_row(out, &header)?;

    for row in rows {
        let mut fields = vec![
            csvio::cell(row.d_sp),
            csvio::cell(row.d_rp),
            csvio::cell(row.d_sp / row.d_rp),
            csvio::cell(row.rho),
            csvio::cell(row.log2_rho),
            csvio::cell(row.rate_alsbr),
            csvio::cell(row.rate_cubr),
            csvio::cell(row.rate_cbr),
            csvio::cell(row.ratio_alsbr_cubr),
            csvio::cell(row.ratio_alsbr_cbr),
        ];
        if cfg.mc.is_some() {
            match &row.mc {
                Some(mc) => {
                    fields.extend([
                        csvio::cell(mc.alsbr),
                        csvio::cell(mc.alsbr_stderr),
                        csvio::cell(mc.cubr),
                        csvio::cell(mc.cubr_stderr),
                        csvio::cell(mc.cbr),
                        csvio::cell(mc.cbr_stderr),
                    ]);
                }
                None => fields.extend(vec!["nan".to_string(); 6]),
            }
        }
        fields.push(match &row.error {
            Some(e) => format!("error: {}", e.replace(',', ";")),
            None => "ok".to_string(),
        });
        csvio::write_row(out, &fields)?;
    }
    Ok(())
}
