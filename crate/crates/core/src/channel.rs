//! Underlay channel model: geometry, per-hop sufficient statistics, and the
//! marginal SNR law of each hop.
//!
//! Both secondary transmitters obey a peak transmit power constraint and a
//! peak interference constraint at the primary receiver, so the instantaneous
//! SNR of hop `i` is
//!
//! ```text
//! gamma_i = min(gamma_max, gamma_p / |g_i|^2) |h_i|^2
//! ```
//!
//! with `|h_i|^2`, `|g_i|^2` independent exponentials of means `Omega_h`,
//! `Omega_g`. Every formula downstream depends on the hop only through the
//! triple `(lambda, mu, p)`:
//!
//! * `lambda = gamma_max * Omega_h` — mean SNR under peak power,
//! * `mu = gamma_p * Omega_h / Omega_g` — mean SNR under interference-limited
//!   power,
//! * `p = exp(-mu/lambda)` — probability that transmitting at peak power
//!   would violate the interference limit.
//!
//! `p = 0` is the peak-transmit-power regime (PTPR, plain exponential SNR);
//! `p = 1` is the peak-interference-power regime (PIPR, ratio of
//! exponentials).

use crate::error::{check_non_negative, check_positive, Error, Result};
use rand::Rng;

/// Convert decibels to the linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

/// Convert a linear value to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Global SNR budget and path-loss exponent. All stored values are linear;
/// the dB-to-linear conversion happens exactly once, in [`SystemParams::from_db`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    gamma_max: f64,
    gamma_p: f64,
    alpha: f64,
}

impl SystemParams {
    /// Build from the system SNR and interference-to-noise ratio in dB.
    pub fn from_db(gamma_max_db: f64, gamma_p_db: f64, alpha: f64) -> Result<Self> {
        Self::from_linear(db_to_linear(gamma_max_db), db_to_linear(gamma_p_db), alpha)
    }

    /// Build from already-linear SNR values.
    pub fn from_linear(gamma_max: f64, gamma_p: f64, alpha: f64) -> Result<Self> {
        check_positive(gamma_max, "gamma_max")?;
        check_positive(gamma_p, "gamma_p")?;
        if !(alpha.is_finite() && alpha >= 2.0) {
            return Err(Error::Domain(format!(
                "path-loss exponent must be >= 2, got {alpha}"
            )));
        }
        Ok(Self {
            gamma_max,
            gamma_p,
            alpha,
        })
    }

    /// System SNR `P_max / N_0` (linear).
    pub fn gamma_max(&self) -> f64 {
        self.gamma_max
    }

    /// Interference-to-noise ratio `I_p / N_0` (linear).
    pub fn gamma_p(&self) -> f64 {
        self.gamma_p
    }

    /// Path-loss exponent.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Node distances, with optional direct overrides for the mean channel power
/// gains. Without overrides, `Omega = d^(-alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NetworkGeometry {
    /// Source-to-relay distance.
    pub d_sr: f64,
    /// Relay-to-destination distance.
    pub d_rd: f64,
    /// Source-to-primary distance.
    pub d_sp: f64,
    /// Relay-to-primary distance.
    pub d_rp: f64,
    /// Override for the source-hop data gain.
    pub omega_hs: Option<f64>,
    /// Override for the relay-hop data gain.
    pub omega_hr: Option<f64>,
    /// Override for the source-to-primary interference gain.
    pub omega_gs: Option<f64>,
    /// Override for the relay-to-primary interference gain.
    pub omega_gr: Option<f64>,
}

impl NetworkGeometry {
    pub fn new(d_sr: f64, d_rd: f64, d_sp: f64, d_rp: f64) -> Self {
        Self {
            d_sr,
            d_rd,
            d_sp,
            d_rp,
            omega_hs: None,
            omega_hr: None,
            omega_gs: None,
            omega_gr: None,
        }
    }

    /// Resolve the four mean channel power gains.
    ///
    /// Degenerate gains (zero or non-finite, e.g. from an infinite distance)
    /// are rejected: a zero-gain link has no meaningful rate statistics.
    pub fn channel_gains(&self, alpha: f64) -> Result<ChannelGains> {
        let resolve = |d: f64, over: Option<f64>, name: &str| -> Result<f64> {
            let omega = match over {
                Some(v) => v,
                None => {
                    check_positive(d, &format!("distance for {name}"))?;
                    d.powf(-alpha)
                }
            };
            check_positive(omega, name)?;
            Ok(omega)
        };
        Ok(ChannelGains {
            omega_hs: resolve(self.d_sr, self.omega_hs, "omega_hs")?,
            omega_hr: resolve(self.d_rd, self.omega_hr, "omega_hr")?,
            omega_gs: resolve(self.d_sp, self.omega_gs, "omega_gs")?,
            omega_gr: resolve(self.d_rp, self.omega_gr, "omega_gr")?,
        })
    }
}

/// The four resolved mean channel power gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    pub omega_hs: f64,
    pub omega_hr: f64,
    pub omega_gs: f64,
    pub omega_gr: f64,
}

/// Per-hop sufficient statistics `(lambda, mu, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStatistics {
    lambda: f64,
    mu: f64,
    p: f64,
}

impl LinkStatistics {
    /// Build the statistics of one hop; `p` is derived as `exp(-mu/lambda)`.
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        check_positive(lambda, "lambda")?;
        check_positive(mu, "mu")?;
        Ok(Self {
            lambda,
            mu,
            p: (-mu / lambda).exp(),
        })
    }

    /// Build with an explicitly forced violation probability.
    ///
    /// Intended for regime-limit studies: `p = 0` reproduces the pure
    /// peak-power (exponential SNR) forms and `p = 1` the interference-limited
    /// forms, independent of `mu/lambda`.
    pub fn with_violation_probability(lambda: f64, mu: f64, p: f64) -> Result<Self> {
        check_positive(lambda, "lambda")?;
        check_positive(mu, "mu")?;
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(Self { lambda, mu, p })
    }

    /// Mean SNR under peak transmit power.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Mean SNR under interference-limited power.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Probability that peak-power transmission violates the interference limit.
    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Derive `(source hop, relay hop)` statistics from system parameters and
/// geometry: `lambda_i = gamma_max Omega_hi`, `mu_i = gamma_p Omega_hi / Omega_gi`.
pub fn derive_link_statistics(
    sys: &SystemParams,
    geo: &NetworkGeometry,
) -> Result<(LinkStatistics, LinkStatistics)> {
    let gains = geo.channel_gains(sys.alpha())?;
    let source = LinkStatistics::new(
        sys.gamma_max() * gains.omega_hs,
        sys.gamma_p() * gains.omega_hs / gains.omega_gs,
    )?;
    let relay = LinkStatistics::new(
        sys.gamma_max() * gains.omega_hr,
        sys.gamma_p() * gains.omega_hr / gains.omega_gr,
    )?;
    Ok((source, relay))
}

/// Complementary CDF of the hop SNR:
/// `Pr(gamma > s) = exp(-s/lambda) [1 - p (1 - mu/(s+mu))]`.
///
/// Note on conventions: the textbook form of this law is usually printed as
/// `1 - exp(-s/lambda)[...]`, i.e. as a CDF, sometimes under a CCDF label.
/// Here `snr_ccdf` is strictly `Pr(gamma > s)` and [`snr_cdf`] strictly
/// `Pr(gamma <= s)`; the two always sum to one.
pub fn snr_ccdf(link: &LinkStatistics, s: f64) -> Result<f64> {
    check_non_negative(s, "s")?;
    let ratio = s / (s + link.mu); // 1 - mu/(s+mu), stable for huge mu
    Ok((-s / link.lambda).exp() * (1.0 - link.p * ratio))
}

/// CDF of the hop SNR, `Pr(gamma <= s) = 1 - snr_ccdf(s)`.
pub fn snr_cdf(link: &LinkStatistics, s: f64) -> Result<f64> {
    Ok(1.0 - snr_ccdf(link, s)?)
}

/// Density of the hop SNR:
/// `exp(-s/lambda)/lambda [1 - p (1 - mu/(s+mu) - lambda mu/(s+mu)^2)]`.
pub fn snr_pdf(link: &LinkStatistics, s: f64) -> Result<f64> {
    check_non_negative(s, "s")?;
    let denom = s + link.mu;
    let inner = 1.0
        - link.p * (1.0 - link.mu / denom - link.lambda * link.mu / (denom * denom));
    Ok((-s / link.lambda).exp() / link.lambda * inner)
}

/// One draw of the squared channel magnitudes of a hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSample {
    /// `|h|^2`, exponential with mean `Omega_h`.
    pub h_sq: f64,
    /// `|g|^2`, exponential with mean `Omega_g`.
    pub g_sq: f64,
}

impl FadingSample {
    /// Draw the two independent exponential magnitudes by inverse CDF.
    pub fn draw<R: Rng + ?Sized>(omega_h: f64, omega_g: f64, rng: &mut R) -> Self {
        Self {
            h_sq: sample_exponential(omega_h, rng),
            g_sq: sample_exponential(omega_g, rng),
        }
    }

    /// Instantaneous SNR under the peak power and peak interference limits.
    pub fn snr(&self, sys: &SystemParams) -> f64 {
        // g_sq may be 0, in which case the interference cap never binds.
        let power = if sys.gamma_p() / self.g_sq < sys.gamma_max() {
            sys.gamma_p() / self.g_sq
        } else {
            sys.gamma_max()
        };
        power * self.h_sq
    }
}

/// Inverse-CDF exponential variate `-omega ln(1 - U)`, `U` uniform in `[0,1)`.
fn sample_exponential<R: Rng + ?Sized>(omega: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    -omega * (1.0 - u).ln()
}

/// Sample one instantaneous hop SNR `min(gamma_max, gamma_p/|g|^2) |h|^2`.
pub fn sample_snr<R: Rng + ?Sized>(
    omega_h: f64,
    omega_g: f64,
    sys: &SystemParams,
    rng: &mut R,
) -> f64 {
    FadingSample::draw(omega_h, omega_g, rng).snr(sys)
}
