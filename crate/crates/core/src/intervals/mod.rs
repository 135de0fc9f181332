//! Interval estimates of `ln σ`.

pub mod mcmc;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{suff_stats, SuffStats, TwoSampleData};
use crate::numerics::{std_normal_quantile, Dist, RngStream};

pub use mcmc::{
    chen_shao_hpd, effective_sample_size, hpd_mcmc, hpd_mcmc_from_stats, mh_beta_chain, McmcConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalMethod {
    #[serde(rename = "aci")]
    Aci,
    #[serde(rename = "boot-p")]
    BootP,
    #[serde(rename = "boot-t")]
    BootT,
    #[serde(rename = "gci")]
    Gci,
    #[serde(rename = "hpd")]
    Hpd,
}

impl IntervalMethod {
    pub const ALL: [IntervalMethod; 5] = [
        IntervalMethod::Aci,
        IntervalMethod::BootP,
        IntervalMethod::BootT,
        IntervalMethod::Gci,
        IntervalMethod::Hpd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IntervalMethod::Aci => "aci",
            IntervalMethod::BootP => "boot-p",
            IntervalMethod::BootT => "boot-t",
            IntervalMethod::Gci => "gci",
            IntervalMethod::Hpd => "hpd",
        }
    }
}

impl fmt::Display for IntervalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntervalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(
            match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
                "aci" => IntervalMethod::Aci,
                "boot-p" | "bootp" => IntervalMethod::BootP,
                "boot-t" | "boott" => IntervalMethod::BootT,
                "gci" => IntervalMethod::Gci,
                "hpd" => IntervalMethod::Hpd,
                other => return Err(Error::input(format!("unknown interval method {other:?}"))),
            },
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ess: Option<f64>,
    pub draws: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retries: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalResult {
    pub method: IntervalMethod,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub length: f64,
    pub diagnostics: Diagnostics,
}

impl IntervalResult {
    fn new(
        method: IntervalMethod,
        level: f64,
        lower: f64,
        upper: f64,
        diagnostics: Diagnostics,
    ) -> Self {
        IntervalResult {
            method,
            level,
            lower,
            upper,
            length: upper - lower,
            diagnostics,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("interval serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootConfig {
    /// Number of parametric resamples.
    pub k: usize,
    pub seed: u64,
}

impl BootConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 100 {
            return Err(Error::input(format!(
                "insufficient resamples for quantiles: K = {} (need >= 100)",
                self.k
            )));
        }
        Ok(())
    }
}

pub fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::input(format!(
            "level must lie in (0, 1), got {level}"
        )));
    }
    Ok(())
}

/// Linear-interpolation sample quantile (type 7) of sorted data.
pub fn quantile_sorted(xs: &[f64], p: f64) -> f64 {
    let h = (xs.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(xs.len() - 1);
    xs[lo] + (h - lo as f64) * (xs[hi] - xs[lo])
}

fn sort(xs: &mut [f64]) {
    xs.sort_by(f64::total_cmp);
}

/// `ln σ̂_MLE` with `σ̂² = S²/(2n)`.
pub fn log_sigma_mle(st: &SuffStats) -> f64 {
    0.5 * (st.s2 / (2.0 * st.n as f64)).ln()
}

/// Wald interval `ln σ̂_MLE ± z_{1−α/2} / (2√n)`.
pub fn aci(data: &TwoSampleData, level: f64) -> Result<IntervalResult> {
    check_level(level)?;
    let st = suff_stats(data)?;
    aci_from_stats(&st, level)
}

pub fn aci_from_stats(st: &SuffStats, level: f64) -> Result<IntervalResult> {
    check_level(level)?;
    let z = std_normal_quantile(0.5 + 0.5 * level)?;
    let c = log_sigma_mle(st);
    let h = z / (2.0 * (st.n as f64).sqrt());
    Ok(IntervalResult::new(
        IntervalMethod::Aci,
        level,
        c - h,
        c + h,
        Diagnostics::default(),
    ))
}

/// Generalized pivot `T_U = ln s − ½ ln V`, `V ~ χ²_{2(n−1)}`; empirical
/// equal-tail quantiles over `draws` simulated values.
pub fn gci_umvue(st: &SuffStats, level: f64, draws: usize, seed: u64) -> Result<IntervalResult> {
    check_level(level)?;
    if draws < 1000 {
        return Err(Error::input(format!(
            "gci needs at least 1000 draws, got {draws}"
        )));
    }
    let chi = Dist::chi_square(2.0 * (st.n as f64 - 1.0))?.sampler()?;
    let mut rng = RngStream::new(seed, 0).rng();
    let ln_s = st.ln_s();
    let mut t: Vec<f64> = (0..draws)
        .map(|_| ln_s - 0.5 * chi.sample(&mut rng).ln())
        .collect();
    sort(&mut t);
    let a = 0.5 * (1.0 - level);
    Ok(IntervalResult::new(
        IntervalMethod::Gci,
        level,
        quantile_sorted(&t, a),
        quantile_sorted(&t, 1.0 - a),
        Diagnostics {
            draws,
            ..Default::default()
        },
    ))
}

/// Sorted bootstrap replicates `η*_k = ln σ̂*_k` from parametric resamples at
/// the MLE fit, plus the number of degenerate resamples redrawn.
fn bootstrap_replicates(st: &SuffStats, cfg: &BootConfig) -> Result<(Vec<f64>, usize)> {
    cfg.validate()?;
    let n = st.n;
    let nf = n as f64;
    let sigma = (st.s2 / (2.0 * nf)).sqrt();
    let mut rng = RngStream::new(cfg.seed, 0).rng();
    let mut out = Vec::with_capacity(cfg.k);
    let mut retries = 0;
    for _ in 0..cfg.k {
        let mut tries = 0;
        let s2 = loop {
            let mut ss = 0.0;
            for mu in [st.mean1, st.mean2] {
                let mut mean = 0.0;
                let mut m2 = 0.0;
                for j in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    let x = mu + sigma * z;
                    let d = x - mean;
                    mean += d / (j + 1) as f64;
                    m2 += d * (x - mean);
                }
                ss += m2;
            }
            if ss > 0.0 {
                break ss;
            }
            tries += 1;
            retries += 1;
            if tries >= 10 {
                return Err(Error::numeric(
                    "bootstrap: 10 degenerate resamples in a row",
                ));
            }
        };
        out.push(0.5 * (s2 / (2.0 * nf)).ln());
    }
    sort(&mut out);
    Ok((out, retries))
}

/// Percentile (bootstrap-p) and studentized (bootstrap-t) intervals from the
/// same resamples.
///
/// The studentized form uses the constant `Var(η*) = 1/(4n)` and reflects
/// the bootstrap quantiles about `η̂`:
/// `(η̂ − √Var·T_(1−α/2), η̂ − √Var·T_(α/2))`, `T = (η* − η̂)/√Var`.
pub fn bootstrap_pair(
    data: &TwoSampleData,
    level: f64,
    cfg: &BootConfig,
) -> Result<(IntervalResult, IntervalResult)> {
    let st = suff_stats(data)?;
    bootstrap_pair_from_stats(&st, level, cfg)
}

pub fn bootstrap_pair_from_stats(
    st: &SuffStats,
    level: f64,
    cfg: &BootConfig,
) -> Result<(IntervalResult, IntervalResult)> {
    check_level(level)?;
    let (eta_star, retries) = bootstrap_replicates(st, cfg)?;
    let a = 0.5 * (1.0 - level);
    let eta_hat = log_sigma_mle(st);
    let sd = 0.5 / (st.n as f64).sqrt();
    let diag = Diagnostics {
        draws: cfg.k,
        retries: Some(retries),
        ..Default::default()
    };
    let p_lo = quantile_sorted(&eta_star, a);
    let p_hi = quantile_sorted(&eta_star, 1.0 - a);
    let t: Vec<f64> = eta_star.iter().map(|e| (e - eta_hat) / sd).collect();
    let t_lo = quantile_sorted(&t, a);
    let t_hi = quantile_sorted(&t, 1.0 - a);
    Ok((
        IntervalResult::new(IntervalMethod::BootP, level, p_lo, p_hi, diag.clone()),
        IntervalResult::new(
            IntervalMethod::BootT,
            level,
            eta_hat - sd * t_hi,
            eta_hat - sd * t_lo,
            diag,
        ),
    ))
}

pub fn boot_p(data: &TwoSampleData, level: f64, cfg: &BootConfig) -> Result<IntervalResult> {
    bootstrap_pair(data, level, cfg).map(|p| p.0)
}

pub fn boot_t(data: &TwoSampleData, level: f64, cfg: &BootConfig) -> Result<IntervalResult> {
    bootstrap_pair(data, level, cfg).map(|p| p.1)
}
