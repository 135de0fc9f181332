//! Gibbs / random-walk Metropolis sampler for `(μ1, μ2, β = σ²)` under the
//! Jeffreys-type prior, and the Chen–Shao shortest-window HPD rule.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{check_level, Diagnostics, IntervalMethod, IntervalResult};
use crate::error::{Error, Result};
use crate::model::{suff_stats, SuffStats, TwoSampleData};
use crate::numerics::RngStream;

const TARGET_ACCEPT: f64 = 0.44;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    /// Total iterations, burn-in included.
    pub n_iter: usize,
    pub burn_in: usize,
    /// Random-walk step for β; `None` uses `2.4 (SS/2) / ((n − 1)√n)`.
    pub proposal_sd: Option<f64>,
    pub seed: u64,
    pub thin: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            n_iter: 12_000,
            burn_in: 2_000,
            proposal_sd: None,
            seed: 0,
            thin: 1,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_iter <= self.burn_in {
            return Err(Error::input(format!(
                "n_iter ({}) must exceed burn_in ({})",
                self.n_iter, self.burn_in
            )));
        }
        if self.thin == 0 {
            return Err(Error::input("thin must be at least 1"));
        }
        if (self.n_iter - self.burn_in) / self.thin < 1000 {
            return Err(Error::input(format!(
                "chain length insufficient: {} kept draws (need >= 1000)",
                (self.n_iter - self.burn_in) / self.thin
            )));
        }
        if let Some(sd) = self.proposal_sd {
            if !(sd > 0.0 && sd.is_finite()) {
                return Err(Error::input(format!(
                    "proposal_sd must be positive, got {sd}"
                )));
            }
        }
        Ok(())
    }
}

/// Log of the β full conditional, `−(n + 1) ln β − SS/(2β)`.
fn log_target(beta: f64, n: f64, ss: f64) -> f64 {
    -(n + 1.0) * beta.ln() - 0.5 * ss / beta
}

struct Walker {
    sd: f64,
    accepted: usize,
    proposed: usize,
}

impl Walker {
    fn step(&mut self, rng: &mut ChaCha8Rng, beta: f64, n: f64, ss: f64) -> f64 {
        self.proposed += 1;
        let z: f64 = rng.sample(StandardNormal);
        let prop = beta + self.sd * z;
        if prop <= 0.0 {
            return beta;
        }
        let log_r = log_target(prop, n, ss) - log_target(beta, n, ss);
        let u: f64 = rng.random();
        if log_r >= 0.0 || u.ln() < log_r {
            self.accepted += 1;
            prop
        } else {
            beta
        }
    }

    fn rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Rescale the step once toward the 1-D target rate and reset counts.
    fn adapt(&mut self) {
        let factor = (self.rate() / TARGET_ACCEPT).clamp(0.2, 5.0);
        self.sd *= factor;
        self.accepted = 0;
        self.proposed = 0;
    }
}

fn default_sd(ss: f64, n: usize) -> f64 {
    let nf = n as f64;
    2.4 * (0.5 * ss) / ((nf - 1.0) * nf.sqrt())
}

/// β-only chain at a fixed `SS`, for checking the sampler against its
/// inverse-gamma(n, SS/2) target. Returns `draws` kept values.
pub fn mh_beta_chain(
    n: usize,
    ss: f64,
    draws: usize,
    burn_in: usize,
    thin: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n < 2 || !(ss > 0.0) || thin == 0 {
        return Err(Error::domain(
            "mh_beta_chain needs n >= 2, ss > 0, thin >= 1",
        ));
    }
    let nf = n as f64;
    let mut rng = RngStream::new(seed, 0).rng();
    let mut walker = Walker {
        sd: default_sd(ss, n),
        accepted: 0,
        proposed: 0,
    };
    let mut beta = 0.5 * ss / (nf - 1.0);
    for i in 0..burn_in {
        beta = walker.step(&mut rng, beta, nf, ss);
        if i + 1 == burn_in / 2 {
            walker.adapt();
        }
    }
    let mut out = Vec::with_capacity(draws);
    while out.len() < draws {
        for _ in 0..thin {
            beta = walker.step(&mut rng, beta, nf, ss);
        }
        out.push(beta);
    }
    Ok(out)
}

/// Initial-positive-sequence effective sample size.
pub fn effective_sample_size(xs: &[f64]) -> f64 {
    let m = xs.len();
    if m < 4 {
        return m as f64;
    }
    let mean = xs.iter().sum::<f64>() / m as f64;
    let c0 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m as f64;
    if c0 <= 0.0 {
        return m as f64;
    }
    let acf = |lag: usize| {
        xs[..m - lag]
            .iter()
            .zip(&xs[lag..])
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum::<f64>()
            / (m as f64 * c0)
    };
    let mut sum = 0.0;
    let mut k = 0;
    while 2 * k + 1 < m {
        let pair = acf(2 * k) + acf(2 * k + 1);
        if pair <= 0.0 {
            break;
        }
        sum += pair;
        k += 1;
    }
    let tau = (2.0 * sum - 1.0).max(1.0);
    m as f64 / tau
}

/// Posterior HPD interval for `ln σ`.
pub fn hpd_mcmc(data: &TwoSampleData, level: f64, cfg: &McmcConfig) -> Result<IntervalResult> {
    hpd_mcmc_from_stats(&suff_stats(data)?, level, cfg)
}

pub fn hpd_mcmc_from_stats(st: &SuffStats, level: f64, cfg: &McmcConfig) -> Result<IntervalResult> {
    check_level(level)?;
    cfg.validate()?;
    let n = st.n;
    let nf = n as f64;
    let mut rng = RngStream::new(cfg.seed, 0).rng();
    let mut walker = Walker {
        sd: cfg.proposal_sd.unwrap_or_else(|| default_sd(st.s2, n)),
        accepted: 0,
        proposed: 0,
    };
    let mut beta = 0.5 * st.s2 / (nf - 1.0);
    let mut theta = Vec::with_capacity((cfg.n_iter - cfg.burn_in) / cfg.thin);
    for i in 0..cfg.n_iter {
        let sd = (beta / nf).sqrt();
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let mu1 = st.mean1 + sd * z1;
        let mu2 = st.mean2 + sd * z2;
        let d1 = st.mean1 - mu1;
        let d2 = st.mean2 - mu2;
        let ss = st.s2 + nf * (d1 * d1 + d2 * d2);
        beta = walker.step(&mut rng, beta, nf, ss);
        if cfg.proposal_sd.is_none() && cfg.burn_in >= 2 && i + 1 == cfg.burn_in / 2 {
            walker.adapt();
        }
        if i + 1 == cfg.burn_in {
            walker.accepted = 0;
            walker.proposed = 0;
        }
        if i >= cfg.burn_in && (i - cfg.burn_in + 1).is_multiple_of(cfg.thin) {
            theta.push(0.5 * beta.ln());
        }
    }
    let rate = walker.rate();
    let ess = effective_sample_size(&theta);
    let mut warnings = Vec::new();
    if !(0.05..=0.7).contains(&rate) {
        warnings.push(format!("MH acceptance rate {rate:.3} outside [0.05, 0.7]"));
    }
    theta.sort_by(f64::total_cmp);
    let (lower, upper) = chen_shao_hpd(&theta, level)?;
    Ok(IntervalResult::new(
        IntervalMethod::Hpd,
        level,
        lower,
        upper,
        Diagnostics {
            acceptance_rate: Some(rate),
            ess: Some(ess),
            draws: theta.len(),
            retries: None,
            warnings,
        },
    ))
}

/// Shortest window holding `floor(level·M)` gaps among sorted draws; the
/// first window wins among widths equal up to rounding.
pub fn chen_shao_hpd(sorted: &[f64], level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    let m = sorted.len();
    if m < 100 {
        return Err(Error::input(format!(
            "chen_shao_hpd needs at least 100 draws, got {m}"
        )));
    }
    if sorted.windows(2).any(|p| !(p[0] <= p[1])) {
        return Err(Error::input("draws must be sorted ascending"));
    }
    let k = ((level * m as f64) + 1e-9).floor() as usize;
    let k = k.clamp(1, m - 1);
    let widths = || (0..m - k).map(|j| sorted[j + k] - sorted[j]);
    let best = widths().fold(f64::INFINITY, f64::min);
    let scale = sorted[m - 1]
        .abs()
        .max(sorted[0].abs())
        .max(f64::MIN_POSITIVE);
    let tol = best + 64.0 * f64::EPSILON * scale;
    let j = widths().position(|w| w <= tol).expect("non-empty windows");
    Ok((sorted[j], sorted[j + k]))
}
