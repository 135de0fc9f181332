//! Coverage studies for the interval procedures and the data-screening
//! tests (normality, equal variances, ordered means).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{
    aci_from_stats, bootstrap_pair_from_stats, check_level, gci_umvue, hpd_mcmc_from_stats,
    BootConfig, IntervalMethod, IntervalResult, McmcConfig,
};
use crate::model::SuffStats;
use crate::numerics::{f_cdf, kolmogorov_sf, mix_seed, std_normal_cdf, t_cdf};
use crate::risk::draw_replication;

/// Largest tolerated share of failed interval computations per cell.
pub const MAX_FAILURE_RATE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub n_grid: Vec<usize>,
    pub sigma: f64,
    pub outer_reps: usize,
    pub methods: Vec<IntervalMethod>,
    pub level: f64,
    /// Bootstrap resamples per outer replication.
    pub boot_k: usize,
    /// Pivot draws per outer replication.
    pub gci_draws: usize,
    /// Chain settings; the seed field is replaced per replication.
    pub mcmc: McmcConfig,
    pub master_seed: u64,
}

impl CoverageConfig {
    /// Desk-scale defaults: 5,000 outer replications, 1,000 inner draws.
    pub fn desk(n_grid: Vec<usize>, methods: Vec<IntervalMethod>, master_seed: u64) -> Self {
        CoverageConfig {
            n_grid,
            sigma: 1.0,
            outer_reps: 5_000,
            methods,
            level: 0.95,
            boot_k: 1_000,
            gci_draws: 1_000,
            mcmc: McmcConfig {
                n_iter: 3_000,
                burn_in: 1_000,
                ..Default::default()
            },
            master_seed,
        }
    }

    /// 30,000 outer replications; 3,000 resamples, 10,000 pivot and chain draws.
    pub fn paper(n_grid: Vec<usize>, methods: Vec<IntervalMethod>, master_seed: u64) -> Self {
        CoverageConfig {
            outer_reps: 30_000,
            boot_k: 3_000,
            gci_draws: 10_000,
            mcmc: McmcConfig {
                n_iter: 12_000,
                burn_in: 2_000,
                ..Default::default()
            },
            ..Self::desk(n_grid, methods, master_seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.outer_reps < 500 {
            return Err(Error::input(format!(
                "outer_reps must be at least 500, got {}",
                self.outer_reps
            )));
        }
        check_level(self.level)?;
        if self.methods.is_empty() {
            return Err(Error::input("no interval methods requested"));
        }
        if self.n_grid.is_empty() || self.n_grid.iter().any(|&n| n < 3) {
            return Err(Error::input("n grid must be non-empty with every n >= 3"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::input("sigma must be positive"));
        }
        if self.methods.contains(&IntervalMethod::Gci) && self.gci_draws < 1000 {
            return Err(Error::input("gci needs at least 1000 draws"));
        }
        if self
            .methods
            .iter()
            .any(|m| matches!(m, IntervalMethod::BootP | IntervalMethod::BootT))
        {
            BootConfig {
                k: self.boot_k,
                seed: 0,
            }
            .validate()?;
        }
        if self.methods.contains(&IntervalMethod::Hpd) {
            self.mcmc.validate()?;
        }
        Ok(())
    }

    fn inner_reps(&self, m: IntervalMethod) -> usize {
        match m {
            IntervalMethod::Aci => 0,
            IntervalMethod::BootP | IntervalMethod::BootT => self.boot_k,
            IntervalMethod::Gci => self.gci_draws,
            IntervalMethod::Hpd => (self.mcmc.n_iter - self.mcmc.burn_in) / self.mcmc.thin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageCell {
    pub method: IntervalMethod,
    pub n: usize,
    pub level: f64,
    pub cp: f64,
    pub cp_stderr: f64,
    pub al: f64,
    pub pcd: f64,
    pub outer_reps: usize,
    pub inner_reps: usize,
    pub failures: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageResult {
    pub cells: Vec<CoverageCell>,
}

impl CoverageResult {
    pub fn cell(&self, method: IntervalMethod, n: usize) -> Option<&CoverageCell> {
        self.cells.iter().find(|c| c.method == method && c.n == n)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,n,level,cp,cp_stderr,al,pcd,outer_reps,inner_reps,seed\n");
        for c in &self.cells {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                c.method,
                c.n,
                c.level,
                c.cp,
                c.cp_stderr,
                c.al,
                c.pcd,
                c.outer_reps,
                c.inner_reps,
                c.seed
            ));
        }
        s
    }
}

// Seed tags per procedure; boot-p and boot-t share one.
const TAG_BOOT: u64 = 0xB007;
const TAG_GCI: u64 = 0x6C1;
const TAG_HPD: u64 = 0x4FD;

/// One outer replication: each method's interval (or failure) in
/// `cfg.methods` order.
fn replicate(cfg: &CoverageConfig, n: usize, rep: u64) -> Result<Vec<Option<IntervalResult>>> {
    let d = draw_replication(cfg.master_seed, n, rep);
    let sig = cfg.sigma;
    let st = SuffStats::from_parts(n, sig * d.mean1, sig * d.mean2_base, sig * sig * d.s2)?;
    let seed = |tag: u64| mix_seed(cfg.master_seed, &[tag, n as u64, rep]);
    let mut boot: Option<Option<(IntervalResult, IntervalResult)>> = None;
    let mut out = Vec::with_capacity(cfg.methods.len());
    for &m in &cfg.methods {
        let r = match m {
            IntervalMethod::Aci => aci_from_stats(&st, cfg.level).ok(),
            IntervalMethod::Gci => gci_umvue(&st, cfg.level, cfg.gci_draws, seed(TAG_GCI)).ok(),
            IntervalMethod::Hpd => {
                let mc = McmcConfig {
                    seed: seed(TAG_HPD),
                    ..cfg.mcmc
                };
                hpd_mcmc_from_stats(&st, cfg.level, &mc).ok()
            }
            IntervalMethod::BootP | IntervalMethod::BootT => {
                let pair = boot.get_or_insert_with(|| {
                    let bc = BootConfig {
                        k: cfg.boot_k,
                        seed: seed(TAG_BOOT),
                    };
                    bootstrap_pair_from_stats(&st, cfg.level, &bc).ok()
                });
                pair.as_ref().map(|(p, t)| {
                    if m == IntervalMethod::BootP {
                        p.clone()
                    } else {
                        t.clone()
                    }
                })
            }
        };
        out.push(r);
    }
    Ok(out)
}

/// Coverage probability, average length and PCD = CP/AL for each method and
/// `n`. Data are drawn at `μ1 = μ2 = 0` and the configured `σ`.
pub fn coverage_study(cfg: &CoverageConfig) -> Result<CoverageResult> {
    cfg.validate()?;
    let truth = cfg.sigma.ln();
    let mut cells = Vec::new();
    for &n in &cfg.n_grid {
        let reps: Vec<Vec<Option<IntervalResult>>> = (0..cfg.outer_reps as u64)
            .into_par_iter()
            .map(|rep| replicate(cfg, n, rep))
            .collect::<Result<_>>()?;
        for (i, &m) in cfg.methods.iter().enumerate() {
            let mut hits = 0usize;
            let mut len_sum = 0.0;
            let mut ok = 0usize;
            for r in reps.iter().filter_map(|r| r[i].as_ref()) {
                ok += 1;
                if r.contains(truth) {
                    hits += 1;
                }
                len_sum += r.length;
            }
            let failures = cfg.outer_reps - ok;
            if failures as f64 > MAX_FAILURE_RATE * cfg.outer_reps as f64 {
                return Err(Error::numeric(format!(
                    "{m} at n = {n}: {failures} of {} replications failed",
                    cfg.outer_reps
                )));
            }
            let cp = hits as f64 / ok as f64;
            let al = len_sum / ok as f64;
            cells.push(CoverageCell {
                method: m,
                n,
                level: cfg.level,
                cp,
                cp_stderr: (cp * (1.0 - cp) / ok as f64).sqrt(),
                al,
                pcd: cp / al,
                outer_reps: cfg.outer_reps,
                inner_reps: cfg.inner_reps(m),
                failures,
                seed: cfg.master_seed,
            });
        }
    }
    Ok(CoverageResult { cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

impl TestResult {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// One-sample Kolmogorov–Smirnov test against a fully specified CDF, with
/// the asymptotic Kolmogorov p-value.
pub fn ks_test(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestResult> {
    if sample.is_empty() || sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("KS test needs a non-empty finite sample"));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / m).max((i + 1) as f64 / m - f)
        })
        .fold(0.0, f64::max);
    Ok(TestResult {
        statistic: d,
        p_value: kolmogorov_sf(m.sqrt() * d),
    })
}

/// KS test against `N(x̄, s²)` with the sample mean and variance plugged in.
pub fn ks_normality(sample: &[f64]) -> Result<TestResult> {
    if sample.len() < 3 {
        return Err(Error::input("normality test needs at least 3 observations"));
    }
    let (mean, var) = mean_var(sample);
    if !(var > 0.0) {
        return Err(Error::DegenerateData);
    }
    let sd = var.sqrt();
    ks_test(sample, |x| std_normal_cdf((x - mean) / sd))
}

/// `F = s1²/s2²` with a two-sided p-value.
pub fn f_test_equal_var(s1: &[f64], s2: &[f64]) -> Result<TestResult> {
    if s1.len() < 2 || s2.len() < 2 {
        return Err(Error::input(
            "F test needs at least 2 observations per sample",
        ));
    }
    let (_, v1) = mean_var(s1);
    let (_, v2) = mean_var(s2);
    if !(v1 > 0.0 && v2 > 0.0) {
        return Err(Error::DegenerateData);
    }
    let f = v1 / v2;
    let c = f_cdf((s1.len() - 1) as f64, (s2.len() - 1) as f64, f)?;
    Ok(TestResult {
        statistic: f,
        p_value: (2.0 * c.min(1.0 - c)).min(1.0),
    })
}

/// Pooled two-sample t-test of `H0: μ1 ≤ μ2` against `μ1 > μ2`;
/// `t = (x̄1 − x̄2)/se`, `p = P(T > t)`. A large p-value is consistent with
/// the ordering.
pub fn t_test_ordered_means(s1: &[f64], s2: &[f64]) -> Result<TestResult> {
    if s1.len() < 2 || s2.len() < 2 {
        return Err(Error::input(
            "t test needs at least 2 observations per sample",
        ));
    }
    let (n1, n2) = (s1.len() as f64, s2.len() as f64);
    let (m1, v1) = mean_var(s1);
    let (m2, v2) = mean_var(s2);
    let df = n1 + n2 - 2.0;
    let pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / df;
    if !(pooled > 0.0) {
        return Err(Error::DegenerateData);
    }
    let t = (m1 - m2) / (pooled * (1.0 / n1 + 1.0 / n2)).sqrt();
    Ok(TestResult {
        statistic: t,
        p_value: 1.0 - t_cdf(df, t)?,
    })
}
