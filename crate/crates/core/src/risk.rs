//! Monte Carlo risk, bias, RRI and GPC at `μ1 = 0`, `σ = 1`,
//! `μ2 = η/√n`.
//!
//! Replication `r` always draws from the stream `(seed ⊕ n, r)`, for every
//! `η`, loss and estimator, so all comparisons are paired (common random
//! numbers). Replications are processed in fixed-size blocks whose partial
//! sums are folded in block order, which makes results independent of the
//! worker count.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{EstimatorContext, EstimatorKind};
use crate::model::{Loss, SuffStats};
use crate::numerics::special::{digamma, ln_gamma, trigamma};
use crate::numerics::RngStream;

pub const BLOCK: usize = 4096;

/// Running mean and centred second moment, mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        let na = self.count as f64;
        let nb = other.count as f64;
        self.mean += d * nb / n as f64;
        self.m2 += other.m2 + d * d * na * nb / n as f64;
        self.count = n;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        self.m2 / (self.count - 1) as f64
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub eta_grid: Vec<f64>,
    pub loss: Loss,
    pub replications: usize,
    pub master_seed: u64,
    pub estimators: Vec<EstimatorKind>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::input(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if self.eta_grid.is_empty() {
            return Err(Error::input("eta grid is empty"));
        }
        if let Some(e) = self
            .eta_grid
            .iter()
            .find(|e| !(**e >= 0.0) || !e.is_finite())
        {
            return Err(Error::input(format!(
                "eta must be finite and >= 0, got {e}"
            )));
        }
        if self.replications < 2 {
            return Err(Error::input("need at least 2 replications"));
        }
        if self.estimators.is_empty() {
            return Err(Error::input("no estimators requested"));
        }
        Ok(())
    }

    /// Requested estimators with BAEE prepended if missing.
    fn kinds(&self) -> Vec<EstimatorKind> {
        let mut k = self.estimators.clone();
        if !k.contains(&EstimatorKind::Baee) {
            k.insert(0, EstimatorKind::Baee);
        }
        k
    }
}

/// Sufficient statistics of replication `rep` for a given `η`.
#[derive(Debug, Clone, Copy)]
pub struct ReplicationDraw {
    pub mean1: f64,
    pub mean2_base: f64,
    pub s2: f64,
}

impl ReplicationDraw {
    pub fn stats(&self, n: usize, eta: f64) -> Result<SuffStats> {
        SuffStats::from_parts(
            n,
            self.mean1,
            self.mean2_base + eta / (n as f64).sqrt(),
            self.s2,
        )
    }
}

/// Random stream used by replication `rep` at sample size `n`.
pub fn replication_stream(master_seed: u64, n: usize, rep: u64) -> RngStream {
    RngStream::new(master_seed, 0)
        .derive(n as u64)
        .with_index(rep)
}

/// Mean and sum of squared deviations of `n` standard normal draws.
fn normal_sample_moments<R: Rng>(rng: &mut R, n: usize) -> (f64, f64) {
    let mut m = Moments::default();
    for _ in 0..n {
        m.push(rng.sample(StandardNormal));
    }
    (m.mean, m.m2)
}

/// Draw two standard normal samples of size `n`; the second is later shifted
/// by `η/√n`.
pub fn draw_replication(master_seed: u64, n: usize, rep: u64) -> ReplicationDraw {
    let mut rng = replication_stream(master_seed, n, rep).rng();
    let (m1, ss1) = normal_sample_moments(&mut rng, n);
    let (m2, ss2) = normal_sample_moments(&mut rng, n);
    ReplicationDraw {
        mean1: m1,
        mean2_base: m2,
        s2: ss1 + ss2,
    }
}

#[derive(Debug, Clone)]
struct EtaAcc {
    loss: Vec<Moments>,
    est: Vec<Moments>,
    // pair[i * k + j], i < j: loss_i − loss_j
    pair: Vec<Moments>,
}

impl EtaAcc {
    fn new(k: usize) -> Self {
        EtaAcc {
            loss: vec![Moments::default(); k],
            est: vec![Moments::default(); k],
            pair: vec![Moments::default(); k * k],
        }
    }

    fn merge(&mut self, o: &EtaAcc) {
        for (a, b) in self.loss.iter_mut().zip(&o.loss) {
            a.merge(b);
        }
        for (a, b) in self.est.iter_mut().zip(&o.est) {
            a.merge(b);
        }
        for (a, b) in self.pair.iter_mut().zip(&o.pair) {
            a.merge(b);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub estimator: String,
    pub eta: f64,
    pub risk: f64,
    pub mc_stderr: f64,
    pub bias: f64,
    pub bias_stderr: f64,
    pub rri_vs_baee: f64,
    pub rri_stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedDiff {
    /// Mean of `loss(a) − loss(b)`.
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub config: SimConfig,
    pub estimators: Vec<String>,
    pub cells: Vec<CellResult>,
    #[serde(skip)]
    pairs: Vec<Vec<Moments>>,
}

impl SimResult {
    fn index(&self, name: &str) -> Option<usize> {
        self.estimators.iter().position(|e| e == name)
    }

    fn eta_index(&self, eta: f64) -> Option<usize> {
        self.config
            .eta_grid
            .iter()
            .position(|e| (e - eta).abs() < 1e-12)
    }

    pub fn cell(&self, estimator: &EstimatorKind, eta: f64) -> Option<&CellResult> {
        let name = estimator.name();
        self.cells
            .iter()
            .find(|c| c.estimator == name && (c.eta - eta).abs() < 1e-12)
    }

    /// Paired difference `risk(a) − risk(b)` at `η` with its standard error.
    pub fn paired(&self, a: &EstimatorKind, b: &EstimatorKind, eta: f64) -> Option<PairedDiff> {
        let e = self.eta_index(eta)?;
        let i = self.index(a.name())?;
        let j = self.index(b.name())?;
        let k = self.estimators.len();
        if i == j {
            return Some(PairedDiff {
                mean: 0.0,
                stderr: 0.0,
            });
        }
        let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        let m = &self.pairs[e][lo * k + hi];
        Some(PairedDiff {
            mean: sign * m.mean,
            stderr: m.stderr(),
        })
    }

    /// CSV with columns `n,eta,loss,a1,estimator,risk,stderr,bias,rri`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,eta,loss,a1,estimator,risk,stderr,bias,rri\n");
        let a1 = self
            .config
            .loss
            .a1()
            .map(|a| a.to_string())
            .unwrap_or_default();
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.10e},{:.10e},{:.10e},{:.6}",
                self.config.n,
                c.eta,
                self.config.loss.label(),
                a1,
                c.estimator,
                c.risk,
                c.mc_stderr,
                c.bias,
                c.rri_vs_baee
            );
        }
        out
    }
}

fn run_block(
    cfg: &SimConfig,
    ctx: &EstimatorContext,
    kinds: &[EstimatorKind],
    block: usize,
) -> Result<Vec<EtaAcc>> {
    let k = kinds.len();
    let mut accs = vec![EtaAcc::new(k); cfg.eta_grid.len()];
    let start = block * BLOCK;
    let end = (start + BLOCK).min(cfg.replications);
    let mut est = vec![0.0; k];
    let mut loss = vec![0.0; k];
    for rep in start..end {
        let draw = draw_replication(cfg.master_seed, cfg.n, rep as u64);
        for (e, &eta) in cfg.eta_grid.iter().enumerate() {
            let st = draw
                .stats(cfg.n, eta)
                .map_err(|err| Error::numeric(format!("replication {rep}: {err}")))?;
            for (i, kind) in kinds.iter().enumerate() {
                est[i] = ctx
                    .estimate(kind, &st)
                    .map_err(|err| Error::numeric(format!("replication {rep}, {kind}: {err}")))?;
                loss[i] = cfg.loss.eval(est[i]);
            }
            let acc = &mut accs[e];
            for i in 0..k {
                acc.loss[i].push(loss[i]);
                acc.est[i].push(est[i]);
                for j in i + 1..k {
                    acc.pair[i * k + j].push(loss[i] - loss[j]);
                }
            }
        }
    }
    Ok(accs)
}

pub fn simulate_risk(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let kinds = cfg.kinds();
    let ctx = EstimatorContext::new(cfg.loss, cfg.n)?;
    if kinds.contains(&EstimatorKind::BrewsterZidek) {
        // Build the shared table before the workers start.
        ctx.estimate(
            &EstimatorKind::BrewsterZidek,
            &SuffStats::from_parts(cfg.n, 0.0, 0.0, 1.0)?,
        )?;
    }
    let blocks = cfg.replications.div_ceil(BLOCK);
    let partial: Vec<Vec<EtaAcc>> = (0..blocks)
        .into_par_iter()
        .map(|b| run_block(cfg, &ctx, &kinds, b))
        .collect::<Result<_>>()?;
    let k = kinds.len();
    let mut total = vec![EtaAcc::new(k); cfg.eta_grid.len()];
    for p in &partial {
        for (t, q) in total.iter_mut().zip(p) {
            t.merge(q);
        }
    }
    let base = kinds
        .iter()
        .position(|x| *x == EstimatorKind::Baee)
        .expect("BAEE present");
    let mut cells = Vec::new();
    for (e, &eta) in cfg.eta_grid.iter().enumerate() {
        let acc = &total[e];
        let rb = acc.loss[base].mean;
        for (i, kind) in kinds.iter().enumerate() {
            let m = &acc.loss[i];
            // RRI = 100 (R_baee − R_i)/R_baee; its stderr from the paired difference.
            let (lo, hi, sign) = if base < i {
                (base, i, 1.0)
            } else {
                (i, base, -1.0)
            };
            let (diff, dse) = if i == base {
                (0.0, 0.0)
            } else {
                let p = &acc.pair[lo * k + hi];
                (sign * p.mean, p.stderr())
            };
            cells.push(CellResult {
                estimator: kind.name().to_string(),
                eta,
                risk: m.mean,
                mc_stderr: m.stderr(),
                bias: acc.est[i].mean,
                bias_stderr: acc.est[i].stderr(),
                rri_vs_baee: 100.0 * diff / rb,
                rri_stderr: 100.0 * dse / rb,
            });
        }
    }
    Ok(SimResult {
        config: cfg.clone(),
        estimators: kinds.iter().map(|k| k.name().to_string()).collect(),
        cells,
        pairs: total.into_iter().map(|a| a.pair).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RriRow {
    pub eta: f64,
    pub estimator: String,
    pub rri: f64,
    pub rri_stderr: f64,
}

/// RRI of every requested estimator against BAEE, per `η`.
pub fn rri_curve(cfg: &SimConfig) -> Result<Vec<RriRow>> {
    let r = simulate_risk(cfg)?;
    Ok(r.cells
        .iter()
        .map(|c| RriRow {
            eta: c.eta,
            estimator: c.estimator.clone(),
            rri: c.rri_vs_baee,
            rri_stderr: c.rri_stderr,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpcResult {
    pub probability: f64,
    pub stderr: f64,
    pub replications: usize,
}

/// Generalized Pitman closeness of `d1` relative to `d2`:
/// `P(L(δ1 − τ) < L(δ2 − τ)) + P(tie)/2`.
pub fn gpc_estimate(
    d1: &EstimatorKind,
    d2: &EstimatorKind,
    loss: Loss,
    n: usize,
    eta: f64,
    reps: usize,
    seed: u64,
) -> Result<GpcResult> {
    if reps < 2 {
        return Err(Error::input("gpc needs at least 2 replications"));
    }
    if !(eta >= 0.0) {
        return Err(Error::input(format!("eta must be >= 0, got {eta}")));
    }
    let ctx = EstimatorContext::new(loss, n)?;
    let blocks = reps.div_ceil(BLOCK);
    let partial: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<Moments> {
            let mut m = Moments::default();
            for rep in b * BLOCK..((b + 1) * BLOCK).min(reps) {
                let st = draw_replication(seed, n, rep as u64).stats(n, eta)?;
                let l1 = loss.eval(ctx.estimate(d1, &st)?);
                let l2 = loss.eval(ctx.estimate(d2, &st)?);
                let score = if l1 < l2 {
                    1.0
                } else if l1 == l2 {
                    0.5
                } else {
                    0.0
                };
                m.push(score);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let mut total = Moments::default();
    for p in &partial {
        total.merge(p);
    }
    Ok(GpcResult {
        probability: total.mean,
        stderr: total.stderr(),
        replications: reps,
    })
}

fn check_gamma(loss: Loss, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2, got {n}")));
    }
    if let Loss::Linex { a1 } = loss {
        if !(n as f64 - 1.0 + 0.5 * a1 > 0.0) {
            return Err(Error::domain("Γ(n − 1 + a1/2) needs a positive argument"));
        }
    }
    Ok(())
}

/// Bias of the BAEE: 0 under squared error,
/// `ψ(n−1)/2 − (1/a1) ln(Γ(n−1+a1/2)/Γ(n−1))` under linex.
pub fn closed_form_bias_baee(loss: Loss, n: usize) -> Result<f64> {
    check_gamma(loss, n)?;
    let m = n as f64 - 1.0;
    match loss {
        Loss::SquaredError => Ok(0.0),
        Loss::Linex { a1 } => Ok(0.5 * digamma(m)? - (ln_gamma(m + 0.5 * a1)? - ln_gamma(m)?) / a1),
    }
}

/// Risk of the BAEE in the printed closed form: `ψ₁(n−1)/4` under squared
/// error; under linex
/// `2^{(a1−1)/2} (Γ((n+a1−2)/2)/Γ(n−1))^{1−1/a1} − (a1/2)ψ(n−1)
///  + ln(Γ((2n+a1−2)/2)/Γ(n−1)) − 1`.
/// The linex expression does not match simulation; see
/// [`exact_risk_baee`] and [`linex_risk_crosscheck`].
pub fn closed_form_risk_baee(loss: Loss, n: usize) -> Result<f64> {
    check_gamma(loss, n)?;
    let m = n as f64 - 1.0;
    match loss {
        Loss::SquaredError => Ok(0.25 * trigamma(m)?),
        Loss::Linex { a1 } => {
            let nf = n as f64;
            let g1 = 0.5 * (nf + a1 - 2.0);
            if !(g1 > 0.0) {
                return Err(Error::domain("Γ((n + a1 − 2)/2) needs a positive argument"));
            }
            let lg = ln_gamma(m)?;
            let first =
                (0.5 * (a1 - 1.0) * 2f64.ln() + (1.0 - 1.0 / a1) * (ln_gamma(g1)? - lg)).exp();
            Ok(
                first - 0.5 * a1 * digamma(m)? + (ln_gamma(0.5 * (2.0 * nf + a1 - 2.0))? - lg)
                    - 1.0,
            )
        }
    }
}

/// Risk of the BAEE derived from `E[e^{a1 t}] = 1` at the optimal constant:
/// squared error `ψ₁(n−1)/4`, linex `−a1·bias`.
pub fn exact_risk_baee(loss: Loss, n: usize) -> Result<f64> {
    match loss {
        Loss::SquaredError => closed_form_risk_baee(loss, n),
        Loss::Linex { a1 } => Ok(-a1 * closed_form_bias_baee(loss, n)?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskCrosscheck {
    pub printed: f64,
    pub exact: f64,
    pub monte_carlo: f64,
    pub mc_stderr: f64,
    pub printed_agrees: bool,
    pub exact_agrees: bool,
}

/// Compare both closed forms with a BAEE simulation (3 standard errors).
pub fn linex_risk_crosscheck(
    loss: Loss,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<RiskCrosscheck> {
    let cfg = SimConfig {
        n,
        eta_grid: vec![0.0],
        loss,
        replications: reps,
        master_seed: seed,
        estimators: vec![EstimatorKind::Baee],
    };
    let r = simulate_risk(&cfg)?;
    let c = r.cell(&EstimatorKind::Baee, 0.0).expect("baee cell");
    let printed = closed_form_risk_baee(loss, n)?;
    let exact = exact_risk_baee(loss, n)?;
    Ok(RiskCrosscheck {
        printed,
        exact,
        monte_carlo: c.risk,
        mc_stderr: c.mc_stderr,
        printed_agrees: (printed - c.risk).abs() <= 3.0 * c.mc_stderr,
        exact_agrees: (exact - c.risk).abs() <= 3.0 * c.mc_stderr,
    })
}
