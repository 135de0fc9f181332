//! The smooth Brewster–Zidek cutoff `r0(|w|)` and the IERD checker.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{d0, m0, Loss};
use crate::numerics::special::{digamma, erf, ln_gamma};
use crate::numerics::{
    find_root, integrate_j, integrate_points, peak_breakpoints, Pchip, QuadSpec,
};

/// `r0(|w|)` from the closed-form integral expressions.
///
/// With `a = n - 1/2`, `y = n w²` and `J_k = ∫₀^y t^{-1/2}(2+t)^{-a}[ln(2+t)]^k dt`:
/// squared error gives `-(ψ(a) + ln 4 - J₁/J₀)/2`; linex gives
/// `(1/a1) ln[Γ(a) J(a) / (4^{a1/2} Γ(a + a1/2) J(a + a1/2))]`.
pub fn bz_r0(absw: f64, n: usize, loss: Loss) -> Result<f64> {
    if !(absw >= 0.0) {
        return Err(Error::domain(format!("bz_r0 needs |w| >= 0, got {absw}")));
    }
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2, got {n}")));
    }
    if absw == 0.0 {
        return m0(loss, n);
    }
    if absw.is_infinite() {
        return d0(loss, n);
    }
    let a = n as f64 - 0.5;
    let y = n as f64 * absw * absw;
    match loss {
        Loss::SquaredError => {
            let j0 = integrate_j(a, y, 0)?;
            let j1 = integrate_j(a, y, 1)?;
            Ok(-0.5 * (digamma(a)? + 4f64.ln() - j1 / j0))
        }
        Loss::Linex { a1 } => {
            let b = a + 0.5 * a1;
            if !(b > 0.0) {
                return Err(Error::domain(format!(
                    "linex r0 needs n - 1/2 + a1/2 > 0, got {b}"
                )));
            }
            let ja = integrate_j(a, y, 0)?;
            let jb = integrate_j(b, y, 0)?;
            let log_ratio = ln_gamma(a)? + ja.ln() - (a1 * 2f64.ln() + ln_gamma(b)? + jb.ln());
            Ok(log_ratio / a1)
        }
    }
}

/// `r0(α)` straight from its defining equation: at η = 0, σ = 1 and given
/// `|W| ≤ α`, `z = ln S` has density ∝ `exp((2n−2)z − e^{2z}/2)·erf(α√n e^z / 2)`;
/// `r0` is the root of `E[L'(z + r)] = 0`. Works for any loss with an
/// increasing derivative.
pub fn bz_r0_generic(absw: f64, n: usize, loss: Loss) -> Result<f64> {
    if !(absw >= 0.0) {
        return Err(Error::domain(format!("bz_r0 needs |w| >= 0, got {absw}")));
    }
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2, got {n}")));
    }
    if absw == 0.0 {
        return m0(loss, n);
    }
    if absw.is_infinite() {
        return d0(loss, n);
    }
    let nf = n as f64;
    let shape = nf - 1.0;
    let mode = 0.5 * (2.0 * shape).ln();
    let log_at_mode = 2.0 * shape * mode - shape;
    let rate = match loss {
        Loss::Linex { a1 } if a1 < 0.0 => 2.0 * shape + a1,
        _ => 2.0 * shape,
    };
    if !(rate > 0.0) {
        return Err(Error::domain(format!(
            "conditional risk diverges for n = {n} under {loss}"
        )));
    }
    let lo = mode - (80.0 / rate + 5.0);
    let hi = mode + 5.0;
    let pts = peak_breakpoints(lo, hi, mode, 0.5 / shape.sqrt());
    let spec = QuadSpec::relative(1e-13);
    let c = 0.5 * absw * nf.sqrt();
    let density = |z: f64| {
        let base = (2.0 * shape * z - 0.5 * (2.0 * z).exp() - log_at_mode).exp();
        base * erf(c * z.exp())
    };
    let mut first_err: Option<Error> = None;
    let mut moment = |r: f64| -> f64 {
        match integrate_points(|z| loss.deriv(z + r) * density(z), &pts, &spec) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let (mut a, mut b) = (m0(loss, n)? - 0.5, d0(loss, n)? + 0.5);
    let mut k = 0;
    while moment(a) > 0.0 && k < 30 {
        a -= 1.0;
        k += 1;
    }
    while moment(b) < 0.0 && k < 60 {
        b += 1.0;
        k += 1;
    }
    let r = find_root(&mut moment, a, b, 1e-13);
    if let Some(e) = first_err {
        return Err(e);
    }
    r
}

/// `r0` tabulated on a uniform grid in `v = w²/(1+w²) ∈ [0, 1]` and
/// interpolated with a monotone cubic. `r0` is smooth in `w²`, so this
/// variable has no kink at the origin. Used in simulation loops.
#[derive(Debug, Clone)]
pub struct R0Table {
    pub n: usize,
    pub loss: Loss,
    interp: Pchip,
}

pub const R0_TABLE_POINTS: usize = 4097;

impl R0Table {
    pub fn build(n: usize, loss: Loss, points: usize) -> Result<Self> {
        if points < 3 {
            return Err(Error::input("R0Table needs at least 3 points"));
        }
        let last = (points - 1) as f64;
        let s: Vec<f64> = (0..points).map(|i| i as f64 / last).collect();
        let r: Vec<f64> = s
            .par_iter()
            .map(|&si| {
                let absw = if si >= 1.0 {
                    f64::INFINITY
                } else {
                    (si / (1.0 - si)).sqrt()
                };
                bz_r0(absw, n, loss)
            })
            .collect::<Result<_>>()?;
        Ok(R0Table {
            n,
            loss,
            interp: Pchip::new(s, r)?,
        })
    }

    pub fn eval(&self, absw: f64) -> f64 {
        let w2 = absw * absw;
        let v = if w2.is_infinite() {
            1.0
        } else {
            w2 / (1.0 + w2)
        };
        self.interp.eval(v)
    }

    /// CSV with header `absw,r0`; the `|w| = ∞` knot is omitted.
    pub fn to_csv(&self) -> String {
        let (s, r) = self.interp.knots();
        let mut out = String::from("absw,r0\n");
        for (si, ri) in s.iter().zip(r) {
            if *si < 1.0 {
                let _ = writeln!(out, "{},{}", (si / (1.0 - si)).sqrt(), ri);
            }
        }
        out
    }
}

type TableKey = (u8, u64, usize);

fn table_key(loss: Loss, n: usize) -> TableKey {
    match loss {
        Loss::SquaredError => (0, 0, n),
        Loss::Linex { a1 } => (1, a1.to_bits(), n),
    }
}

static TABLES: OnceLock<RwLock<HashMap<TableKey, Arc<R0Table>>>> = OnceLock::new();

/// Shared table for `(loss, n)`, built on first use.
pub fn r0_table(loss: Loss, n: usize) -> Result<Arc<R0Table>> {
    let map = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    let key = table_key(loss, n);
    if let Some(t) = map.read().expect("r0 cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(R0Table::build(n, loss, R0_TABLE_POINTS)?);
    let mut w = map.write().expect("r0 cache poisoned");
    Ok(Arc::clone(w.entry(key).or_insert(built)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct IerdReport {
    pub monotone: bool,
    pub limit_ok: bool,
    pub dominates: bool,
}

impl IerdReport {
    pub fn all(&self) -> bool {
        self.monotone && self.limit_ok && self.dominates
    }
}

/// Check the three IERD conditions for `φ` tabulated on `y = w²`:
/// nondecreasing, `φ(y_max) ≈ d0` (1e-4), and `φ ≥ φ*` where
/// `φ*(y) = r0(√y)`.
pub fn ierd_check(y: &[f64], phi: &[f64], loss: Loss, n: usize) -> Result<IerdReport> {
    if y.len() != phi.len() || y.is_empty() {
        return Err(Error::input(
            "ierd_check: grid and values must have equal, nonzero length",
        ));
    }
    if y.windows(2).any(|w| !(w[0] < w[1])) || !(y[0] > 0.0) {
        return Err(Error::input(
            "ierd_check: y grid must be positive and strictly increasing",
        ));
    }
    let d = d0(loss, n)?;
    let y_max = *y.last().expect("nonempty");
    let star_max = bz_r0(y_max.sqrt(), n, loss)?;
    if (star_max - d).abs() > 1e-4 {
        return Err(Error::input(format!(
            "ierd_check: y_max = {y_max} too small, r0 there is {star_max} vs d0 = {d}"
        )));
    }
    let slack = 1e-10;
    let monotone = phi.windows(2).all(|w| w[1] >= w[0] - slack);
    let limit_ok = (phi[phi.len() - 1] - d).abs() <= 1e-4;
    let mut dominates = true;
    for (yi, pi) in y.iter().zip(phi) {
        if *pi < bz_r0(yi.sqrt(), n, loss)? - slack {
            dominates = false;
            break;
        }
    }
    Ok(IerdReport {
        monotone,
        limit_ok,
        dominates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOSSES: [Loss; 3] = [
        Loss::SquaredError,
        Loss::Linex { a1: -3.0 },
        Loss::Linex { a1: 2.0 },
    ];

    #[test]
    fn limits() {
        for loss in LOSSES {
            for n in [6, 8, 15] {
                let small = bz_r0(1e-6, n, loss).unwrap();
                let big = bz_r0(1e3, n, loss).unwrap();
                assert!((small - m0(loss, n).unwrap()).abs() < 1e-8, "{loss} {n}");
                assert!((big - d0(loss, n).unwrap()).abs() < 1e-8, "{loss} {n}");
            }
        }
    }

    #[test]
    fn closed_form_matches_generic() {
        for loss in LOSSES {
            for &w in &[0.01, 0.0764716, 0.3, 1.0, 3.0] {
                let a = bz_r0(w, 6, loss).unwrap();
                let b = bz_r0_generic(w, 6, loss).unwrap();
                assert!((a - b).abs() < 1e-9, "{loss} w={w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn boeing_value_inside_sandwich() {
        let r = bz_r0(0.0764716, 6, Loss::SquaredError).unwrap();
        let (lo, hi) = (
            m0(Loss::SquaredError, 6).unwrap(),
            d0(Loss::SquaredError, 6).unwrap(),
        );
        assert!(lo < r && r < hi, "{lo} {r} {hi}");
    }

    #[test]
    fn table_agrees_with_direct() {
        let t = R0Table::build(8, Loss::SquaredError, R0_TABLE_POINTS).unwrap();
        for k in 0..200 {
            let w = 0.013 * k as f64 + 1e-4;
            let direct = bz_r0(w, 8, Loss::SquaredError).unwrap();
            assert!(
                (t.eval(w) - direct).abs() < 1e-9,
                "w={w}: {} vs {direct}",
                t.eval(w)
            );
        }
        assert_eq!(t.eval(f64::INFINITY), d0(Loss::SquaredError, 8).unwrap());
        assert!((t.eval(0.0) - m0(Loss::SquaredError, 8).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn table_csv_header() {
        let t = R0Table::build(6, Loss::SquaredError, 9).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("absw,r0\n"));
        assert_eq!(csv.lines().count(), 1 + 8);
    }

    #[test]
    fn cache_returns_same_table() {
        let a = r0_table(Loss::SquaredError, 7).unwrap();
        let b = r0_table(Loss::SquaredError, 7).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn ierd_examples() {
        let loss = Loss::SquaredError;
        let n = 6;
        let y: Vec<f64> = (1..=300).map(|i| 1e-4 * 1.05f64.powi(i)).collect();
        assert!(*y.last().unwrap() > 100.0);
        let star: Vec<f64> = y
            .iter()
            .map(|v| bz_r0(v.sqrt(), n, loss).unwrap())
            .collect();
        assert!(ierd_check(&y, &star, loss, n).unwrap().all());
        let dconst = vec![d0(loss, n).unwrap(); y.len()];
        assert!(ierd_check(&y, &dconst, loss, n).unwrap().all());
        let low = vec![m0(loss, n).unwrap() - 0.1; y.len()];
        assert!(!ierd_check(&y, &low, loss, n).unwrap().dominates);
        let unsorted = vec![1.0, 0.5];
        assert!(ierd_check(&unsorted, &[0.0, 0.0], loss, n).is_err());
    }
}
