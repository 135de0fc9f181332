//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for adaptive quadrature. The integral is accepted once the
/// error estimate is below `max(abs_tol, rel_tol * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::input(format!(
                "QuadSpec requires abs_tol > 0, rel_tol > 0, max_subdivisions >= 1 \
                 (got {abs_tol}, {rel_tol}, {max_subdivisions})"
            )));
        }
        Ok(QuadSpec {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Purely relative tolerance; useful for integrals whose magnitude spans
    /// many orders.
    pub fn relative(rel_tol: f64) -> Self {
        QuadSpec {
            abs_tol: f64::MIN_POSITIVE,
            rel_tol,
            max_subdivisions: 4000,
        }
    }
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    scale: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut scale = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        scale += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    if !value.is_finite() {
        return Err(Error::numeric(format!(
            "quadrature: non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok(Segment {
        a,
        b,
        value,
        error: ((kronrod - gauss) * half).abs(),
        scale: scale * half.abs(),
    })
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    integrate_with_error(f, a, b, spec).map(|r| r.value)
}

/// As [`integrate`], also returning the error estimate.
pub fn integrate_with_error<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    integrate_points_with_error(f, &[a, b], spec)
}

/// Integrate over `[points[0], points[last]]`, seeding the adaptive
/// partition with the given breakpoints. Use this when the integrand has a
/// narrow peak whose location is known; a single 15-point rule over a wide
/// interval can miss it entirely.
pub fn integrate_points<F: Fn(f64) -> f64>(f: F, points: &[f64], spec: &QuadSpec) -> Result<f64> {
    integrate_points_with_error(f, points, spec).map(|r| r.value)
}

pub fn integrate_points_with_error<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if points.len() < 2 {
        return Err(Error::input("integrate: need at least two points"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::input("integrate: bounds must be finite"));
    }
    let mut segments = Vec::with_capacity(points.len() + 16);
    for w in points.windows(2) {
        if w[0] != w[1] {
            segments.push(gk15(&f, w[0], w[1])?);
        }
    }
    if segments.is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let (a, b) = (points[0], points[points.len() - 1]);
    let limit = spec.max_subdivisions.max(segments.len());
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        let scale: f64 = segments.iter().map(|s| s.scale).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        // Below this the error estimate is dominated by rounding.
        let floor = 50.0 * f64::EPSILON * scale;
        if err <= tol || err <= floor {
            return Ok(QuadResult {
                value: total,
                error: err,
                subdivisions: segments.len(),
            });
        }
        if segments.len() >= limit {
            return Err(Error::numeric(format!(
                "quadrature did not converge on [{a}, {b}]: value {total:e}, \
                 error estimate {err:e}, tolerance {tol:e}, {} subdivisions",
                segments.len()
            )));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            return Err(Error::numeric(format!(
                "quadrature: interval [{}, {}] cannot be bisected further",
                seg.a, seg.b
            )));
        }
        segments.push(gk15(&f, seg.a, mid)?);
        segments.push(gk15(&f, mid, seg.b)?);
    }
}

/// Breakpoints `center ± scale·2^k` (k = -1, 0, 1, ...) clipped to `(lo, hi)`,
/// with `lo` and `hi` at the ends. Feeds [`integrate_points`].
pub fn peak_breakpoints(lo: f64, hi: f64, center: f64, scale: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    if lo < center && center < hi {
        pts.push(center);
    }
    let mut step = 0.5 * scale;
    while step > 0.0 && step.is_finite() && (center - step > lo || center + step < hi) {
        for p in [center - step, center + step] {
            if lo < p && p < hi {
                pts.push(p);
            }
        }
        step *= 2.0;
    }
    pts.sort_by(f64::total_cmp);
    pts
}

/// Integrate `f` over `[a, ∞)` through the map `x = a + s / (1 - s)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadSpec) -> Result<f64> {
    let g = |s: f64| {
        let one_minus = 1.0 - s;
        let x = a + s / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else if x.is_infinite() {
            0.0
        } else {
            v
        }
    };
    integrate(g, 0.0, 1.0, spec)
}
