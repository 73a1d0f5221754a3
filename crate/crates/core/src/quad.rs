//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Global adaptive bisection: the interval with the largest error estimate is
//! split until the summed estimate drops below the tolerance. Infinite ranges
//! are mapped onto finite ones by `x = a + s / (1 - s)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const ABS_TOL: f64 = 1e-10;
pub const MAX_SUBDIVISIONS: usize = 10_000;

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
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: ABS_TOL,
            rel: 1e-12,
            max_subdivisions: MAX_SUBDIVISIONS,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let (v, e) = kronrod(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut err = e;
    let mut splits = 0;
    // negated comparison so that a NaN error estimate keeps refining
    while !(err <= tol.abs.max(tol.rel * total.abs())) {
        if !total.is_finite() {
            return Err(Error::Quadrature {
                tol: tol.abs,
                subdivisions: splits,
                estimate: err,
            });
        }
        if splits >= tol.max_subdivisions {
            return Err(Error::Quadrature {
                tol: tol.abs,
                subdivisions: splits,
                estimate: err,
            });
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // the worst interval is at machine resolution and still too coarse
            return Err(Error::Quadrature {
                tol: tol.abs,
                subdivisions: splits,
                estimate: err,
            });
        }
        let (v1, e1) = kronrod(&f, seg.a, mid);
        let (v2, e2) = kronrod(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        splits += 1;
        if splits % 64 == 0 {
            // resum to keep rounding drift out of the running totals
            total = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    if !value.is_finite() {
        return Err(Error::Quadrature {
            tol: tol.abs,
            subdivisions: splits,
            estimate: err,
        });
    }
    Ok(value)
}

/// Integrates `f` over `[a, ∞)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> Result<f64> {
    let g = |s: f64| {
        if s >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - s;
        let x = a + s / d;
        let v = f(x) / (d * d);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Integrates `f` over `(-∞, b]`.
pub fn integrate_from_neg_infinity<F: Fn(f64) -> f64>(f: F, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_to_infinity(|y| f(-y), -b, tol)
}

/// Integrates over `[a, b]` where either end may be infinite, splitting at
/// the supplied interior breakpoints.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<f64> {
    if a >= b {
        return Ok(0.0);
    }
    let mut knots: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b && p.is_finite())
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut pts = Vec::with_capacity(knots.len() + 2);
    pts.push(a);
    pts.extend(knots);
    pts.push(b);
    // an infinite range with no finite knot gets one at 0
    if pts.len() == 2 && a.is_infinite() && b.is_infinite() {
        pts.insert(1, 0.0);
    }
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        total += match (lo.is_infinite(), hi.is_infinite()) {
            (false, false) => integrate(&f, lo, hi, tol)?,
            (false, true) => integrate_to_infinity(&f, lo, tol)?,
            (true, false) => integrate_from_neg_infinity(&f, hi, tol)?,
            (true, true) => unreachable!("split above"),
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn exponential_tail() {
        let v = integrate_to_infinity(|x| (-x).exp(), 0.0, Tolerance::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_over_real_line() {
        let c = (2.0 * std::f64::consts::PI).sqrt();
        let v = integrate_piecewise(
            |x| (-0.5 * x * x).exp() / c,
            f64::NEG_INFINITY,
            f64::INFINITY,
            &[],
            Tolerance::default(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kinked_integrand_with_breakpoint() {
        let v = integrate_piecewise(|x: f64| x.abs(), -1.0, 2.0, &[0.0], Tolerance::default()).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
    }

    #[test]
    fn nonintegrable_singularity_reports_failure() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
