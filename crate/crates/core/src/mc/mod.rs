//! Moment estimation with bootstrap intervals and three-way finiteness
//! verdicts.

mod growth;
mod verify;

pub use growth::{growth_of, horizon_growth, GrowthFunctional, GrowthSetup, HorizonGrowth, HorizonGrowthConfig};
pub use verify::{verify_theorem, Agreement, Budget, Predicted, RowRole, TheoremParams, VerifyReport, VerifyRow, THEOREM_IDS};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prw::{path_rng, Observed, Status};

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Finite,
    Infinite,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentKind {
    /// `E V^p`
    Power { p: f64 },
    /// `E e^{aV}`
    Exponential { a: f64 },
}

impl MomentKind {
    fn log_h(&self, v: f64) -> f64 {
        match *self {
            MomentKind::Power { p } => {
                if v == 0.0 {
                    if p == 0.0 {
                        0.0
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    p * v.ln()
                }
            }
            MomentKind::Exponential { a } => a * v,
        }
    }
}

/// Calibration constants for empirical verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerdictThresholds {
    /// Relative increment below which a partial-sum sequence counts as settled.
    pub stabilization: f64,
    /// Log-log growth slope above which it counts as diverging.
    pub divergence_slope: f64,
    /// Largest censoring rate compatible with a `Finite` verdict.
    pub censor_cap: f64,
    /// Width, in standard errors, of the tail-index decision band.
    pub z: f64,
    pub bootstrap_resamples: usize,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds {
            stabilization: 0.01,
            divergence_slope: 0.2,
            censor_cap: 1e-3,
            z: 2.0,
            bootstrap_resamples: 1000,
        }
    }
}

/// Three-point partial-sum rule on values at `n/4`, `n/2`, `n`.
pub fn series_verdict(partial: [f64; 3], th: &VerdictThresholds) -> Verdict {
    let [p1, p2, p3] = partial;
    if !p3.is_finite() {
        return Verdict::Infinite;
    }
    if p3 == 0.0 || (p3 == p2 && p2 == p1) {
        return Verdict::Finite;
    }
    let inc1 = (p2 - p1).abs();
    let inc2 = (p3 - p2).abs();
    if inc2 / p3.abs() < th.stabilization && inc2 <= inc1 {
        return Verdict::Finite;
    }
    if p1 > 0.0 && p2 > 0.0 {
        let s1 = (p2 / p1).log2();
        let s2 = (p3 / p2).log2();
        if s1 > th.divergence_slope && s2 > th.divergence_slope {
            return Verdict::Infinite;
        }
    }
    Verdict::Inconclusive
}

/// Same rule on log-values, for sums that may overflow.
pub fn series_verdict_log(log_partial: [f64; 3], th: &VerdictThresholds) -> Verdict {
    let m = log_partial[2];
    if m == f64::NEG_INFINITY {
        return Verdict::Finite;
    }
    if m == f64::INFINITY {
        return Verdict::Infinite;
    }
    series_verdict(log_partial.map(|l| (l - m).exp()), th)
}

/// `log Σ e^{x_i}`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Streaming accumulator of `log Σ e^{x_i}` and `log Σ e^{2 x_i}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMean {
    max: f64,
    s1: f64,
    s2: f64,
    pub n: usize,
}

impl Default for LogMean {
    fn default() -> Self {
        LogMean {
            max: f64::NEG_INFINITY,
            s1: 0.0,
            s2: 0.0,
            n: 0,
        }
    }
}

impl LogMean {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            let r = (self.max - x).exp();
            self.s1 *= r;
            self.s2 *= r * r;
            self.max = x;
        }
        let e = (x - self.max).exp();
        self.s1 += e;
        self.s2 += e * e;
    }

    pub fn merge(mut self, o: LogMean) -> LogMean {
        if o.max > self.max {
            return o.merge(self);
        }
        if o.max > f64::NEG_INFINITY {
            let r = (o.max - self.max).exp();
            self.s1 += o.s1 * r;
            self.s2 += o.s2 * r * r;
        }
        self.n += o.n;
        self
    }

    /// `log` of the sample mean.
    pub fn log_mean(&self) -> f64 {
        if self.n == 0 || self.s1 == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.max + (self.s1 / self.n as f64).ln()
    }

    pub fn mean(&self) -> f64 {
        self.log_mean().exp()
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        if self.n < 2 || self.s1 == 0.0 {
            return 0.0;
        }
        let n = self.n as f64;
        let m = self.s1 / n;
        let var = ((self.s2 / n - m * m).max(0.0)) * n / (n - 1.0);
        (var / n).sqrt() * self.max.exp()
    }
}

/// Empirical tail fit above a data-driven threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub threshold: f64,
    pub exceedances: usize,
    /// Decay parameter divided by the moment parameter; the moment is finite
    /// iff this exceeds 1.
    pub index: f64,
    pub se: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub kind: MomentKind,
    pub point: f64,
    pub log_point: f64,
    pub ci95: [f64; 2],
    pub n_paths: usize,
    pub censor_rate: f64,
    pub verdict: Verdict,
    pub growth_curve: Vec<GrowthPoint>,
    pub tail: TailFit,
}

fn tail_fit(values: &[f64], censored: &[bool], kind: MomentKind) -> TailFit {
    let n = values.len();
    let n_cens = censored.iter().filter(|&&c| c).count();
    let k = (n / 100).max(2 * n_cens + 50).clamp(50, (n / 5).max(50)).min(n - 1);
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut u = sorted[k];
    // step down past ties until at least k values lie strictly above u
    loop {
        let above = sorted.partition_point(|&v| v > u);
        let at_or_above = sorted.partition_point(|&v| v >= u);
        if above >= k || at_or_above >= n || at_or_above > n / 2 {
            break;
        }
        u = sorted[at_or_above];
    }
    let integer = values.iter().all(|v| v.fract() == 0.0);
    if matches!(kind, MomentKind::Power { .. }) && u <= 0.0 {
        u = values
            .iter()
            .copied()
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min);
    }
    let mut d = 0usize;
    let mut sum = 0.0;
    for (&v, &c) in values.iter().zip(censored) {
        if v <= u {
            continue;
        }
        if !c {
            d += 1;
        }
        sum += match kind {
            MomentKind::Power { .. } => (v / u).ln(),
            // failures before the terminating step of a geometric tail
            MomentKind::Exponential { .. } if integer => {
                if c {
                    v - u
                } else {
                    v - u - 1.0
                }
            }
            MomentKind::Exponential { .. } => v - u,
        };
    }
    if d == 0 {
        let index = if sum > 0.0 { 0.0 } else { f64::INFINITY };
        return TailFit {
            threshold: u,
            exceedances: 0,
            index,
            se: if index == 0.0 { f64::INFINITY } else { 0.0 },
        };
    }
    let df = d as f64;
    let (index, se) = match kind {
        MomentKind::Power { p } => {
            let alpha = df / sum;
            if light_tail(values, censored, u, alpha) {
                (f64::INFINITY, 0.0)
            } else {
                (alpha / p, alpha / p / df.sqrt())
            }
        }
        MomentKind::Exponential { a } if integer => {
            let q = sum / (df + sum);
            if q == 0.0 {
                (f64::INFINITY, 0.0)
            } else {
                let kappa = -q.ln();
                let se_kappa = (1.0 - q) / (df * q).sqrt();
                (kappa / a, se_kappa / a)
            }
        }
        MomentKind::Exponential { a } => {
            let rate = df / sum;
            (rate / a, rate / a / df.sqrt())
        }
    };
    TailFit {
        threshold: u,
        exceedances: d,
        index,
        se,
    }
}

/// Does an exponential tail above `u` beat the fitted Pareto tail by a clear
/// log-likelihood margin?
fn light_tail(values: &[f64], censored: &[bool], u: f64, alpha: f64) -> bool {
    if !(u > 0.0) {
        return false;
    }
    let (mut d, mut excess, mut log_v) = (0.0, 0.0, 0.0);
    for (&v, &c) in values.iter().zip(censored) {
        if v > u {
            excess += v - u;
            if !c {
                d += 1.0;
                log_v += v.ln();
            }
        }
    }
    if d == 0.0 || excess <= 0.0 {
        return false;
    }
    let lambda = d / excess;
    let ll_exp = d * lambda.ln() - d;
    let ll_pareto = d * alpha.ln() - d - log_v;
    ll_exp > ll_pareto + LIGHT_TAIL_MARGIN
}

/// Log-likelihood advantage required to call a tail exponential.
const LIGHT_TAIL_MARGIN: f64 = 3.0;

/// Moment of `h(V)` from censored samples; censored values enter at their
/// lower bound.
pub fn estimate_moment(
    samples: &[Observed],
    kind: MomentKind,
    th: &VerdictThresholds,
    seed: u64,
) -> Result<MomentEstimate> {
    let values: Vec<f64> = samples.iter().map(|s| s.value as f64).collect();
    let censored: Vec<bool> = samples.iter().map(|s| s.status == Status::Censored).collect();
    estimate_moment_values(&values, &censored, kind, th, seed)
}

pub fn estimate_moment_values(
    values: &[f64],
    censored: &[bool],
    kind: MomentKind,
    th: &VerdictThresholds,
    seed: u64,
) -> Result<MomentEstimate> {
    let n = values.len();
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: n,
        });
    }
    if censored.len() != n {
        return Err(Error::InvalidParameter("censoring flags must match the samples".into()));
    }
    let log_h: Vec<f64> = values.iter().map(|&v| kind.log_h(v)).collect();
    let max = log_h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shift = if max.is_finite() { max } else { 0.0 };
    let w: Vec<f64> = log_h.iter().map(|&l| (l - shift).exp()).collect();
    let mean_of = |m: usize| -> f64 { w[..m].iter().sum::<f64>() / m as f64 };
    let scaled = mean_of(n);
    let log_point = if scaled > 0.0 { shift + scaled.ln() } else { f64::NEG_INFINITY };
    let point = scaled * shift.exp();

    let growth_curve: Vec<GrowthPoint> = [n / 4, n / 2, n]
        .iter()
        .map(|&m| GrowthPoint {
            n: m,
            mean: mean_of(m) * shift.exp(),
        })
        .collect();

    let b = th.bootstrap_resamples.max(1);
    let mut boot: Vec<f64> = (0..b as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = path_rng(seed, r);
            let mut acc = 0.0;
            for _ in 0..n {
                acc += w[rng.random_range(0..n)];
            }
            acc / n as f64
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let lo = boot[((0.025 * b as f64).floor() as usize).min(b - 1)].min(scaled);
    let hi = boot[((0.975 * b as f64).ceil() as usize).min(b - 1)].max(scaled);
    let ci95 = [lo * shift.exp(), hi * shift.exp()];

    let censor_rate = censored.iter().filter(|&&c| c).count() as f64 / n as f64;
    let tail = tail_fit(values, censored, kind);
    let g = &growth_curve;
    let slope = if g[1].mean > 0.0 { (g[2].mean / g[1].mean).log2() } else { 0.0 };
    let verdict = if tail.index + th.z * tail.se < 1.0 {
        Verdict::Infinite
    } else if tail.index - th.z * tail.se > 1.0 && censor_rate < th.censor_cap && slope < th.divergence_slope {
        Verdict::Finite
    } else {
        Verdict::Inconclusive
    };
    Ok(MomentEstimate {
        kind,
        point,
        log_point,
        ci95,
        n_paths: n,
        censor_rate,
        verdict,
        growth_curve,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact(v: &[u64]) -> Vec<Observed> {
        v.iter().map(|&x| Observed::exact(x)).collect()
    }

    #[test]
    fn constant_samples() {
        let s = exact(&[3; 2000]);
        let e = estimate_moment(&s, MomentKind::Power { p: 2.0 }, &VerdictThresholds::default(), 1).unwrap();
        assert!((e.point - 9.0).abs() < 1e-12);
        assert_eq!(e.ci95[0], e.ci95[1]);
        assert_eq!(e.verdict, Verdict::Finite);
    }

    #[test]
    fn too_few_samples() {
        let s = exact(&[1; 10]);
        assert!(matches!(
            estimate_moment(&s, MomentKind::Power { p: 1.0 }, &VerdictThresholds::default(), 1),
            Err(Error::InsufficientSamples { needed: 1000, got: 10 })
        ));
    }

    #[test]
    fn geometric_tail_verdicts() {
        // P{V > n} = 0.5^n: E e^{aV} finite iff a < ln 2
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s: Vec<Observed> = (0..50_000)
            .map(|_| {
                let mut k = 1;
                while rng.random::<f64>() < 0.5 {
                    k += 1;
                }
                Observed::exact(k)
            })
            .collect();
        let th = VerdictThresholds::default();
        let f = estimate_moment(&s, MomentKind::Exponential { a: 0.4 }, &th, 1).unwrap();
        assert_eq!(f.verdict, Verdict::Finite, "{:?}", f.tail);
        let i = estimate_moment(&s, MomentKind::Exponential { a: 1.1 }, &th, 1).unwrap();
        assert_eq!(i.verdict, Verdict::Infinite, "{:?}", i.tail);
        assert!(f.ci95[0] <= f.point && f.point <= f.ci95[1]);
    }

    #[test]
    fn pareto_tail_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s: Vec<f64> = (0..50_000).map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / 1.5)).collect();
        let c = vec![false; s.len()];
        let th = VerdictThresholds::default();
        let f = estimate_moment_values(&s, &c, MomentKind::Power { p: 0.5 }, &th, 1).unwrap();
        assert_eq!(f.verdict, Verdict::Finite);
        let i = estimate_moment_values(&s, &c, MomentKind::Power { p: 3.0 }, &th, 1).unwrap();
        assert_eq!(i.verdict, Verdict::Infinite);
    }

    #[test]
    fn light_tail_has_every_power_moment() {
        // Poisson(3): tied integers with a super-exponential tail
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pois = rand_distr::Poisson::new(3.0).unwrap();
        let s: Vec<Observed> = (0..20_000).map(|_| Observed::exact(rng.sample(pois) as u64)).collect();
        let th = VerdictThresholds::default();
        for p in [1.0, 2.0, 5.0] {
            let e = estimate_moment(&s, MomentKind::Power { p }, &th, 1).unwrap();
            assert_eq!(e.verdict, Verdict::Finite, "p = {p}: {:?}", e.tail);
            assert!(e.tail.index.is_infinite());
        }
    }

    #[test]
    fn series_rule() {
        let th = VerdictThresholds::default();
        assert_eq!(series_verdict([1.0, 1.5, 1.501], &th), Verdict::Finite);
        assert_eq!(series_verdict([1.0, 2.0, 4.0], &th), Verdict::Infinite);
        assert_eq!(series_verdict([1.0, 1.1, 1.2], &th), Verdict::Inconclusive);
        assert_eq!(series_verdict_log([0.0, 50.0, 100.0], &th), Verdict::Infinite);
    }

    #[test]
    fn log_mean_matches_direct() {
        let xs = [0.1, -2.0, 3.0, 1.5];
        let mut m = LogMean::default();
        for &x in &xs[..2] {
            m.push(x);
        }
        let mut m2 = LogMean::default();
        for &x in &xs[2..] {
            m2.push(x);
        }
        let all = m.merge(m2);
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>() / 4.0;
        assert!((all.mean() - direct).abs() < 1e-12);
        assert!((log_sum_exp(&xs) - (4.0 * direct).ln()).abs() < 1e-12);
    }
}
