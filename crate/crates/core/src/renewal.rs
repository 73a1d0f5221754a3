//! Monte Carlo renewal measures of the walk `S_n`: the plain renewal function,
//! the ladder-height renewal function, exponential and power renewal
//! functions, tilted estimators and the ladder duality identity.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{classify_trichotomy, ext_f64, Drift};
use crate::error::{Error, Result};
use crate::laws::{atom_tilt, rate_r, solve_gamma, JointLaw, Marginal, TiltedLaw, TiltedMarginal};
use crate::mc::{series_verdict, series_verdict_log, LogMean, Verdict, VerdictThresholds};
use crate::prw::{par_map_paths, path_rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RenewalKind {
    /// `U(y) = Σ_{n>=0} P{S_n <= y}`
    PlainU,
    /// Renewal function of the strict ascending ladder heights.
    LadderUGt,
    /// `V*_a(y) = Σ_{n>=0} e^{an} P{S_n <= y}`
    ExpV { a: f64 },
    /// `U_{p-1}(y) = Σ_{n>=1} n^{p-1} P{S_n <= y}`
    PowerU { p: f64 },
}

/// Simulation budget shared by the renewal estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenewalConfig {
    pub n_paths: usize,
    pub n_max: usize,
    pub seed: u64,
    pub thresholds: VerdictThresholds,
}

impl RenewalConfig {
    pub fn new(n_paths: usize, n_max: usize, seed: u64) -> Self {
        RenewalConfig {
            n_paths,
            n_max,
            seed,
            thresholds: VerdictThresholds::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_paths < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: self.n_paths,
            });
        }
        if self.n_max < 4 {
            return Err(Error::InvalidParameter("n_max must be >= 4".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewalRow {
    pub y: f64,
    #[serde(with = "ext_f64")]
    pub estimate: f64,
    #[serde(with = "ext_f64")]
    pub se: f64,
    pub verdict: Verdict,
    /// `J₊(y)^q` with `q = 1` for `U`, `U^>` and `q = p` for `U_{p-1}`.
    #[serde(with = "ext_f64::option")]
    pub j_plus_reference: Option<f64>,
}

/// Extent of `e^{-γy} V̂(y)` over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub min: f64,
    pub max: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewalTable {
    pub kind: RenewalKind,
    pub n_max: usize,
    pub n_paths: usize,
    pub seed: u64,
    /// Tilt used for sampling, if any.
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub rows: Vec<RenewalRow>,
    pub band: Option<Band>,
}

impl RenewalTable {
    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.y).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,estimate,se,verdict\n");
        for r in &self.rows {
            let v = serde_json::to_value(r.verdict).expect("verdict serializes");
            let _ = writeln!(out, "{},{},{},{}", r.y, r.estimate, r.se, v.as_str().unwrap_or_default());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("grid is empty".into()));
    }
    if grid.iter().any(|y| !y.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// `S_0 = 0, …, S_n`.
fn walk<R: Rng + ?Sized>(n: usize, rng: &mut R, mut step: impl FnMut(&mut R) -> f64) -> Vec<f64> {
    let mut s = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    s.push(acc);
    for _ in 0..n {
        acc += step(rng);
        s.push(acc);
    }
    s
}

/// Checkpoints at which partial sums are compared.
fn checkpoints(n_max: usize) -> [usize; 3] {
    [n_max / 4, n_max / 2, n_max]
}

/// Per-grid-point summary: mean and standard error at the final checkpoint
/// and the verdict from all three.
struct Summary {
    mean: f64,
    se: f64,
    verdict: Verdict,
}

/// Runs `per_path` on every path; each call returns, per grid point, the
/// path's partial sums at the three checkpoints, as logs when `log` is set.
fn tabulate<F>(grid: &[f64], cfg: &RenewalConfig, log: bool, per_path: F) -> Vec<Summary>
where
    F: Fn(u64) -> Vec<[f64; 3]> + Sync + Send,
{
    let paths = par_map_paths(cfg.n_paths, per_path);
    (0..grid.len())
        .map(|k| {
            if log {
                let mut acc = [LogMean::default(); 3];
                for p in &paths {
                    for j in 0..3 {
                        acc[j].push(p[k][j]);
                    }
                }
                Summary {
                    mean: acc[2].mean(),
                    se: acc[2].se(),
                    verdict: series_verdict_log(acc.map(|m| m.log_mean()), &cfg.thresholds),
                }
            } else {
                let n = paths.len() as f64;
                let means: [f64; 3] = std::array::from_fn(|j| paths.iter().map(|p| p[k][j]).sum::<f64>() / n);
                let var = paths.iter().map(|p| (p[k][2] - means[2]).powi(2)).sum::<f64>() / (n - 1.0);
                Summary {
                    mean: means[2],
                    se: (var / n).sqrt(),
                    verdict: series_verdict(means, &cfg.thresholds),
                }
            }
        })
        .collect()
}

/// `Σ_{n <= m} w(n, S_n) 1{S_n <= y}` for each grid `y` and checkpoint `m`;
/// with `log` set, `w` is a log-weight and the sums are returned as logs.
fn partial_sums(s: &[f64], grid: &[f64], cps: [usize; 3], log: bool, w: impl Fn(usize, f64) -> f64) -> Vec<[f64; 3]> {
    grid.iter()
        .map(|&y| {
            let mut out = [0.0; 3];
            let mut lin = 0.0;
            let mut lm = LogMean::default();
            let mut j = 0;
            for (n, &sn) in s.iter().enumerate() {
                if sn <= y {
                    if log {
                        lm.push(w(n, sn));
                    } else {
                        lin += w(n, sn);
                    }
                }
                while j < 3 && cps[j] == n {
                    out[j] = if log { log_total(&lm) } else { lin };
                    j += 1;
                }
            }
            out
        })
        .collect()
}

fn log_total(m: &LogMean) -> f64 {
    let l = m.log_mean();
    if l == f64::NEG_INFINITY {
        l
    } else {
        l + (m.n as f64).ln()
    }
}

fn j_plus_ref(law: &JointLaw, y: f64, q: f64) -> Option<f64> {
    let an = law.analytics();
    if y < 0.0 || an.p_xi_pos == 0.0 {
        return None;
    }
    an.j_plus(y).ok().map(|j| j.powf(q))
}

fn rows_from(grid: &[f64], stats: Vec<Summary>, reference: impl Fn(f64) -> Option<f64>) -> Vec<RenewalRow> {
    grid.iter()
        .zip(stats)
        .map(|(&y, st)| RenewalRow {
            y,
            estimate: st.mean,
            se: st.se,
            verdict: st.verdict,
            j_plus_reference: reference(y),
        })
        .collect()
}

/// `U(y)` or the ladder-height renewal function `U^>(y)` on a grid.
pub fn estimate_renewal_measure(law: &JointLaw, kind: RenewalKind, grid: &[f64], cfg: &RenewalConfig) -> Result<RenewalTable> {
    check_grid(grid)?;
    cfg.validate()?;
    let cps = checkpoints(cfg.n_max);
    let xi = law.xi();
    let stats = match kind {
        RenewalKind::PlainU => {
            let drift = classify_trichotomy(law)?.drift;
            if drift != Drift::PlusInfinity {
                return Err(Error::Divergence(format!(
                    "U(y) is infinite unless S_n drifts to +∞ (drift: {drift:?})"
                )));
            }
            tabulate(grid, cfg, false, |i| {
                let mut rng = path_rng(cfg.seed, i);
                let s = walk(cfg.n_max, &mut rng, |r| xi.sample(r));
                partial_sums(&s, grid, cps, false, |_, _| 1.0)
            })
        }
        RenewalKind::LadderUGt => tabulate(grid, cfg, false, |i| {
            let mut rng = path_rng(cfg.seed, i);
            let s = walk(cfg.n_max, &mut rng, |r| xi.sample(r));
            // keep S_n at strict ascending ladder epochs, NaN elsewhere
            let mut max = 0.0;
            let heights: Vec<f64> = s
                .iter()
                .enumerate()
                .map(|(n, &v)| {
                    if n == 0 || v > max {
                        max = v;
                        v
                    } else {
                        f64::NAN
                    }
                })
                .collect();
            partial_sums(&heights, grid, cps, false, |_, _| 1.0)
        }),
        other => {
            return Err(Error::InvalidParameter(format!(
                "{other:?} has its own estimator"
            )))
        }
    };
    Ok(RenewalTable {
        kind,
        n_max: cfg.n_max,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        theta: None,
        gamma: None,
        rows: rows_from(grid, stats, |y| j_plus_ref(law, y, 1.0)),
        band: None,
    })
}

/// Tilt for the exponential renewal function: `γ(a)` when it exists, else the
/// minimiser of the Laplace transform, else a tilt that makes the atom at zero
/// typical over `n_max` steps.
fn exp_sampling_tilt(xi: &Marginal, law: &JointLaw, a: f64, n_max: usize) -> Result<(f64, Option<f64>)> {
    match solve_gamma(law, a) {
        Ok(g) => return Ok((g, Some(g))),
        Err(Error::NoRoot(_)) => {}
        Err(e) => return Err(e),
    }
    if xi.p_neg() > 0.0 {
        let t = rate_r(law)?.t_min;
        if t.is_finite() {
            return Ok((t, None));
        }
        return Ok((0.0, None));
    }
    let mass = 1.0 - 1.0 / n_max as f64;
    Ok((atom_tilt(xi, mass)?.unwrap_or(0.0), None))
}

/// `V*_a(y)` on a grid by importance sampling under the tilted walk.
pub fn exp_renewal_v(law: &JointLaw, a: f64, grid: &[f64], cfg: &RenewalConfig) -> Result<RenewalTable> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    check_grid(grid)?;
    cfg.validate()?;
    let xi = law.xi();
    let (theta, gamma) = exp_sampling_tilt(xi, law, a, cfg.n_max)?;
    let tilted = TiltedMarginal::new(xi, theta)?;
    let per_step = a + tilted.log_phi();
    let cps = checkpoints(cfg.n_max);
    let stats = tabulate(grid, cfg, true, |i| {
        let mut rng = path_rng(cfg.seed, i);
        let s = walk(cfg.n_max, &mut rng, |r| tilted.sample(r));
        partial_sums(&s, grid, cps, true, |n, sn| n as f64 * per_step + theta * sn)
    });
    let rows = rows_from(grid, stats, |_| None);
    let band = gamma.filter(|_| rows.iter().all(|r| r.verdict == Verdict::Finite)).and_then(|g| {
        let scaled: Vec<f64> = rows
            .iter()
            .filter(|r| r.estimate > 0.0)
            .map(|r| (-g * r.y).exp() * r.estimate)
            .collect();
        if scaled.is_empty() {
            return None;
        }
        let min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        let max = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Band { min, max, ratio: max / min })
    });
    Ok(RenewalTable {
        kind: RenewalKind::ExpV { a },
        n_max: cfg.n_max,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        theta: Some(theta),
        gamma,
        rows,
        band,
    })
}

/// `U_{p-1}(y) = Σ_{n>=1} n^{p-1} P{S_n <= y}` on a grid.
pub fn power_renewal_u(law: &JointLaw, p: f64, grid: &[f64], cfg: &RenewalConfig) -> Result<RenewalTable> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    check_grid(grid)?;
    cfg.validate()?;
    let xi = law.xi();
    let cps = checkpoints(cfg.n_max);
    let stats = tabulate(grid, cfg, false, |i| {
        let mut rng = path_rng(cfg.seed, i);
        let s = walk(cfg.n_max, &mut rng, |r| xi.sample(r));
        partial_sums(&s, grid, cps, false, |n, _| if n == 0 { 0.0 } else { (n as f64).powf(p - 1.0) })
    });
    Ok(RenewalTable {
        kind: RenewalKind::PowerU { p },
        n_max: cfg.n_max,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        theta: None,
        gamma: None,
        rows: rows_from(grid, stats, |y| j_plus_ref(law, y, p)),
        band: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
    pub n_paths: usize,
}

impl Estimate {
    fn from_log(m: &LogMean) -> Self {
        Estimate {
            value: m.mean(),
            se: m.se(),
            n_paths: m.n,
        }
    }

    /// `|self - other| <= z` joint standard errors of independent estimates.
    pub fn agrees_with(&self, other: &Estimate, z: f64) -> bool {
        (self.value - other.value).abs() <= z * self.se.hypot(other.se)
    }
}

/// Unbiased estimate of `e^{an} P{event}` from walks under the tilted law;
/// `event` sees `S_0, …, S_n`.
pub fn tilted_estimate<F>(tilted: &TiltedLaw, n: usize, event: F, n_paths: usize, seed: u64) -> Result<Estimate>
where
    F: Fn(&[f64]) -> bool + Sync + Send,
{
    let t = tilted.xi();
    let g = tilted.gamma;
    let logs = par_map_paths(n_paths, |i| {
        let mut rng = path_rng(seed, i);
        let s = walk(n, &mut rng, |r| t.sample(r));
        // e^{an} φ(γ)^n = 1, so the weight is e^{γ S_n}
        if event(&s) {
            g * s[n]
        } else {
            f64::NEG_INFINITY
        }
    });
    Ok(Estimate::from_log(&collect_log(&logs)))
}

/// Plain Monte Carlo estimate of `e^{an} P{event}` under the base law.
pub fn direct_estimate<F>(law: &JointLaw, a: f64, n: usize, event: F, n_paths: usize, seed: u64) -> Result<Estimate>
where
    F: Fn(&[f64]) -> bool + Sync + Send,
{
    let xi = law.xi();
    let logs = par_map_paths(n_paths, |i| {
        let mut rng = path_rng(seed, i);
        let s = walk(n, &mut rng, |r| xi.sample(r));
        if event(&s) {
            a * n as f64
        } else {
            f64::NEG_INFINITY
        }
    });
    Ok(Estimate::from_log(&collect_log(&logs)))
}

fn collect_log(xs: &[f64]) -> LogMean {
    let mut m = LogMean::default();
    for &x in xs {
        m.push(x);
    }
    m
}

/// Both sides of the duality between the walk killed at `τ*` and the weak
/// descending ladder heights, on an interval `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub lo: f64,
    pub hi: f64,
    pub n_max: usize,
    pub tilt_gamma: Option<f64>,
    /// `Σ_{n<=n_max} P{S_n ∈ I, τ* > n}`
    pub killed: Estimate,
    /// `Σ_k P{S_{σ*_k} ∈ I, σ*_k <= n_max}`
    pub ladder: Estimate,
    pub difference: f64,
    /// Standard error of the per-path difference.
    pub difference_se: f64,
}

impl DualityReport {
    pub fn agrees(&self, z: f64) -> bool {
        self.difference.abs() <= z * self.difference_se
    }
}

/// Estimates both occupation measures on the same paths; with `tilt_a` the
/// walk is sampled under `P_γ` for `γ = γ(tilt_a)`.
pub fn ladder_duality_check(
    law: &JointLaw,
    interval: (f64, f64),
    n_paths: usize,
    n_max: usize,
    seed: u64,
    tilt_a: Option<f64>,
) -> Result<DualityReport> {
    let (lo, hi) = interval;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!("interval ({lo}, {hi}] must be bounded and nonempty")));
    }
    if n_paths < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n_paths });
    }
    let (sampler, tilt_gamma) = match tilt_a {
        Some(a) => {
            let g = solve_gamma(law, a)?;
            (TiltedMarginal::new(law.xi(), g)?, Some(g))
        }
        None => (TiltedMarginal::new(law.xi(), 0.0)?, None),
    };
    let inside = |v: f64| v > lo && v <= hi;
    let pairs = par_map_paths(n_paths, |i| {
        let mut rng = path_rng(seed, i);
        let s = walk(n_max, &mut rng, |r| sampler.sample(r));
        let mut killed = 0u64;
        for &v in &s {
            // τ* > n while S_1, …, S_n <= 0
            if v > 0.0 {
                break;
            }
            killed += inside(v) as u64;
        }
        let mut ladder = 0u64;
        let mut min = f64::INFINITY;
        for &v in &s {
            if v <= min {
                min = v;
                ladder += inside(v) as u64;
            }
        }
        (killed as f64, ladder as f64)
    });
    let n = pairs.len() as f64;
    let mean = |f: &dyn Fn(&(f64, f64)) -> f64| pairs.iter().map(f).sum::<f64>() / n;
    let se = |f: &dyn Fn(&(f64, f64)) -> f64, m: f64| {
        (pairs.iter().map(|p| (f(p) - m).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    };
    let (mk, ml) = (mean(&|p| p.0), mean(&|p| p.1));
    let md = mk - ml;
    Ok(DualityReport {
        lo,
        hi,
        n_max,
        tilt_gamma,
        killed: Estimate {
            value: mk,
            se: se(&|p| p.0, mk),
            n_paths,
        },
        ladder: Estimate {
            value: ml,
            se: se(&|p| p.1, ml),
            n_paths,
        },
        difference: md,
        difference_se: se(&|p| p.0 - p.1, md),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::tilt;
    use approx::assert_relative_eq;

    fn law(xi: Marginal) -> JointLaw {
        JointLaw::independent(xi, Marginal::exponential(1.0).unwrap()).unwrap()
    }

    fn point1() -> JointLaw {
        law(Marginal::point(1.0).unwrap())
    }

    fn two_point() -> JointLaw {
        law(Marginal::two_point(-1.0, 1.0, 0.8).unwrap())
    }

    #[test]
    fn deterministic_plain_u() {
        let t = estimate_renewal_measure(&point1(), RenewalKind::PlainU, &[0.0, 0.5, 2.0, 7.3], &RenewalConfig::new(10, 64, 1)).unwrap();
        let est: Vec<f64> = t.rows.iter().map(|r| r.estimate).collect();
        assert_eq!(est, vec![1.0, 1.0, 3.0, 8.0]);
        assert!(t.rows.iter().all(|r| r.se == 0.0 && r.verdict == Verdict::Finite));
    }

    #[test]
    fn plain_u_needs_upward_drift() {
        let l = law(Marginal::normal(-1.0, 1.0).unwrap());
        let r = estimate_renewal_measure(&l, RenewalKind::PlainU, &[1.0], &RenewalConfig::new(10, 64, 1));
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn exponential_renewal_function() {
        let l = law(Marginal::exponential(1.0).unwrap());
        let t = estimate_renewal_measure(&l, RenewalKind::PlainU, &[2.0], &RenewalConfig::new(20_000, 200, 3)).unwrap();
        let r = &t.rows[0];
        assert!((r.estimate - 3.0).abs() < 3.0 * r.se + 1e-9, "{r:?}");
    }

    #[test]
    fn exp_v_deterministic() {
        let t = exp_renewal_v(&point1(), 0.5, &[2.5], &RenewalConfig::new(4, 64, 0)).unwrap();
        let expect = 1.0 + 0.5f64.exp() + 1f64.exp();
        assert_relative_eq!(t.rows[0].estimate, expect, epsilon = 1e-9);
        assert_eq!(t.rows[0].verdict, Verdict::Finite);
    }

    #[test]
    fn exp_v_two_point_regimes() {
        let cfg = RenewalConfig::new(20_000, 400, 5);
        let hi = exp_renewal_v(&two_point(), 0.3, &[0.0, 2.0], &cfg).unwrap();
        assert!(hi.rows.iter().all(|r| r.verdict == Verdict::Infinite), "{hi:?}");
        let grid: Vec<f64> = (1..=10).map(|k| 2.0 * k as f64).collect();
        let lo = exp_renewal_v(&two_point(), 0.1, &grid, &cfg).unwrap();
        assert!(lo.rows.iter().all(|r| r.verdict == Verdict::Finite), "{lo:?}");
        assert!(lo.band.unwrap().ratio < 10.0);
    }

    #[test]
    fn exp_v_heavy_atom_is_infinite() {
        // ξ >= 0 with e^a P{ξ=0} >= 1
        let l = law(Marginal::two_point(0.0, 1.0, 0.5).unwrap());
        let t = exp_renewal_v(&l, 0.8, &[0.5], &RenewalConfig::new(5_000, 400, 2)).unwrap();
        assert_eq!(t.rows[0].verdict, Verdict::Infinite, "{t:?}");
    }

    #[test]
    fn power_u_examples() {
        let t = power_renewal_u(&point1(), 2.0, &[3.0], &RenewalConfig::new(3, 64, 0)).unwrap();
        assert_relative_eq!(t.rows[0].estimate, 6.0, epsilon = 1e-9);
        let neg = law(Marginal::normal(-1.0, 1.0).unwrap());
        let t = power_renewal_u(&neg, 1.0, &[0.0, 5.0], &RenewalConfig::new(200, 400, 0)).unwrap();
        assert!(t.rows.iter().all(|r| r.verdict == Verdict::Infinite));
    }

    #[test]
    fn tilted_matches_direct() {
        let l = two_point();
        let tl = tilt(&l, 0.1).unwrap();
        let ev = |s: &[f64]| s[10] <= 0.0;
        let a = tilted_estimate(&tl, 10, ev, 50_000, 1).unwrap();
        let b = direct_estimate(&l, 0.1, 10, ev, 50_000, 2).unwrap();
        assert!(a.agrees_with(&b, 3.0), "{a:?} {b:?}");
        let tp = tilt(&point1(), 0.7).unwrap();
        let e = tilted_estimate(&tp, 5, |s| s[5] <= 5.0, 10, 0).unwrap();
        assert_relative_eq!(e.value, 3.5f64.exp(), epsilon = 1e-9);
    }

    #[test]
    fn duality_deterministic_and_symmetric() {
        let d = ladder_duality_check(&point1(), (-1.0, 0.5), 10, 50, 0, None).unwrap();
        assert_eq!((d.killed.value, d.ladder.value), (1.0, 1.0));
        assert!(d.agrees(3.0));
        let sym = law(Marginal::two_point(-1.0, 1.0, 0.5).unwrap());
        let d = ladder_duality_check(&sym, (-2.0, 0.0), 20_000, 200, 4, None).unwrap();
        assert!(d.agrees(3.0), "{d:?}");
        let d = ladder_duality_check(&two_point(), (-2.0, 0.0), 20_000, 200, 4, Some(0.1)).unwrap();
        assert!(d.agrees(3.0), "{d:?}");
    }

    #[test]
    fn csv_layout() {
        let t = estimate_renewal_measure(&point1(), RenewalKind::LadderUGt, &[0.0, 2.0], &RenewalConfig::new(4, 16, 0)).unwrap();
        assert_eq!(t.to_csv(), "y,estimate,se,verdict\n0,1,0,finite\n2,3,0,finite\n");
    }
}
