//! Renewal shot-noise processes `Z(t) = Σ_{n>=1} X_n(t - S_{n-1})` and the
//! integrals `r`, `l`, `r^>`, `s_q` that decide their moments.

use serde::{Deserialize, Serialize};

use crate::criteria::{classify_trichotomy, ext_f64, Drift};
use crate::error::{Error, Result};
use crate::laws::JointLaw;
use crate::mc::{growth_of, series_verdict, GrowthSetup, HorizonGrowth, Verdict, VerdictThresholds};
use crate::prw::{par_map_paths, path_rng, simulate_path, visits_and_last_exit_upto, Certification, PathBundle, Status};

/// Level below which a response term counts as vanished.
pub const ENVELOPE_FLOOR: f64 = 1e-12;

/// Deterministic response shape `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum ResponseFn {
    Zero,
    /// `1{s >= 0}`
    Step,
    /// `e^{rate s}`
    Exponential { rate: f64 },
}

impl ResponseFn {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            ResponseFn::Zero => 0.0,
            ResponseFn::Step => {
                if s >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ResponseFn::Exponential { rate } => (rate * s).exp(),
        }
    }

    /// Nondecreasing with limit zero at `-∞`.
    pub fn is_admissible(&self) -> bool {
        match *self {
            ResponseFn::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            _ => true,
        }
    }

    /// A point `z` with `f(s) <= floor` for all `s < z`.
    fn vanishes_below(&self, floor: f64) -> Option<f64> {
        match *self {
            ResponseFn::Zero => Some(f64::INFINITY),
            ResponseFn::Step => Some(0.0),
            ResponseFn::Exponential { rate } if rate > 0.0 => Some(floor.ln() / rate),
            ResponseFn::Exponential { .. } => None,
        }
    }
}

/// Response process `X(·)` driven by the perturbation `η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ResponseProcess {
    /// `X(s) = 1{η <= s}`
    IndicatorOfEta,
    /// `X(s) = f(s)`
    DeterministicF { f: ResponseFn },
    /// `X(s) = η f(s)` with `η >= 0`
    MultiplicativeEtaF { f: ResponseFn },
}

impl ResponseProcess {
    pub fn validate(&self, law: &JointLaw) -> Result<()> {
        match self {
            ResponseProcess::IndicatorOfEta => Ok(()),
            ResponseProcess::DeterministicF { .. } => Ok(()),
            ResponseProcess::MultiplicativeEtaF { .. } => {
                if law.eta().support().0 < 0.0 {
                    Err(Error::Precondition("multiplicative response needs η >= 0".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn validate_admissible(&self, law: &JointLaw) -> Result<()> {
        self.validate(law)?;
        match self {
            ResponseProcess::DeterministicF { f } | ResponseProcess::MultiplicativeEtaF { f } if !f.is_admissible() => {
                Err(Error::Precondition(format!("{f:?} is not nondecreasing with f(-∞) = 0")))
            }
            _ => Ok(()),
        }
    }

    /// `X_n(s)` given `η_n`.
    pub fn value(&self, eta: f64, s: f64) -> f64 {
        match self {
            ResponseProcess::IndicatorOfEta => {
                if eta <= s {
                    1.0
                } else {
                    0.0
                }
            }
            ResponseProcess::DeterministicF { f } => f.eval(s),
            ResponseProcess::MultiplicativeEtaF { f } => {
                let v = f.eval(s);
                if v == 0.0 {
                    0.0
                } else {
                    eta * v
                }
            }
        }
    }

    /// `E e^{aX(s)}`, possibly `+∞`.
    pub fn exp_mean(&self, law: &JointLaw, a: f64, s: f64) -> Result<f64> {
        Ok(match self {
            ResponseProcess::IndicatorOfEta => 1.0 + a.exp_m1() * law.eta_cdf(s),
            ResponseProcess::DeterministicF { f } => (a * f.eval(s)).exp(),
            ResponseProcess::MultiplicativeEtaF { f } => law.eta().laplace(-a * f.eval(s))?,
        })
    }

    /// `E X(s)^q`, possibly `+∞`.
    pub fn power_mean(&self, law: &JointLaw, q: f64, s: f64) -> Result<f64> {
        Ok(match self {
            ResponseProcess::IndicatorOfEta => law.eta_cdf(s),
            ResponseProcess::DeterministicF { f } => f.eval(s).powf(q),
            ResponseProcess::MultiplicativeEtaF { f } => {
                let v = f.eval(s);
                if v == 0.0 {
                    0.0
                } else {
                    v.powf(q) * law.eta().positive_moment(q)?
                }
            }
        })
    }

    /// Offset `z` such that terms with argument below `z` are negligible for
    /// all but an `ε` fraction of perturbations.
    fn vanishing_offset(&self, law: &JointLaw, epsilon: f64) -> Option<f64> {
        match self {
            ResponseProcess::IndicatorOfEta => None,
            ResponseProcess::DeterministicF { f } => f.vanishes_below(ENVELOPE_FLOOR),
            ResponseProcess::MultiplicativeEtaF { f } => match *f {
                ResponseFn::Exponential { rate } if rate > 0.0 => {
                    let top = law.eta().quantile(1.0 - epsilon).max(ENVELOPE_FLOOR);
                    Some((ENVELOPE_FLOOR / top).ln() / rate)
                }
                other => other.vanishes_below(ENVELOPE_FLOOR),
            },
        }
    }
}

/// `Z(t)` on one path, truncated at the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotNoiseSample {
    pub t: f64,
    pub z: f64,
    /// Number of terms summed.
    pub truncation: usize,
    /// Analytic bound on the omitted terms, when one is available.
    pub tail_bound: Option<f64>,
    pub status: Status,
}

/// `Σ_{n<=m} X_n(t - S_{n-1})` on a simulated path.
pub fn shotnoise_on_path(law: &JointLaw, response: &ResponseProcess, b: &PathBundle, t: f64, m: usize) -> Result<ShotNoiseSample> {
    response.validate(law)?;
    let m = m.min(b.horizon);
    let cert = Certification::for_law(law)?;
    if let ResponseProcess::IndicatorOfEta = response {
        // T_n <= t is the same event as η_n <= t - S_{n-1}
        let (n, _) = visits_and_last_exit_upto(b, t, &cert, m);
        return Ok(ShotNoiseSample {
            t,
            z: n.value as f64,
            truncation: m,
            tail_bound: None,
            status: n.status,
        });
    }
    let z: f64 = (0..m).map(|k| response.value(b.eta[k], t - b.s[k])).sum();
    let s_m = b.s[m];
    let status = match response.vanishing_offset(law, cert.epsilon) {
        Some(off) if off == f64::INFINITY => Status::Exact,
        Some(off) => {
            let c = Certification { eta_floor: off, ..cert };
            if c.certifies(s_m, t) {
                Status::Exact
            } else {
                Status::Censored
            }
        }
        None => Status::Censored,
    };
    let tail_bound = match response {
        ResponseProcess::DeterministicF { f: ResponseFn::Exponential { rate } } if *rate > 0.0 => {
            let step = law.xi().support().0;
            (step > 0.0).then(|| (rate * (t - s_m)).exp() / -(-rate * step).exp_m1())
        }
        ResponseProcess::DeterministicF { f: ResponseFn::Zero } => Some(0.0),
        _ => None,
    };
    Ok(ShotNoiseSample {
        t,
        z,
        truncation: m,
        tail_bound,
        status,
    })
}

/// Simulates path `path_index` and evaluates `Z(t)` on it.
pub fn simulate_shotnoise(
    law: &JointLaw,
    response: &ResponseProcess,
    t: f64,
    horizon: usize,
    master_seed: u64,
    path_index: u64,
) -> Result<ShotNoiseSample> {
    let b = simulate_path(law, horizon, master_seed, path_index)?;
    shotnoise_on_path(law, response, &b, t, horizon)
}

/// Budget for the integral estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralConfig {
    pub n_paths: usize,
    pub horizon: usize,
    pub seed: u64,
    pub thresholds: VerdictThresholds,
}

impl IntegralConfig {
    pub fn new(n_paths: usize, horizon: usize, seed: u64) -> Self {
        IntegralConfig {
            n_paths,
            horizon,
            seed,
            thresholds: VerdictThresholds::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_paths < 2 {
            return Err(Error::InsufficientSamples { needed: 2, got: self.n_paths });
        }
        if self.horizon < 4 {
            return Err(Error::InvalidParameter("horizon must be >= 4".into()));
        }
        Ok(())
    }

    fn growth_setup(&self, level: f64) -> GrowthSetup {
        GrowthSetup {
            level,
            horizon: self.horizon,
            n_paths: self.n_paths,
            seed: self.seed,
            theta: None,
            thresholds: self.thresholds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    #[serde(with = "ext_f64")]
    pub value: f64,
    #[serde(with = "ext_f64")]
    pub se: f64,
    pub verdict: Verdict,
    pub n_paths: usize,
    pub horizon: usize,
    /// Horizon-growth diagnostic behind the verdict, for exponential
    /// functionals.
    pub growth: Option<HorizonGrowth>,
}

impl IntegralEstimate {
    /// Takes the importance-sampled estimate when there is one.
    fn from_growth(g: HorizonGrowth, cfg: &IntegralConfig) -> Self {
        let (value, se) = match (g.tilted_log_means, g.tilted_se) {
            (Some(l), Some(se)) => (l[2].exp(), se),
            _ => (g.direct_log_means[2].exp(), g.direct_se),
        };
        IntegralEstimate {
            value,
            se,
            verdict: g.verdict,
            n_paths: cfg.n_paths,
            horizon: cfg.horizon,
            growth: Some(g),
        }
    }

    /// `|self - other| <= z` joint standard errors.
    pub fn agrees_with(&self, other: &IntegralEstimate, z: f64) -> bool {
        (self.value - other.value).abs() <= z * self.se.hypot(other.se)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn require_nonnegative_steps(law: &JointLaw, what: &str) -> Result<()> {
    if law.xi().p_neg() > 0.0 {
        Err(Error::Precondition(format!("{what} needs ξ >= 0 a.s.")))
    } else {
        Ok(())
    }
}

/// `∫ g(t - y) U(dy)` for a nonnegative `g` nondecreasing in its argument,
/// with `ξ >= 0`.
fn renewal_integral<G>(law: &JointLaw, g: G, t: f64, cfg: &IntegralConfig) -> Result<IntegralEstimate>
where
    G: Fn(f64) -> Result<f64> + Sync + Send,
{
    cfg.validate()?;
    let h = cfg.horizon;
    let cps = [h / 4, h / 2, h];
    let xi = law.xi();
    let rows = par_map_paths(cfg.n_paths, |i| -> Result<[f64; 3]> {
        let mut rng = path_rng(cfg.seed, i);
        let mut out = [0.0; 3];
        let mut acc = 0.0;
        let mut s = 0.0;
        let mut j = 0;
        for n in 0..=h {
            let v = g(t - s)?;
            acc += v;
            while j < 3 && cps[j] == n {
                out[j] = acc;
                j += 1;
            }
            if v == 0.0 || !acc.is_finite() {
                // the walk is nondecreasing, so every later term vanishes too
                // (or the sum has already diverged)
                for o in out.iter_mut().skip(j) {
                    *o = acc;
                }
                break;
            }
            s += xi.sample(&mut rng);
        }
        Ok(out)
    });
    let rows: Vec<[f64; 3]> = rows.into_iter().collect::<Result<_>>()?;
    let n = rows.len() as f64;
    let means: [f64; 3] = std::array::from_fn(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n);
    let se = if means[2].is_finite() {
        (rows.iter().map(|r| (r[2] - means[2]).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(IntegralEstimate {
        value: means[2],
        se,
        verdict: series_verdict(means, &cfg.thresholds),
        n_paths: cfg.n_paths,
        horizon: h,
        growth: None,
    })
}

/// `r(t) = ∫ (E e^{aX(t-y)} - 1) U(dy)` for `ξ >= 0`.
pub fn integral_r(law: &JointLaw, response: &ResponseProcess, a: f64, t: f64, cfg: &IntegralConfig) -> Result<IntegralEstimate> {
    check_positive("a", a)?;
    require_nonnegative_steps(law, "r(t)")?;
    response.validate_admissible(law)?;
    renewal_integral(law, |s| Ok(response.exp_mean(law, a, s)? - 1.0), t, cfg)
}

/// `s_q(t) = ∫ E X(t-y)^q U(dy)` for `ξ >= 0`.
pub fn integral_s_q(law: &JointLaw, response: &ResponseProcess, q: f64, t: f64, cfg: &IntegralConfig) -> Result<IntegralEstimate> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("q must be >= 1, got {q}")));
    }
    require_nonnegative_steps(law, "s_q(t)")?;
    response.validate_admissible(law)?;
    renewal_integral(law, |s| response.power_mean(law, q, s), t, cfg)
}

/// `l(t) = E Π_{n<=τ*} e^{aX_n(t - S_{n-1})}`.
pub fn integral_l(law: &JointLaw, response: &ResponseProcess, a: f64, t: f64, cfg: &IntegralConfig) -> Result<IntegralEstimate> {
    check_positive("a", a)?;
    response.validate_admissible(law)?;
    cfg.validate()?;
    let g = growth_of(law, &cfg.growth_setup(t), |b, m| {
        let mut acc = 0.0;
        for k in 0..m {
            acc += response.value(b.eta[k], t - b.s[k]);
            if b.s[k + 1] > 0.0 {
                break;
            }
        }
        a * acc
    })?;
    Ok(IntegralEstimate::from_growth(g, cfg))
}

/// `log(e^x - 1)` for `x >= 0`.
fn log_expm1(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// `r^>(t) = ∫ (l(t - u) - 1) U^>(du)` for a walk drifting to `+∞` with
/// negative steps. Each simulated path contributes `Σ_n (L_n - 1)` over its
/// own ladder cycles, which is unbiased for `r^>(t)`.
pub fn integral_r_gt(law: &JointLaw, response: &ResponseProcess, a: f64, t: f64, cfg: &IntegralConfig) -> Result<IntegralEstimate> {
    check_positive("a", a)?;
    if law.xi().p_neg() == 0.0 {
        return Err(Error::Precondition("r^>(t) is for walks with P{ξ<0} > 0; use r(t)".into()));
    }
    if classify_trichotomy(law)?.drift != Drift::PlusInfinity {
        return Err(Error::Precondition("r^>(t) needs S_n to drift to +∞".into()));
    }
    response.validate_admissible(law)?;
    cfg.validate()?;
    let g = growth_of(law, &cfg.growth_setup(t), |b, m| {
        let mut cycles = Vec::new();
        let mut cur = 0.0;
        let mut max = 0.0;
        for k in 0..m {
            cur += a * response.value(b.eta[k], t - b.s[k]);
            if b.s[k + 1] > max {
                max = b.s[k + 1];
                cycles.push(log_expm1(cur));
                cur = 0.0;
            }
        }
        cycles.push(log_expm1(cur));
        crate::mc::log_sum_exp(&cycles)
    })?;
    Ok(IntegralEstimate::from_growth(g, cfg))
}

/// `E e^{aZ(t)}` with `Z` truncated at the horizon.
pub fn exp_moment_z(law: &JointLaw, response: &ResponseProcess, a: f64, t: f64, cfg: &IntegralConfig) -> Result<IntegralEstimate> {
    check_positive("a", a)?;
    response.validate(law)?;
    cfg.validate()?;
    let g = growth_of(law, &cfg.growth_setup(t), |b, m| {
        a * (0..m).map(|k| response.value(b.eta[k], t - b.s[k])).sum::<f64>()
    })?;
    Ok(IntegralEstimate::from_growth(g, cfg))
}

/// Sample mean of `Z(t)` with the fraction of censored paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanZ {
    pub value: f64,
    pub se: f64,
    pub censor_rate: f64,
    pub n_paths: usize,
}

pub fn mean_z(law: &JointLaw, response: &ResponseProcess, t: f64, cfg: &IntegralConfig) -> Result<MeanZ> {
    cfg.validate()?;
    let samples = par_map_paths(cfg.n_paths, |i| simulate_shotnoise(law, response, t, cfg.horizon, cfg.seed, i));
    let samples: Vec<ShotNoiseSample> = samples.into_iter().collect::<Result<_>>()?;
    let n = samples.len() as f64;
    let m = samples.iter().map(|s| s.z).sum::<f64>() / n;
    let var = samples.iter().map(|s| (s.z - m).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(MeanZ {
        value: m,
        se: (var / n).sqrt(),
        censor_rate: samples.iter().filter(|s| s.status == Status::Censored).count() as f64 / n,
        n_paths: cfg.n_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::Marginal;
    use crate::prw::visits_and_last_exit;
    use approx::assert_relative_eq;

    fn ind(xi: Marginal, eta: Marginal) -> JointLaw {
        JointLaw::independent(xi, eta).unwrap()
    }

    fn exp1() -> Marginal {
        Marginal::exponential(1.0).unwrap()
    }

    const IND: ResponseProcess = ResponseProcess::IndicatorOfEta;
    const STEP: ResponseProcess = ResponseProcess::DeterministicF { f: ResponseFn::Step };

    #[test]
    fn indicator_equals_visits() {
        let law = ind(Marginal::normal(0.5, 1.0).unwrap(), Marginal::normal(0.0, 2.0).unwrap());
        let cert = Certification::for_law(&law).unwrap();
        for i in 0..50 {
            let b = simulate_path(&law, 300, 7, i).unwrap();
            for x in [-2.0, 0.0, 1.5, 4.0] {
                let z = shotnoise_on_path(&law, &IND, &b, x, 300).unwrap();
                let (n, _) = visits_and_last_exit(&b, x, &cert);
                assert_eq!((z.z as u64, z.status), (n.value, n.status));
            }
        }
    }

    #[test]
    fn step_response_counts_renewals() {
        let law = ind(Marginal::point(1.0).unwrap(), exp1());
        for (t, expect) in [(0.0, 1.0), (2.5, 3.0), (7.0, 8.0)] {
            let z = simulate_shotnoise(&law, &STEP, t, 50, 0, 0).unwrap();
            assert_eq!((z.z, z.status), (expect, Status::Exact));
        }
    }

    #[test]
    fn exponential_response_is_perpetuity() {
        let law = ind(exp1(), exp1());
        let resp = ResponseProcess::MultiplicativeEtaF {
            f: ResponseFn::Exponential { rate: -0.5 },
        };
        let b = simulate_path(&law, 40, 3, 0).unwrap();
        let z = shotnoise_on_path(&law, &resp, &b, 1.2, 40).unwrap();
        let direct: f64 = (0..40).map(|k| (0.5 * b.s[k]).exp() * b.eta[k]).sum::<f64>() * (-0.5f64 * 1.2).exp();
        assert_relative_eq!(z.z, direct, max_relative = 1e-12);
        assert_eq!(z.status, Status::Censored);
    }

    #[test]
    fn r_deterministic_and_trivial() {
        let law = ind(Marginal::point(1.0).unwrap(), Marginal::point(-1e-9).unwrap());
        let r = integral_r(&law, &IND, 1.0, 2.5, &IntegralConfig::new(4, 64, 0)).unwrap();
        assert_relative_eq!(r.value, 3.0 * (1f64.exp() - 1.0), epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Finite);
        let high = ind(Marginal::point(1.0).unwrap(), Marginal::point(10.0).unwrap());
        let r = integral_r(&high, &IND, 1.0, 2.5, &IntegralConfig::new(4, 64, 0)).unwrap();
        assert_eq!(r.value, 0.0);
        let neg = ind(Marginal::normal(1.0, 1.0).unwrap(), exp1());
        assert!(matches!(integral_r(&neg, &IND, 1.0, 0.0, &IntegralConfig::new(4, 64, 0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn r_exponential_against_quadrature() {
        // U(dy) = δ_0 + dy on [0, ∞); g(s) = (e - 1)(1 - e^{-s}) for s >= 0
        let law = ind(exp1(), exp1());
        let g = |s: f64| if s > 0.0 { (1f64.exp() - 1.0) * (-(-s).exp_m1()) } else { 0.0 };
        let oracle = g(1.0) + crate::quad::integrate(|y| g(1.0 - y), 0.0, 1.0, Default::default()).unwrap();
        let r = integral_r(&law, &IND, 1.0, 1.0, &IntegralConfig::new(40_000, 200, 9)).unwrap();
        assert!((r.value - oracle).abs() < 3.0 * r.se, "{} vs {oracle} ± {}", r.value, r.se);
    }

    #[test]
    fn s_q_examples() {
        let det = ind(Marginal::point(1.0).unwrap(), exp1());
        let s = integral_s_q(&det, &STEP, 2.0, 2.5, &IntegralConfig::new(3, 32, 0)).unwrap();
        assert_eq!(s.value, 3.0);
        let law = ind(exp1(), exp1());
        let mult = ResponseProcess::MultiplicativeEtaF { f: ResponseFn::Step };
        let s = integral_s_q(&law, &mult, 1.0, 1.0, &IntegralConfig::new(40_000, 200, 1)).unwrap();
        assert!((s.value - 2.0).abs() < 3.0 * s.se, "{s:?}");
        let heavy = ind(exp1(), Marginal::pareto(0.5, 1.0).unwrap().negated());
        let s = integral_s_q(&heavy, &IND, 1.0, 0.0, &IntegralConfig::new(2_000, 4_000, 1)).unwrap();
        assert_eq!(s.verdict, Verdict::Infinite, "{s:?}");
    }

    #[test]
    fn l_examples() {
        let law = ind(Marginal::point(1.0).unwrap(), Marginal::point(-1.0).unwrap());
        let l = integral_l(&law, &IND, 1.0, 0.0, &IntegralConfig::new(10, 16, 0)).unwrap();
        assert_relative_eq!(l.value, 1f64.exp(), epsilon = 1e-12);
        // τ* geometric(1/2): l = Σ_k 2^{-k} e^{ak} = q / (1 - q), q = e^a / 2
        let law = ind(Marginal::two_point(0.0, 1.0, 0.5).unwrap(), Marginal::point(-1.0).unwrap());
        let q = 0.5f64.exp() / 2.0;
        let l = integral_l(&law, &IND, 0.5, 0.0, &IntegralConfig::new(40_000, 64, 2)).unwrap();
        assert!((l.value - q / (1.0 - q)).abs() < 3.0 * l.se, "{l:?}");
        assert_eq!(l.verdict, Verdict::Finite);
        let l = integral_l(&law, &IND, 0.8, 0.0, &IntegralConfig::new(20_000, 256, 2)).unwrap();
        assert_eq!(l.verdict, Verdict::Infinite, "{l:?}");
    }

    #[test]
    fn r_gt_examples() {
        let law = ind(Marginal::two_point(-1.0, 1.0, 0.8).unwrap(), exp1());
        let zero = ResponseProcess::DeterministicF { f: ResponseFn::Zero };
        let cfg = IntegralConfig::new(20_000, 256, 4);
        assert_eq!(integral_r_gt(&law, &zero, 0.1, 0.0, &cfg).unwrap().value, 0.0);
        let lo = integral_r_gt(&law, &IND, 0.1, 0.0, &cfg).unwrap();
        assert_eq!(lo.verdict, Verdict::Finite, "{lo:?}");
        let hi = integral_r_gt(&law, &IND, 0.3, 0.0, &cfg).unwrap();
        assert_eq!(hi.verdict, Verdict::Infinite, "{hi:?}");
    }

    #[test]
    fn mean_z_matches_s1() {
        let law = ind(exp1(), exp1());
        let mult = ResponseProcess::MultiplicativeEtaF { f: ResponseFn::Step };
        let cfg = IntegralConfig::new(40_000, 200, 6);
        let m = mean_z(&law, &mult, 1.0, &cfg).unwrap();
        let s = integral_s_q(&law, &mult, 1.0, 1.0, &IntegralConfig { seed: 7, ..cfg }).unwrap();
        assert!((m.value - s.value).abs() < 3.0 * m.se.hypot(s.se));
        assert_eq!(m.censor_rate, 0.0);
    }
}
