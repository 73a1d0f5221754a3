//! Binds analytic predictions to empirical verdicts, one report row per
//! checked quantity.

use serde::{Deserialize, Serialize};

use super::{estimate_moment, estimate_moment_values, horizon_growth, GrowthFunctional, HorizonGrowthConfig, MomentKind, Verdict, VerdictThresholds};
use crate::criteria::{
    classify_trichotomy, exp_moment_n, exp_moment_rho, exp_moment_tau, ext_f64, power_moment_n, power_moment_rho,
    sigma_power_verdict, tau_as_finite, Criterion, Prediction, Trichotomy,
};
use crate::error::{Error, Result};
use crate::laws::{rate_r, JointLaw};
use crate::prw::{first_passage, par_map_paths, sigma_functional, simulate_path, visits_and_last_exit_upto, Certification, Observed, Status};
use crate::shotnoise::{
    exp_moment_z, integral_l, integral_r, integral_r_gt, integral_s_q, simulate_shotnoise, IntegralConfig, IntegralEstimate,
    ResponseProcess,
};

pub const THEOREM_IDS: [&str; 12] = [
    "global",
    "finiteness_tau",
    "finiteness_rho",
    "exponential_tau",
    "exponential_N",
    "exponential_rho",
    "power_N",
    "power_rho",
    "sigma_raabe",
    "shotnoise_exp_pos",
    "shotnoise_exp_gen",
    "shotnoise_power",
];

/// Simulation budget for one verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub paths: usize,
    pub horizon: usize,
    pub seed: u64,
    #[serde(default)]
    pub thresholds: VerdictThresholds,
}

impl Budget {
    pub fn new(paths: usize, horizon: usize, seed: u64) -> Self {
        Budget {
            paths,
            horizon,
            seed,
            thresholds: VerdictThresholds::default(),
        }
    }

    fn integral(&self) -> IntegralConfig {
        IntegralConfig {
            n_paths: self.paths,
            horizon: self.horizon,
            seed: self.seed,
            thresholds: self.thresholds,
        }
    }
}

/// Theorem parameters; each theorem reads the ones it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremParams {
    #[serde(default)]
    pub x: f64,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub t: Option<f64>,
    /// Response for the shot-noise theorems; defaults to `1{η <= t}`.
    #[serde(default)]
    pub response: Option<ResponseProcess>,
}

impl Default for TheoremParams {
    fn default() -> Self {
        TheoremParams {
            x: 0.0,
            a: None,
            p: None,
            c: None,
            t: None,
            response: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicted {
    Finite,
    Infinite,
    Boundary,
    /// The criterion's inputs could not be settled.
    Undetermined,
    NotApplicable,
}

impl From<Prediction> for Predicted {
    fn from(p: Prediction) -> Self {
        match p {
            Prediction::Finite => Predicted::Finite,
            Prediction::Infinite => Predicted::Infinite,
            Prediction::Boundary => Predicted::Boundary,
        }
    }
}

impl From<Verdict> for Predicted {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Finite => Predicted::Finite,
            Verdict::Infinite => Predicted::Infinite,
            Verdict::Inconclusive => Predicted::Undetermined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Yes,
    No,
    Inconclusive,
}

impl Agreement {
    pub fn of(prediction: Predicted, empirical: Verdict) -> Self {
        match (prediction, empirical) {
            (Predicted::Finite, Verdict::Finite) | (Predicted::Infinite, Verdict::Infinite) => Agreement::Yes,
            (Predicted::Finite, Verdict::Infinite) | (Predicted::Infinite, Verdict::Finite) => Agreement::No,
            _ => Agreement::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowRole {
    /// Prediction against empirical verdict.
    Check,
    /// Empirically decided input to a prediction; carries no comparison.
    Input,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    /// The quantity whose finiteness is checked, e.g. `E e^{a τ(x)}`.
    pub quantity: String,
    pub role: RowRole,
    pub prediction: Predicted,
    /// Case label of the criterion behind the prediction.
    pub case: String,
    pub empirical: Verdict,
    pub agree: Agreement,
    /// Estimate behind the empirical verdict (a censoring rate for the a.s.
    /// finiteness rows).
    #[serde(with = "ext_f64::option")]
    pub estimate: Option<f64>,
    #[serde(with = "ext_f64::option")]
    pub se: Option<f64>,
    /// Statement of the criterion being checked.
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem: String,
    pub params: TheoremParams,
    pub budget: Budget,
    /// `R = -log inf_{t>=0} E e^{-tξ}`.
    #[serde(with = "ext_f64")]
    pub rate_r: f64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().filter(|r| r.role == RowRole::Check).all(|r| r.agree == Agreement::Yes)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theorem,quantity,role,prediction,case,empirical,agree,estimate,se,reference\n");
        for r in &self.rows {
            let num = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.theorem,
                csv_field(&r.quantity),
                label(&r.role),
                label(&r.prediction),
                csv_field(&r.case),
                label(&r.empirical),
                label(&r.agree),
                num(r.estimate),
                num(r.se),
                csv_field(&r.reference),
            ));
        }
        out
    }
}

fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct Ctx<'a> {
    law: &'a JointLaw,
    params: &'a TheoremParams,
    budget: &'a Budget,
}

impl Ctx<'_> {
    fn need(&self, name: &str, v: Option<f64>) -> Result<f64> {
        v.ok_or_else(|| Error::InvalidParameter(format!("theorem needs parameter `{name}`")))
    }

    fn row(&self, quantity: String, crit: Result<Criterion>, empirical: Verdict, est: (Option<f64>, Option<f64>), reference: &str) -> Result<VerifyRow> {
        let (prediction, case) = match crit {
            Ok(c) => (Predicted::from(c.prediction), c.case),
            Err(Error::NotApplicable(m) | Error::Precondition(m)) => (Predicted::NotApplicable, m),
            Err(e) => return Err(e),
        };
        Ok(VerifyRow {
            quantity,
            role: RowRole::Check,
            prediction,
            case,
            empirical,
            agree: Agreement::of(prediction, empirical),
            estimate: est.0,
            se: est.1,
            reference: reference.to_string(),
        })
    }

    fn growth(&self, functional: GrowthFunctional, a: f64) -> Result<(Verdict, Option<f64>, Option<f64>)> {
        let g = horizon_growth(
            self.law,
            &HorizonGrowthConfig {
                functional,
                x: self.params.x,
                a,
                horizon: self.budget.horizon,
                n_paths: self.budget.paths,
                seed: self.budget.seed,
                theta: None,
                thresholds: self.budget.thresholds,
            },
        )?;
        let (v, se) = match (g.tilted_log_means, g.tilted_se) {
            (Some(l), Some(se)) => (l[2].exp(), se),
            _ => (g.direct_log_means[2].exp(), g.direct_se),
        };
        Ok((g.verdict, Some(v), Some(se)))
    }

    /// Censoring rates of a functional at `H/2` and `H`.
    fn censor_rates<F>(&self, f: F) -> Result<[f64; 2]>
    where
        F: Fn(&crate::prw::PathBundle, usize) -> Observed + Sync + Send,
    {
        let h = self.budget.horizon;
        let rows = par_map_paths(self.budget.paths, |i| -> Result<[bool; 2]> {
            let b = simulate_path(self.law, h, self.budget.seed, i)?;
            Ok([h / 2, h].map(|m| f(&b, m).status == Status::Censored))
        });
        let rows: Vec<[bool; 2]> = rows.into_iter().collect::<Result<_>>()?;
        let n = rows.len() as f64;
        Ok(std::array::from_fn(|j| rows.iter().filter(|r| r[j]).count() as f64 / n))
    }

    /// `Finite` when censoring vanishes, `Infinite` when a non-negligible
    /// fraction stays censored as the horizon doubles.
    fn as_verdict(&self, rates: [f64; 2]) -> Verdict {
        let [half, full] = rates;
        if full < self.budget.thresholds.censor_cap {
            Verdict::Finite
        } else if full > 0.05 && full >= 0.9 * half {
            Verdict::Infinite
        } else {
            Verdict::Inconclusive
        }
    }

    fn samples<F>(&self, f: F) -> Result<Vec<Observed>>
    where
        F: Fn(&crate::prw::PathBundle) -> Result<Observed> + Sync + Send,
    {
        par_map_paths(self.budget.paths, |i| f(&simulate_path(self.law, self.budget.horizon, self.budget.seed, i)?))
            .into_iter()
            .collect()
    }

    fn power_row(&self, quantity: String, crit: Result<Criterion>, samples: &[Observed], p: f64, reference: &str) -> Result<VerifyRow> {
        let e = estimate_moment(samples, MomentKind::Power { p }, &self.budget.thresholds, self.budget.seed)?;
        let se = (e.ci95[1] - e.ci95[0]) / (2.0 * 1.96);
        self.row(quantity, crit, e.verdict, (Some(e.point), Some(se)), reference)
    }

    fn response(&self) -> ResponseProcess {
        self.params.response.unwrap_or(ResponseProcess::IndicatorOfEta)
    }
}

fn integral_est(e: &IntegralEstimate) -> (Option<f64>, Option<f64>) {
    (Some(e.value), Some(e.se))
}

fn input_row(quantity: String, e: &IntegralEstimate, reference: &str) -> VerifyRow {
    VerifyRow {
        quantity,
        role: RowRole::Input,
        prediction: Predicted::Undetermined,
        case: "criterion input".into(),
        empirical: e.verdict,
        agree: Agreement::Inconclusive,
        estimate: Some(e.value),
        se: Some(e.se),
        reference: reference.to_string(),
    }
}

/// Combines several empirically decided criterion inputs: finite iff all are,
/// infinite as soon as one is.
fn conjunction(parts: &[Verdict]) -> Predicted {
    if parts.contains(&Verdict::Infinite) {
        Predicted::Infinite
    } else if parts.iter().all(|v| *v == Verdict::Finite) {
        Predicted::Finite
    } else {
        Predicted::Undetermined
    }
}

fn row_from(quantity: String, prediction: Predicted, case: String, empirical: Verdict, est: (Option<f64>, Option<f64>), reference: &str) -> VerifyRow {
    VerifyRow {
        quantity,
        role: RowRole::Check,
        prediction,
        case,
        empirical,
        agree: Agreement::of(prediction, empirical),
        estimate: est.0,
        se: est.1,
        reference: reference.to_string(),
    }
}

/// Runs one theorem check. Inconclusive empirical verdicts are reported, never
/// raised as errors.
pub fn verify_theorem(law: &JointLaw, theorem_id: &str, params: &TheoremParams, budget: &Budget) -> Result<VerifyReport> {
    if !THEOREM_IDS.contains(&theorem_id) {
        return Err(Error::UnknownTheorem(theorem_id.to_string()));
    }
    if budget.horizon < 4 {
        return Err(Error::InvalidParameter("horizon must be >= 4".into()));
    }
    let ctx = Ctx { law, params, budget };
    let x = params.x;
    let cert = Certification::for_law(law)?;
    let mut rows = Vec::new();
    match theorem_id {
        "global" => {
            let cls = classify_trichotomy(law)?;
            let crit = Criterion {
                prediction: if cls.regime == Trichotomy::PosDiv { Prediction::Finite } else { Prediction::Infinite },
                case: format!("{:?}: {}", cls.regime, cls.case).to_lowercase(),
                threshold: None,
                gamma: None,
            };
            let rates = ctx.censor_rates(|b, m| visits_and_last_exit_upto(b, x, &cert, m).0)?;
            rows.push(ctx.row(
                format!("N({x}) < inf a.s."),
                Ok(crit),
                ctx.as_verdict(rates),
                (Some(rates[1]), None),
                "T_n -> +inf iff S_n -> +inf and E J+(η⁻) < inf; otherwise T_n -> -inf or oscillates",
            )?);
        }
        "finiteness_tau" => {
            let tf = tau_as_finite(law, x)?;
            let crit = Criterion {
                prediction: if tf.finite { Prediction::Finite } else { Prediction::Infinite },
                case: format!("{:?}", tf.regime).to_lowercase(),
                threshold: None,
                gamma: None,
            };
            let rates = ctx.censor_rates(|b, m| {
                let o = first_passage(b, x);
                if o.is_exact() && o.value as usize <= m {
                    o
                } else {
                    Observed::censored(m as u64)
                }
            })?;
            rows.push(ctx.row(
                format!("τ({x}) < inf a.s."),
                Ok(crit),
                ctx.as_verdict(rates),
                (Some(rates[1]), None),
                "τ(x) < inf a.s. unless S_n -> -inf; under negative divergence iff P{ξ<0, η<=x} = 0",
            )?);
        }
        "finiteness_rho" => {
            let cls = classify_trichotomy(law)?;
            let crit = Criterion {
                prediction: if cls.regime == Trichotomy::PosDiv { Prediction::Finite } else { Prediction::Infinite },
                case: format!("{:?}", cls.regime).to_lowercase(),
                threshold: None,
                gamma: None,
            };
            let rates = ctx.censor_rates(|b, m| visits_and_last_exit_upto(b, x, &cert, m).1)?;
            rows.push(ctx.row(
                format!("ρ({x}) < inf a.s."),
                Ok(crit),
                ctx.as_verdict(rates),
                (Some(rates[1]), None),
                "ρ(x) < inf a.s. iff N(x) < inf a.s. iff T_n -> +inf",
            )?);
        }
        "exponential_tau" => {
            let a = ctx.need("a", params.a)?;
            let (v, est, se) = ctx.growth(GrowthFunctional::Tau, a)?;
            rows.push(ctx.row(
                format!("E e^{{{a} τ({x})}}"),
                exp_moment_tau(law, a, x),
                v,
                (est, se),
                "E e^{aτ(x)} < inf iff R >= a, or a < -log P{ξ=0, η<=x} when P{ξ<0, η<=x} = 0",
            )?);
        }
        "exponential_N" => {
            let a = ctx.need("a", params.a)?;
            let (v, est, se) = ctx.growth(GrowthFunctional::Visits, a)?;
            rows.push(ctx.row(
                format!("E e^{{{a} N({x})}}"),
                exp_moment_n(law, a, x),
                v,
                (est, se),
                "for positive divergence, E e^{aN(x)} < inf iff a < a(x), with a(x) = R when P{ξ<0} > 0",
            )?);
        }
        "exponential_rho" => {
            let a = ctx.need("a", params.a)?;
            let (v, est, se) = ctx.growth(GrowthFunctional::LastExit, a)?;
            rows.push(ctx.row(
                format!("E e^{{{a} ρ({x})}}"),
                exp_moment_rho(law, a, x),
                v,
                (est, se),
                "for positive divergence, E e^{aρ(x)} < inf iff a <= R and E e^{-γ(a)η} < inf, with the usual boundary case at a = R",
            )?);
        }
        "power_N" => {
            let p = ctx.need("p", params.p)?;
            let s = ctx.samples(|b| Ok(visits_and_last_exit_upto(b, x, &cert, b.horizon).0))?;
            rows.push(ctx.power_row(
                format!("E N({x})^{p}"),
                power_moment_n(law, p),
                &s,
                p,
                "for positive divergence, E N(x)^p < inf iff E J+(ξ⁻)^{p+1} < inf",
            )?);
        }
        "power_rho" => {
            let p = ctx.need("p", params.p)?;
            let s = ctx.samples(|b| Ok(visits_and_last_exit_upto(b, x, &cert, b.horizon).1))?;
            rows.push(ctx.power_row(
                format!("E ρ({x})^{p}"),
                power_moment_rho(law, p),
                &s,
                p,
                "for positive divergence, E ρ(x)^p < inf iff E J+(ξ⁻)^{p+1} < inf and E J+(η⁻)^{p+1} < inf",
            )?);
        }
        "sigma_raabe" => {
            let p = ctx.need("p", params.p)?;
            let c = ctx.need("c", params.c)?;
            let crit = sigma_power_verdict(law, c, p, x);
            if let Err(Error::Precondition(_)) = &crit {
                rows.push(ctx.row(format!("E σ({x})^{p}"), crit, Verdict::Inconclusive, (None, None), "")?);
            } else {
                let s = ctx.samples(|b| sigma_functional(law, b, x, c))?;
                rows.push(ctx.power_row(
                    format!("E σ({x})^{p}"),
                    crit,
                    &s,
                    p,
                    "with ξ >= -c and s = lim y P{η > y}: E σ(x)^p finite if s > cp, infinite if s < cp",
                )?);
            }
        }
        "shotnoise_exp_pos" => {
            let a = ctx.need("a", params.a)?;
            let t = ctx.need("t", params.t)?;
            let resp = ctx.response();
            let cfg = budget.integral();
            let r = integral_r(law, &resp, a, t, &cfg);
            let reference = "for ξ >= 0, E e^{aZ(t)} < inf iff r(t) < inf and l(t) < inf";
            match r {
                Err(Error::Precondition(m)) => {
                    rows.push(row_from(format!("E e^{{{a} Z({t})}}"), Predicted::NotApplicable, m, Verdict::Inconclusive, (None, None), reference));
                }
                r => {
                    let r = r?;
                    let l = integral_l(law, &resp, a, t, &cfg)?;
                    let z = exp_moment_z(law, &resp, a, t, &cfg)?;
                    let case = format!("r: {}, l: {}", label(&r.verdict), label(&l.verdict));
                    rows.push(input_row(format!("r({t})"), &r, "r(t) = ∫ (E e^{aX(t-y)} - 1) U(dy)"));
                    rows.push(input_row(format!("l({t})"), &l, "l(t) = E Π_{n<=τ*} e^{aX_n(t-S_{n-1})}"));
                    rows.push(row_from(
                        format!("E e^{{{a} Z({t})}}"),
                        conjunction(&[r.verdict, l.verdict]),
                        case,
                        z.verdict,
                        integral_est(&z),
                        reference,
                    ));
                }
            }
        }
        "shotnoise_exp_gen" => {
            let a = ctx.need("a", params.a)?;
            let t = ctx.need("t", params.t)?;
            let resp = ctx.response();
            let cfg = budget.integral();
            let reference = "for positive divergence with P{ξ<0} > 0, E e^{aZ(t)} < inf iff r^>(t) < inf";
            match integral_r_gt(law, &resp, a, t, &cfg) {
                Err(Error::Precondition(m)) => {
                    rows.push(row_from(format!("E e^{{{a} Z({t})}}"), Predicted::NotApplicable, m, Verdict::Inconclusive, (None, None), reference));
                }
                r => {
                    let r = r?;
                    let z = exp_moment_z(law, &resp, a, t, &cfg)?;
                    rows.push(input_row(format!("r^>({t})"), &r, "r^>(t) = ∫ (l(t-u) - 1) U^>(du)"));
                    rows.push(row_from(
                        format!("E e^{{{a} Z({t})}}"),
                        Predicted::from(r.verdict),
                        format!("r^>: {}", label(&r.verdict)),
                        z.verdict,
                        integral_est(&z),
                        reference,
                    ));
                }
            }
        }
        "shotnoise_power" => {
            let p = ctx.need("p", params.p)?;
            let t = ctx.need("t", params.t)?;
            if !(p >= 1.0) {
                return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
            }
            let resp = ctx.response();
            let cfg = budget.integral();
            let reference = "for ξ >= 0, E Z(t)^p < inf iff s_q(t) < inf for all q in [1, p]";
            let qs: Vec<f64> = if p > 1.0 { vec![1.0, (1.0 + p) / 2.0, p] } else { vec![1.0] };
            let mut verdicts = Vec::new();
            let mut pre = None;
            for &q in &qs {
                match integral_s_q(law, &resp, q, t, &cfg) {
                    Err(Error::Precondition(m)) => {
                        pre = Some(m);
                        break;
                    }
                    r => {
                        let r = r?;
                        verdicts.push(r.verdict);
                        rows.push(input_row(format!("s_{q}({t})"), &r, "s_q(t) = ∫ E X(t-y)^q U(dy)"));
                    }
                }
            }
            if let Some(m) = pre {
                rows.push(row_from(format!("E Z({t})^{p}"), Predicted::NotApplicable, m, Verdict::Inconclusive, (None, None), reference));
            } else {
                let samples = par_map_paths(budget.paths, |i| simulate_shotnoise(law, &resp, t, budget.horizon, budget.seed, i))
                    .into_iter()
                    .collect::<Result<Vec<_>>>()?;
                let values: Vec<f64> = samples.iter().map(|s| s.z).collect();
                let censored: Vec<bool> = samples.iter().map(|s| s.status == Status::Censored).collect();
                let e = estimate_moment_values(&values, &censored, MomentKind::Power { p }, &budget.thresholds, budget.seed)?;
                let se = (e.ci95[1] - e.ci95[0]) / (2.0 * 1.96);
                rows.push(row_from(
                    format!("E Z({t})^{p}"),
                    conjunction(&verdicts),
                    "all s_q".into(),
                    e.verdict,
                    (Some(e.point), Some(se)),
                    reference,
                ));
            }
        }
        _ => unreachable!(),
    }
    Ok(VerifyReport {
        theorem: theorem_id.to_string(),
        params: params.clone(),
        budget: *budget,
        rate_r: rate_r(law)?.r,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::Marginal;

    fn two_point() -> JointLaw {
        JointLaw::independent(Marginal::two_point(-1.0, 1.0, 0.8).unwrap(), Marginal::exponential(1.0).unwrap()).unwrap()
    }

    #[test]
    fn unknown_id_rejected() {
        let r = verify_theorem(&two_point(), "nope", &TheoremParams::default(), &Budget::new(100, 16, 1));
        assert!(matches!(r, Err(Error::UnknownTheorem(_))));
    }

    #[test]
    fn exponential_tau_agrees() {
        let params = TheoremParams { a: Some(0.1), ..Default::default() };
        let r = verify_theorem(&two_point(), "exponential_tau", &params, &Budget::new(20_000, 256, 5)).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].prediction, Predicted::Finite);
        assert_eq!(r.rows[0].agree, Agreement::Yes, "{:?}", r.rows[0]);
    }

    #[test]
    fn rho_finite_for_positive_divergence() {
        let r = verify_theorem(&two_point(), "finiteness_rho", &TheoremParams::default(), &Budget::new(2_000, 2_000, 2)).unwrap();
        assert_eq!(r.rows[0].agree, Agreement::Yes, "{:?}", r.rows[0]);
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn negative_divergence_visits_infinite() {
        let law = JointLaw::independent(Marginal::two_point(-1.0, 1.0, 0.2).unwrap(), Marginal::exponential(1.0).unwrap()).unwrap();
        let r = verify_theorem(&law, "global", &TheoremParams::default(), &Budget::new(1_000, 400, 2)).unwrap();
        assert_eq!(r.rows[0].prediction, Predicted::Infinite);
        assert_eq!(r.rows[0].agree, Agreement::Yes, "{:?}", r.rows[0]);
    }

    #[test]
    fn missing_parameter() {
        let r = verify_theorem(&two_point(), "power_N", &TheoremParams::default(), &Budget::new(1_000, 100, 1));
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn agreement_table() {
        assert_eq!(Agreement::of(Predicted::Finite, Verdict::Finite), Agreement::Yes);
        assert_eq!(Agreement::of(Predicted::Infinite, Verdict::Finite), Agreement::No);
        assert_eq!(Agreement::of(Predicted::Boundary, Verdict::Finite), Agreement::Inconclusive);
        assert_eq!(Agreement::of(Predicted::Finite, Verdict::Inconclusive), Agreement::Inconclusive);
    }
}
