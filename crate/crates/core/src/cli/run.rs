//! Dispatches a validated configuration to the experiment it names and
//! renders the reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind, FunctionalName, OutputFormat, ScenarioName};
use super::scenario::{bernoulli_sieve, gig_infty_queue};
use crate::criteria::{
    criteria_report, exp_moment_n, exp_moment_rho, exp_moment_tau, ext_f64, power_moment_n, power_moment_rho,
    sigma_power_verdict, Entry, ReportRequest,
};
use crate::error::{Error, Result};
use crate::laws::JointLaw;
use crate::mc::{
    estimate_moment, horizon_growth, verify_theorem, Budget, GrowthFunctional, HorizonGrowthConfig, MomentEstimate, MomentKind,
    TheoremParams, Verdict, VerifyReport,
};
use crate::prw::{first_ascending_ladder, functional_sample, par_map_paths, simulate_path, Certification, Observed};
use crate::renewal::{estimate_renewal_measure, exp_renewal_v, power_renewal_u, RenewalConfig, RenewalKind};
use crate::shotnoise::{
    exp_moment_z, integral_l, integral_r, integral_r_gt, integral_s_q, mean_z, IntegralConfig, IntegralEstimate, ResponseProcess,
};

/// Rendered output of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub stem: String,
    pub json: String,
    pub csv: String,
}

impl Report {
    /// Writes the requested formats into `dir` and returns the file paths.
    pub fn write(&self, dir: &std::path::Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        if matches!(format, OutputFormat::Json | OutputFormat::Both) {
            let p = dir.join(format!("{}.json", self.stem));
            std::fs::write(&p, &self.json)?;
            out.push(p);
        }
        if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
            let p = dir.join(format!("{}.csv", self.stem));
            std::fs::write(&p, &self.csv)?;
            out.push(p);
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    experiment: &'a str,
    seed: u64,
    law: Option<&'a JointLaw>,
    result: T,
}

fn render<T: Serialize>(experiment: &str, cfg: &ExperimentConfig, law: Option<&JointLaw>, result: T, csv: String) -> Report {
    let env = Envelope {
        experiment,
        seed: cfg.seed,
        law,
        result,
    };
    let mut json = serde_json::to_string_pretty(&env).expect("reports serialize");
    json.push('\n');
    Report {
        stem: experiment.to_string(),
        json,
        csv,
    }
}

fn or_default(grid: &[f64], default: &[f64]) -> Vec<f64> {
    if grid.is_empty() {
        default.to_vec()
    } else {
        grid.to_vec()
    }
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn label<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn entry_label(e: &Entry) -> String {
    match e {
        Entry::Applies(c) => label(&c.prediction),
        Entry::NotApplicable(_) => "not_applicable".into(),
    }
}

/// Runs the experiment of kind `kind`.
pub fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Report> {
    if let Some(k) = cfg.experiment {
        if k != kind {
            return Err(Error::Config {
                path: "experiment".into(),
                message: format!("config is for `{}`, not `{}`", k.name(), kind.name()),
            });
        }
    }
    match kind {
        ExperimentKind::Classify => classify(cfg),
        ExperimentKind::Moments => moments(cfg),
        ExperimentKind::Verify => verify(cfg),
        ExperimentKind::Shotnoise => shotnoise(cfg),
        ExperimentKind::Renewal => renewal(cfg),
        ExperimentKind::Scenario => scenario(cfg),
    }
}

fn classify(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.joint_law()?;
    let g = &cfg.params;
    let mut reports = Vec::new();
    let mut csv = String::from("x,a,p,c,quantity,prediction,case\n");
    for &x in &or_default(&g.x, &[0.0]) {
        for &a in &or_default(&g.a, &[0.1]) {
            for &p in &or_default(&g.p, &[1.0]) {
                let req = ReportRequest { x, a, p, c: g.c.first().copied() };
                let r = criteria_report(&law, &req)?;
                let mut entries = vec![
                    ("exp_tau", &r.exp_tau),
                    ("exp_n", &r.exp_n),
                    ("exp_rho", &r.exp_rho),
                    ("pow_n", &r.pow_n),
                    ("pow_rho", &r.pow_rho),
                    ("pow_series_experimental", &r.pow_series_experimental),
                ];
                if let Some(s) = &r.sigma_pow {
                    entries.push(("sigma_pow", s));
                }
                let c = opt(req.c);
                let _ = writeln!(csv, "{x},{a},{p},{c},regime,{},{}", label(&r.classification.regime), r.classification.case);
                let _ = writeln!(csv, "{x},{a},{p},{c},tau_as_finite,{},", r.tau_as_finite);
                for (name, e) in entries {
                    let case = match e {
                        Entry::Applies(c) => c.case.clone(),
                        Entry::NotApplicable(m) => m.replace(',', ";"),
                    };
                    let _ = writeln!(csv, "{x},{a},{p},{c},{name},{},{case}", entry_label(e));
                }
                reports.push(r);
            }
        }
    }
    Ok(render("classify", cfg, Some(&law), reports, csv))
}

#[derive(Debug, Clone, Serialize)]
struct MomentRow {
    functional: FunctionalName,
    x: f64,
    estimate: MomentEstimate,
    /// Horizon-growth verdict for exponential moments of path functionals.
    growth_verdict: Option<Verdict>,
    prediction: Option<Entry>,
}

fn growth_kind(f: FunctionalName) -> Option<GrowthFunctional> {
    match f {
        FunctionalName::Tau => Some(GrowthFunctional::Tau),
        FunctionalName::Visits => Some(GrowthFunctional::Visits),
        FunctionalName::LastExit => Some(GrowthFunctional::LastExit),
        FunctionalName::FirstLadder => Some(GrowthFunctional::FirstLadder),
        FunctionalName::Sigma | FunctionalName::Nu => None,
    }
}

fn moments(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.joint_law()?;
    let f = cfg.functional.unwrap_or(FunctionalName::Tau);
    let g = &cfg.params;
    let c = match f {
        FunctionalName::Sigma => Some(*g.c.first().ok_or_else(|| Error::Config {
            path: "params.c".into(),
            message: "sigma needs a drift bound c".into(),
        })?),
        _ => None,
    };
    let cert = Certification::for_law(&law)?;
    let (paths, horizon, seed) = (cfg.budget.paths, cfg.budget.horizon, cfg.seed);
    let mut kinds: Vec<MomentKind> = g.p.iter().map(|&p| MomentKind::Power { p }).collect();
    kinds.extend(g.a.iter().map(|&a| MomentKind::Exponential { a }));
    if kinds.is_empty() {
        kinds.push(MomentKind::Power { p: 1.0 });
    }
    let mut rows = Vec::new();
    for &x in &or_default(&g.x, &[0.0]) {
        let samples: Vec<Observed> = par_map_paths(paths, |i| -> Result<Observed> {
            let b = simulate_path(&law, horizon, seed, i)?;
            Ok(match f {
                FunctionalName::FirstLadder => first_ascending_ladder(&b),
                _ => {
                    let s = functional_sample(&law, &b, x, &cert, c)?;
                    match f {
                        FunctionalName::Tau => s.tau,
                        FunctionalName::Visits => s.n_visits,
                        FunctionalName::LastExit => s.rho,
                        FunctionalName::Nu => s.nu,
                        FunctionalName::Sigma => s.sigma.expect("sigma requested"),
                        FunctionalName::FirstLadder => unreachable!(),
                    }
                }
            })
        })
        .into_iter()
        .collect::<Result<_>>()?;
        for &kind in &kinds {
            let estimate = estimate_moment(&samples, kind, &cfg.thresholds, seed)?;
            let prediction = match (f, kind) {
                (FunctionalName::Tau, MomentKind::Exponential { a }) => Some(exp_moment_tau(&law, a, x)),
                (FunctionalName::Visits, MomentKind::Exponential { a }) => Some(exp_moment_n(&law, a, x)),
                (FunctionalName::LastExit, MomentKind::Exponential { a }) => Some(exp_moment_rho(&law, a, x)),
                (FunctionalName::Visits, MomentKind::Power { p }) => Some(power_moment_n(&law, p)),
                (FunctionalName::LastExit, MomentKind::Power { p }) => Some(power_moment_rho(&law, p)),
                (FunctionalName::Sigma, MomentKind::Power { p }) => Some(sigma_power_verdict(&law, c.unwrap_or(0.0), p, x)),
                _ => None,
            }
            .map(Entry::from_result)
            .transpose()?;
            let growth_verdict = match (growth_kind(f), kind) {
                (Some(functional), MomentKind::Exponential { a }) => Some(
                    horizon_growth(
                        &law,
                        &HorizonGrowthConfig {
                            functional,
                            x,
                            a,
                            horizon,
                            n_paths: paths,
                            seed,
                            theta: None,
                            thresholds: cfg.thresholds,
                        },
                    )?
                    .verdict,
                ),
                _ => None,
            };
            rows.push(MomentRow {
                functional: f,
                x,
                estimate,
                growth_verdict,
                prediction,
            });
        }
    }
    let mut csv = String::from("functional,x,kind,param,point,ci_low,ci_high,censor_rate,verdict,growth_verdict,prediction\n");
    for r in &rows {
        let (k, v) = match r.estimate.kind {
            MomentKind::Power { p } => ("power", p),
            MomentKind::Exponential { a } => ("exponential", a),
        };
        let e = &r.estimate;
        let _ = writeln!(
            csv,
            "{},{},{k},{v},{},{},{},{},{},{},{}",
            label(&r.functional),
            r.x,
            num(e.point),
            num(e.ci95[0]),
            num(e.ci95[1]),
            e.censor_rate,
            label(&e.verdict),
            r.growth_verdict.map(|v| label(&v)).unwrap_or_default(),
            r.prediction.as_ref().map(entry_label).unwrap_or_default(),
        );
    }
    Ok(render("moments", cfg, Some(&law), rows, csv))
}

fn optional(grid: &[f64]) -> Vec<Option<f64>> {
    if grid.is_empty() {
        vec![None]
    } else {
        grid.iter().map(|&v| Some(v)).collect()
    }
}

fn verify(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.joint_law()?;
    let theorem = cfg.theorem.as_deref().ok_or_else(|| Error::Config {
        path: "theorem".into(),
        message: "verify needs a theorem id".into(),
    })?;
    let g = &cfg.params;
    let budget = Budget {
        paths: cfg.budget.paths,
        horizon: cfg.budget.horizon,
        seed: cfg.seed,
        thresholds: cfg.thresholds,
    };
    let mut reports: Vec<VerifyReport> = Vec::new();
    for &x in &or_default(&g.x, &[0.0]) {
        for &a in &optional(&g.a) {
            for &p in &optional(&g.p) {
                for &t in &optional(&g.t) {
                    for &c in &optional(&g.c) {
                        let params = TheoremParams {
                            x,
                            a,
                            p,
                            c,
                            t,
                            response: cfg.response,
                        };
                        reports.push(verify_theorem(&law, theorem, &params, &budget)?);
                    }
                }
            }
        }
    }
    let mut csv = String::new();
    for (i, r) in reports.iter().enumerate() {
        let body = r.to_csv();
        csv.push_str(if i == 0 { &body } else { body.split_once('\n').map_or("", |(_, rest)| rest) });
    }
    Ok(render("verify", cfg, Some(&law), reports, csv))
}

#[derive(Debug, Clone, Serialize)]
struct ShotRow {
    quantity: String,
    t: f64,
    param: Option<f64>,
    #[serde(with = "ext_f64")]
    value: f64,
    #[serde(with = "ext_f64")]
    se: f64,
    verdict: Option<Verdict>,
    censor_rate: Option<f64>,
}

impl ShotRow {
    fn from_integral(quantity: &str, t: f64, param: f64, e: &IntegralEstimate) -> Self {
        ShotRow {
            quantity: quantity.into(),
            t,
            param: Some(param),
            value: e.value,
            se: e.se,
            verdict: Some(e.verdict),
            censor_rate: None,
        }
    }
}

/// Skips integrals whose preconditions the law does not meet.
fn applicable(r: Result<IntegralEstimate>) -> Result<Option<IntegralEstimate>> {
    match r {
        Ok(e) => Ok(Some(e)),
        Err(Error::Precondition(m)) => {
            log::info!("skipped: {m}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn shotnoise(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.joint_law()?;
    let resp = cfg.response.unwrap_or(ResponseProcess::IndicatorOfEta);
    let g = &cfg.params;
    let ic = IntegralConfig {
        n_paths: cfg.budget.paths,
        horizon: cfg.budget.horizon,
        seed: cfg.seed,
        thresholds: cfg.thresholds,
    };
    let mut rows = Vec::new();
    for &t in &or_default(&g.t, &[0.0]) {
        let m = mean_z(&law, &resp, t, &ic)?;
        rows.push(ShotRow {
            quantity: "mean_z".into(),
            t,
            param: None,
            value: m.value,
            se: m.se,
            verdict: None,
            censor_rate: Some(m.censor_rate),
        });
        for &a in &g.a {
            let z = exp_moment_z(&law, &resp, a, t, &ic)?;
            rows.push(ShotRow::from_integral("exp_moment_z", t, a, &z));
            for (name, est) in [
                ("r", applicable(integral_r(&law, &resp, a, t, &ic))?),
                ("l", applicable(integral_l(&law, &resp, a, t, &ic))?),
                ("r_gt", applicable(integral_r_gt(&law, &resp, a, t, &ic))?),
            ] {
                if let Some(e) = est {
                    rows.push(ShotRow::from_integral(name, t, a, &e));
                }
            }
        }
        for &q in &g.q {
            if let Some(e) = applicable(integral_s_q(&law, &resp, q, t, &ic))? {
                rows.push(ShotRow::from_integral("s_q", t, q, &e));
            }
        }
    }
    let mut csv = String::from("quantity,t,param,value,se,verdict,censor_rate\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.quantity,
            r.t,
            opt(r.param),
            num(r.value),
            num(r.se),
            r.verdict.map(|v| label(&v)).unwrap_or_default(),
            opt(r.censor_rate),
        );
    }
    #[derive(Serialize)]
    struct Out {
        response: ResponseProcess,
        rows: Vec<ShotRow>,
    }
    Ok(render("shotnoise", cfg, Some(&law), Out { response: resp, rows }, csv))
}

fn renewal(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.joint_law()?;
    let kind = cfg.renewal.unwrap_or(RenewalKind::PlainU);
    let grid = or_default(&cfg.params.y, &(1..=10).map(f64::from).collect::<Vec<_>>());
    let rc = RenewalConfig {
        n_paths: cfg.budget.paths,
        n_max: cfg.budget.n_max,
        seed: cfg.seed,
        thresholds: cfg.thresholds,
    };
    let table = match kind {
        RenewalKind::ExpV { a } => exp_renewal_v(&law, a, &grid, &rc)?,
        RenewalKind::PowerU { p } => power_renewal_u(&law, p, &grid, &rc)?,
        other => estimate_renewal_measure(&law, other, &grid, &rc)?,
    };
    let csv = table.to_csv();
    Ok(render("renewal", cfg, Some(&law), table, csv))
}

fn scenario(cfg: &ExperimentConfig) -> Result<Report> {
    let name = cfg.scenario.ok_or_else(|| Error::Config {
        path: "scenario".into(),
        message: "scenario needs a preset name".into(),
    })?;
    let g = &cfg.params;
    let (paths, horizon, seed) = (cfg.budget.paths, cfg.budget.horizon, cfg.seed);
    match name {
        ScenarioName::BernoulliSieve => {
            let law = JointLaw::bernoulli_sieve()?;
            let p = if g.p.is_empty() && g.a.is_empty() { vec![1.0, 2.0] } else { g.p.clone() };
            let r = bernoulli_sieve(&or_default(&g.x, &[5.0]), &g.a, &p, paths, horizon, seed, &cfg.thresholds)?;
            let mut csv = String::from("x,kind,param,point,ci_low,ci_high,censor_rate,verdict,prediction\n");
            for m in &r.moments {
                let (k, v) = match m.estimate.kind {
                    MomentKind::Power { p } => ("power", p),
                    MomentKind::Exponential { a } => ("exponential", a),
                };
                let e = &m.estimate;
                let _ = writeln!(
                    csv,
                    "{},{k},{v},{},{},{},{},{},{}",
                    m.x,
                    num(e.point),
                    num(e.ci95[0]),
                    num(e.ci95[1]),
                    e.censor_rate,
                    label(&e.verdict),
                    m.prediction.as_ref().map(|c| label(&c.prediction)).unwrap_or_default(),
                );
            }
            let mut rep = render("bernoulli-sieve", cfg, Some(&law), r, csv);
            rep.stem = "scenario-bernoulli-sieve".into();
            Ok(rep)
        }
        ScenarioName::GigInftyQueue => {
            let law = match &cfg.law {
                Some(spec) => spec.build("law")?,
                None => super::config::law_preset("exp-uniform")?.build("law")?,
            };
            let r = gig_infty_queue(&law, &or_default(&g.t, &[1.0, 2.0, 5.0, 10.0]), paths, horizon, seed)?;
            let mut csv = String::from("t,mean_busy,se,p_idle,max_busy,censor_rate\n");
            for row in &r.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    row.t,
                    num(row.mean_busy),
                    num(row.se),
                    row.p_idle,
                    row.max_busy,
                    row.censor_rate
                );
            }
            let mut rep = render("gig-infty-queue", cfg, Some(&law), r, csv);
            rep.stem = "scenario-gig-infty-queue".into();
            Ok(rep)
        }
    }
}
