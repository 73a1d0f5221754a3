//! Analytic finite/infinite predictions for moments of PRW functionals.
//!
//! Every evaluator is a pure function of the joint law. Finiteness of tail
//! integrals (`E e^{-γη}`, `E J₊(V)^q`) is read off the tail metadata of the
//! families; quadrature is only used for finite constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::{rate_r, solve_gamma, JVariable, JointLaw, MomentValue, RateInfo};

/// Relative tolerance for deciding `a = R`.
pub const BOUNDARY_RTOL: f64 = 1e-9;

/// Long-run behaviour of `T_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trichotomy {
    PosDiv,
    NegDiv,
    Osc,
}

/// Long-run behaviour of the walk `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Drift {
    PlusInfinity,
    MinusInfinity,
    Oscillating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftBasis {
    /// `E ξ` is finite.
    FiniteMean,
    /// Exactly one of `E ξ⁺`, `E ξ⁻` is infinite.
    OneSidedInfiniteMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Finite,
    Infinite,
    Boundary,
}

impl Prediction {
    fn from_bool(finite: bool) -> Self {
        if finite {
            Prediction::Finite
        } else {
            Prediction::Infinite
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub regime: Trichotomy,
    pub drift: Drift,
    pub drift_basis: DriftBasis,
    /// `E J₊(η⁻)` when `S_n → ∞`, `E J₋(η⁺)` when `S_n → -∞`.
    #[serde(with = "ext_f64::option")]
    pub j_moment: Option<f64>,
    pub case: String,
}

/// A prediction with the case of the theorem that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub prediction: Prediction,
    pub case: String,
    /// Supremum of the parameter values predicted finite, when the criterion
    /// is a threshold.
    #[serde(with = "ext_f64::option")]
    pub threshold: Option<f64>,
    #[serde(with = "ext_f64::option")]
    pub gamma: Option<f64>,
}

impl Criterion {
    fn new(prediction: Prediction, case: &str) -> Self {
        Criterion {
            prediction,
            case: case.to_string(),
            threshold: None,
            gamma: None,
        }
    }

    fn with_threshold(mut self, t: f64) -> Self {
        self.threshold = Some(t);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.prediction == Prediction::Finite
    }
}

fn neg_log(p: f64) -> f64 {
    if p <= 0.0 {
        f64::INFINITY
    } else {
        -p.ln()
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("a must be positive and finite, got {a}")))
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must be positive and finite, got {p}")))
    }
}

fn at_rate(a: f64, r: f64) -> bool {
    r.is_finite() && (a - r).abs() <= BOUNDARY_RTOL * r.max(1.0)
}

pub fn classify_trichotomy(law: &JointLaw) -> Result<Classification> {
    let mean = law.xi().mean();
    if mean.is_nan() {
        return Err(Error::Undefined(
            "E ξ does not exist and no tail rule decides the drift".into(),
        ));
    }
    let drift_basis = if mean.is_finite() {
        DriftBasis::FiniteMean
    } else {
        DriftBasis::OneSidedInfiniteMean
    };
    let an = law.analytics();
    let (regime, drift, j_moment, case) = if mean > 0.0 {
        let j = an.expected_j_plus_power(JVariable::EtaMinus, 1.0)?;
        if j.is_finite() {
            (Trichotomy::PosDiv, Drift::PlusInfinity, j, "walk_to_plus_infinity")
        } else {
            (Trichotomy::Osc, Drift::PlusInfinity, j, "walk_to_plus_infinity_heavy_eta_minus")
        }
    } else if mean < 0.0 {
        let j = an.expected_j_minus_power_eta_plus(1.0)?;
        if j.is_finite() {
            (Trichotomy::NegDiv, Drift::MinusInfinity, j, "walk_to_minus_infinity")
        } else {
            (Trichotomy::Osc, Drift::MinusInfinity, j, "walk_to_minus_infinity_heavy_eta_plus")
        }
    } else {
        (Trichotomy::Osc, Drift::Oscillating, MomentValue::Infinite, "walk_oscillates")
    };
    Ok(Classification {
        regime,
        drift,
        drift_basis,
        j_moment: (drift != Drift::Oscillating).then(|| j_moment.value()),
        case: case.into(),
    })
}

fn require_pos_div(law: &JointLaw, what: &str) -> Result<()> {
    let c = classify_trichotomy(law)?;
    if c.regime == Trichotomy::PosDiv {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!(
            "{what} needs a positively divergent PRW, got {:?}",
            c.regime
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauFiniteness {
    pub finite: bool,
    pub regime: Trichotomy,
}

/// Is `τ(x) < ∞` almost surely?
pub fn tau_as_finite(law: &JointLaw, x: f64) -> Result<TauFiniteness> {
    let regime = classify_trichotomy(law)?.regime;
    let finite = match regime {
        Trichotomy::PosDiv | Trichotomy::Osc => true,
        Trichotomy::NegDiv => law.joint_neg(x) == 0.0,
    };
    Ok(TauFiniteness { finite, regime })
}

/// `E e^{aτ(x)}`.
pub fn exp_moment_tau(law: &JointLaw, a: f64, x: f64) -> Result<Criterion> {
    check_a(a)?;
    if law.joint_neg(x) == 0.0 {
        let t = neg_log(law.joint_atom(x));
        Ok(Criterion::new(Prediction::from_bool(a < t), "no_negative_step_below_x").with_threshold(t))
    } else {
        let r = rate_r(law)?.r;
        Ok(Criterion::new(Prediction::from_bool(r >= a), "negative_step_below_x").with_threshold(r))
    }
}

/// Supremum `a(x)` of the `a` with `E e^{aN(x)} < ∞`.
pub fn exp_threshold_n(law: &JointLaw, x: f64) -> Result<f64> {
    require_pos_div(law, "E e^{aN(x)}")?;
    if law.xi().p_neg() > 0.0 {
        return Ok(rate_r(law)?.r);
    }
    let below = law.joint_atom(x);
    if below == 0.0 {
        return Ok(f64::INFINITY);
    }
    let above = law.joint_atom_above(x);
    Ok(((1.0 - above) / below).ln())
}

/// `E e^{aN(x)}`.
pub fn exp_moment_n(law: &JointLaw, a: f64, x: f64) -> Result<Criterion> {
    check_a(a)?;
    let t = exp_threshold_n(law, x)?;
    let xi = law.xi();
    let (finite, case) = if xi.p_neg() > 0.0 {
        (t >= a, "negative_steps")
    } else if xi.p_zero() == 0.0 {
        (true, "positive_steps")
    } else {
        (a < t, "nonnegative_steps_with_atom")
    };
    Ok(Criterion::new(Prediction::from_bool(finite), case).with_threshold(t))
}

/// `E e^{aρ(x)}`.
pub fn exp_moment_rho(law: &JointLaw, a: f64, x: f64) -> Result<Criterion> {
    check_a(a)?;
    if classify_trichotomy(law)?.regime != Trichotomy::PosDiv {
        return Ok(Criterion::new(Prediction::Infinite, "not_positively_divergent"));
    }
    let xi = law.xi();
    let eta_light = |g: f64| law.eta().lower_tail().exp_moment_finite(g);
    if xi.p_neg() == 0.0 {
        if law.eta_cdf(x) == 0.0 {
            return Ok(Criterion::new(Prediction::Finite, "rho_vanishes"));
        }
        let t = neg_log(xi.p_zero());
        if a >= t {
            return Ok(Criterion::new(Prediction::Infinite, "nonnegative_steps_above_rate").with_threshold(t));
        }
        let g = solve_gamma(law, a)?;
        let mut c = Criterion::new(Prediction::from_bool(eta_light(g)), "nonnegative_steps").with_threshold(t);
        c.gamma = Some(g);
        return Ok(c);
    }
    let RateInfo { r, .. } = rate_r(law)?;
    let boundary = at_rate(a, r);
    if a > r && !boundary {
        return Ok(Criterion::new(Prediction::Infinite, "negative_steps_above_rate").with_threshold(r));
    }
    let g = solve_gamma(law, a.min(r))?;
    let (finite, case) = if boundary {
        // at a = R the walk's exponential renewal measure is finite only when
        // the tilted drift E ξ e^{-γξ} stays strictly positive
        let drift = xi.laplace_weighted_mean(g)?;
        let tol = 1e-8 * xi.laplace(g)?;
        (drift > tol && eta_light(g), "negative_steps_at_rate")
    } else {
        (eta_light(g), "negative_steps_below_rate")
    };
    let mut c = Criterion::new(Prediction::from_bool(finite), case).with_threshold(r);
    c.gamma = Some(g);
    Ok(c)
}

fn j_finite(law: &JointLaw, var: JVariable, q: f64) -> Result<bool> {
    Ok(law.analytics().expected_j_plus_power(var, q)?.is_finite())
}

/// `E N(x)^p`.
pub fn power_moment_n(law: &JointLaw, p: f64) -> Result<Criterion> {
    check_p(p)?;
    require_pos_div(law, "E N(x)^p")?;
    let ok = j_finite(law, JVariable::XiMinus, p + 1.0)?;
    Ok(Criterion::new(Prediction::from_bool(ok), "j_plus_xi_minus"))
}

/// `E ρ(x)^p`.
pub fn power_moment_rho(law: &JointLaw, p: f64) -> Result<Criterion> {
    check_p(p)?;
    require_pos_div(law, "E ρ(x)^p")?;
    let xi_ok = j_finite(law, JVariable::XiMinus, p + 1.0)?;
    let eta_ok = j_finite(law, JVariable::EtaMinus, p + 1.0)?;
    let case = match (xi_ok, eta_ok) {
        (true, true) => "both_finite",
        (false, _) => "j_plus_xi_minus_infinite",
        (true, false) => "j_plus_eta_minus_infinite",
    };
    Ok(Criterion::new(Prediction::from_bool(xi_ok && eta_ok), case))
}

/// Convergence of `Σ n^{p-1} P{T_n <= x}`. The criterion is stated without
/// proof in the source literature and is reported as unverified.
pub fn power_series_experimental(law: &JointLaw, p: f64) -> Result<Criterion> {
    check_p(p)?;
    require_pos_div(law, "Σ n^{p-1} P{T_n <= x}")?;
    let ok = j_finite(law, JVariable::XiMinus, p + 1.0)? && j_finite(law, JVariable::EtaMinus, p)?;
    Ok(Criterion::new(Prediction::from_bool(ok), "experimental_unverified"))
}

/// `E σ(x)^p` for `σ(x) = inf{k : η_k - (k-1)c > x}`.
pub fn sigma_power_verdict(law: &JointLaw, c: f64, p: f64, x: f64) -> Result<Criterion> {
    check_p(p)?;
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("c must be finite and >= 0, got {c}")));
    }
    if law.xi().cdf_left(-c) > 0.0 {
        return Err(Error::Precondition(format!("P{{ξ < -{c}}} > 0")));
    }
    let eta = law.eta();
    if c == 0.0 {
        // σ(x) is geometric with success probability P{η > x}
        let ok = eta.survival(x) > 0.0;
        return Ok(Criterion::new(Prediction::from_bool(ok), "geometric"));
    }
    let s = eta.upper_tail_limit();
    let cp = c * p;
    let prediction = if s > cp {
        Prediction::Finite
    } else if s < cp {
        Prediction::Infinite
    } else {
        Prediction::Boundary
    };
    Ok(Criterion::new(prediction, "tail_limit_vs_cp").with_threshold(s / c))
}

/// Parameters at which a report is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRequest {
    pub x: f64,
    pub a: f64,
    pub p: f64,
    #[serde(default)]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(with = "ext_f64")]
    pub r: f64,
    #[serde(with = "ext_f64")]
    pub t_min: f64,
    #[serde(with = "ext_f64::option")]
    pub gamma: Option<f64>,
    #[serde(with = "ext_f64::option")]
    pub a_x: Option<f64>,
    #[serde(with = "ext_f64")]
    pub s: f64,
}

/// Either a criterion or the reason it does not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entry {
    Applies(Criterion),
    NotApplicable(String),
}

impl Entry {
    pub fn from_result(r: Result<Criterion>) -> Result<Self> {
        match r {
            Ok(c) => Ok(Entry::Applies(c)),
            Err(Error::NotApplicable(m) | Error::Precondition(m)) => Ok(Entry::NotApplicable(m)),
            Err(e) => Err(e),
        }
    }

    pub fn criterion(&self) -> Option<&Criterion> {
        match self {
            Entry::Applies(c) => Some(c),
            Entry::NotApplicable(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub request: ReportRequest,
    pub classification: Classification,
    pub tau_as_finite: bool,
    pub exp_tau: Entry,
    pub exp_n: Entry,
    pub exp_rho: Entry,
    pub pow_n: Entry,
    pub pow_rho: Entry,
    pub pow_series_experimental: Entry,
    pub sigma_pow: Option<Entry>,
    pub constants: Constants,
}

pub fn criteria_report(law: &JointLaw, req: &ReportRequest) -> Result<CriteriaReport> {
    check_a(req.a)?;
    check_p(req.p)?;
    let classification = classify_trichotomy(law)?;
    let info = rate_r(law)?;
    let gamma = match solve_gamma(law, req.a) {
        Ok(g) => Some(g),
        Err(Error::NoRoot(_)) => None,
        Err(e) => return Err(e),
    };
    let a_x = match exp_threshold_n(law, req.x) {
        Ok(t) => Some(t),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CriteriaReport {
        request: req.clone(),
        tau_as_finite: tau_as_finite(law, req.x)?.finite,
        exp_tau: Entry::from_result(exp_moment_tau(law, req.a, req.x))?,
        exp_n: Entry::from_result(exp_moment_n(law, req.a, req.x))?,
        exp_rho: Entry::from_result(exp_moment_rho(law, req.a, req.x))?,
        pow_n: Entry::from_result(power_moment_n(law, req.p))?,
        pow_rho: Entry::from_result(power_moment_rho(law, req.p))?,
        pow_series_experimental: Entry::from_result(power_series_experimental(law, req.p))?,
        sigma_pow: req
            .c
            .map(|c| Entry::from_result(sigma_power_verdict(law, c, req.p, req.x)))
            .transpose()?,
        constants: Constants {
            r: info.r,
            t_min: info.t_min,
            gamma,
            a_x,
            s: law.eta().upper_tail_limit(),
        },
        classification,
    })
}

/// Serde helpers writing `±∞` as the strings `"inf"` / `"-inf"` so that JSON
/// output never loses an infinite constant.
pub mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(v: f64) -> Repr {
        if v.is_finite() {
            Repr::Num(v)
        } else if v.is_nan() {
            Repr::Text("nan".into())
        } else if v > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("expected a number or inf, got {other:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            v.map(to_repr).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{Marginal, MonotoneMap};
    use approx::assert_relative_eq;

    fn ind(xi: Marginal, eta: Marginal) -> JointLaw {
        JointLaw::independent(xi, eta).unwrap()
    }

    fn exp1() -> Marginal {
        Marginal::exponential(1.0).unwrap()
    }

    fn two_point() -> Marginal {
        Marginal::two_point(-1.0, 1.0, 0.8).unwrap()
    }

    #[test]
    fn trichotomy_examples() {
        assert_eq!(classify_trichotomy(&ind(exp1(), exp1())).unwrap().regime, Trichotomy::PosDiv);
        let heavy = Marginal::pareto(0.5, 1.0).unwrap().negated();
        let c = classify_trichotomy(&ind(Marginal::point(1.0).unwrap(), heavy)).unwrap();
        assert_eq!((c.regime, c.drift), (Trichotomy::Osc, Drift::PlusInfinity));
        let neg = ind(Marginal::normal(-1.0, 1.0).unwrap(), Marginal::point(0.1).unwrap());
        assert_eq!(classify_trichotomy(&neg).unwrap().regime, Trichotomy::NegDiv);
        let zero = ind(Marginal::normal(0.0, 1.0).unwrap(), exp1());
        assert_eq!(classify_trichotomy(&zero).unwrap().drift, Drift::Oscillating);
    }

    #[test]
    fn one_sided_infinite_mean_drifts() {
        let c = classify_trichotomy(&ind(Marginal::pareto(0.8, 1.0).unwrap(), exp1())).unwrap();
        assert_eq!(c.drift_basis, DriftBasis::OneSidedInfiniteMean);
        assert_eq!(c.regime, Trichotomy::PosDiv);
    }

    #[test]
    fn tau_finiteness_examples() {
        let sep = ind(Marginal::normal(-1.0, 1.0).unwrap(), exp1().shifted(1.0));
        assert!(tau_as_finite(&sep, 0.5).unwrap().finite);
        let overlap = ind(Marginal::normal(-1.0, 1.0).unwrap(), Marginal::normal(0.0, 1.0).unwrap());
        assert_eq!(tau_as_finite(&overlap, 0.0).unwrap(), TauFiniteness { finite: false, regime: Trichotomy::NegDiv });
        assert!(tau_as_finite(&ind(exp1(), exp1()), -5.0).unwrap().finite);
    }

    #[test]
    fn exp_tau_atom_threshold() {
        let law = ind(Marginal::two_point(0.0, 1.0, 0.7).unwrap(), Marginal::point(-1.0).unwrap());
        assert!(exp_moment_tau(&law, 1.0, 0.0).unwrap().is_finite());
        let c = exp_moment_tau(&law, 1.21, 0.0).unwrap();
        assert_eq!(c.prediction, Prediction::Infinite);
        assert_relative_eq!(c.threshold.unwrap(), -(0.3f64).ln(), epsilon = 1e-12);
    }

    #[test]
    fn exp_tau_rate_threshold() {
        let law = ind(two_point(), Marginal::normal(0.0, 1.0).unwrap());
        assert!(exp_moment_tau(&law, 0.2231, 0.0).unwrap().is_finite());
        assert!(!exp_moment_tau(&law, 0.2232, 0.0).unwrap().is_finite());
    }

    #[test]
    fn exp_n_threshold_cases() {
        let law = ind(Marginal::two_point(0.0, 1.0, 0.5).unwrap(), Marginal::point(-1.0).unwrap());
        assert_relative_eq!(exp_threshold_n(&law, 1.0).unwrap(), 2f64.ln(), epsilon = 1e-12);
        assert_eq!(exp_threshold_n(&ind(exp1(), exp1()), 0.0).unwrap(), f64::INFINITY);
        let tp = ind(two_point(), exp1());
        assert!(exp_moment_n(&tp, 0.2231, 1.0).unwrap().is_finite());
        assert!(!exp_moment_n(&tp, 0.2232, 1.0).unwrap().is_finite());
        let neg = ind(Marginal::normal(-1.0, 1.0).unwrap(), exp1());
        assert!(matches!(exp_moment_n(&neg, 0.1, 0.0), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn exp_n_threshold_monotone_with_lower_bound() {
        let law = ind(Marginal::two_point(0.0, 1.0, 0.6).unwrap(), Marginal::normal(0.0, 1.0).unwrap());
        let floor = -(0.4f64).ln();
        let mut prev = f64::INFINITY;
        for i in -20..=20 {
            let t = exp_threshold_n(&law, i as f64 * 0.25).unwrap();
            assert!(t <= prev + 1e-12 && t >= floor - 1e-12);
            prev = t;
        }
    }

    #[test]
    fn exp_rho_examples() {
        let law = ind(exp1(), exp1());
        let c = exp_moment_rho(&law, 0.5, 1.0).unwrap();
        assert!(c.is_finite());
        assert_relative_eq!(c.gamma.unwrap(), 0.5f64.exp() - 1.0, epsilon = 1e-8);
        let heavy = ind(exp1(), Marginal::pareto(3.0, 1.0).unwrap().negated());
        for a in [0.01, 0.5, 3.0] {
            assert_eq!(exp_moment_rho(&heavy, a, 1.0).unwrap().prediction, Prediction::Infinite);
        }
        let above = ind(exp1(), exp1().shifted(2.0));
        assert_eq!(exp_moment_rho(&above, 5.0, 1.0).unwrap().case, "rho_vanishes");
    }

    #[test]
    fn exp_rho_light_eta_tail_cutoff() {
        // η = -Exp(2): E e^{-γη} finite iff γ < 2; ξ ~ Exp(1) gives γ = e^a - 1
        let law = ind(exp1(), Marginal::exponential(2.0).unwrap().negated());
        assert!(exp_moment_rho(&law, 1.0, 0.0).unwrap().is_finite());
        assert!(!exp_moment_rho(&law, 1.2, 0.0).unwrap().is_finite());
    }

    #[test]
    fn exp_rho_at_rate_is_infinite_for_interior_minimum() {
        let law = ind(two_point(), exp1());
        let r = rate_r(&law).unwrap().r;
        let c = exp_moment_rho(&law, r, 0.0).unwrap();
        assert_eq!((c.prediction, c.case.as_str()), (Prediction::Infinite, "negative_steps_at_rate"));
        assert!(exp_moment_rho(&law, 0.9 * r, 0.0).unwrap().is_finite());
    }

    #[test]
    fn power_examples() {
        let law = ind(exp1(), exp1());
        assert!(power_moment_n(&law, 7.0).unwrap().is_finite());
        let xi = Marginal::pareto(1.5, 1.0).unwrap().negated().shifted(4.0);
        let law = ind(xi, exp1());
        assert!(power_moment_n(&law, 0.3).unwrap().is_finite());
        assert!(!power_moment_n(&law, 0.7).unwrap().is_finite());
        let law = ind(Marginal::point(1.0).unwrap(), Marginal::pareto(1.5, 1.0).unwrap().negated());
        assert!(power_moment_rho(&law, 0.3).unwrap().is_finite());
        assert!(!power_moment_rho(&law, 0.7).unwrap().is_finite());
        assert!(power_moment_n(&law, 0.7).unwrap().is_finite());
    }

    #[test]
    fn sigma_examples() {
        let xi = exp1().shifted(-1.0);
        let s2 = ind(xi.clone(), Marginal::pareto(1.0, 2.0).unwrap());
        assert_eq!(sigma_power_verdict(&s2, 1.0, 1.0, 0.0).unwrap().prediction, Prediction::Finite);
        let s05 = ind(xi.clone(), Marginal::pareto(1.0, 0.5).unwrap());
        assert_eq!(sigma_power_verdict(&s05, 1.0, 1.0, 0.0).unwrap().prediction, Prediction::Infinite);
        assert_eq!(sigma_power_verdict(&s2, 1.0, 2.0, 0.0).unwrap().prediction, Prediction::Boundary);
        let geo = ind(exp1(), exp1());
        assert!(sigma_power_verdict(&geo, 0.0, 10.0, 3.0).unwrap().is_finite());
        assert!(matches!(sigma_power_verdict(&s2, 0.5, 1.0, 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn report_json_keeps_infinities() {
        let law = JointLaw::functional(exp1(), MonotoneMap::Affine { slope: 1.0, intercept: -0.5 }).unwrap();
        let rep = criteria_report(&law, &ReportRequest { x: 0.0, a: 0.5, p: 1.0, c: Some(0.0) }).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"r\":\"inf\""), "{json}");
        let back: CriteriaReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.constants.r, f64::INFINITY);
        assert_eq!(back.exp_n, rep.exp_n);
    }
}
