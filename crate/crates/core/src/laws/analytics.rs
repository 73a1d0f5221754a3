//! Truncated means `A±`, the ratios `J±` and moments `E J₊(V)^q`.

use serde::{Deserialize, Serialize};

use super::family::{Marginal, TailClass};
use super::joint::JointLaw;
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

/// Non-negative random variable built from the law, fed to `J₊`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variable", rename_all = "snake_case")]
pub enum JVariable {
    /// `η⁻`
    EtaMinus,
    /// `ξ⁻`
    XiMinus,
    /// `(η - x)⁻`
    EtaMinusShifted { x: f64 },
}

/// A moment that is either a finite number or known to diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MomentValue {
    Finite(f64),
    Infinite,
}

impl MomentValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, MomentValue::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match *self {
            MomentValue::Finite(v) => v,
            MomentValue::Infinite => f64::INFINITY,
        }
    }
}

/// `∫_0^x P{X > y} dy = E min(X⁺, x)`.
fn truncated_positive_mean(m: &Marginal, x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::InvalidParameter(format!("truncation level must be >= 0, got {x}")));
    }
    if x == 0.0 || m.p_pos() == 0.0 {
        return Ok(0.0);
    }
    if m.is_discrete() {
        return Ok(m.atoms().iter().map(|&(v, w)| w * v.clamp(0.0, x)).sum());
    }
    if x.is_infinite() {
        return m.positive_moment(1.0);
    }
    let (lo, hi) = m.support();
    quad::integrate_piecewise(|y| m.survival(y), 0.0, x, &[lo, hi, m.shift], Tolerance::default())
}

/// Analytic view of a joint law.
#[derive(Debug, Clone, Copy)]
pub struct LawAnalytics<'a> {
    law: &'a JointLaw,
    pub p_xi_neg: f64,
    pub p_xi_zero: f64,
    pub p_xi_pos: f64,
}

impl<'a> LawAnalytics<'a> {
    pub fn new(law: &'a JointLaw) -> Self {
        let xi = law.xi();
        LawAnalytics {
            law,
            p_xi_neg: xi.p_neg(),
            p_xi_zero: xi.p_zero(),
            p_xi_pos: xi.p_pos(),
        }
    }

    pub fn law(&self) -> &'a JointLaw {
        self.law
    }

    /// `A₊(x) = ∫_0^x P{ξ > y} dy`.
    pub fn a_plus(&self, x: f64) -> Result<f64> {
        truncated_positive_mean(self.law.xi(), x)
    }

    /// `A₋(x) = ∫_0^x P{ξ < -y} dy`.
    pub fn a_minus(&self, x: f64) -> Result<f64> {
        truncated_positive_mean(&self.law.xi().clone().negated(), x)
    }

    /// `J₊(x) = x / A₊(x)`, with `J₊(0) = 1 / P{ξ > 0}`.
    pub fn j_plus(&self, x: f64) -> Result<f64> {
        if self.p_xi_pos == 0.0 {
            return Err(Error::Undefined("J+ needs P{ξ>0} > 0".into()));
        }
        if x == 0.0 {
            return Ok(1.0 / self.p_xi_pos);
        }
        Ok(x / self.a_plus(x)?)
    }

    /// `J₋(x) = x / A₋(x)`, with `J₋(0) = 1 / P{ξ < 0}`.
    pub fn j_minus(&self, x: f64) -> Result<f64> {
        if self.p_xi_neg == 0.0 {
            return Err(Error::Undefined("J- needs P{ξ<0} > 0".into()));
        }
        if x == 0.0 {
            return Ok(1.0 / self.p_xi_neg);
        }
        Ok(x / self.a_minus(x)?)
    }

    /// `E e^{-tξ}`.
    pub fn laplace_xi(&self, t: f64) -> Result<f64> {
        self.law.xi().laplace(t)
    }

    pub fn joint_atom(&self, x: f64) -> f64 {
        self.law.joint_atom(x)
    }

    pub fn joint_neg(&self, x: f64) -> f64 {
        self.law.joint_neg(x)
    }

    /// Growth exponent `κ` with `J₊(y) ≈ y^κ` at infinity.
    fn j_plus_exponent(&self) -> f64 {
        match self.law.xi().upper_tail() {
            TailClass::Polynomial { index } if index < 1.0 => index,
            _ => 1.0,
        }
    }

    /// `E J₊(V)^q` where the base variable is `Y` and `V = (Y - x)⁻`.
    fn j_moment(&self, y: &Marginal, x: f64, q: f64) -> Result<MomentValue> {
        let j0 = self.j_plus(0.0)?;
        // the tail of V is the lower tail of Y
        let beta = y.lower_tail().index();
        if beta.is_finite() {
            let kappa = self.j_plus_exponent();
            let need = kappa * q;
            let finite = if beta > need {
                true
            } else if beta < need {
                false
            } else {
                // J₊(y) ~ y / log y when ξ⁺ has index exactly 1
                self.law.xi().upper_tail() == TailClass::Polynomial { index: 1.0 } && q > 1.0
            };
            if !finite {
                return Ok(MomentValue::Infinite);
            }
        }
        let p_zero = 1.0 - y.cdf_left(x);
        let err = std::cell::RefCell::new(None);
        let body = y.expect_below(
            |v| match self.j_plus(x - v) {
                Ok(j) => j.powf(q),
                Err(e) => {
                    *err.borrow_mut() = Some(e);
                    0.0
                }
            },
            x,
        );
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(MomentValue::Finite(j0.powf(q) * p_zero + body?))
    }

    /// `E J₊(V)^q` for `V ∈ {η⁻, ξ⁻, (η - x)⁻}`; divergence is decided from
    /// tail metadata before any quadrature.
    pub fn expected_j_plus_power(&self, var: JVariable, q: f64) -> Result<MomentValue> {
        if !(q > 0.0) {
            return Err(Error::InvalidParameter(format!("power must be positive, got {q}")));
        }
        match var {
            JVariable::EtaMinus => self.j_moment(self.law.eta(), 0.0, q),
            JVariable::XiMinus => self.j_moment(self.law.xi(), 0.0, q),
            JVariable::EtaMinusShifted { x } => self.j_moment(self.law.eta(), x, q),
        }
    }

    /// `E J₋(η⁺)^q`, the mirror image used by the negative-divergence test.
    pub fn expected_j_minus_power_eta_plus(&self, q: f64) -> Result<MomentValue> {
        let xi = self.law.xi().clone().negated();
        let eta = self.law.eta().clone().negated();
        let mirrored = JointLaw::independent(xi, eta)?;
        LawAnalytics::new(&mirrored).expected_j_plus_power(JVariable::EtaMinus, q)
    }
}

impl JointLaw {
    pub fn analytics(&self) -> LawAnalytics<'_> {
        LawAnalytics::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn with_xi(xi: Marginal) -> JointLaw {
        JointLaw::independent(xi, Marginal::exponential(1.0).unwrap()).unwrap()
    }

    #[test]
    fn a_plus_point_mass() {
        let law = with_xi(Marginal::point(1.0).unwrap());
        let an = law.analytics();
        assert_eq!(an.a_plus(2.0).unwrap(), 1.0);
        assert_eq!(an.a_plus(0.25).unwrap(), 0.25);
        assert_eq!(an.j_plus(0.5).unwrap(), 1.0);
        assert_eq!(an.j_plus(3.0).unwrap(), 3.0);
    }

    #[test]
    fn a_plus_exponential_closed_form() {
        let law = with_xi(Marginal::exponential(1.0).unwrap());
        let an = law.analytics();
        assert_relative_eq!(an.a_plus(2.0).unwrap(), 1.0 - (-2.0f64).exp(), max_relative = 1e-10);
        assert_relative_eq!(an.j_plus(2.0).unwrap(), 2.313_035_285_499_331, max_relative = 1e-9);
        assert_eq!(an.j_plus(0.0).unwrap(), 1.0);
    }

    #[test]
    fn empty_positive_tail() {
        let law = with_xi(Marginal::exponential(1.0).unwrap().negated());
        let an = law.analytics();
        assert_eq!(an.a_plus(3.0).unwrap(), 0.0);
        assert!(matches!(an.j_plus(1.0), Err(Error::Undefined(_))));
        assert!(an.a_plus(-1.0).is_err());
    }

    #[test]
    fn j_moment_degenerate_eta() {
        let law = JointLaw::independent(
            Marginal::two_point(-1.0, 1.0, 0.8).unwrap(),
            Marginal::exponential(1.0).unwrap(),
        )
        .unwrap();
        let v = law.analytics().expected_j_plus_power(JVariable::EtaMinus, 3.0).unwrap();
        assert_relative_eq!(v.value(), 0.8f64.powi(-3), max_relative = 1e-12);
    }

    #[test]
    fn j_moment_heavy_eta_diverges() {
        let law = JointLaw::independent(
            Marginal::point(1.0).unwrap(),
            Marginal::pareto(0.5, 1.0).unwrap().negated(),
        )
        .unwrap();
        let v = law.analytics().expected_j_plus_power(JVariable::EtaMinus, 1.0).unwrap();
        assert_eq!(v, MomentValue::Infinite);
    }

    #[test]
    fn j_moment_exponential_eta_second_power() {
        // J₊(y) = max(y, 1) for ξ ≡ 1, η⁻ ~ Exp(1):
        // E max(V,1)^2 = ∫_0^1 e^{-v} dv + ∫_1^∞ v^2 e^{-v} dv = (1 - 1/e) + 5/e
        let law = JointLaw::independent(
            Marginal::point(1.0).unwrap(),
            Marginal::exponential(1.0).unwrap().negated(),
        )
        .unwrap();
        let v = law.analytics().expected_j_plus_power(JVariable::EtaMinus, 2.0).unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(v.value(), 1.0 - 1.0 / e + 5.0 / e, max_relative = 1e-8);
    }
}
