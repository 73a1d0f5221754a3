//! The rate `R = -log inf_{t>=0} E e^{-tξ}` and the root `γ(a)`.

use serde::{Deserialize, Serialize};

use super::family::TailClass;
use super::joint::JointLaw;
use crate::error::{Error, Result};

/// Location and value of `inf_{t>=0} E e^{-tξ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateInfo {
    /// `R`, possibly `+∞`.
    pub r: f64,
    /// Minimiser; `+∞` when the infimum is only approached as `t → ∞`.
    pub t_min: f64,
    /// The infimum itself.
    pub inf_value: f64,
}

/// Minimises the convex map `t ↦ E e^{-tξ}` over `t >= 0`.
pub fn rate_r(law: &JointLaw) -> Result<RateInfo> {
    let xi = law.xi();
    if xi.p_neg() == 0.0 {
        let p0 = xi.p_zero();
        return Ok(RateInfo {
            r: -p0.ln(),
            t_min: f64::INFINITY,
            inf_value: p0,
        });
    }
    let at_zero = RateInfo {
        r: 0.0,
        t_min: 0.0,
        inf_value: 1.0,
    };
    if !xi.lower_tail().exp_moment_finite(f64::MIN_POSITIVE) {
        return Ok(at_zero);
    }
    let mean = xi.mean();
    if !(mean > 0.0) {
        return Ok(at_zero);
    }
    // right of the minimiser: derivative >= 0 or outside the finite domain
    let right_of_min = |t: f64| -> Result<bool> {
        let l = xi.laplace(t)?;
        if !l.is_finite() {
            return Ok(true);
        }
        Ok(xi.laplace_weighted_mean(t)? <= 0.0)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let cap = match xi.lower_tail() {
        TailClass::Exponential { rate } => rate,
        _ => f64::INFINITY,
    };
    while !right_of_min(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoRoot("minimiser of E e^{-tξ} not bracketed".into()));
        }
    }
    if hi > cap {
        hi = cap;
    }
    while hi - lo > 1e-14 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if right_of_min(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t_min = lo;
    let inf_value = xi.laplace(t_min)?;
    Ok(RateInfo {
        r: -inf_value.ln(),
        t_min,
        inf_value,
    })
}

/// The smallest positive `γ` with `E e^{-γξ} = e^{-a}`.
pub fn solve_gamma(law: &JointLaw, a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a must be positive and finite, got {a}")));
    }
    let info = rate_r(law)?;
    if a > info.r {
        return Err(Error::NoRoot(format!("a = {a} exceeds R = {}", info.r)));
    }
    let xi = law.xi();
    let target = (-a).exp();
    let (mut lo, mut hi) = (0.0, info.t_min);
    if hi.is_infinite() {
        if a == info.r {
            return Err(Error::NoRoot(format!(
                "a = R = {a}: the infimum P{{ξ=0}} is not attained"
            )));
        }
        hi = 1.0;
        while xi.laplace(hi)? > target {
            lo = hi;
            hi *= 2.0;
        }
    } else if xi.laplace(hi)? >= target {
        // boundary a = R up to rounding
        return Ok(hi);
    }
    while hi - lo > 1e-15 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if xi.laplace(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::Marginal;
    use approx::assert_relative_eq;

    fn law(xi: Marginal) -> JointLaw {
        JointLaw::independent(xi, Marginal::exponential(1.0).unwrap()).unwrap()
    }

    #[test]
    fn two_point_rate() {
        let info = rate_r(&law(Marginal::two_point(-1.0, 1.0, 0.8).unwrap())).unwrap();
        assert_relative_eq!(info.inf_value, 0.8, epsilon = 1e-12);
        assert_relative_eq!(info.t_min, 0.5 * 4f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn nonnegative_with_atom() {
        let info = rate_r(&law(Marginal::two_point(0.0, 2.0, 0.7).unwrap())).unwrap();
        assert_relative_eq!(info.r, -(0.3f64).ln(), epsilon = 1e-14);
        let g = solve_gamma(&law(Marginal::two_point(0.0, 2.0, 0.7).unwrap()), 1.0).unwrap();
        // 0.3 + 0.7 e^{-2γ} = e^{-1}
        let expect = -0.5 * (((-1f64).exp() - 0.3) / 0.7).ln();
        assert_relative_eq!(g, expect, epsilon = 1e-10);
    }

    #[test]
    fn negative_drift_and_heavy_left_tail_give_zero() {
        assert_eq!(rate_r(&law(Marginal::normal(-1.0, 1.0).unwrap())).unwrap().r, 0.0);
        let heavy = Marginal::pareto(1.5, 1.0).unwrap().negated().shifted(5.0);
        assert_eq!(rate_r(&law(heavy)).unwrap().r, 0.0);
    }

    #[test]
    fn exponential_left_tail_minimum() {
        // ξ = 1 - E with E ~ Exp(2): φ(t) = e^{-t} 2/(2-t), minimum at t = 1
        let xi = Marginal::exponential(2.0).unwrap().negated().shifted(1.0);
        let info = rate_r(&law(xi)).unwrap();
        assert_relative_eq!(info.t_min, 1.0, epsilon = 1e-9);
        assert_relative_eq!(info.inf_value, 2.0 * (-1f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn no_root_above_r() {
        let l = law(Marginal::two_point(-1.0, 1.0, 0.8).unwrap());
        assert!(matches!(solve_gamma(&l, 0.3), Err(Error::NoRoot(_))));
        assert!(solve_gamma(&l, -0.1).is_err());
    }
}
