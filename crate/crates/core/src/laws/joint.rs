//! Joint laws of the increment/perturbation pair `(ξ, η)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::family::Marginal;
use crate::error::{Error, Result};

/// Monotone map `η = g(ξ)` used by the functional coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case", deny_unknown_fields)]
pub enum MonotoneMap {
    Identity,
    Negate,
    Affine { slope: f64, intercept: f64 },
}

impl MonotoneMap {
    pub fn slope_intercept(&self) -> (f64, f64) {
        match *self {
            MonotoneMap::Identity => (1.0, 0.0),
            MonotoneMap::Negate => (-1.0, 0.0),
            MonotoneMap::Affine { slope, intercept } => (slope, intercept),
        }
    }

    pub fn apply(&self, xi: f64) -> f64 {
        let (k, b) = self.slope_intercept();
        k * xi + b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "coupling", rename_all = "snake_case")]
pub enum Coupling {
    Independent,
    Functional(MonotoneMap),
    /// `ξ = |log W|`, `η = |log(1 - W)|` with `W` uniform on `(0, 1)`.
    BernoulliSieve,
}

/// Samplable joint law of `(ξ, η)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointLaw {
    xi: Marginal,
    eta: Marginal,
    coupling: Coupling,
}

impl JointLaw {
    pub fn independent(xi: Marginal, eta: Marginal) -> Result<Self> {
        Self::build(xi, eta, Coupling::Independent)
    }

    pub fn functional(xi: Marginal, map: MonotoneMap) -> Result<Self> {
        let (k, b) = map.slope_intercept();
        if !k.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter("map coefficients must be finite".into()));
        }
        let eta = xi.affine(k, b);
        Self::build(xi, eta, Coupling::Functional(map))
    }

    pub fn bernoulli_sieve() -> Result<Self> {
        let exp1 = Marginal::exponential(1.0)?;
        Self::build(exp1.clone(), exp1, Coupling::BernoulliSieve)
    }

    fn build(xi: Marginal, eta: Marginal, coupling: Coupling) -> Result<Self> {
        xi.validate()?;
        eta.validate()?;
        if xi.p_zero() >= 1.0 {
            return Err(Error::StandingAssumption("P{ξ=0} must be < 1".into()));
        }
        if eta.p_zero() >= 1.0 {
            return Err(Error::StandingAssumption("P{η=0} must be < 1".into()));
        }
        Ok(JointLaw { xi, eta, coupling })
    }

    pub fn xi(&self) -> &Marginal {
        &self.xi
    }

    pub fn eta(&self) -> &Marginal {
        &self.eta
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn is_independent(&self) -> bool {
        self.coupling == Coupling::Independent
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self.coupling {
            Coupling::Independent => {
                let xi = self.xi.sample(rng);
                (xi, self.eta.sample(rng))
            }
            Coupling::Functional(map) => {
                let xi = self.xi.sample(rng);
                (xi, map.apply(xi))
            }
            Coupling::BernoulliSieve => {
                // W in (0, 1]; W = 1 would give η = ∞, so redraw
                loop {
                    let w = 1.0 - rng.random::<f64>();
                    if w < 1.0 {
                        return (-w.ln(), -(-w).ln_1p());
                    }
                }
            }
        }
    }

    /// `P{ξ = 0, η <= x}`.
    pub fn joint_atom(&self, x: f64) -> f64 {
        match self.coupling {
            Coupling::Independent => self.xi.p_zero() * self.eta.cdf(x),
            Coupling::Functional(map) => {
                if map.apply(0.0) <= x {
                    self.xi.p_zero()
                } else {
                    0.0
                }
            }
            Coupling::BernoulliSieve => 0.0,
        }
    }

    /// `P{ξ = 0, η > x}`.
    pub fn joint_atom_above(&self, x: f64) -> f64 {
        (self.xi.p_zero() - self.joint_atom(x)).max(0.0)
    }

    /// `P{ξ < 0, η <= x}`.
    pub fn joint_neg(&self, x: f64) -> f64 {
        match self.coupling {
            Coupling::Independent => self.xi.p_neg() * self.eta.cdf(x),
            Coupling::Functional(map) => {
                let (k, b) = map.slope_intercept();
                let xi = &self.xi;
                if k > 0.0 {
                    let c = (x - b) / k;
                    if c < 0.0 {
                        xi.cdf(c)
                    } else {
                        xi.p_neg()
                    }
                } else if k < 0.0 {
                    let c = (x - b) / k;
                    if c < 0.0 {
                        (xi.p_neg() - xi.cdf_left(c)).max(0.0)
                    } else {
                        0.0
                    }
                } else if b <= x {
                    xi.p_neg()
                } else {
                    0.0
                }
            }
            Coupling::BernoulliSieve => 0.0,
        }
    }

    /// `P{η <= x}`.
    pub fn eta_cdf(&self, x: f64) -> f64 {
        self.eta.cdf(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn point_masses_sample_exactly() {
        let law = JointLaw::independent(Marginal::point(1.0).unwrap(), Marginal::point(-1.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert_eq!(law.sample_pair(&mut rng), (1.0, -1.0));
        }
    }

    #[test]
    fn negate_coupling_is_exact() {
        let law = JointLaw::functional(Marginal::exponential(1.0).unwrap(), MonotoneMap::Negate).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let (x, e) = law.sample_pair(&mut rng);
            assert_eq!(e, -x);
        }
        assert_eq!(law.eta().p_neg(), 1.0);
    }

    #[test]
    fn standing_assumption_rejected() {
        assert!(matches!(
            JointLaw::independent(Marginal::point(0.0).unwrap(), Marginal::point(1.0).unwrap()),
            Err(Error::StandingAssumption(_))
        ));
        assert!(matches!(
            JointLaw::independent(Marginal::point(1.0).unwrap(), Marginal::point(0.0).unwrap()),
            Err(Error::StandingAssumption(_))
        ));
    }

    #[test]
    fn functional_joint_probabilities_by_enumeration() {
        // brute-force sum over the atoms of ξ
        let xi = Marginal::two_point(-1.0, 1.0, 0.7).unwrap();
        for map in [
            MonotoneMap::Identity,
            MonotoneMap::Negate,
            MonotoneMap::Affine { slope: 2.0, intercept: 0.5 },
            MonotoneMap::Affine { slope: -3.0, intercept: 1.0 },
        ] {
            let law = JointLaw::functional(xi.clone(), map).unwrap();
            for x in [-4.0, -2.0, -0.5, 0.0, 0.5, 2.0, 4.0] {
                let expect: f64 = xi
                    .atoms()
                    .iter()
                    .filter(|&&(v, _)| v < 0.0 && map.apply(v) <= x)
                    .map(|a| a.1)
                    .sum();
                assert!((law.joint_neg(x) - expect).abs() < 1e-15, "{map:?} x={x}");
            }
        }
    }
}
