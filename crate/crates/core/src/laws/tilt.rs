//! Exponentially tilted increment laws `P_θ(dξ) ∝ e^{-θξ} P(dξ)`.
//!
//! Under the tilt by `θ` a path prefix of length `n` has likelihood ratio
//! `dP/dP_θ = φ(θ)^n e^{θ S_n}` with `φ(θ) = E e^{-θξ}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::family::{Family, Marginal};
use super::joint::JointLaw;
use super::laplace::solve_gamma;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Sampler {
    Closed(Marginal),
    /// density `∝ e^{-u b}` on `[lo, lo + w]`, mapped through `shift ± b`
    UniformTilt { lo: f64, w: f64, u: f64 },
    /// rejection from the base family with acceptance `e^{-u (b - lower)}`
    Rejection { base: Family, u: f64, lower: f64 },
}

/// Sampler for the tilted `ξ`-marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedMarginal {
    base: Marginal,
    theta: f64,
    log_phi: f64,
    sampler: Sampler,
}

impl TiltedMarginal {
    pub fn new(base: &Marginal, theta: f64) -> Result<Self> {
        let phi = base.laplace(theta)?;
        if !phi.is_finite() || phi <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "E e^{{-θξ}} is infinite at θ = {theta}"
            )));
        }
        let sign = if base.negate { -1.0 } else { 1.0 };
        // e^{-θX} = e^{-θ shift} e^{-θ sign B}: tilt B by u = sign θ
        let u = sign * theta;
        let sampler = match base.family {
            Family::PointMass { .. } => Sampler::Closed(base.clone()),
            Family::TwoPoint { low, high, p_high } => {
                let wl = (1.0 - p_high) * (-u * (low - high)).exp();
                let p = p_high / (p_high + wl);
                Sampler::Closed(Marginal {
                    family: Family::TwoPoint { low, high, p_high: p },
                    ..base.clone()
                })
            }
            Family::Uniform { low, high } => {
                if u == 0.0 {
                    Sampler::Closed(base.clone())
                } else {
                    Sampler::UniformTilt {
                        lo: low,
                        w: high - low,
                        u,
                    }
                }
            }
            Family::Exponential { rate } => Sampler::Closed(Marginal {
                family: Family::Exponential { rate: rate + u },
                ..base.clone()
            }),
            Family::Normal { mean, sd } => Sampler::Closed(Marginal {
                family: Family::Normal {
                    mean: mean - u * sd * sd,
                    sd,
                },
                ..base.clone()
            }),
            Family::Pareto { scale, .. } => Sampler::Rejection {
                base: base.family.clone(),
                u,
                lower: scale,
            },
            Family::LogNormal { .. } => Sampler::Rejection {
                base: base.family.clone(),
                u,
                lower: 0.0,
            },
        };
        if let Sampler::Rejection { u, .. } = sampler {
            if u < 0.0 {
                return Err(Error::InvalidParameter("tilt into a heavy tail".into()));
            }
        }
        Ok(TiltedMarginal {
            base: base.clone(),
            theta,
            log_phi: phi.ln(),
            sampler,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `log E e^{-θξ}` under the base law.
    pub fn log_phi(&self) -> f64 {
        self.log_phi
    }

    /// `log dP/dP_θ` for a prefix of `n` steps ending at `s_n`.
    pub fn log_weight(&self, n: usize, s_n: f64) -> f64 {
        n as f64 * self.log_phi + self.theta * s_n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let sign = if self.base.negate { -1.0 } else { 1.0 };
        let b = match &self.sampler {
            Sampler::Closed(m) => return m.sample(rng),
            &Sampler::UniformTilt { lo, w, u } => {
                let v: f64 = rng.random();
                lo - (v * (-u * w).exp_m1()).ln_1p() / u
            }
            Sampler::Rejection { base, u, lower } => loop {
                let b = base.sample(rng);
                if rng.random::<f64>() < (-u * (b - lower)).exp() {
                    break b;
                }
            },
        };
        self.base.shift + sign * b
    }
}

/// Base law with its `ξ`-marginal tilted by `γ(a)`.
#[derive(Debug, Clone)]
pub struct TiltedLaw {
    pub base: JointLaw,
    pub gamma: f64,
    pub a: f64,
    xi: TiltedMarginal,
}

/// Summary row for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltSummary {
    pub gamma: f64,
    pub a: f64,
}

impl TiltedLaw {
    pub fn summary(&self) -> TiltSummary {
        TiltSummary {
            gamma: self.gamma,
            a: self.a,
        }
    }

    pub fn xi(&self) -> &TiltedMarginal {
        &self.xi
    }

    /// A pair `(ξ, η)` with `ξ` tilted and `η` drawn from its own marginal.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let xi = self.xi.sample(rng);
        (xi, self.base.eta().sample(rng))
    }
}

/// Tilt an independent law by `γ(a)`.
pub fn tilt(law: &JointLaw, a: f64) -> Result<TiltedLaw> {
    require_independent(law)?;
    let gamma = solve_gamma(law, a)?;
    let xi = TiltedMarginal::new(law.xi(), gamma)?;
    Ok(TiltedLaw {
        base: law.clone(),
        gamma,
        a,
        xi,
    })
}

/// The `θ` with `P_θ{ξ = 0} = mass` for `ξ >= 0` with an atom at zero of
/// mass below `mass`.
pub fn atom_tilt(xi: &Marginal, mass: f64) -> Result<Option<f64>> {
    let p0 = xi.p_zero();
    if xi.p_neg() > 0.0 || p0 == 0.0 || p0 >= mass {
        return Ok(None);
    }
    let target = p0 / mass;
    let (mut lo, mut hi) = (0.0, 1.0);
    while xi.laplace(hi)? > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Ok(None);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if xi.laplace(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

fn require_independent(law: &JointLaw) -> Result<()> {
    if law.is_independent() {
        Ok(())
    } else {
        Err(Error::Coupling(format!(
            "tilting acts on ξ only; got {:?}",
            law.coupling()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::MonotoneMap;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mean_of(t: &TiltedMarginal, n: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        (0..n).map(|_| t.sample(&mut rng)).sum::<f64>() / n as f64
    }

    #[test]
    fn normal_tilt_closed_form() {
        let law = JointLaw::independent(Marginal::normal(1.0, 1.0).unwrap(), Marginal::point(1.0).unwrap()).unwrap();
        let t = tilt(&law, 0.375).unwrap();
        assert_relative_eq!(t.gamma, 0.5, epsilon = 1e-9);
        match &t.xi.sampler {
            Sampler::Closed(Marginal {
                family: Family::Normal { mean, sd },
                ..
            }) => {
                assert_relative_eq!(*mean, 0.5, epsilon = 1e-9);
                assert_eq!(*sd, 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tilted_means_match_weighted_mean() {
        // E_θ ξ = E ξ e^{-θξ} / E e^{-θξ}
        let cases = [
            (Marginal::uniform(-1.0, 2.0).unwrap(), 0.7),
            (Marginal::uniform(-1.0, 2.0).unwrap().negated(), -0.4),
            (Marginal::pareto(2.5, 1.0).unwrap(), 0.8),
            (Marginal::lognormal(0.0, 0.5).unwrap().shifted(-1.0), 1.2),
            (Marginal::exponential(2.0).unwrap().negated().shifted(1.0), 0.5),
            (Marginal::two_point(-1.0, 1.0, 0.8).unwrap(), 0.69),
        ];
        for (m, theta) in cases {
            let t = TiltedMarginal::new(&m, theta).unwrap();
            let expect = m.laplace_weighted_mean(theta).unwrap() / m.laplace(theta).unwrap();
            let got = mean_of(&t, 200_000);
            assert!((got - expect).abs() < 0.02, "{m:?}: {got} vs {expect}");
        }
    }

    #[test]
    fn point_mass_tilt_is_identity() {
        let law = JointLaw::independent(Marginal::point(1.0).unwrap(), Marginal::point(2.0).unwrap()).unwrap();
        let t = tilt(&law, 0.4).unwrap();
        assert_relative_eq!(t.gamma, 0.4, epsilon = 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(t.sample_pair(&mut rng), (1.0, 2.0));
        // weight of n steps ending at S_n = n is e^{-an + γ n} = 1
        assert_relative_eq!(t.xi().log_weight(7, 7.0), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn dependent_coupling_rejected() {
        let law = JointLaw::functional(Marginal::normal(1.0, 1.0).unwrap(), MonotoneMap::Negate).unwrap();
        assert!(matches!(tilt(&law, 0.1), Err(Error::Coupling(_))));
    }
}
