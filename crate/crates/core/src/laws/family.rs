//! Parametric marginal families with closed-form tails.
//!
//! A [`Marginal`] is `shift + B` or `shift - B` for a base variable `B` from
//! one of the supported [`Family`] variants. Everything the criteria need
//! (tails, atoms, Laplace transforms, tail classes) is available analytically
//! or by quadrature against the density.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StatrsNormal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Base distribution families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    PointMass { value: f64 },
    /// `high` with probability `p_high`, else `low`.
    TwoPoint { low: f64, high: f64, p_high: f64 },
    Uniform { low: f64, high: f64 },
    Exponential { rate: f64 },
    Normal { mean: f64, sd: f64 },
    /// `P{B > y} = (scale / y)^shape` for `y >= scale`.
    Pareto { shape: f64, scale: f64 },
    LogNormal { mu: f64, sigma: f64 },
}

/// Symbolic description of how fast a tail decays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum TailClass {
    /// No mass beyond some finite point.
    Bounded,
    /// `P{X > y} ~ c e^{-rate y}`.
    Exponential { rate: f64 },
    /// Gaussian decay: every exponential moment is finite.
    Gaussian,
    /// All power moments finite, no exponential moment (lognormal).
    Subexponential,
    /// `P{X > y} ~ c y^{-index}`.
    Polynomial { index: f64 },
}

impl TailClass {
    /// Is `E e^{t X⁺}` finite for the given `t > 0`?
    pub fn exp_moment_finite(&self, t: f64) -> bool {
        match *self {
            TailClass::Bounded | TailClass::Gaussian => true,
            TailClass::Exponential { rate } => t < rate,
            TailClass::Subexponential | TailClass::Polynomial { .. } => t <= 0.0,
        }
    }

    /// Is `E (X⁺)^q` finite?
    pub fn power_moment_finite(&self, q: f64) -> bool {
        match *self {
            TailClass::Polynomial { index } => q < index,
            _ => true,
        }
    }

    /// Polynomial index, `+∞` for anything lighter.
    pub fn index(&self) -> f64 {
        match *self {
            TailClass::Polynomial { index } => index,
            _ => f64::INFINITY,
        }
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

fn std_normal_quantile(u: f64) -> f64 {
    StatrsNormal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(u)
}

impl Family {
    /// The law of `k B` for `k > 0`.
    pub fn scaled(&self, k: f64) -> Family {
        debug_assert!(k > 0.0);
        match *self {
            Family::PointMass { value } => Family::PointMass { value: k * value },
            Family::TwoPoint { low, high, p_high } => Family::TwoPoint {
                low: k * low,
                high: k * high,
                p_high,
            },
            Family::Uniform { low, high } => Family::Uniform {
                low: k * low,
                high: k * high,
            },
            Family::Exponential { rate } => Family::Exponential { rate: rate / k },
            Family::Normal { mean, sd } => Family::Normal {
                mean: k * mean,
                sd: k * sd,
            },
            Family::Pareto { shape, scale } => Family::Pareto {
                shape,
                scale: k * scale,
            },
            Family::LogNormal { mu, sigma } => Family::LogNormal { mu: mu + k.ln(), sigma },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("{self:?}: {m}")));
        let finite = |v: f64| v.is_finite();
        match *self {
            Family::PointMass { value } if !finite(value) => bad("value must be finite"),
            Family::TwoPoint { low, high, p_high } => {
                if !finite(low) || !finite(high) {
                    bad("support points must be finite")
                } else if !(0.0..=1.0).contains(&p_high) {
                    bad("p_high must lie in [0, 1]")
                } else {
                    Ok(())
                }
            }
            Family::Uniform { low, high } if !(finite(low) && finite(high) && low < high) => {
                bad("need finite low < high")
            }
            Family::Exponential { rate } if !(rate > 0.0 && finite(rate)) => bad("rate must be positive"),
            Family::Normal { mean, sd } if !(finite(mean) && sd > 0.0 && finite(sd)) => {
                bad("need finite mean and sd > 0")
            }
            Family::Pareto { shape, scale } if !(shape > 0.0 && scale > 0.0 && finite(shape) && finite(scale)) => {
                bad("shape and scale must be positive")
            }
            Family::LogNormal { mu, sigma } if !(finite(mu) && sigma > 0.0 && finite(sigma)) => {
                bad("need finite mu and sigma > 0")
            }
            _ => Ok(()),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Family::PointMass { .. } | Family::TwoPoint { .. })
    }

    /// Atoms `(location, mass)` with positive mass.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match *self {
            Family::PointMass { value } => vec![(value, 1.0)],
            Family::TwoPoint { low, high, p_high } => {
                if low == high {
                    vec![(low, 1.0)]
                } else {
                    [(low, 1.0 - p_high), (high, p_high)]
                        .into_iter()
                        .filter(|&(_, m)| m > 0.0)
                        .collect()
                }
            }
            _ => Vec::new(),
        }
    }

    /// Closed support `[lo, hi]` (possibly infinite).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Family::PointMass { value } => (value, value),
            Family::TwoPoint { .. } => {
                let a = self.atoms();
                let lo = a.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
                let hi = a.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            Family::Uniform { low, high } => (low, high),
            Family::Exponential { .. } => (0.0, f64::INFINITY),
            Family::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Pareto { scale, .. } => (scale, f64::INFINITY),
            Family::LogNormal { .. } => (0.0, f64::INFINITY),
        }
    }

    /// `P{B <= z}`.
    pub fn cdf(&self, z: f64) -> f64 {
        match *self {
            Family::PointMass { .. } | Family::TwoPoint { .. } => {
                self.atoms().iter().filter(|a| a.0 <= z).map(|a| a.1).sum()
            }
            Family::Uniform { low, high } => ((z - low) / (high - low)).clamp(0.0, 1.0),
            Family::Exponential { rate } => {
                if z <= 0.0 {
                    0.0
                } else {
                    -(-rate * z).exp_m1()
                }
            }
            Family::Normal { mean, sd } => std_normal_cdf((z - mean) / sd),
            Family::Pareto { shape, scale } => {
                if z <= scale {
                    0.0
                } else {
                    1.0 - (scale / z).powf(shape)
                }
            }
            Family::LogNormal { mu, sigma } => {
                if z <= 0.0 {
                    0.0
                } else {
                    std_normal_cdf((z.ln() - mu) / sigma)
                }
            }
        }
    }

    /// `P{B < z}`.
    pub fn cdf_left(&self, z: f64) -> f64 {
        if self.is_discrete() {
            self.atoms().iter().filter(|a| a.0 < z).map(|a| a.1).sum()
        } else {
            self.cdf(z)
        }
    }

    /// `P{B > z}`, computed without cancellation where a closed form allows.
    pub fn survival(&self, z: f64) -> f64 {
        match *self {
            Family::Exponential { rate } => {
                if z <= 0.0 {
                    1.0
                } else {
                    (-rate * z).exp()
                }
            }
            Family::Normal { mean, sd } => std_normal_cdf(-(z - mean) / sd),
            Family::Pareto { shape, scale } => {
                if z <= scale {
                    1.0
                } else {
                    (scale / z).powf(shape)
                }
            }
            Family::LogNormal { mu, sigma } => {
                if z <= 0.0 {
                    1.0
                } else {
                    std_normal_cdf(-(z.ln() - mu) / sigma)
                }
            }
            _ => 1.0 - self.cdf(z),
        }
    }

    pub fn pdf(&self, z: f64) -> f64 {
        match *self {
            Family::PointMass { .. } | Family::TwoPoint { .. } => 0.0,
            Family::Uniform { low, high } => {
                if z >= low && z <= high {
                    1.0 / (high - low)
                } else {
                    0.0
                }
            }
            Family::Exponential { rate } => {
                if z < 0.0 {
                    0.0
                } else {
                    rate * (-rate * z).exp()
                }
            }
            Family::Normal { mean, sd } => std_normal_pdf((z - mean) / sd) / sd,
            Family::Pareto { shape, scale } => {
                if z < scale {
                    0.0
                } else {
                    shape * scale.powf(shape) * z.powf(-shape - 1.0)
                }
            }
            Family::LogNormal { mu, sigma } => {
                if z <= 0.0 {
                    0.0
                } else {
                    std_normal_pdf((z.ln() - mu) / sigma) / (sigma * z)
                }
            }
        }
    }

    /// Left-continuous inverse `inf{z : F(z) >= u}`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match *self {
            Family::PointMass { value } => value,
            Family::TwoPoint { .. } => {
                let mut acc = 0.0;
                let mut atoms = self.atoms();
                atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
                for (x, m) in &atoms {
                    acc += m;
                    if acc >= u {
                        return *x;
                    }
                }
                atoms.last().map(|a| a.0).unwrap_or(f64::NAN)
            }
            Family::Uniform { low, high } => low + u * (high - low),
            Family::Exponential { rate } => -(-u).ln_1p() / rate,
            Family::Normal { mean, sd } => mean + sd * std_normal_quantile(u),
            Family::Pareto { shape, scale } => scale * (1.0 - u).powf(-1.0 / shape),
            Family::LogNormal { mu, sigma } => (mu + sigma * std_normal_quantile(u)).exp(),
        }
    }

    /// Right-continuous inverse `inf{z : F(z) > u}`; equals `quantile` for
    /// continuous families.
    pub fn quantile_right(&self, u: f64) -> f64 {
        if !self.is_discrete() {
            return self.quantile(u);
        }
        let mut atoms = self.atoms();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = 0.0;
        for (x, m) in &atoms {
            acc += m;
            if acc > u {
                return *x;
            }
        }
        atoms.last().map(|a| a.0).unwrap_or(f64::NAN)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Family::PointMass { value } => value,
            Family::TwoPoint { low, high, p_high } => {
                if rng.random::<f64>() < p_high {
                    high
                } else {
                    low
                }
            }
            Family::Uniform { low, high } => low + rng.random::<f64>() * (high - low),
            Family::Exponential { rate } => {
                let e: f64 = rng.sample(Exp1);
                e / rate
            }
            Family::Normal { mean, sd } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + sd * z
            }
            Family::Pareto { shape, scale } => {
                // 1 - U lies in (0, 1]
                let u = 1.0 - rng.random::<f64>();
                scale * u.powf(-1.0 / shape)
            }
            Family::LogNormal { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                (mu + sigma * z).exp()
            }
        }
    }

    pub fn upper_tail(&self) -> TailClass {
        match *self {
            Family::Exponential { rate } => TailClass::Exponential { rate },
            Family::Normal { .. } => TailClass::Gaussian,
            Family::Pareto { shape, .. } => TailClass::Polynomial { index: shape },
            Family::LogNormal { .. } => TailClass::Subexponential,
            _ => TailClass::Bounded,
        }
    }

    pub fn lower_tail(&self) -> TailClass {
        match *self {
            Family::Normal { .. } => TailClass::Gaussian,
            _ => TailClass::Bounded,
        }
    }

    /// `E B`, possibly `+∞`.
    pub fn mean(&self) -> f64 {
        match *self {
            Family::PointMass { value } => value,
            Family::TwoPoint { low, high, p_high } => (1.0 - p_high) * low + p_high * high,
            Family::Uniform { low, high } => 0.5 * (low + high),
            Family::Exponential { rate } => 1.0 / rate,
            Family::Normal { mean, .. } => mean,
            Family::Pareto { shape, scale } => {
                if shape > 1.0 {
                    shape * scale / (shape - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            Family::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
        }
    }

    /// `lim_{y→∞} y P{B > y}` in `[0, ∞]`.
    pub fn upper_tail_limit(&self) -> f64 {
        match *self {
            Family::Pareto { shape, scale } => {
                if shape < 1.0 {
                    f64::INFINITY
                } else if shape == 1.0 {
                    scale
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }

    /// Points where the density has a kink or jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Family::Uniform { low, high } => vec![low, high],
            Family::Exponential { .. } | Family::LogNormal { .. } => vec![0.0],
            Family::Normal { mean, sd } => vec![mean - 4.0 * sd, mean, mean + 4.0 * sd],
            Family::Pareto { scale, .. } => vec![scale],
            _ => Vec::new(),
        }
    }

    /// `E[g(B); lo ⋈ B ⋈ hi]` where the end points are included according to
    /// the flags. Atoms are summed, densities integrated.
    pub fn expect_in<G: Fn(f64) -> f64>(
        &self,
        g: G,
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<f64> {
        if self.is_discrete() {
            return Ok(self
                .atoms()
                .iter()
                .filter(|&&(x, _)| {
                    (x > lo || (lo_closed && x == lo)) && (x < hi || (hi_closed && x == hi))
                })
                .map(|&(x, m)| m * g(x))
                .sum());
        }
        let (s_lo, s_hi) = self.support();
        let a = lo.max(s_lo);
        let b = hi.min(s_hi);
        if a >= b {
            return Ok(0.0);
        }
        let tol = Tolerance::default();
        match *self {
            Family::LogNormal { mu, sigma } => {
                // integrate in the Gaussian variable z = (ln b - mu) / sigma
                let za = if a <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (a.ln() - mu) / sigma
                };
                let zb = if b.is_infinite() {
                    f64::INFINITY
                } else {
                    (b.ln() - mu) / sigma
                };
                quad::integrate_piecewise(
                    |z| std_normal_pdf(z) * g((mu + sigma * z).exp()),
                    za,
                    zb,
                    &[-4.0, 0.0, 4.0],
                    tol,
                )
            }
            _ => quad::integrate_piecewise(|x| self.pdf(x) * g(x), a, b, &self.breakpoints(), tol),
        }
    }

    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        self.expect_in(g, f64::NEG_INFINITY, f64::INFINITY, true, true)
    }

    /// `E e^{-u B}` for real `u`; `+∞` where it diverges.
    pub fn laplace(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(1.0);
        }
        Ok(match *self {
            Family::PointMass { value } => (-u * value).exp(),
            Family::TwoPoint { low, high, p_high } => {
                (1.0 - p_high) * (-u * low).exp() + p_high * (-u * high).exp()
            }
            Family::Uniform { low, high } => {
                // (e^{-u low} - e^{-u high}) / (u (high - low))
                let w = high - low;
                (-u * low).exp() * (-(-u * w).exp_m1()) / (u * w)
            }
            Family::Exponential { rate } => {
                if u > -rate {
                    rate / (rate + u)
                } else {
                    f64::INFINITY
                }
            }
            Family::Normal { mean, sd } => (-u * mean + 0.5 * u * u * sd * sd).exp(),
            Family::Pareto { .. } | Family::LogNormal { .. } => {
                if u < 0.0 {
                    f64::INFINITY
                } else {
                    self.expect(|b| (-u * b).exp())?
                }
            }
        })
    }

    /// `E B e^{-u B}`; `±∞` where it diverges.
    pub fn laplace_weighted_mean(&self, u: f64) -> Result<f64> {
        Ok(match *self {
            Family::PointMass { value } => value * (-u * value).exp(),
            Family::TwoPoint { low, high, p_high } => {
                (1.0 - p_high) * low * (-u * low).exp() + p_high * high * (-u * high).exp()
            }
            Family::Uniform { .. } => self.expect(|b| b * (-u * b).exp())?,
            Family::Exponential { rate } => {
                if u > -rate {
                    rate / ((rate + u) * (rate + u))
                } else {
                    f64::INFINITY
                }
            }
            Family::Normal { mean, sd } => (mean - u * sd * sd) * self.laplace(u)?,
            Family::Pareto { .. } | Family::LogNormal { .. } => {
                if u < 0.0 || (u == 0.0 && !self.mean().is_finite()) {
                    f64::INFINITY
                } else {
                    self.expect(|b| b * (-u * b).exp())?
                }
            }
        })
    }
}

/// A real-valued marginal `shift ± B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginal {
    pub family: Family,
    #[serde(default)]
    pub shift: f64,
    #[serde(default)]
    pub negate: bool,
}

impl Marginal {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        Ok(Marginal {
            family,
            shift: 0.0,
            negate: false,
        })
    }

    pub fn point(value: f64) -> Result<Self> {
        Self::new(Family::PointMass { value })
    }

    pub fn two_point(low: f64, high: f64, p_high: f64) -> Result<Self> {
        Self::new(Family::TwoPoint { low, high, p_high })
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        Self::new(Family::Uniform { low, high })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(Family::Normal { mean, sd })
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Pareto { shape, scale })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::LogNormal { mu, sigma })
    }

    pub fn shifted(mut self, by: f64) -> Self {
        self.shift += by;
        self
    }

    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self.shift = -self.shift;
        self
    }

    /// The law of `intercept + slope X`.
    pub fn affine(&self, slope: f64, intercept: f64) -> Marginal {
        if slope == 0.0 {
            return Marginal {
                family: Family::PointMass { value: intercept },
                shift: 0.0,
                negate: false,
            };
        }
        Marginal {
            family: self.family.scaled(slope.abs()),
            shift: intercept + slope * self.shift,
            negate: self.negate != (slope < 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.shift.is_finite() {
            return Err(Error::InvalidParameter("shift must be finite".into()));
        }
        self.family.validate()
    }

    fn sign(&self) -> f64 {
        if self.negate {
            -1.0
        } else {
            1.0
        }
    }

    fn to_x(&self, b: f64) -> f64 {
        self.shift + self.sign() * b
    }

    pub fn is_discrete(&self) -> bool {
        self.family.is_discrete()
    }

    /// `P{X <= y}`.
    pub fn cdf(&self, y: f64) -> f64 {
        let z = y - self.shift;
        if self.negate {
            // P{-B <= z} = P{B >= -z}
            1.0 - self.family.cdf_left(-z)
        } else {
            self.family.cdf(z)
        }
    }

    /// `P{X < y}`.
    pub fn cdf_left(&self, y: f64) -> f64 {
        let z = y - self.shift;
        if self.negate {
            self.family.survival(-z)
        } else {
            self.family.cdf_left(z)
        }
    }

    /// `P{X > y}`.
    pub fn survival(&self, y: f64) -> f64 {
        let z = y - self.shift;
        if self.negate {
            self.family.cdf_left(-z)
        } else {
            self.family.survival(z)
        }
    }

    pub fn p_pos(&self) -> f64 {
        self.survival(0.0)
    }

    pub fn p_neg(&self) -> f64 {
        self.cdf_left(0.0)
    }

    pub fn p_zero(&self) -> f64 {
        if self.is_discrete() {
            (self.cdf(0.0) - self.cdf_left(0.0)).max(0.0)
        } else {
            0.0
        }
    }

    pub fn atoms(&self) -> Vec<(f64, f64)> {
        self.family
            .atoms()
            .into_iter()
            .map(|(b, m)| (self.to_x(b), m))
            .collect()
    }

    pub fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.family.support();
        if self.negate {
            (self.shift - hi, self.shift - lo)
        } else {
            (self.shift + lo, self.shift + hi)
        }
    }

    /// Left-continuous quantile `inf{y : P{X <= y} >= u}`.
    pub fn quantile(&self, u: f64) -> f64 {
        if self.negate {
            self.shift - self.family.quantile_right(1.0 - u)
        } else {
            self.shift + self.family.quantile(u)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.to_x(self.family.sample(rng))
    }

    pub fn upper_tail(&self) -> TailClass {
        if self.negate {
            self.family.lower_tail()
        } else {
            self.family.upper_tail()
        }
    }

    pub fn lower_tail(&self) -> TailClass {
        if self.negate {
            self.family.upper_tail()
        } else {
            self.family.lower_tail()
        }
    }

    /// `E X` in the extended sense, `NaN` when both halves are infinite.
    pub fn mean(&self) -> f64 {
        self.shift + self.sign() * self.family.mean()
    }

    /// `lim_{y→∞} y P{X > y}`.
    pub fn upper_tail_limit(&self) -> f64 {
        if self.negate {
            0.0
        } else {
            self.family.upper_tail_limit()
        }
    }

    /// `E[g(X); X < x]`.
    pub fn expect_below<G: Fn(f64) -> f64>(&self, g: G, x: f64) -> Result<f64> {
        let z = x - self.shift;
        let h = |b: f64| g(self.to_x(b));
        if self.negate {
            // shift - b < x  <=>  b > -z
            self.family.expect_in(h, -z, f64::INFINITY, false, true)
        } else {
            self.family.expect_in(h, f64::NEG_INFINITY, z, true, false)
        }
    }

    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        self.family.expect(|b| g(self.to_x(b)))
    }

    /// `E e^{-tX}`, `+∞` where it diverges.
    pub fn laplace(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(1.0);
        }
        let base = self.family.laplace(self.sign() * t)?;
        Ok(if base.is_infinite() {
            f64::INFINITY
        } else {
            (-t * self.shift).exp() * base
        })
    }

    /// `E X e^{-tX}`.
    pub fn laplace_weighted_mean(&self, t: f64) -> Result<f64> {
        let l = self.laplace(t)?;
        if l.is_infinite() {
            return Ok(f64::INFINITY);
        }
        let d = self.family.laplace_weighted_mean(self.sign() * t)?;
        Ok(self.shift * l + self.sign() * (-t * self.shift).exp() * d)
    }

    /// `E (X⁺)^q`, `+∞` when the upper tail is too heavy.
    pub fn positive_moment(&self, q: f64) -> Result<f64> {
        if !self.upper_tail().power_moment_finite(q) {
            return Ok(f64::INFINITY);
        }
        self.expect(|x| if x > 0.0 { x.powf(q) } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn negated_pareto_tails() {
        let m = Marginal::pareto(0.5, 1.0).unwrap().negated();
        assert_relative_eq!(m.cdf(-4.0), 0.5, epsilon = 1e-15);
        assert_eq!(m.survival(-1.0), 0.0);
        assert_eq!(m.lower_tail(), TailClass::Polynomial { index: 0.5 });
        assert_eq!(m.upper_tail(), TailClass::Bounded);
        assert_relative_eq!(m.quantile(1e-6), -1e12, max_relative = 1e-9);
    }

    #[test]
    fn two_point_quantiles_and_atoms() {
        let m = Marginal::two_point(-1.0, 1.0, 0.8).unwrap();
        assert_relative_eq!(m.p_neg(), 0.2);
        assert_relative_eq!(m.p_pos(), 0.8);
        assert_eq!(m.quantile(0.1), -1.0);
        assert_eq!(m.quantile(0.19), -1.0);
        assert_eq!(m.quantile(0.21), 1.0);
        let n = m.clone().negated();
        assert_eq!(n.quantile(0.5), -1.0);
        assert_eq!(n.quantile(0.9), 1.0);
        assert_relative_eq!(n.cdf(-1.0), 0.8);
    }

    #[test]
    fn shifted_exponential_laplace() {
        let m = Marginal::exponential(2.0).unwrap().shifted(1.0);
        // E e^{-t(1+E)} = e^{-t} 2/(2+t)
        let t = 0.7;
        assert_relative_eq!(m.laplace(t).unwrap(), (-t).exp() * 2.0 / 2.7, max_relative = 1e-14);
        assert!(m.laplace(-2.5).unwrap().is_infinite());
    }

    #[test]
    fn pareto_laplace_by_quadrature_matches_monte_carlo_scale() {
        let m = Marginal::pareto(1.5, 1.0).unwrap();
        let v = m.laplace(0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let mc: f64 = (0..n).map(|_| (-0.3 * m.sample(&mut rng)).exp()).sum::<f64>() / n as f64;
        assert!((v - mc).abs() < 5e-3, "{v} vs {mc}");
    }

    #[test]
    fn expect_below_splits_atoms() {
        let m = Marginal::two_point(0.0, 2.0, 0.5).unwrap();
        assert_relative_eq!(m.expect_below(|x| x + 1.0, 2.0).unwrap(), 0.5);
        assert_relative_eq!(m.expect_below(|x| x + 1.0, 2.5).unwrap(), 2.0);
    }

    #[test]
    fn normal_weighted_mean_is_derivative() {
        let m = Marginal::normal(1.0, 1.0).unwrap();
        let h = 1e-6;
        let d = -(m.laplace(0.4 + h).unwrap() - m.laplace(0.4 - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(m.laplace_weighted_mean(0.4).unwrap(), d, max_relative = 1e-7);
    }

    #[test]
    fn lognormal_expectation() {
        let m = Marginal::lognormal(0.2, 0.5).unwrap();
        assert_relative_eq!(m.expect(|x| x).unwrap(), (0.2f64 + 0.125).exp(), max_relative = 1e-9);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Marginal::uniform(1.0, 1.0).is_err());
        assert!(Marginal::two_point(0.0, 1.0, 1.5).is_err());
        assert!(Marginal::pareto(-1.0, 1.0).is_err());
    }
}
