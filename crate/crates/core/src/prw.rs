//! Path simulation and the per-path functionals `τ(x)`, `N(x)`, `ρ(x)`,
//! `σ(x)`, `ν(x)` and ladder epochs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::JointLaw;

pub const DEFAULT_HORIZON: usize = 10_000;
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Independent stream for one path: ChaCha8 seeded by the master seed with
/// the path index as stream id.
pub fn path_rng(master_seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_index);
    rng
}

/// Maps `f` over path indices `0..n` in parallel; output is in index order.
pub fn par_map_paths<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n as u64).into_par_iter().map(f).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    Censored,
}

/// A count with its censoring status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observed {
    pub value: u64,
    pub status: Status,
}

impl Observed {
    pub fn exact(value: u64) -> Self {
        Observed {
            value,
            status: Status::Exact,
        }
    }

    pub fn censored(value: u64) -> Self {
        Observed {
            value,
            status: Status::Censored,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }
}

/// One simulated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBundle {
    /// `S_0 = 0, …, S_H`.
    pub s: Vec<f64>,
    /// `T_1, …, T_H`.
    pub t: Vec<f64>,
    /// `η_1, …, η_H`.
    pub eta: Vec<f64>,
    pub horizon: usize,
    pub master_seed: u64,
    pub path_index: u64,
}

impl PathBundle {
    /// Builds a bundle from increments drawn by `draw`.
    pub fn generate<R, F>(horizon: usize, rng: &mut R, mut draw: F) -> PathBundle
    where
        R: Rng + ?Sized,
        F: FnMut(&mut R) -> (f64, f64),
    {
        let mut s = Vec::with_capacity(horizon + 1);
        let mut t = Vec::with_capacity(horizon);
        let mut eta = Vec::with_capacity(horizon);
        s.push(0.0);
        let mut acc = 0.0;
        for _ in 0..horizon {
            let (xi, e) = draw(rng);
            t.push(acc + e);
            eta.push(e);
            acc += xi;
            s.push(acc);
        }
        PathBundle {
            s,
            t,
            eta,
            horizon,
            master_seed: 0,
            path_index: 0,
        }
    }

    /// `S_H`.
    pub fn last(&self) -> f64 {
        self.s[self.horizon]
    }
}

/// Simulates `horizon` steps; the result depends only on
/// `(master_seed, path_index)`.
pub fn simulate_path(law: &JointLaw, horizon: usize, master_seed: u64, path_index: u64) -> Result<PathBundle> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let mut rng = path_rng(master_seed, path_index);
    let mut b = PathBundle::generate(horizon, &mut rng, |r| law.sample_pair(r));
    b.master_seed = master_seed;
    b.path_index = path_index;
    Ok(b)
}

/// `τ(x) = inf{n : T_n > x}`.
pub fn first_passage(bundle: &PathBundle, x: f64) -> Observed {
    match bundle.t.iter().position(|&t| t > x) {
        Some(i) => Observed::exact(i as u64 + 1),
        None => Observed::censored(bundle.horizon as u64),
    }
}

/// `ν(x) = inf{n : η_n > x}`.
pub fn nu(bundle: &PathBundle, x: f64) -> Observed {
    match bundle.eta.iter().position(|&e| e > x) {
        Some(i) => Observed::exact(i as u64 + 1),
        None => Observed::censored(bundle.horizon as u64),
    }
}

/// Rule deciding when the visits to `(-∞, x]` seen up to the horizon are all
/// there will ever be.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    /// Required clearance `S_H - x` for walks that may still move down.
    pub margin: f64,
    /// Lower bound used for future perturbations: the essential infimum of
    /// `η` when finite, else its `ε`-quantile.
    pub eta_floor: f64,
    pub epsilon: f64,
    /// `ξ >= 0` a.s., so the walk never returns below `S_H`.
    pub monotone: bool,
}

impl Certification {
    /// `margin = None` picks `0` for monotone walks and ten interquartile
    /// ranges of `ξ` otherwise.
    pub fn new(law: &JointLaw, margin: Option<f64>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        let xi = law.xi();
        let monotone = xi.p_neg() == 0.0;
        let margin = match margin {
            Some(m) if m >= 0.0 && m.is_finite() => m,
            Some(m) => return Err(Error::InvalidParameter(format!("margin must be >= 0, got {m}"))),
            None if monotone => 0.0,
            None => 10.0 * (xi.quantile(0.75) - xi.quantile(0.25)).max(f64::EPSILON),
        };
        let eta = law.eta();
        let lo = eta.support().0;
        let eta_floor = if lo.is_finite() { lo } else { eta.quantile(epsilon) };
        Ok(Certification {
            margin,
            eta_floor,
            epsilon,
            monotone,
        })
    }

    pub fn for_law(law: &JointLaw) -> Result<Self> {
        Self::new(law, None, DEFAULT_EPSILON)
    }

    /// Can no `T_n` with `n > H` fall at or below `x`?
    pub fn certifies(&self, s_h: f64, x: f64) -> bool {
        if s_h + self.eta_floor <= x {
            return false;
        }
        self.monotone || s_h - x > self.margin
    }
}

/// `N(x) = #{n : T_n <= x}` and `ρ(x) = sup{n : T_n <= x}` (0 if no visit).
pub fn visits_and_last_exit(bundle: &PathBundle, x: f64, cert: &Certification) -> (Observed, Observed) {
    visits_and_last_exit_upto(bundle, x, cert, bundle.horizon)
}

/// As [`visits_and_last_exit`] for the prefix of length `m <= H`.
pub fn visits_and_last_exit_upto(bundle: &PathBundle, x: f64, cert: &Certification, m: usize) -> (Observed, Observed) {
    let m = m.min(bundle.horizon);
    let mut count = 0u64;
    let mut last = 0u64;
    for (i, &t) in bundle.t[..m].iter().enumerate() {
        if t <= x {
            count += 1;
            last = i as u64 + 1;
        }
    }
    if cert.certifies(bundle.s[m], x) {
        (Observed::exact(count), Observed::exact(last))
    } else {
        (Observed::censored(count), Observed::censored(last))
    }
}

/// `σ(x) = inf{k : η_k - (k-1)c > x}`; requires `P{ξ < -c} = 0`.
pub fn sigma_functional(law: &JointLaw, bundle: &PathBundle, x: f64, c: f64) -> Result<Observed> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("c must be >= 0, got {c}")));
    }
    if law.xi().cdf_left(-c) > 0.0 {
        return Err(Error::Precondition(format!("P{{ξ < -{c}}} > 0")));
    }
    let hit = bundle
        .eta
        .iter()
        .enumerate()
        .position(|(k, &e)| e - k as f64 * c > x);
    Ok(match hit {
        Some(k) => Observed::exact(k as u64 + 1),
        None => Observed::censored(bundle.horizon as u64),
    })
}

/// `σ(x)` drawn step by step on the path `(master_seed, path_index)`, stopping
/// at the first hit; equals [`sigma_functional`] on [`simulate_path`] of the
/// same path.
pub fn simulate_sigma(law: &JointLaw, x: f64, c: f64, horizon: usize, master_seed: u64, path_index: u64) -> Result<Observed> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("c must be >= 0, got {c}")));
    }
    if law.xi().cdf_left(-c) > 0.0 {
        return Err(Error::Precondition(format!("P{{ξ < -{c}}} > 0")));
    }
    let mut rng = path_rng(master_seed, path_index);
    for k in 0..horizon {
        let (_, e) = law.sample_pair(&mut rng);
        if e - k as f64 * c > x {
            return Ok(Observed::exact(k as u64 + 1));
        }
    }
    Ok(Observed::censored(horizon as u64))
}

/// Strict ascending and weak descending ladder epochs up to the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladders {
    pub ascending: Vec<usize>,
    pub descending: Vec<usize>,
}

pub fn ladder_epochs(bundle: &PathBundle) -> Ladders {
    let mut ascending = Vec::new();
    let mut descending = Vec::new();
    let (mut max, mut min) = (bundle.s[0], bundle.s[0]);
    for (k, &s) in bundle.s.iter().enumerate().skip(1) {
        if s > max {
            max = s;
            ascending.push(k);
        }
        if s <= min {
            min = s;
            descending.push(k);
        }
    }
    Ladders { ascending, descending }
}

/// First strict ascending ladder epoch `τ*`.
pub fn first_ascending_ladder(bundle: &PathBundle) -> Observed {
    match bundle.s.iter().skip(1).position(|&s| s > 0.0) {
        Some(i) => Observed::exact(i as u64 + 1),
        None => Observed::censored(bundle.horizon as u64),
    }
}

/// All functionals of one path at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSample {
    pub x_level: f64,
    pub tau: Observed,
    pub n_visits: Observed,
    pub rho: Observed,
    pub sigma: Option<Observed>,
    pub nu: Observed,
}

/// Evaluates every functional; `sigma_c` enables `σ(x)` with drift bound `c`.
pub fn functional_sample(
    law: &JointLaw,
    bundle: &PathBundle,
    x: f64,
    cert: &Certification,
    sigma_c: Option<f64>,
) -> Result<FunctionalSample> {
    let (n_visits, rho) = visits_and_last_exit(bundle, x, cert);
    let sigma = match sigma_c {
        Some(c) => Some(sigma_functional(law, bundle, x, c)?),
        None => None,
    };
    Ok(FunctionalSample {
        x_level: x,
        tau: first_passage(bundle, x),
        n_visits,
        rho,
        sigma,
        nu: nu(bundle, x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::Marginal;

    fn det(xi: f64, eta: f64) -> JointLaw {
        JointLaw::independent(Marginal::point(xi).unwrap(), Marginal::point(eta).unwrap()).unwrap()
    }

    #[test]
    fn deterministic_paths() {
        let b = simulate_path(&det(1.0, -0.5), 3, 0, 0).unwrap();
        assert_eq!(b.s, vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(b.t, vec![-0.5, 0.5, 1.5]);
        let b = simulate_path(&det(0.5, 2.0), 2, 0, 0).unwrap();
        assert_eq!(b.t, vec![2.0, 2.5]);
        assert!(simulate_path(&det(1.0, 1.0), 0, 0, 0).is_err());
    }

    #[test]
    fn first_passage_scan() {
        let b = simulate_path(&det(1.0, -0.5), 3, 0, 0).unwrap();
        assert_eq!(first_passage(&b, 0.0), Observed::exact(2));
        let stuck = PathBundle {
            s: vec![0.0; 4],
            t: vec![-1.0; 3],
            eta: vec![-1.0; 3],
            horizon: 3,
            master_seed: 0,
            path_index: 0,
        };
        assert_eq!(first_passage(&stuck, 0.0), Observed::censored(3));
    }

    #[test]
    fn visits_counted_and_certified() {
        let law = det(1.0, -0.5);
        let cert = Certification::for_law(&law).unwrap();
        let b = simulate_path(&law, 3, 0, 0).unwrap();
        let (n, r) = visits_and_last_exit(&b, 0.6, &cert);
        assert_eq!((n, r), (Observed::exact(2), Observed::exact(2)));
    }

    #[test]
    fn no_visits_when_eta_above_level() {
        let law = JointLaw::independent(Marginal::exponential(1.0).unwrap(), Marginal::point(1.0).unwrap()).unwrap();
        let cert = Certification::for_law(&law).unwrap();
        for i in 0..50 {
            let b = simulate_path(&law, 20, 3, i).unwrap();
            let (n, r) = visits_and_last_exit(&b, 0.5, &cert);
            assert_eq!((n, r), (Observed::exact(0), Observed::exact(0)));
        }
    }

    #[test]
    fn sigma_cases() {
        let b = simulate_path(&det(1.0, 2.0), 5, 0, 0).unwrap();
        assert_eq!(sigma_functional(&det(1.0, 2.0), &b, 0.0, 1.0).unwrap(), Observed::exact(1));
        let law = det(1.0, 2.0);
        let zero_eta = PathBundle {
            eta: vec![0.0; 5],
            ..simulate_path(&law, 5, 0, 0).unwrap()
        };
        assert_eq!(sigma_functional(&law, &zero_eta, 0.0, 1.0).unwrap(), Observed::censored(5));
        let neg = det(-2.0, 1.0);
        let b = simulate_path(&neg, 5, 0, 0).unwrap();
        assert!(matches!(sigma_functional(&neg, &b, 0.0, 1.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn lazy_sigma_matches_full_path() {
        let law = JointLaw::independent(Marginal::point(1.0).unwrap(), Marginal::pareto(1.0, 2.0).unwrap()).unwrap();
        for i in 0..300 {
            let b = simulate_path(&law, 200, 9, i).unwrap();
            assert_eq!(simulate_sigma(&law, 5.0, 1.0, 200, 9, i).unwrap(), sigma_functional(&law, &b, 5.0, 1.0).unwrap());
        }
    }

    #[test]
    fn ladder_examples() {
        let mk = |s: Vec<f64>| PathBundle {
            horizon: s.len() - 1,
            t: vec![0.0; s.len() - 1],
            eta: vec![0.0; s.len() - 1],
            s,
            master_seed: 0,
            path_index: 0,
        };
        let l = ladder_epochs(&mk(vec![0.0, 1.0, 2.0, 3.0]));
        assert_eq!(l.ascending, vec![1, 2, 3]);
        assert!(l.descending.is_empty());
        let l = ladder_epochs(&mk(vec![0.0, -1.0, 1.0]));
        assert_eq!(l.ascending, vec![2]);
        assert_eq!(l.descending, vec![1]);
    }

    #[test]
    fn replay_is_bit_identical() {
        let law = JointLaw::independent(Marginal::normal(0.3, 1.0).unwrap(), Marginal::pareto(1.2, 1.0).unwrap()).unwrap();
        let a = simulate_path(&law, 500, 42, 7).unwrap();
        let b = simulate_path(&law, 500, 42, 7).unwrap();
        assert_eq!(a, b);
        let c = simulate_path(&law, 1000, 42, 7).unwrap();
        assert_eq!(&c.s[..501], &a.s[..]);
    }
}
