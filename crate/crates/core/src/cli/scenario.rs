//! Applied presets: the Bernoulli sieve and the GI/G/∞ queue.

use serde::{Deserialize, Serialize};

use crate::criteria::{classify_trichotomy, exp_moment_n, ext_f64, power_moment_n, Classification, Criterion};
use crate::error::{Error, Result};
use crate::laws::JointLaw;
use crate::mc::{estimate_moment, MomentEstimate, MomentKind, VerdictThresholds};
use crate::prw::{par_map_paths, simulate_path, visits_and_last_exit, Certification, Observed, PathBundle};

/// Busy servers at time `t` in an infinite-server queue with arrivals at
/// `S_0, S_1, ...` and service times `η_1, η_2, ...`:
/// `R(t) = #{k >= 0 : S_k <= t < S_k + η_{k+1}} = τ*(t) - N(t)`.
/// `None` when arrivals up to `t` are not all inside the horizon.
pub fn busy_servers(b: &PathBundle, t: f64) -> Option<u64> {
    if b.s[b.horizon] <= t {
        return None;
    }
    let mut busy = 0;
    for k in 0..b.horizon {
        if b.s[k] > t {
            break;
        }
        if t < b.s[k] + b.eta[k] {
            busy += 1;
        }
    }
    Some(busy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitMoment {
    pub x: f64,
    pub estimate: MomentEstimate,
    /// Analytic prediction for the same moment.
    pub prediction: Option<Criterion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub classification: Classification,
    pub moments: Vec<VisitMoment>,
}

/// Moments of the visit count `N(x)` of the sieve walk with
/// `(ξ, η) = (|log W|, |log(1-W)|)`.
pub fn bernoulli_sieve(xs: &[f64], a: &[f64], p: &[f64], paths: usize, horizon: usize, seed: u64, th: &VerdictThresholds) -> Result<SieveReport> {
    let law = JointLaw::bernoulli_sieve()?;
    let cert = Certification::for_law(&law)?;
    let mut moments = Vec::new();
    for &x in xs {
        let samples: Vec<Observed> = par_map_paths(paths, |i| -> Result<Observed> {
            let b = simulate_path(&law, horizon, seed, i)?;
            Ok(visits_and_last_exit(&b, x, &cert).0)
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let kinds = p
            .iter()
            .map(|&p| (MomentKind::Power { p }, power_moment_n(&law, p)))
            .chain(a.iter().map(|&a| (MomentKind::Exponential { a }, exp_moment_n(&law, a, x))));
        for (kind, crit) in kinds {
            moments.push(VisitMoment {
                x,
                estimate: estimate_moment(&samples, kind, th, seed)?,
                prediction: crit.ok(),
            });
        }
    }
    Ok(SieveReport {
        classification: classify_trichotomy(&law)?,
        moments,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueRow {
    pub t: f64,
    #[serde(with = "ext_f64")]
    pub mean_busy: f64,
    #[serde(with = "ext_f64")]
    pub se: f64,
    /// `P{R(t) = 0}`
    pub p_idle: f64,
    pub max_busy: u64,
    pub censor_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueReport {
    pub classification: Classification,
    pub rows: Vec<QueueRow>,
}

/// Busy-server statistics of the GI/G/∞ queue driven by a law with `ξ, η >= 0`.
pub fn gig_infty_queue(law: &JointLaw, ts: &[f64], paths: usize, horizon: usize, seed: u64) -> Result<QueueReport> {
    if law.xi().p_neg() > 0.0 || law.eta().support().0 < 0.0 {
        return Err(Error::Precondition("the queue needs nonnegative interarrival and service times".into()));
    }
    let bundles: Vec<PathBundle> = par_map_paths(paths, |i| simulate_path(law, horizon, seed, i)).into_iter().collect::<Result<_>>()?;
    let rows = ts
        .iter()
        .map(|&t| {
            let vals: Vec<u64> = bundles.iter().filter_map(|b| busy_servers(b, t)).collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<u64>() as f64 / n;
            let var = vals.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
            QueueRow {
                t,
                mean_busy: mean,
                se: (var / n).sqrt(),
                p_idle: vals.iter().filter(|&&v| v == 0).count() as f64 / n,
                max_busy: vals.iter().copied().max().unwrap_or(0),
                censor_rate: 1.0 - n / paths as f64,
            }
        })
        .collect();
    Ok(QueueReport {
        classification: classify_trichotomy(law)?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::Marginal;
    use crate::prw::{first_ascending_ladder, Status};

    fn det(xi: f64, eta: f64) -> JointLaw {
        JointLaw::independent(Marginal::point(xi).unwrap(), Marginal::point(eta).unwrap()).unwrap()
    }

    #[test]
    fn deterministic_queue() {
        let law = det(1.0, 2.5);
        let b = simulate_path(&law, 10, 0, 0).unwrap();
        // arrivals 0,1,2,3 by t = 3; the one at 0 left at 2.5
        assert_eq!(busy_servers(&b, 3.0), Some(3));
        assert_eq!(busy_servers(&b, 20.0), None);
    }

    #[test]
    fn tiny_service_leaves_no_one_busy() {
        let law = det(1.0, 1e-9);
        let b = simulate_path(&law, 10, 0, 0).unwrap();
        assert_eq!(busy_servers(&b, 3.5), Some(0));
    }

    #[test]
    fn busy_equals_ladder_minus_visits() {
        // R(t) = τ*(t) - N(t), where τ*(t) is the first n with S_n > t
        let law = JointLaw::independent(Marginal::exponential(1.0).unwrap(), Marginal::exponential(0.5).unwrap()).unwrap();
        for i in 0..200 {
            let b = simulate_path(&law, 200, 7, i).unwrap();
            for t in [0.5, 2.0, 10.0] {
                let shifted = PathBundle {
                    s: b.s.iter().map(|s| s - t).collect(),
                    ..b.clone()
                };
                let tau_star = first_ascending_ladder(&shifted);
                assert_eq!(tau_star.status, Status::Exact);
                let n = b.t.iter().filter(|&&v| v <= t).count() as u64;
                assert_eq!(busy_servers(&b, t), Some(tau_star.value - n));
            }
        }
    }

    #[test]
    fn sieve_is_positively_divergent() {
        let r = bernoulli_sieve(&[1.0], &[], &[1.0], 2_000, 500, 3, &VerdictThresholds::default()).unwrap();
        assert_eq!(r.classification.regime, crate::criteria::Trichotomy::PosDiv);
        assert_eq!(r.moments.len(), 1);
    }

    #[test]
    fn queue_rejects_negative_steps() {
        let law = det(-1.0, 1.0);
        assert!(gig_infty_queue(&law, &[1.0], 10, 10, 0).is_err());
    }
}
