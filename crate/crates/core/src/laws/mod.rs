//! Joint laws of `(ξ, η)` and the analytic quantities derived from them.

mod analytics;
mod family;
mod joint;
mod laplace;
mod tilt;

pub use analytics::{JVariable, LawAnalytics, MomentValue};
pub use family::{Family, Marginal, TailClass};
pub use joint::{Coupling, JointLaw, MonotoneMap};
pub use laplace::{rate_r, solve_gamma, RateInfo};
pub use tilt::{atom_tilt, tilt, TiltSummary, TiltedLaw, TiltedMarginal};
