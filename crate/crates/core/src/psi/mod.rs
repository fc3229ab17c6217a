//! Spectral-constant ratios `||p(T)|| / sup_{V(T)} |p|`, a deterministic
//! search for lower bounds on their supremum, and named experiments that
//! compare searched values with known inequalities.
//!
//! Regions are outer approximations of `V(T)`, so every ratio computed here
//! (with an exactly evaluated denominator) is a lower bound for the ratio
//! on `V(T)` itself. The denominators are sampled maxima; see
//! [`crate::polytools`] for the certified variants.

mod experiments;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use experiments::{
    affine_invariance_check, bohr_check, cos_example, direct_sum_example, epsilon_hull_check,
    jordan_experiment, two_by_two_l1_suite, Direction, DIRECT_SUM_GRID,
};
pub use search::{psi_lower_bound, psi_search, PsiEstimate, SearchConfig, ACCEPT_RTOL};

use crate::error::{Error, Result};
use crate::linalg::{induced_norm, poly_apply, Matrix, NormKind, Polynomial};
use crate::numrange::{gershgorin_hull_l1, range_polygon, ConvexRegion, DEFAULT_GRID};
use crate::polytools::sup_on_region;

/// Outcome of one experiment: a measured quantity checked against a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub measured: f64,
    pub paper_bound: f64,
    pub satisfied: bool,
    pub details: Vec<serde_json::Value>,
}

impl ExperimentReport {
    pub(crate) fn new(name: &str) -> Self {
        ExperimentReport {
            name: name.to_owned(),
            parameters: BTreeMap::new(),
            measured: f64::NAN,
            paper_bound: f64::NAN,
            satisfied: false,
            details: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_owned(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }
}

/// The region `psi_lower_bound` works on: the Gershgorin hull for `l1`, the
/// sampled support polygon otherwise.
pub fn region_for(t: &Matrix, kind: NormKind) -> Result<ConvexRegion> {
    match kind {
        NormKind::L1 => Ok(gershgorin_hull_l1(t, DEFAULT_GRID)),
        _ => range_polygon(t, kind, DEFAULT_GRID),
    }
}

/// `||p(T)|| / sup_region |p|` with the sampled supremum.
pub fn psi_ratio(t: &Matrix, p: &Polynomial, kind: NormKind, region: &ConvexRegion) -> Result<f64> {
    let den = sup_on_region(p, region).sampled.value;
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(induced_norm(&poly_apply(p, t), kind) / den)
}

/// Finite section of the left (`J_n`) or right (`J_n^T`) shift.
pub fn shift_compression(n: usize, direction: Direction) -> Matrix {
    match direction {
        Direction::Left => Matrix::jordan(n),
        Direction::Right => Matrix::jordan(n).transpose(),
    }
}
