//! Numerical tolerances.

use serde::{Deserialize, Serialize};

/// Thresholds shared by every check in the crate.
///
/// `identity` is the base residual tolerance; checks on operators acting on a
/// space of dimension `d` compare against `identity * d` unless they pin their
/// own bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub identity: f64,
    /// Positivity threshold relative to `‖h‖`.
    pub pd_rel: f64,
    /// Rank threshold relative to the largest singular value.
    pub rank_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-9,
            pd_rel: 1e-12,
            rank_rel: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_identity(identity: f64) -> Self {
        Self {
            identity,
            ..Self::default()
        }
    }

    pub fn scaled(&self, dim: usize) -> f64 {
        self.identity * dim.max(1) as f64
    }
}
