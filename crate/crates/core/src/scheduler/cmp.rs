// SPDX-License-Identifier: Apache-2.0

//! Float comparison helpers shared by the heuristic and the planners.

use std::cmp::Ordering;

/// Relative tolerance below which two costs count as equal. Being relative
/// keeps decisions unchanged when every weight is scaled by a constant.
pub const REL_TOL: f64 = 1e-9;

/// `a < b` by more than the relative tolerance.
pub fn approx_lt(a: f64, b: f64) -> bool {
    a < b - REL_TOL * a.abs().max(b.abs())
}

/// Total order on weights so they can live in heaps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct W(pub f64);

impl Eq for W {}

impl PartialOrd for W {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for W {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_relative() {
        assert!(approx_lt(1.0, 1.001));
        assert!(!approx_lt(1.0, 1.0 + 1e-12));
        assert!(!approx_lt(1e5, 1e5 + 1e-7));
        assert!(approx_lt(1e5, 1e5 + 1.0));
        assert!(!approx_lt(0.0, 0.0));
        assert!(!approx_lt(2.0, 1.0));
    }
}
