//! Operation counters for comparing full and compressed verification.

/// Counts of arithmetic operations performed by one verification.
///
/// For the lattice schemes `mul` counts modular word multiplications; for
/// Wave it counts F₃ multiply-accumulates of the dense product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpTally {
    pub mul: u64,
    pub reduce: u64,
}

impl OpTally {
    /// `self.mul / other.mul`, or infinity when `other` did no multiplications.
    pub fn ratio_over(&self, other: &OpTally) -> f64 {
        if other.mul == 0 {
            f64::INFINITY
        } else {
            self.mul as f64 / other.mul as f64
        }
    }
}
