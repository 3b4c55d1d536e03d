//! Fixtures shared by the benchmarks.

use ss_optics::linear_ss::{bilayer_threshold, ThresholdSolution};

pub const A_UM: f64 = 1000.0;

/// Exact threshold at η = 3 nearest 1 µm.
pub fn eta3_root() -> ThresholdSolution {
    bilayer_threshold(3.0, 3000, A_UM, true).expect("eta = 3 root")
}

/// Exact threshold at η = 2 for a short slab, cheap enough for shooting.
pub fn low_mode_root() -> ThresholdSolution {
    bilayer_threshold(2.0, 20, A_UM, true).expect("low mode root")
}
