//! Shared benchmark fixtures.
//!
//! Everything here is deterministic: periodic expansions replay exactly,
//! and random streams are seeded. Entry growth — the thing the benchmarks
//! actually measure — comes from the run length, not from the fixture.

use mcf_core::{IntMatrix, Mcf, McfStep, RandomMcfStream};

/// The expansion of `(∛2, ∛4)`: preperiod `(1,1)`, period `(1,0), (2,1)`.
pub fn cbrt2_input() -> Mcf {
    Mcf::new(
        2,
        vec![McfStep::from_i64(&[1, 1])],
        vec![McfStep::from_i64(&[1, 0]), McfStep::from_i64(&[2, 1])],
    )
    .expect("fixture is admissible")
}

/// A second admissible periodic input, independent of [`cbrt2_input`].
pub fn steady_input() -> Mcf {
    Mcf::new(
        2,
        vec![McfStep::from_i64(&[2, 1])],
        vec![McfStep::from_i64(&[1, 1]), McfStep::from_i64(&[3, 2])],
    )
    .expect("fixture is admissible")
}

/// The classical continued fraction of `√2`.
pub fn sqrt2_input() -> Mcf {
    Mcf::new(
        1,
        vec![McfStep::from_i64(&[1])],
        vec![McfStep::from_i64(&[2])],
    )
    .expect("fixture is admissible")
}

/// A dense nonsingular matrix that mixes all components.
pub fn mixing_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[vec![3, 5, 0], vec![5, 3, 0], vec![1, 0, 2]])
}

/// Doubling map for the m = 1 benchmarks.
pub fn doubling_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]])
}

/// Seeded admissible random stream with quotient bound `bound`.
pub fn random_stream(seed: u64, m: usize, bound: u64) -> RandomMcfStream {
    RandomMcfStream::new(seed, m, bound)
}
