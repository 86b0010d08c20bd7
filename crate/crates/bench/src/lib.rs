//! Benchmark fixtures shared by the criterion targets.

use sleig::harness::suite;
use sleig::{BoundaryConditions, Problem};

/// The two-term mixed-exponent potential under `y'(-1) = y(1) = 0`.
pub fn mixed_problem() -> Problem {
    suite::q2(BoundaryConditions::neumann_dirichlet())
        .problem()
        .expect("built-in problem is valid")
}

/// The even three-quarter-power potential with Neumann conditions.
pub fn symmetric_problem() -> Problem {
    suite::intro().problem().expect("built-in problem is valid")
}
