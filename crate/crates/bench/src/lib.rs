//! Fixtures shared by the benchmarks.

use walgebra::{verify::standard_setups, GradedSetup, WAlgebra};

/// The standard test algebras, labelled.
pub fn setups() -> Vec<(String, GradedSetup)> {
    standard_setups().expect("standard setups build")
}

/// The standard test algebras with generators precomputed.
pub fn walgebras() -> Vec<(String, WAlgebra)> {
    setups().into_iter().map(|(l, s)| (l, WAlgebra::new(s).expect("generators exist"))).collect()
}
