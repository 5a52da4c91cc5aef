//! Categories of information transformers over finite spaces and linear
//! Gaussian channels, with fuzzy logic, possibility calculus, an
//! informativeness preorder and Bayesian decision strategies on top.

pub mod categorical;
pub mod cli;
pub mod decision;
pub mod error;
pub mod finite;
pub mod fuzzy_set;
pub mod informativeness;
pub mod kernel;
pub mod linear;
pub mod logic;
pub mod possibility;
pub mod problem;
pub mod space;

pub use error::{Error, Result};
pub use space::Space;

#[cfg(test)]
pub(crate) mod testutil {
    use proptest::prelude::*;

    /// Truth values on the `2⁻⁵³` grid, where `1 − x` is exact.
    pub fn unit() -> impl Strategy<Value = f64> {
        const DEN: u64 = 1 << 53;
        prop_oneof![
            Just(0.0),
            Just(1.0),
            (0..=DEN).prop_map(|k| k as f64 / DEN as f64)
        ]
    }
}
