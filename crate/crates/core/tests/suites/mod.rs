//! Property and oracle checks, shared by this crate's tests and the
//! gateway acceptance suite. Each property is a plain function over its
//! generated input; the callers choose how many cases to run.
#![allow(dead_code)]

pub mod decay;
pub mod kb;
pub mod morphology;
pub mod realization;
pub mod selection;

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

/// Runs `test` on `cases` inputs from a fixed seed.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
