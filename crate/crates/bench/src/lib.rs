//! Shared fixtures for the criterion benches.

use mowsp_core::generate::{assign_random_objectives, gen_lambdas, gen_waxman, WaxmanParams};
use mowsp_core::harness::Regime;
use mowsp_core::{LambdaSet, Mog};

/// Tuned Waxman graph with five random objectives.
pub fn waxman(seed: u64) -> Mog {
    let g = gen_waxman(&WaxmanParams::tuned(seed)).expect("tuned preset generates");
    assign_random_objectives(&g, 5, seed).expect("W = 5 is valid")
}

pub fn lambdas(regime: Regime, k: usize, w: usize, seed: u64) -> LambdaSet {
    gen_lambdas(&regime.coefficients(k, seed), w).expect("regime is valid")
}
