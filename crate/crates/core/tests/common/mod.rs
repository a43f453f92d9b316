#![allow(dead_code)]

use qlgame::prob::{ContextData, Distribution, TransitionMatrix};
use qlgame::qlra::{classify_context, interference_coefficients, Classification};
use rand::Rng;

pub fn d1() -> ContextData {
    ContextData::symmetric(
        Distribution::binary(1.0 / 3.0).unwrap(),
        Distribution::uniform(2),
        TransitionMatrix::binary_symmetric(0.75).unwrap(),
    )
    .unwrap()
}

pub fn hyperbolic() -> ContextData {
    ContextData::symmetric(
        Distribution::uniform(2),
        Distribution::binary(0.9).unwrap(),
        TransitionMatrix::binary_symmetric(0.9).unwrap(),
    )
    .unwrap()
}

/// Symmetrically conditioned, strictly positive, trigonometric context
/// (rejection sampling over marginals and doubly stochastic matrices).
pub fn random_trig_context<R: Rng>(rng: &mut R) -> ContextData {
    loop {
        let pa = rng.random_range(0.02..0.98);
        let pb = rng.random_range(0.02..0.98);
        let q = rng.random_range(0.02..0.98);
        let d = ContextData::symmetric(
            Distribution::binary(pa).unwrap(),
            Distribution::binary(pb).unwrap(),
            TransitionMatrix::binary_symmetric(q).unwrap(),
        )
        .unwrap();
        let lambda = interference_coefficients(&d).unwrap();
        if classify_context(&lambda) == Classification::Trigonometric {
            return d;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
        .collect()
}
