//! Shared instance builders for the benchmark suite.

use framekit::frame::MultiplierSystem;
use framekit::generators;
use framekit::linalg::Matrix;
use framekit::rng::CounterRng;

/// Dense random symmetric matrix with unit-scale entries.
pub fn random_symmetric(n: usize, seed: u64) -> Matrix {
    let mut rng = CounterRng::new(seed);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = rng.next_normal();
            m.set(i, j, x);
            m.set(j, i, x);
        }
    }
    m
}

/// Equal-norm Gaussian pair for constant and split benchmarks.
pub fn equalnorm_system(n: usize, m: usize, seed: u64) -> MultiplierSystem {
    generators::random_equalnorm_pair(n, m, seed).expect("valid shape")
}
