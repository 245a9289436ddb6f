//! Independent oracles shared by the integration suites.
//!
//! These deliberately avoid the library's computational paths where the point
//! is to cross-check one: the operator norm is recomputed by power iteration,
//! 3x3 spectra by characteristic-polynomial root finding, the optimal split
//! by grid search, and the parallelogram identity by exhaustive sign
//! enumeration.

#![allow(dead_code)]
// the oracles below spell out entrywise index arithmetic on purpose
#![allow(clippy::needless_range_loop)]

use framekit::frame::{Frame, MultiplierSystem, SignPattern};
use framekit::generators;
use framekit::linalg::{dot, norm, symmetric_eigen, Matrix};
use framekit::rng::CounterRng;
use framekit::unconditionality::multiplier_norm;

/// Gaussian pair without norm matching; symbol all ones.
pub fn random_system(n: usize, m: usize, seed: u64) -> MultiplierSystem {
    let x = generators::random_gaussian(n, m, seed.wrapping_mul(2).wrapping_add(1)).unwrap();
    let f = generators::random_gaussian(n, m, seed.wrapping_mul(2).wrapping_add(2)).unwrap();
    MultiplierSystem::with_unit_symbol(x, f).unwrap()
}

/// Gaussian pair with every vector normalized to unit length.
pub fn random_equinorm_system(n: usize, m: usize, seed: u64) -> MultiplierSystem {
    let sys = random_system(n, m, seed);
    let unit = |fr: &Frame| {
        Frame::new(
            fr.vectors()
                .map(|v| {
                    let len = norm(v);
                    v.iter().map(|x| x / len).collect()
                })
                .collect(),
        )
        .unwrap()
    };
    MultiplierSystem::with_unit_symbol(unit(sys.x()), unit(sys.f())).unwrap()
}

/// Operator norm of the sign-perturbed multiplier by power iteration on the
/// Gram matrix, built entrywise without the library's accumulation helpers.
pub fn power_iteration_norm(sys: &MultiplierSystem, signs: &SignPattern) -> f64 {
    let m = sys.dim();
    let n = sys.len();
    // T[r][c] = Σ_j ε_j m_j x_j[r] f_j[c]
    let mut t = vec![vec![0.0f64; m]; m];
    for j in 0..n {
        let w = signs.get(j) * sys.symbol()[j];
        for r in 0..m {
            for c in 0..m {
                t[r][c] += w * sys.x().vector(j)[r] * sys.f().vector(j)[c];
            }
        }
    }
    // G = TᵀT
    let mut g = vec![vec![0.0f64; m]; m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                g[i][j] += t[k][i] * t[k][j];
            }
        }
    }
    // power iteration from a generic start
    let mut v: Vec<f64> = (0..m).map(|i| 1.0 + i as f64 * 0.1).collect();
    let len = norm(&v);
    v.iter_mut().for_each(|x| *x /= len);
    let mut lambda = 0.0f64;
    for _ in 0..100_000 {
        let mut gv = vec![0.0f64; m];
        for i in 0..m {
            gv[i] = dot(&g[i], &v);
        }
        let gv_norm = norm(&gv);
        if gv_norm == 0.0 {
            return 0.0;
        }
        let next_lambda = dot(&gv, &v);
        gv.iter_mut().for_each(|x| *x /= gv_norm);
        v = gv;
        if (next_lambda - lambda).abs() <= 1e-15 * next_lambda.abs().max(1e-300) {
            lambda = next_lambda;
            break;
        }
        lambda = next_lambda;
    }
    lambda.max(0.0).sqrt()
}

/// Eigenvalues of a symmetric 3x3 matrix by solving the characteristic cubic
/// trigonometrically, returned descending.
pub fn cubic_eigenvalues_3x3(s: &Matrix) -> [f64; 3] {
    assert_eq!((s.rows(), s.cols()), (3, 3));
    let a = |i: usize, j: usize| s.get(i, j);
    let p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if p1 == 0.0 {
        let mut d = [a(0, 0), a(1, 1), a(2, 2)];
        d.sort_by(|x, y| y.total_cmp(x));
        return d;
    }
    let q = s.trace() / 3.0;
    let p2 = (a(0, 0) - q).powi(2) + (a(1, 1) - q).powi(2) + (a(2, 2) - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let det_b = {
        let b = |i: usize, j: usize| (a(i, j) - if i == j { q } else { 0.0 }) / p;
        b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
            - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
            + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0))
    };
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let eig1 = q + 2.0 * p * phi.cos();
    let eig3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let eig2 = 3.0 * q - eig1 - eig3;
    let mut d = [eig1, eig2, eig3];
    d.sort_by(|x, y| y.total_cmp(x));
    d
}

/// Max multiplier norm over all `2^n` sign patterns, no symmetry halving.
pub fn unhalved_enumeration(sys: &MultiplierSystem) -> f64 {
    let n = sys.len();
    assert!(n <= 20);
    let mut best = f64::NEG_INFINITY;
    for bits in 0..(1u64 << n) {
        let v = multiplier_norm(sys, &SignPattern::from_bits(bits, n)).unwrap();
        if v > best {
            best = v;
        }
    }
    best
}

/// Split objective `max{λ₁(Σ d_j² x_j x_jᵀ), λ₁(Σ d_j⁻² m_j² f_j f_jᵀ)}`.
pub fn split_objective(sys: &MultiplierSystem, d: &[f64]) -> f64 {
    let m = sys.dim();
    let mut sx = Matrix::zeros(m, m);
    let mut sf = Matrix::zeros(m, m);
    for j in 0..sys.len() {
        sx.add_scaled_outer(d[j] * d[j], sys.x().vector(j), sys.x().vector(j));
        let w = sys.symbol()[j] / d[j];
        sf.add_scaled_outer(w * w, sys.f().vector(j), sys.f().vector(j));
    }
    let lx = symmetric_eigen(&sx).unwrap().values[0];
    let lf = symmetric_eigen(&sf).unwrap().values[0];
    lx.max(lf)
}

/// Exhaustive log-grid search over the weights: `points` samples per axis,
/// `d_j` geometric in `[lo, hi]`. Returns the smallest objective found.
pub fn grid_search_objective(sys: &MultiplierSystem, points: usize, lo: f64, hi: f64) -> f64 {
    let n = sys.len();
    assert!(n <= 4, "grid search blows up past a few axes");
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    let axis: Vec<f64> = (0..points).map(|k| lo * ratio.powi(k as i32)).collect();
    let mut index = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let d: Vec<f64> = index.iter().map(|&k| axis[k]).collect();
        let obj = split_objective(sys, &d);
        if obj < best {
            best = obj;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == n {
                return best;
            }
            index[pos] += 1;
            if index[pos] < points {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// `2^{-n} Σ_{ε∈{±1}^n} ‖Σ_j ε_j x_j‖²` by Gray-code enumeration.
pub fn parallelogram_average(frame: &Frame) -> f64 {
    let n = frame.len();
    assert!(n <= 20);
    let m = frame.dim();
    let mut signs = vec![1.0f64; n];
    let mut sum: Vec<f64> = vec![0.0; m];
    for j in 0..n {
        for (s, x) in sum.iter_mut().zip(frame.vector(j)) {
            *s += x;
        }
    }
    let total = 1u64 << n;
    let mut acc = dot(&sum, &sum);
    for code in 1..total {
        let j = code.trailing_zeros() as usize;
        signs[j] = -signs[j];
        for (s, x) in sum.iter_mut().zip(frame.vector(j)) {
            *s += 2.0 * signs[j] * x;
        }
        acc += dot(&sum, &sum);
    }
    acc / total as f64
}

/// Deterministic Gaussian vector for coefficient draws.
pub fn gaussian_vector(len: usize, rng: &mut CounterRng) -> Vec<f64> {
    (0..len).map(|_| rng.next_normal()).collect()
}
