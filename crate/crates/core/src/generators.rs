//! Deterministic constructors for reference frames and random test instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, MultiplierSystem};
use crate::linalg::{dot, norm, Matrix};
use crate::rng::CounterRng;

/// Tightness residual accepted from the harmonic construction.
const FUNTF_TIGHTNESS_TOL: f64 = 1e-10;

/// What a generator produces.
#[derive(Debug, Clone)]
pub enum Generated {
    Frame(Frame),
    System(MultiplierSystem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Real harmonic finite unit-norm tight frame.
    HarmonicFuntf,
    /// Frame with i.i.d. standard normal coordinates.
    RandomGaussian,
    /// `x_j = e_j`, `f_j = e_1`, unit symbol.
    ExampleBasisPair,
    /// Two independently rotated copies of the harmonic FUNTF.
    TightEquinormPair,
    /// Random equal-norm pair expanded by random rational replication.
    Replicated,
}

/// Declarative description of a generated instance, accepted as CLI flags
/// and as JSON `{kind, n, m, seed}` (plus optional `scale`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

/// Runs a generator spec. Output is bit-identical for a fixed spec.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    if spec.scale <= 0.0 || !spec.scale.is_finite() {
        return Err(Error::InvalidGenerator(format!(
            "scale must be positive and finite, got {}",
            spec.scale
        )));
    }
    match spec.kind {
        GeneratorKind::HarmonicFuntf => Ok(Generated::Frame(
            harmonic_funtf(spec.n, spec.m)?.scaled(spec.scale),
        )),
        GeneratorKind::RandomGaussian => Ok(Generated::Frame(
            random_gaussian(spec.n, spec.m, spec.seed)?.scaled(spec.scale),
        )),
        GeneratorKind::ExampleBasisPair => Ok(Generated::System(example_basis_pair(spec.n)?)),
        GeneratorKind::TightEquinormPair => Ok(Generated::System(tight_equinorm_pair(
            spec.n, spec.m, spec.seed, spec.scale,
        )?)),
        GeneratorKind::Replicated => {
            let base = random_equalnorm_pair(spec.n, spec.m, spec.seed)?;
            // counters 2^32.. keep the replication draws out of the pair's stream
            let mut rng = CounterRng::new(spec.seed ^ 0x7265_706c);
            let k: Vec<usize> = (0..base.len()).map(|_| 1 + rng.next_index(3)).collect();
            Ok(Generated::System(replicate_rational(&base, &k)?))
        }
    }
}

/// Real harmonic FUNTF: `n` unit-norm vectors in `ℓ₂^m` whose frame operator
/// is exactly `(n/m)·I`, built from rows of the real discrete Fourier basis.
///
/// The construction selects `m` orthonormal columns of the real DFT matrix
/// whose squared entries are constant down each row (cosine/sine pairs plus,
/// when needed, the constant and alternating columns), then rescales by
/// `√(n/m)`. Tightness is checked to 1e-10 before returning.
pub fn harmonic_funtf(n: usize, m: usize) -> Result<Frame> {
    if m < 1 || n < m {
        return Err(Error::InvalidGenerator(format!(
            "a FUNTF needs n >= m >= 1, got n={n}, m={m}"
        )));
    }
    let pairs_available = (n - 1) / 2;
    // column selection: pairs contribute 2/n per row, the constant and
    // alternating columns 1/n, so any block choice keeps rows equal-norm
    let mut use_constant = false;
    let mut use_alternating = false;
    let pairs: usize = if m.is_multiple_of(2) {
        if m / 2 <= pairs_available {
            m / 2
        } else {
            // only reachable when m = n is even
            use_constant = true;
            use_alternating = true;
            (m - 2) / 2
        }
    } else {
        use_constant = true;
        (m - 1) / 2
    };
    debug_assert!(pairs <= pairs_available);
    debug_assert!(!use_alternating || n.is_multiple_of(2));

    let amp = (n as f64 / m as f64).sqrt();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut row = Vec::with_capacity(m);
            if use_constant {
                row.push(amp / (n as f64).sqrt());
            }
            for k in 1..=pairs {
                let angle = std::f64::consts::TAU * (j * k) as f64 / n as f64;
                let c = amp * (2.0 / n as f64).sqrt();
                row.push(c * angle.cos());
                row.push(c * angle.sin());
            }
            if use_alternating {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                row.push(sign * amp / (n as f64).sqrt());
            }
            row
        })
        .collect();
    let frame = Frame::new(rows)?;

    let bound = n as f64 / m as f64;
    let mut target = Matrix::identity(m);
    for i in 0..m {
        target.set(i, i, bound);
    }
    let residual = frame.frame_operator().max_abs_diff(&target);
    if residual > FUNTF_TIGHTNESS_TOL {
        return Err(Error::Numerical(format!(
            "harmonic frame missed tightness: residual {residual:.3e}"
        )));
    }
    Ok(frame)
}

/// The basis pair `x_j = e_j`, `f_j = e_1` with unit symbol; the multiplier
/// norm equals `√n` for every sign pattern while `F` alone has Bessel
/// bound `n`.
pub fn example_basis_pair(n: usize) -> Result<MultiplierSystem> {
    if n < 1 {
        return Err(Error::InvalidGenerator("basis pair needs n >= 1".into()));
    }
    let x = Frame::standard_basis(n);
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let f = Frame::new(vec![e1; n])?;
    MultiplierSystem::with_unit_symbol(x, f)
}

/// Frame with i.i.d. standard normal rows; a drawn zero row is redrawn.
pub fn random_gaussian(n: usize, m: usize, seed: u64) -> Result<Frame> {
    if m < 1 || n < m {
        return Err(Error::InvalidGenerator(format!(
            "a random frame needs n >= m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = CounterRng::new(seed);
    Frame::new((0..n).map(|_| nonzero_row(&mut rng, m)).collect())
}

fn nonzero_row(rng: &mut CounterRng, m: usize) -> Vec<f64> {
    loop {
        let row: Vec<f64> = (0..m).map(|_| rng.next_normal()).collect();
        if norm(&row) > 0.0 {
            return row;
        }
    }
}

/// Gaussian pair with `‖f_j‖` rescaled onto `‖x_j‖`, unit symbol.
pub fn random_equalnorm_pair(n: usize, m: usize, seed: u64) -> Result<MultiplierSystem> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidGenerator(format!(
            "equal-norm pair needs n, m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = CounterRng::new(seed);
    let x_rows: Vec<Vec<f64>> = (0..n).map(|_| nonzero_row(&mut rng, m)).collect();
    let f_rows: Vec<Vec<f64>> = x_rows
        .iter()
        .map(|xr| {
            let fr = nonzero_row(&mut rng, m);
            let s = norm(xr) / norm(&fr);
            fr.iter().map(|v| s * v).collect()
        })
        .collect();
    MultiplierSystem::with_unit_symbol(Frame::new(x_rows)?, Frame::new(f_rows)?)
}

/// Two independently rotated harmonic FUNTFs scaled by `scale`; all vector
/// norms match, both frames stay tight with frame bound `scale²·n/m`.
pub fn tight_equinorm_pair(n: usize, m: usize, seed: u64, scale: f64) -> Result<MultiplierSystem> {
    let base = harmonic_funtf(n, m)?;
    let mut rng = CounterRng::new(seed);
    let qx = random_rotation(m, &mut rng);
    let qf = random_rotation(m, &mut rng);
    let rotate = |q: &Matrix| -> Result<Frame> {
        Frame::new(
            base.vectors()
                .map(|v| q.mul_vec(v).iter().map(|x| scale * x).collect())
                .collect(),
        )
    };
    MultiplierSystem::with_unit_symbol(rotate(&qx)?, rotate(&qf)?)
}

/// Random orthogonal matrix from modified Gram-Schmidt on Gaussian columns.
fn random_rotation(m: usize, rng: &mut CounterRng) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    while cols.len() < m {
        let mut v = nonzero_row(rng, m);
        for c in &cols {
            let proj = dot(&v, c);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= proj * ci;
            }
        }
        let len = norm(&v);
        if len < 1e-8 {
            continue; // dependent draw, retry
        }
        for vi in v.iter_mut() {
            *vi /= len;
        }
        cols.push(v);
    }
    let mut q = Matrix::zeros(m, m);
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            q.set(i, j, *v);
        }
    }
    q
}

/// Replaces each pair `(x_j, f_j)` by `k_j` copies scaled by `k_j^{-1/2}`,
/// repeating the symbol entry. Both frame operators and the multiplier are
/// preserved; the unconditionality constant cannot increase.
pub fn replicate_rational(sys: &MultiplierSystem, k: &[usize]) -> Result<MultiplierSystem> {
    if k.len() != sys.len() {
        return Err(Error::DimensionMismatch(format!(
            "replication counts: got {}, system has {} vectors",
            k.len(),
            sys.len()
        )));
    }
    if k.contains(&0) {
        return Err(Error::Precondition(
            "replication counts must be at least 1".into(),
        ));
    }
    let mut x_rows = Vec::new();
    let mut f_rows = Vec::new();
    let mut symbol = Vec::new();
    for (j, &kj) in k.iter().enumerate() {
        let s = 1.0 / (kj as f64).sqrt();
        let xj: Vec<f64> = sys.x().vector(j).iter().map(|v| s * v).collect();
        let fj: Vec<f64> = sys.f().vector(j).iter().map(|v| s * v).collect();
        for _ in 0..kj {
            x_rows.push(xj.clone());
            f_rows.push(fj.clone());
            symbol.push(sys.symbol()[j]);
        }
    }
    MultiplierSystem::new(Frame::new(x_rows)?, Frame::new(f_rows)?, symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unconditionality::exact_constant;

    #[test]
    fn funtf_two_two_is_an_orthonormal_basis() {
        let f = harmonic_funtf(2, 2).unwrap();
        let s = f.frame_operator();
        assert!(s.max_abs_diff(&Matrix::identity(2)) < 1e-14);
        for j in 0..2 {
            assert!((f.vector_norm(j) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn funtf_three_two_is_mercedes_benz() {
        let f = harmonic_funtf(3, 2).unwrap();
        let summary = f.spectral_summary(1e-12).unwrap();
        assert!((summary.bessel - 1.5).abs() < 1e-12);
        assert!((summary.lower - 1.5).abs() < 1e-12);
        // pairwise angles of 120 degrees
        for i in 0..3 {
            for j in 0..i {
                let c = dot(f.vector(i), f.vector(j));
                assert!((c + 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn funtf_six_three_has_operator_two_i() {
        let f = harmonic_funtf(6, 3).unwrap();
        let mut target = Matrix::identity(3);
        for i in 0..3 {
            target.set(i, i, 2.0);
        }
        assert!(f.frame_operator().max_abs_diff(&target) < 1e-10);
    }

    #[test]
    fn funtf_rows_are_unit_norm_across_shapes() {
        for (n, m) in [
            (3, 2),
            (4, 4),
            (5, 3),
            (6, 3),
            (7, 7),
            (8, 5),
            (10, 4),
            (9, 9),
            (50, 7),
            (64, 64),
        ] {
            let f = harmonic_funtf(n, m).unwrap();
            for j in 0..n {
                assert!(
                    (f.vector_norm(j) - 1.0).abs() < 1e-12,
                    "row norm off for n={n}, m={m}"
                );
            }
            let b = n as f64 / m as f64;
            let s = f.frame_operator();
            for i in 0..m {
                for j in 0..m {
                    let want = if i == j { b } else { 0.0 };
                    assert!((s.get(i, j) - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn funtf_rejects_n_below_m() {
        assert!(matches!(
            harmonic_funtf(2, 3),
            Err(Error::InvalidGenerator(_))
        ));
    }

    #[test]
    fn basis_pair_edge_cases() {
        let sys = example_basis_pair(1).unwrap();
        assert_eq!(sys.x().vector(0), &[1.0]);
        assert_eq!(sys.f().vector(0), &[1.0]);

        let sys = example_basis_pair(4).unwrap();
        let c = exact_constant(&sys).unwrap().value;
        assert!((c - 2.0).abs() < 1e-10);
    }

    #[test]
    fn equalnorm_pair_matches_norms_and_is_deterministic() {
        let a = random_equalnorm_pair(6, 3, 42).unwrap();
        for j in 0..a.len() {
            let dx = a.x().vector_norm(j);
            let df = a.f().vector_norm(j);
            assert!((dx - df).abs() <= 1e-14 * dx.max(1.0));
        }
        let b = random_equalnorm_pair(6, 3, 42).unwrap();
        assert_eq!(a, b);
        let c = random_equalnorm_pair(6, 3, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn tight_pair_is_tight_and_norm_matched() {
        let sys = tight_equinorm_pair(6, 3, 9, 1.0).unwrap();
        for fr in [sys.x(), sys.f()] {
            let s = fr.spectral_summary(1e-12).unwrap();
            assert!(s.is_tight(1e-10));
            assert!((s.bessel - 2.0).abs() < 1e-10);
        }
        for j in 0..sys.len() {
            assert!((sys.x().vector_norm(j) - 1.0).abs() < 1e-12);
            assert!((sys.f().vector_norm(j) - 1.0).abs() < 1e-12);
        }
        // the two rotations differ
        assert_ne!(sys.x(), sys.f());
    }

    #[test]
    fn replicate_identity_under_unit_counts() {
        let sys = random_equalnorm_pair(4, 2, 3).unwrap();
        let same = replicate_rational(&sys, &[1, 1, 1, 1]).unwrap();
        assert_eq!(&same, &sys);
    }

    #[test]
    fn replicate_single_vector_four_ways() {
        let sys = MultiplierSystem::with_unit_symbol(
            Frame::new(vec![vec![2.0, 0.0]]).unwrap(),
            Frame::new(vec![vec![0.0, 2.0]]).unwrap(),
        )
        .unwrap();
        let rep = replicate_rational(&sys, &[4]).unwrap();
        assert_eq!(rep.len(), 4);
        assert!(
            rep.x()
                .frame_operator()
                .max_abs_diff(&sys.x().frame_operator())
                < 1e-14
        );
        assert!((rep.x().vector_norm(0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn replication_preserves_operators_and_constant() {
        let sys = random_equalnorm_pair(3, 2, 17).unwrap();
        let rep = replicate_rational(&sys, &[1, 2, 3]).unwrap();
        assert_eq!(rep.len(), 6);
        assert!(
            rep.x()
                .frame_operator()
                .max_abs_diff(&sys.x().frame_operator())
                < 1e-13
        );
        assert!(
            rep.f()
                .frame_operator()
                .max_abs_diff(&sys.f().frame_operator())
                < 1e-13
        );
        let c_orig = exact_constant(&sys).unwrap().value;
        let c_rep = exact_constant(&rep).unwrap().value;
        assert!(c_rep <= c_orig + 1e-10);
    }

    #[test]
    fn generator_spec_round_trips_and_dispatches() {
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"kind": "harmonic_funtf", "n": 6, "m": 3}"#).unwrap();
        assert_eq!(spec.kind, GeneratorKind::HarmonicFuntf);
        assert_eq!(spec.scale, 1.0);
        match generate(&spec).unwrap() {
            Generated::Frame(f) => assert_eq!((f.len(), f.dim()), (6, 3)),
            Generated::System(_) => panic!("expected a frame"),
        }
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"kind": "replicated", "n": 4, "m": 2, "seed": 8}"#).unwrap();
        match generate(&spec).unwrap() {
            Generated::System(sys) => assert!(sys.len() >= 4),
            Generated::Frame(_) => panic!("expected a system"),
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        let mut rng = CounterRng::new(5);
        let q = random_rotation(4, &mut rng);
        let should_be_identity = q.transpose().mul(&q);
        assert!(should_be_identity.max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }
}
