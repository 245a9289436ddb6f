//! Frames, multiplier systems, and spectral analysis of frame operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, norm, symmetric_eigen, Matrix};

/// Eigenvalues this far below zero (relative to `‖S‖_F`) are clipped to zero;
/// anything lower is reported as a numerical failure.
pub const PSD_CLIP_FACTOR: f64 = 1e-8;

/// A finite sequence of `n` vectors in `ℓ₂^m`, stored as the rows of its
/// analysis matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameSchema", into = "FrameSchema")]
pub struct Frame {
    analysis: Matrix,
}

/// Wire format: `{"m": .., "n": .., "vectors": [[..], ..]}` with vectors as rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct FrameSchema {
    m: usize,
    n: usize,
    vectors: Vec<Vec<f64>>,
}

impl TryFrom<FrameSchema> for Frame {
    type Error = Error;

    fn try_from(s: FrameSchema) -> Result<Self> {
        if s.vectors.len() != s.n {
            return Err(Error::DimensionMismatch(format!(
                "frame declares n={} but has {} vectors",
                s.n,
                s.vectors.len()
            )));
        }
        for (j, v) in s.vectors.iter().enumerate() {
            if v.len() != s.m {
                return Err(Error::DimensionMismatch(format!(
                    "frame declares m={} but vector {} has {} entries",
                    s.m,
                    j,
                    v.len()
                )));
            }
        }
        Frame::new(s.vectors)
    }
}

impl From<Frame> for FrameSchema {
    fn from(f: Frame) -> Self {
        FrameSchema {
            m: f.dim(),
            n: f.len(),
            vectors: (0..f.len()).map(|j| f.vector(j).to_vec()).collect(),
        }
    }
}

impl Frame {
    /// Builds a frame from its vectors. All vectors must share a dimension
    /// `m ≥ 1` and there must be at least one of them; entries must be finite.
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::DimensionMismatch(
                "a frame needs at least one vector".into(),
            ));
        }
        let m = vectors[0].len();
        if m == 0 {
            return Err(Error::DimensionMismatch(
                "frame vectors need at least one coordinate".into(),
            ));
        }
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "vector {} has dimension {}, expected {}",
                    j,
                    v.len(),
                    m
                )));
            }
            if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                return Err(Error::Precondition(format!(
                    "vector {j} contains non-finite entry {x}"
                )));
            }
        }
        Ok(Self {
            analysis: Matrix::from_rows(&vectors),
        })
    }

    /// Standard orthonormal basis of `ℓ₂^n`.
    pub fn standard_basis(n: usize) -> Self {
        let mut rows = vec![vec![0.0; n]; n];
        for (j, row) in rows.iter_mut().enumerate() {
            row[j] = 1.0;
        }
        Self::new(rows).expect("basis is well formed")
    }

    /// Number of vectors `n`.
    pub fn len(&self) -> usize {
        self.analysis.rows()
    }

    pub fn is_empty(&self) -> bool {
        false // n ≥ 1 by construction
    }

    /// Ambient dimension `m`.
    pub fn dim(&self) -> usize {
        self.analysis.cols()
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        self.analysis.row(j)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.len()).map(move |j| self.vector(j))
    }

    pub fn vector_norm(&self, j: usize) -> f64 {
        norm(self.vector(j))
    }

    /// The analysis operator as an `n×m` matrix: row `j` is vector `j`, so
    /// `U_X x = (⟨x, x_j⟩)_j` is the matrix-vector product.
    pub fn analysis_matrix(&self) -> &Matrix {
        &self.analysis
    }

    /// Frame operator `S = UᵀU = Σ_j x_j x_jᵀ` (symmetric PSD, `m×m`).
    pub fn frame_operator(&self) -> Matrix {
        self.analysis.gram()
    }

    /// Returns a copy with every vector scaled by `s`.
    pub fn scaled(&self, s: f64) -> Frame {
        let rows: Vec<Vec<f64>> = self
            .vectors()
            .map(|v| v.iter().map(|x| s * x).collect())
            .collect();
        Frame::new(rows).expect("scaling preserves shape")
    }

    /// Spectral analysis of the frame operator. `tol` bounds the accepted
    /// eigenpair residual relative to `‖S‖_F`.
    pub fn spectral_summary(&self, tol: f64) -> Result<SpectralSummary> {
        if tol <= 0.0 {
            return Err(Error::Precondition(format!(
                "spectral tolerance must be positive, got {tol}"
            )));
        }
        let s = self.frame_operator();
        let s_norm = s.frobenius_norm();
        let eig = symmetric_eigen(&s)?;

        // residual check per eigenpair
        for k in 0..eig.values.len() {
            let v = eig.eigenvector(k);
            let sv = s.mul_vec(&v);
            let resid: f64 = sv
                .iter()
                .zip(&v)
                .map(|(a, b)| {
                    let r = a - eig.values[k] * b;
                    r * r
                })
                .sum::<f64>()
                .sqrt();
            if resid > tol * s_norm.max(f64::MIN_POSITIVE) {
                return Err(Error::Numerical(format!(
                    "eigenpair {k} residual {resid:.3e} exceeds {:.3e}",
                    tol * s_norm
                )));
            }
        }

        let eigenvalues = clip_psd_eigenvalues(&eig.values, s_norm)?;
        let trace = s.trace();
        let bessel = eigenvalues[0];
        let lower = *eigenvalues.last().expect("m >= 1");
        let degenerate = trace <= 0.0;
        let beta = if degenerate {
            None
        } else {
            Some(bessel * self.dim() as f64 / trace)
        };
        Ok(SpectralSummary {
            eigenvalues,
            trace,
            bessel,
            lower,
            beta,
            degenerate,
        })
    }
}

/// Clips small negative eigenvalues of a PSD matrix to zero. An eigenvalue
/// below `-PSD_CLIP_FACTOR·‖S‖_F` means the solver broke down.
pub(crate) fn clip_psd_eigenvalues(values: &[f64], s_norm: f64) -> Result<Vec<f64>> {
    let floor = -PSD_CLIP_FACTOR * s_norm;
    values
        .iter()
        .map(|&v| {
            if v >= 0.0 {
                Ok(v)
            } else if v >= floor {
                Ok(0.0)
            } else {
                Err(Error::Numerical(format!(
                    "eigenvalue {v:.6e} of a PSD operator is below the clip floor {floor:.6e}"
                )))
            }
        })
        .collect()
}

/// Spectrum of a frame operator together with the derived frame bounds.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    /// Eigenvalues sorted descending, clipped at zero.
    pub eigenvalues: Vec<f64>,
    /// Trace of the frame operator (= Σ‖x_j‖²).
    pub trace: f64,
    /// Optimal Bessel bound `λ₁`.
    pub bessel: f64,
    /// Optimal lower frame bound `λ_m` (zero iff rank deficient).
    pub lower: f64,
    /// Eigenvalue flatness `λ₁·m / Σλ`, undefined for the all-zero frame.
    pub beta: Option<f64>,
    /// True iff the frame operator vanishes (all vectors zero).
    pub degenerate: bool,
}

impl SpectralSummary {
    /// Condition number `λ₁/λ_m`, infinite when rank deficient.
    pub fn condition_number(&self) -> f64 {
        if self.lower > 0.0 {
            self.bessel / self.lower
        } else {
            f64::INFINITY
        }
    }

    /// True iff the optimal frame bounds agree to the given relative tolerance.
    pub fn is_tight(&self, rel_tol: f64) -> bool {
        !self.degenerate && self.bessel - self.lower <= rel_tol * self.bessel.max(self.lower)
    }
}

/// A vector of unimodular signs `(±1)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Decodes `n` signs from the low bits of `bits`: bit `k` set means
    /// coordinate `k` is `-1`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Self(
            (0..n)
                .map(|k| if bits >> k & 1 == 0 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize) -> f64 {
        f64::from(self.0[j])
    }

    pub fn flip(&mut self, j: usize) {
        self.0[j] = -self.0[j];
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|&s| f64::from(s))
    }
}

impl TryFrom<Vec<i8>> for SignPattern {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        if let Some(bad) = v.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::Precondition(format!(
                "sign entries must be +1 or -1, got {bad}"
            )));
        }
        Ok(Self(v))
    }
}

impl From<SignPattern> for Vec<i8> {
    fn from(p: SignPattern) -> Self {
        p.0
    }
}

/// A pair of frames `(X, F)` with a real symbol `m`, representing the frame
/// multiplier `x ↦ Σ_j m_j ⟨x, f_j⟩ x_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemSchema", into = "SystemSchema")]
pub struct MultiplierSystem {
    x: Frame,
    f: Frame,
    symbol: Vec<f64>,
}

/// Wire format: `{"x": Frame, "f": Frame, "symbol": [..]}`. A missing symbol
/// means all ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SystemSchema {
    x: Frame,
    f: Frame,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol: Option<Vec<f64>>,
}

impl TryFrom<SystemSchema> for MultiplierSystem {
    type Error = Error;

    fn try_from(s: SystemSchema) -> Result<Self> {
        match s.symbol {
            Some(symbol) => MultiplierSystem::new(s.x, s.f, symbol),
            None => MultiplierSystem::with_unit_symbol(s.x, s.f),
        }
    }
}

impl From<MultiplierSystem> for SystemSchema {
    fn from(sys: MultiplierSystem) -> Self {
        let unit = sys.symbol.iter().all(|&m| m == 1.0);
        SystemSchema {
            x: sys.x,
            f: sys.f,
            symbol: if unit { None } else { Some(sys.symbol) },
        }
    }
}

impl MultiplierSystem {
    pub fn new(x: Frame, f: Frame, symbol: Vec<f64>) -> Result<Self> {
        if x.len() != f.len() || x.len() != symbol.len() {
            return Err(Error::DimensionMismatch(format!(
                "system needs matching lengths: |X|={}, |F|={}, |symbol|={}",
                x.len(),
                f.len(),
                symbol.len()
            )));
        }
        if x.dim() != f.dim() {
            return Err(Error::DimensionMismatch(format!(
                "X lives in dimension {} but F in {}",
                x.dim(),
                f.dim()
            )));
        }
        if let Some(m) = symbol.iter().find(|m| !m.is_finite()) {
            return Err(Error::Precondition(format!(
                "symbol contains non-finite entry {m}"
            )));
        }
        Ok(Self { x, f, symbol })
    }

    pub fn with_unit_symbol(x: Frame, f: Frame) -> Result<Self> {
        let n = x.len();
        Self::new(x, f, vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn x(&self) -> &Frame {
        &self.x
    }

    pub fn f(&self) -> &Frame {
        &self.f
    }

    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    pub fn has_unit_symbol(&self, tol: f64) -> bool {
        self.symbol.iter().all(|&m| (m - 1.0).abs() <= tol)
    }

    /// The sign-perturbed multiplier as an `m×m` matrix
    /// `Σ_j ε_j m_j x_j f_jᵀ`.
    pub fn multiplier_matrix(&self, signs: &SignPattern) -> Matrix {
        assert_eq!(signs.len(), self.len(), "sign pattern length mismatch");
        let m = self.dim();
        let mut t = Matrix::zeros(m, m);
        for j in 0..self.len() {
            t.add_scaled_outer(
                signs.get(j) * self.symbol[j],
                self.x.vector(j),
                self.f.vector(j),
            );
        }
        t
    }
}

/// Applies the sign-perturbed multiplier: `Σ_j ε_j m_j ⟨x, f_j⟩ x_j`.
pub fn multiplier_apply(
    sys: &MultiplierSystem,
    signs: &SignPattern,
    x: &[f64],
) -> Result<Vec<f64>> {
    if x.len() != sys.dim() {
        return Err(Error::DimensionMismatch(format!(
            "input vector has dimension {}, system lives in {}",
            x.len(),
            sys.dim()
        )));
    }
    if signs.len() != sys.len() {
        return Err(Error::DimensionMismatch(format!(
            "sign pattern has length {}, system has {} vectors",
            signs.len(),
            sys.len()
        )));
    }
    let mut out = vec![0.0; sys.dim()];
    for j in 0..sys.len() {
        let c = signs.get(j) * sys.symbol()[j] * linalg::dot(x, sys.f().vector(j));
        if c == 0.0 {
            continue;
        }
        for (o, xi) in out.iter_mut().zip(sys.x().vector(j)) {
            *o += c * xi;
        }
    }
    Ok(out)
}
