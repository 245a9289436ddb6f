//! Weight splittings of a frame multiplier.
//!
//! A split chooses positive weights `(d_j)` so that `(d_j x_j)` and
//! `(d_j⁻¹ m_j f_j)` are both Bessel; the objective is the larger of the two
//! optimal Bessel bounds. Three routes are provided: the closed-form
//! parallelogram split `d_j = ‖x_j‖^{-1/2}‖f_j‖^{1/2}`, the all-ones baseline,
//! and a projected subgradient optimizer for the convex min-max objective
//! `g(t) = max{λ₁(Σ t_j x_j x_jᵀ), λ₁(Σ t_j⁻¹ m_j² f_j f_jᵀ)}` in `t = d²`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::MultiplierSystem;
use crate::linalg::{norm, symmetric_eigen, Matrix};

/// Iterations between stall checks of the optimizer.
const STALL_WINDOW: usize = 500;

/// Coordinate floor for the projected subgradient step (in warm-start units).
const COORDINATE_FLOOR: f64 = 1e-12;

/// Relative gap between the two branches below which their subgradients are
/// averaged.
const TIE_THRESHOLD: f64 = 1e-12;

pub const DEFAULT_SPLIT_TOL: f64 = 1e-9;
pub const DEFAULT_SPLIT_MAX_ITERS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMethod {
    Explicit,
    Optimal,
    Unit,
}

/// A weight sequence with the Bessel bounds it produces.
///
/// `bessel_x` is the optimal Bessel bound of `(d_j x_j)` and `bessel_f` that
/// of `(d_j⁻¹ m_j f_j)`, both over the pairs retained after dropping zero
/// vectors. `gap` is the relative improvement of the best objective over the
/// optimizer's final iteration window (zero for the closed-form methods); a
/// value above the requested tolerance means the subgradient search hit its
/// iteration budget before stalling.
#[derive(Debug, Clone, Serialize)]
pub struct SplitResult {
    pub d: Vec<f64>,
    pub bessel_x: f64,
    pub bessel_f: f64,
    pub objective: f64,
    pub method: SplitMethod,
    pub gap: f64,
    #[serde(skip)]
    pub converged: bool,
}

/// The system with the symbol absorbed into `F` and zero pairs dropped.
struct ReducedSystem {
    x: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
}

impl ReducedSystem {
    fn from_system(sys: &MultiplierSystem) -> Result<Self> {
        let mut x = Vec::new();
        let mut f = Vec::new();
        for j in 0..sys.len() {
            let fj: Vec<f64> = sys
                .f()
                .vector(j)
                .iter()
                .map(|v| sys.symbol()[j] * v)
                .collect();
            if norm(sys.x().vector(j)) == 0.0 || norm(&fj) == 0.0 {
                continue;
            }
            x.push(sys.x().vector(j).to_vec());
            f.push(fj);
        }
        if x.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(Self { x, f })
    }

    fn len(&self) -> usize {
        self.x.len()
    }

    fn dim(&self) -> usize {
        self.x[0].len()
    }

    /// Explicit parallelogram weights squared: `t_j = ‖x_j‖⁻¹‖f_j‖`.
    fn explicit_weights_squared(&self) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.f)
            .map(|(x, f)| norm(f) / norm(x))
            .collect()
    }

    /// `Σ w_j v_j v_jᵀ` over one side.
    fn weighted_operator(
        rows: &[Vec<f64>],
        weights: impl Iterator<Item = f64>,
        m: usize,
    ) -> Matrix {
        let mut s = Matrix::zeros(m, m);
        for (row, w) in rows.iter().zip(weights) {
            s.add_scaled_outer(w, row, row);
        }
        s
    }

    /// Top eigenvalue and unit eigenvector of both weighted frame operators
    /// at `t`.
    fn branches(&self, t: &[f64]) -> Result<BranchEval> {
        let m = self.dim();
        let sx = Self::weighted_operator(&self.x, t.iter().copied(), m);
        let sf = Self::weighted_operator(&self.f, t.iter().map(|tj| 1.0 / tj), m);
        let ex = symmetric_eigen(&sx)?;
        let ef = symmetric_eigen(&sf)?;
        Ok(BranchEval {
            lambda_x: ex.values[0].max(0.0),
            lambda_f: ef.values[0].max(0.0),
            top_x: ex.eigenvector(0),
            top_f: ef.eigenvector(0),
        })
    }
}

struct BranchEval {
    lambda_x: f64,
    lambda_f: f64,
    top_x: Vec<f64>,
    top_f: Vec<f64>,
}

impl BranchEval {
    fn objective(&self) -> f64 {
        self.lambda_x.max(self.lambda_f)
    }

    /// Geometric mean of the branches: the objective after the optimal
    /// uniform rescaling `t ← t·sqrt(λ_f/λ_x)`, available without another
    /// eigensolve because `λ_x` is linear and `λ_f` inverse-linear in scale.
    fn balanced_objective(&self) -> f64 {
        (self.lambda_x * self.lambda_f).sqrt()
    }

    fn balance_factor(&self) -> f64 {
        (self.lambda_f / self.lambda_x).sqrt()
    }
}

/// The closed-form parallelogram split `d_j = ‖x_j‖^{-1/2}‖f_j‖^{1/2}`
/// (symbol absorbed into `F` first, zero pairs dropped).
pub fn explicit_split(sys: &MultiplierSystem) -> Result<SplitResult> {
    let reduced = ReducedSystem::from_system(sys)?;
    let t = reduced.explicit_weights_squared();
    let eval = reduced.branches(&t)?;
    Ok(SplitResult {
        d: t.iter().map(|tj| tj.sqrt()).collect(),
        bessel_x: eval.lambda_x,
        bessel_f: eval.lambda_f,
        objective: eval.objective(),
        method: SplitMethod::Explicit,
        gap: 0.0,
        converged: true,
    })
}

/// All-ones weights: the raw Bessel bounds of `(x_j)` and `(m_j f_j)`. This
/// is the optimal choice for pairs of equal-norm tight frames.
pub fn unit_split(sys: &MultiplierSystem) -> Result<SplitResult> {
    let n = sys.len();
    let m = sys.dim();
    let sx = ReducedSystem::weighted_operator(
        &(0..n)
            .map(|j| sys.x().vector(j).to_vec())
            .collect::<Vec<_>>(),
        std::iter::repeat_n(1.0, n),
        m,
    );
    let sf = ReducedSystem::weighted_operator(
        &(0..n)
            .map(|j| sys.f().vector(j).to_vec())
            .collect::<Vec<_>>(),
        sys.symbol().iter().map(|mj| mj * mj),
        m,
    );
    let bessel_x = symmetric_eigen(&sx)?.values[0].max(0.0);
    let bessel_f = symmetric_eigen(&sf)?.values[0].max(0.0);
    Ok(SplitResult {
        d: vec![1.0; n],
        bessel_x,
        bessel_f,
        objective: bessel_x.max(bessel_f),
        method: SplitMethod::Unit,
        gap: 0.0,
        converged: true,
    })
}

/// Minimizes `max{λ₁(S_{dX}), λ₁(S_{d⁻¹F})}` over positive weights by
/// projected normalized-subgradient descent on `t = d²`.
///
/// The iteration runs in warm-start units `t = u ∘ t₀` with `t₀` from the
/// explicit split, which makes the whole trajectory invariant under the
/// rescaling `x_j ← s·x_j, f_j ← s⁻¹·f_j`. Each step moves a length `r₀/√k`
/// along the unit subgradient direction of the active branch, with `r₀` set
/// by the starting point; every iterate also donates a freely rebalanced
/// candidate (the uniform scaling equalizing the two branches costs no extra
/// eigensolve), and the best candidate seen is returned. The search stops
/// early once the best objective improves by less than `tol` relatively over
/// a window of iterations; exhausting `max_iters` first is reported through
/// `gap` and the convergence flag rather than an error.
pub fn optimal_split(sys: &MultiplierSystem, tol: f64, max_iters: usize) -> Result<SplitResult> {
    if tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "optimizer tolerance must be positive, got {tol}"
        )));
    }
    if max_iters == 0 {
        return Err(Error::Precondition("max_iters must be at least 1".into()));
    }
    let reduced = ReducedSystem::from_system(sys)?;
    let n = reduced.len();
    let t0 = reduced.explicit_weights_squared();

    let scaled = |u: &[f64]| -> Vec<f64> { u.iter().zip(&t0).map(|(uj, tj)| uj * tj).collect() };

    // subgradient of the active branch with respect to u
    let subgradient = |u: &[f64], eval: &BranchEval| -> Vec<f64> {
        let spread = (eval.lambda_x - eval.lambda_f).abs();
        let tie = spread <= TIE_THRESHOLD * eval.objective().max(1.0);
        let x_active = eval.lambda_x >= eval.lambda_f;
        (0..n)
            .map(|j| {
                let gx = {
                    let ip = crate::linalg::dot(&eval.top_x, &reduced.x[j]);
                    t0[j] * ip * ip
                };
                let gf = {
                    let ip = crate::linalg::dot(&eval.top_f, &reduced.f[j]);
                    -ip * ip / (u[j] * u[j] * t0[j])
                };
                if tie {
                    0.5 * (gx + gf)
                } else if x_active {
                    gx
                } else {
                    gf
                }
            })
            .collect()
    };

    let eval0 = reduced.branches(&t0)?;
    let mut best_objective = eval0.balanced_objective();
    let balance0 = eval0.balance_factor();
    let mut best_u: Vec<f64> = vec![balance0; n];

    // step length scale: the starting point's coordinate size keeps the
    // schedule invariant under input rescaling
    let r0 = balance0.max(1.0 / balance0);

    let mut u = best_u.clone();
    let mut eval = reduced.branches(&scaled(&u))?;
    let mut grad = subgradient(&u, &eval);
    let mut window_best = best_objective;
    let mut gap = f64::INFINITY;
    let mut converged = false;
    for k in 1..=max_iters {
        let grad_norm = norm(&grad);
        if grad_norm == 0.0 {
            gap = 0.0;
            converged = true;
            break;
        }
        let step = r0 / (k as f64).sqrt() / grad_norm;
        for j in 0..n {
            u[j] = (u[j] - step * grad[j]).max(COORDINATE_FLOOR);
        }
        eval = reduced.branches(&scaled(&u))?;
        let balanced = eval.balanced_objective();
        if balanced < best_objective {
            best_objective = balanced;
            let s = eval.balance_factor();
            best_u = u.iter().map(|uj| uj * s).collect();
        }
        grad = subgradient(&u, &eval);

        if k % STALL_WINDOW == 0 {
            gap = (window_best - best_objective) / best_objective.max(f64::MIN_POSITIVE);
            if gap <= tol {
                converged = true;
                break;
            }
            window_best = best_objective;
        }
    }
    if gap.is_infinite() {
        gap = (window_best - best_objective) / best_objective.max(f64::MIN_POSITIVE);
        converged = gap <= tol;
    }
    finish(&reduced, &best_u, &t0, gap, converged)
}

fn finish(
    reduced: &ReducedSystem,
    best_u: &[f64],
    t0: &[f64],
    gap: f64,
    converged: bool,
) -> Result<SplitResult> {
    let t: Vec<f64> = best_u.iter().zip(t0).map(|(uj, tj)| uj * tj).collect();
    let eval = reduced.branches(&t)?;
    Ok(SplitResult {
        d: t.iter().map(|tj| tj.sqrt()).collect(),
        bessel_x: eval.lambda_x,
        bessel_f: eval.lambda_f,
        objective: eval.objective(),
        method: SplitMethod::Optimal,
        gap,
        converged,
    })
}

/// Lower bound from the trace identity: for pairwise equal norms and unit
/// symbol, every split's objective is at least the better lower frame bound
/// `A = max{λ_m(S_X), λ_m(S_F)}`.
pub fn trace_lower_bound(sys: &MultiplierSystem) -> Result<f64> {
    if !sys.has_unit_symbol(1e-12) {
        return Err(Error::Precondition(
            "trace lower bound needs a unit symbol".into(),
        ));
    }
    for j in 0..sys.len() {
        let nx = sys.x().vector_norm(j);
        let nf = sys.f().vector_norm(j);
        if (nx - nf).abs() > 1e-9 * nx.max(nf).max(f64::MIN_POSITIVE) {
            return Err(Error::Precondition(format!(
                "equal-norm hypothesis violated at index {j}: ‖x‖={nx}, ‖f‖={nf}"
            )));
        }
    }
    let lower_x = sys.x().spectral_summary(1e-10)?.lower;
    let lower_f = sys.f().spectral_summary(1e-10)?.lower;
    let a = lower_x.max(lower_f);
    if a <= 0.0 {
        return Err(Error::Precondition(
            "trace lower bound needs X or F to be a frame (positive lower bound)".into(),
        ));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::generators;
    use crate::rng::CounterRng;
    use crate::unconditionality::exact_constant;

    #[test]
    fn explicit_split_on_basis_pair() {
        let sys = generators::example_basis_pair(4).unwrap();
        let r = explicit_split(&sys).unwrap();
        assert_eq!(r.d, vec![1.0; 4]);
        assert!((r.bessel_x - 1.0).abs() < 1e-12);
        assert!((r.bessel_f - 4.0).abs() < 1e-12);
        assert_eq!(r.objective, r.bessel_f);
    }

    #[test]
    fn explicit_split_is_symmetric_when_frames_coincide() {
        let f = generators::random_gaussian(5, 3, 2).unwrap();
        let sys = MultiplierSystem::with_unit_symbol(f.clone(), f).unwrap();
        let r = explicit_split(&sys).unwrap();
        for dj in &r.d {
            assert!((dj - 1.0).abs() < 1e-12);
        }
        assert!((r.bessel_x - r.bessel_f).abs() < 1e-12 * r.bessel_x);
    }

    #[test]
    fn explicit_split_drops_zero_pairs_and_rejects_empty() {
        let x = Frame::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let f = Frame::new(vec![vec![0.0, 2.0], vec![1.0, 1.0]]).unwrap();
        let sys = MultiplierSystem::with_unit_symbol(x, f).unwrap();
        let r = explicit_split(&sys).unwrap();
        assert_eq!(r.d.len(), 1);

        let zero = Frame::new(vec![vec![0.0, 0.0]]).unwrap();
        let all_zero = MultiplierSystem::with_unit_symbol(zero.clone(), zero).unwrap();
        assert!(matches!(explicit_split(&all_zero), Err(Error::EmptySystem)));
    }

    #[test]
    fn explicit_split_equalizes_weighted_norms() {
        let sys = {
            let x = generators::random_gaussian(6, 3, 31).unwrap();
            let f = generators::random_gaussian(6, 3, 32).unwrap();
            MultiplierSystem::with_unit_symbol(x, f).unwrap()
        };
        let r = explicit_split(&sys).unwrap();
        for j in 0..sys.len() {
            let nx = sys.x().vector_norm(j) * r.d[j];
            let nf = sys.f().vector_norm(j) / r.d[j];
            let target = (sys.x().vector_norm(j) * sys.f().vector_norm(j)).sqrt();
            assert!((nx - nf).abs() < 1e-10 * target);
            assert!((nx - target).abs() < 1e-10 * target);
        }
    }

    #[test]
    fn unit_split_reports_raw_bounds() {
        let sys = generators::example_basis_pair(9).unwrap();
        let r = unit_split(&sys).unwrap();
        assert!((r.objective - 9.0).abs() < 1e-12);
        assert!((r.bessel_x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_split_on_basis_pair_reaches_sqrt_n() {
        for n in [2usize, 4, 8] {
            let sys = generators::example_basis_pair(n).unwrap();
            let r = optimal_split(&sys, 1e-9, 2000).unwrap();
            let want = (n as f64).sqrt();
            assert!(
                (r.objective - want).abs() < 1e-3,
                "n={n}: objective {} vs {want}",
                r.objective
            );
            // the optimal weights approach n^{1/4}
            for dj in &r.d {
                assert!((dj - want.sqrt()).abs() < 0.05, "d {dj}");
            }
        }
    }

    #[test]
    fn optimal_split_on_orthonormal_pair_is_unit() {
        let basis = Frame::standard_basis(3);
        let sys = MultiplierSystem::with_unit_symbol(basis.clone(), basis).unwrap();
        let r = optimal_split(&sys, 1e-9, 500).unwrap();
        assert!((r.objective - 1.0).abs() < 1e-9);
        for dj in &r.d {
            assert!((dj - 1.0).abs() < 1e-6);
        }
        assert!(r.converged);
    }

    #[test]
    fn optimal_split_never_beats_trace_bound_and_meets_it_for_tight_pairs() {
        let sys = generators::tight_equinorm_pair(6, 3, 4, 1.0).unwrap();
        let a = trace_lower_bound(&sys).unwrap();
        assert!((a - 2.0).abs() < 1e-10);
        let r = optimal_split(&sys, 1e-8, 1000).unwrap();
        assert!(r.objective >= a - 1e-8);
        assert!((r.objective - 2.0).abs() < 1e-4);
    }

    #[test]
    fn unit_split_dominates_optimal_split() {
        for seed in 1..=5u64 {
            let sys = generators::random_equalnorm_pair(5, 3, seed).unwrap();
            let unit = unit_split(&sys).unwrap();
            let opt = optimal_split(&sys, 1e-6, 800).unwrap();
            assert!(unit.objective >= opt.objective - 1e-6 * opt.objective);
        }
    }

    #[test]
    fn trace_bound_examples_and_errors() {
        let basis = Frame::standard_basis(4);
        let onb = MultiplierSystem::with_unit_symbol(basis.clone(), basis).unwrap();
        assert!((trace_lower_bound(&onb).unwrap() - 1.0).abs() < 1e-12);

        let unequal = MultiplierSystem::with_unit_symbol(
            Frame::new(vec![vec![2.0, 0.0]]).unwrap(),
            Frame::new(vec![vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            trace_lower_bound(&unequal),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn scale_covariance_of_optimal_split() {
        let sys = {
            let x = generators::random_gaussian(5, 3, 8).unwrap();
            let f = generators::random_gaussian(5, 3, 9).unwrap();
            MultiplierSystem::with_unit_symbol(x, f).unwrap()
        };
        let r1 = optimal_split(&sys, 1e-7, 600).unwrap();
        for s in [0.25, 3.0, 40.0] {
            let scaled =
                MultiplierSystem::with_unit_symbol(sys.x().scaled(s), sys.f().scaled(1.0 / s))
                    .unwrap();
            let r2 = optimal_split(&scaled, 1e-7, 600).unwrap();
            assert!(
                (r1.objective - r2.objective).abs() <= 1e-8 * r1.objective,
                "s={s}: {} vs {}",
                r1.objective,
                r2.objective
            );
        }
    }

    #[test]
    fn objective_is_convex_along_segments() {
        let sys = {
            let x = generators::random_gaussian(4, 2, 21).unwrap();
            let f = generators::random_gaussian(4, 2, 22).unwrap();
            MultiplierSystem::with_unit_symbol(x, f).unwrap()
        };
        let reduced = ReducedSystem::from_system(&sys).unwrap();
        let g = |t: &[f64]| reduced.branches(t).unwrap().objective();
        let mut rng = CounterRng::new(77);
        for _ in 0..50 {
            let t1: Vec<f64> = (0..4).map(|_| 0.1 + 5.0 * rng.next_f64()).collect();
            let t2: Vec<f64> = (0..4).map(|_| 0.1 + 5.0 * rng.next_f64()).collect();
            let theta = rng.next_f64();
            let mid: Vec<f64> = t1
                .iter()
                .zip(&t2)
                .map(|(a, b)| theta * a + (1.0 - theta) * b)
                .collect();
            assert!(g(&mid) <= theta * g(&t1) + (1.0 - theta) * g(&t2) + 1e-10);
        }
    }

    #[test]
    fn split_of_basis_pair_shows_csquared_scaling() {
        // unit objective / exact constant = sqrt(n): the explicit split pays
        // C² while the optimizer recovers C
        let n = 9;
        let sys = generators::example_basis_pair(n).unwrap();
        let c = exact_constant(&sys).unwrap().value;
        let unit = unit_split(&sys).unwrap();
        assert!((unit.objective / c - (n as f64).sqrt()).abs() < 1e-9);
        let opt = optimal_split(&sys, 1e-9, 2000).unwrap();
        assert!((opt.objective - c).abs() < 1e-3);
    }

    #[test]
    fn split_serializes_contracted_fields() {
        let sys = generators::example_basis_pair(3).unwrap();
        let r = explicit_split(&sys).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        let obj = json.as_object().unwrap();
        for key in ["d", "bessel_x", "bessel_f", "objective", "method", "gap"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj["method"], "explicit");
        assert!(!obj.contains_key("converged"));
    }
}
