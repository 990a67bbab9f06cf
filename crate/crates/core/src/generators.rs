//! Seeded instance generators with known properties.
//!
//! All generators are pure functions of their arguments: the same seed gives
//! bitwise-identical systems on every run and under every [`Execution`]
//! mode.
//!
//! [`Execution`]: crate::exec::Execution

use crate::bigframe::BiGFrameSystem;
use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::gframe::{g_frame_operator_with, GFrameSystem};
use crate::kernel::{Matrix, C64, DEFAULT_TOL, PD_RATIO};
use crate::rng::GaussianSource;

/// Redraw a random g-frame whose `λ_min(S_Λ) <= FULL_RANK_RATIO · λ_max`.
pub const FULL_RANK_RATIO: f64 = 1e-10;
pub const MAX_ATTEMPTS: usize = 16;

const SHAPE_STREAM: u64 = 0xD1_5EA5E;
const TARGET_STREAM: u64 = 0x7A_26E7;
const NEGATIVE_STREAM: u64 = 0x4E_6A71;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    RandomGFrame,
    PrescribedOperator,
    RankDeficient,
    NonHermitianPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub dim: usize,
    pub block_dims: Vec<usize>,
    pub seed: u64,
    pub kind: GenKind,
}

impl GenSpec {
    pub fn new(dim: usize, block_dims: Vec<usize>, seed: u64, kind: GenKind) -> Self {
        GenSpec {
            dim,
            block_dims,
            seed,
            kind,
        }
    }

    pub fn total_rows(&self) -> usize {
        self.block_dims.iter().sum()
    }

    fn validate(&self, allowed: &[GenKind]) -> Result<()> {
        if self.dim == 0 {
            return Err(FrameError::InvalidSpec("dim must be at least 1".into()));
        }
        if self.block_dims.is_empty() || self.block_dims.contains(&0) {
            return Err(FrameError::InvalidSpec(
                "block dims must be nonempty and positive".into(),
            ));
        }
        if !allowed.contains(&self.kind) {
            return Err(FrameError::InvalidSpec(format!(
                "kind {:?} not valid here",
                self.kind
            )));
        }
        Ok(())
    }

    fn require_cover(&self) -> Result<()> {
        if self.total_rows() < self.dim {
            return Err(FrameError::InvalidSpec(format!(
                "sum of block dims {} is below dim {}",
                self.total_rows(),
                self.dim
            )));
        }
        Ok(())
    }
}

fn gaussian_matrix(rng: &mut GaussianSource, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| rng.complex_normal()).collect();
    Matrix::from_row_major(rows, cols, entries).expect("finite entries")
}

fn draw_blocks(dim: usize, dims: &[usize], rng: &mut GaussianSource) -> GFrameSystem {
    let blocks = dims.iter().map(|&m| gaussian_matrix(rng, m, dim)).collect();
    GFrameSystem::new(dim, blocks).expect("valid shape")
}

/// Draws Gaussian blocks, redrawing rank-deficient covers.
fn draw_g_frame(dim: usize, dims: &[usize], seed: u64) -> Result<GFrameSystem> {
    let covers = dims.iter().sum::<usize>() >= dim;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = GaussianSource::stream(seed, attempt as u64);
        let sys = draw_blocks(dim, dims, &mut rng);
        if !covers {
            return Ok(sys);
        }
        let eig = g_frame_operator_with(&sys, Execution::Sequential).eig_hermitian()?;
        if eig.min() > FULL_RANK_RATIO * eig.max() {
            return Ok(sys);
        }
    }
    Err(FrameError::RetriesExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

/// Blocks with independent standard complex Gaussian entries.
pub fn gen_g_frame(spec: &GenSpec) -> Result<GFrameSystem> {
    spec.validate(&[GenKind::RandomGFrame])?;
    draw_g_frame(spec.dim, &spec.block_dims, spec.seed)
}

fn check_target(target: &Matrix, dim: usize) -> Result<()> {
    if !target.is_square() || target.rows() != dim {
        return Err(FrameError::ShapeMismatch(format!(
            "target operator is {}x{}, expected {dim}x{dim}",
            target.rows(),
            target.cols()
        )));
    }
    let eig = target.eig_hermitian()?;
    if eig.max() <= 0.0 || eig.min() <= PD_RATIO * eig.max() {
        return Err(FrameError::NotPositiveDefinite {
            lambda_min: eig.min(),
        });
    }
    Ok(())
}

/// A pair with `S_{Λ,Γ} = target`: random `Λ`, then
/// `Γ_j = Λ_j S_Λ⁻¹ P`, so `Σ Γ_j* Λ_j = P S_Λ⁻¹ S_Λ = P`.
pub fn gen_bi_g_frame(spec: &GenSpec, target: &Matrix) -> Result<BiGFrameSystem> {
    spec.validate(&[GenKind::PrescribedOperator])?;
    spec.require_cover()?;
    check_target(target, spec.dim)?;
    let lambda = draw_g_frame(spec.dim, &spec.block_dims, spec.seed)?;
    let s_lambda = g_frame_operator_with(&lambda, Execution::Sequential);
    let weight = s_lambda.solve_pd(target)?;
    let gamma = lambda.right_multiply(&weight)?;
    BiGFrameSystem::new(lambda, gamma)
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
fn random_unitary(dim: usize, rng: &mut GaussianSource) -> Matrix {
    let g = gaussian_matrix(rng, dim, dim);
    Matrix::from_inner(g.as_inner().clone().qr().q())
}

/// Hermitian positive definite `Q diag(λ) Q*` with eigenvalues drawn
/// uniformly from `[lo, hi]`.
pub fn random_pd_target(dim: usize, seed: u64, lo: f64, hi: f64) -> Matrix {
    assert!(dim > 0 && 0.0 < lo && lo <= hi, "invalid target spectrum");
    let mut rng = GaussianSource::stream(seed, TARGET_STREAM);
    let q = random_unitary(dim, &mut rng);
    let eigs: Vec<f64> = (0..dim).map(|_| lo + (hi - lo) * rng.uniform()).collect();
    let p = q
        .mul(&Matrix::from_diagonal(&eigs))
        .and_then(|m| m.mul(&q.adjoint()));
    p.expect("square").hermitian_part().expect("square")
}

/// Pairs that are not bi-g-frames.
///
/// * `RankDeficient`: `Λ_j = G_j D Q*` with `Q` unitary and
///   `D = diag(1, …, 1, 0)`, and `Γ_j = w_j Λ_j` with `w_j ∈ [1/2, 2]`, so
///   `S_{Λ,Γ}` is Hermitian PSD and annihilates `Q e_n`. For `n = 1` every
///   block is exactly zero.
/// * `NonHermitianPair`: `S_{Λ,Γ} = P + Z` with `P` Hermitian PD and `Z`
///   skew-Hermitian, `‖Z‖_F = ‖P‖_F`; requires `Σ m_j ≥ n`.
pub fn gen_negative(spec: &GenSpec) -> Result<BiGFrameSystem> {
    spec.validate(&[GenKind::RankDeficient, GenKind::NonHermitianPair])?;
    let n = spec.dim;
    let mut rng = GaussianSource::stream(spec.seed, NEGATIVE_STREAM);
    match spec.kind {
        GenKind::RankDeficient => {
            // D Q* with an exactly zero last row: every block kills Q e_n.
            let q = random_unitary(n, &mut rng);
            let mut diag = vec![1.0; n];
            diag[n - 1] = 0.0;
            let compress = Matrix::from_diagonal(&diag).mul(&q.adjoint())?;
            let lambda = draw_blocks(n, &spec.block_dims, &mut rng).right_multiply(&compress)?;
            let gamma_blocks = lambda
                .blocks()
                .iter()
                .map(|b| b.scale(C64::new(0.5 + 1.5 * rng.uniform(), 0.0)))
                .collect();
            BiGFrameSystem::new(lambda, GFrameSystem::new(n, gamma_blocks)?)
        }
        GenKind::NonHermitianPair => {
            spec.require_cover()?;
            let p = random_pd_target(n, spec.seed, 1.0, 4.0);
            let g = gaussian_matrix(&mut rng, n, n);
            let mut z = g.sub(&g.adjoint())?.scale(C64::new(0.5, 0.0));
            if z.frobenius_norm() == 0.0 {
                z = Matrix::identity(n).scale(C64::new(0.0, 1.0));
            }
            let z = z.scale(C64::new(p.frobenius_norm() / z.frobenius_norm(), 0.0));
            let k = p.add(&z)?;
            let lambda = draw_g_frame(n, &spec.block_dims, spec.seed)?;
            let s_lambda = g_frame_operator_with(&lambda, Execution::Sequential);
            // Γ_j = Λ_j S_Λ⁻¹ K*, so Σ Γ_j* Λ_j = K.
            let weight = s_lambda.solve_pd(&k.adjoint())?;
            let gamma = lambda.right_multiply(&weight)?;
            BiGFrameSystem::new(lambda, gamma)
        }
        _ => unreachable!("validated"),
    }
}

/// Bounds on randomly sampled shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeLimits {
    pub max_dim: usize,
    pub max_blocks: usize,
    pub max_block_dim: usize,
}

impl Default for ShapeLimits {
    fn default() -> Self {
        ShapeLimits {
            max_dim: 16,
            max_blocks: 8,
            max_block_dim: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeMode {
    /// Any shape within the limits.
    Any,
    /// `Σ m_j ≥ n`.
    Covering,
    /// `Σ m_j = n`.
    ExactCover,
}

fn pick(rng: &mut GaussianSource, lo: usize, hi: usize) -> usize {
    debug_assert!(lo <= hi);
    lo + ((rng.uniform() * (hi - lo + 1) as f64) as usize).min(hi - lo)
}

/// Samples `(n, [m_j])` within `limits`. Covering modes need
/// `max_blocks · max_block_dim ≥ max_dim`.
pub fn sample_shape(seed: u64, limits: ShapeLimits, mode: ShapeMode) -> (usize, Vec<usize>) {
    let ShapeLimits {
        max_dim,
        max_blocks,
        max_block_dim,
    } = limits;
    assert!(max_dim > 0 && max_blocks > 0 && max_block_dim > 0);
    assert!(mode == ShapeMode::Any || max_blocks * max_block_dim >= max_dim);
    let mut rng = GaussianSource::stream(seed, SHAPE_STREAM);
    let n = pick(&mut rng, 1, max_dim);
    let min_blocks = n.div_ceil(max_block_dim);
    let mut dims = match mode {
        ShapeMode::Any => {
            let j = pick(&mut rng, 1, max_blocks);
            return (
                n,
                (0..j).map(|_| pick(&mut rng, 1, max_block_dim)).collect(),
            );
        }
        ShapeMode::Covering => {
            let j = pick(&mut rng, min_blocks, max_blocks);
            (0..j)
                .map(|_| pick(&mut rng, 1, max_block_dim))
                .collect::<Vec<_>>()
        }
        ShapeMode::ExactCover => {
            let j = pick(&mut rng, min_blocks, max_blocks.min(n));
            vec![1; j]
        }
    };
    while dims.iter().sum::<usize>() < n {
        let open: Vec<usize> = (0..dims.len())
            .filter(|&k| dims[k] < max_block_dim)
            .collect();
        let k = open[pick(&mut rng, 0, open.len() - 1)];
        dims[k] += 1;
    }
    (n, dims)
}

/// Is `target` an acceptable prescribed operator (Hermitian within
/// `DEFAULT_TOL`, positive definite)?
pub fn is_valid_target(target: &Matrix) -> bool {
    target.is_square() && check_target(target, target.rows()).is_ok() && {
        target
            .hermitian_deviation()
            .map(|d| d <= DEFAULT_TOL)
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigframe::{adjoint_identity_check, bi_g_frame_operator, classify_bi_g_frame};
    use crate::gframe::classify_g_frame;

    #[test]
    fn g_frame_is_reproducible() {
        let spec = GenSpec::new(2, vec![1, 2], 7, GenKind::RandomGFrame);
        assert_eq!(gen_g_frame(&spec).unwrap(), gen_g_frame(&spec).unwrap());
        let other = GenSpec {
            seed: 8,
            ..spec.clone()
        };
        assert_ne!(gen_g_frame(&spec).unwrap(), gen_g_frame(&other).unwrap());
    }

    #[test]
    fn g_frame_verdicts() {
        let under = GenSpec::new(3, vec![1, 1], 3, GenKind::RandomGFrame);
        assert!(!classify_g_frame(&gen_g_frame(&under).unwrap(), DEFAULT_TOL).is_frame);
        let big = GenSpec::new(8, vec![2; 8], 11, GenKind::RandomGFrame);
        let sys = gen_g_frame(&big).unwrap();
        let eig = crate::gframe::g_frame_operator(&sys)
            .eig_hermitian()
            .unwrap();
        assert!(eig.min() > 0.0);
    }

    #[test]
    fn spec_validation() {
        let bad = GenSpec::new(0, vec![1], 0, GenKind::RandomGFrame);
        assert!(matches!(gen_g_frame(&bad), Err(FrameError::InvalidSpec(_))));
        let bad = GenSpec::new(2, vec![1, 0], 0, GenKind::RandomGFrame);
        assert!(gen_g_frame(&bad).is_err());
        let wrong_kind = GenSpec::new(2, vec![2], 0, GenKind::PrescribedOperator);
        assert!(gen_g_frame(&wrong_kind).is_err());
        let under = GenSpec::new(3, vec![1], 0, GenKind::PrescribedOperator);
        assert!(gen_bi_g_frame(&under, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn prescribed_operator_examples() {
        let spec = GenSpec::new(2, vec![1, 2], 5, GenKind::PrescribedOperator);
        let sys = gen_bi_g_frame(&spec, &Matrix::identity(2)).unwrap();
        assert!(classify_bi_g_frame(&sys, DEFAULT_TOL).is_parseval);

        let d = Matrix::from_diagonal(&[2.0, 1.0]);
        let sys = gen_bi_g_frame(&spec, &d).unwrap();
        assert!(bi_g_frame_operator(&sys).max_abs_diff(&d).unwrap() < 1e-12);
        let b = classify_bi_g_frame(&sys, DEFAULT_TOL).bounds.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 2.0).abs() < 1e-10);

        let three = Matrix::identity(2).scale(C64::new(3.0, 0.0));
        let r = classify_bi_g_frame(&gen_bi_g_frame(&spec, &three).unwrap(), DEFAULT_TOL);
        assert!(r.is_tight && !r.is_parseval);
        assert!((r.bounds.unwrap().upper - 3.0).abs() < 1e-10);
    }

    #[test]
    fn prescribed_operator_rejects_bad_targets() {
        let spec = GenSpec::new(2, vec![2], 5, GenKind::PrescribedOperator);
        assert!(matches!(
            gen_bi_g_frame(&spec, &Matrix::from_diagonal(&[1.0, -1.0])),
            Err(FrameError::NotPositiveDefinite { .. })
        ));
        let skew = Matrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            gen_bi_g_frame(&spec, &skew),
            Err(FrameError::NotHermitian { .. })
        ));
        assert!(gen_bi_g_frame(&spec, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn negative_instances() {
        for seed in 0..20 {
            let spec = GenSpec::new(3, vec![2, 2], seed, GenKind::NonHermitianPair);
            let sys = gen_negative(&spec).unwrap();
            let s = bi_g_frame_operator(&sys);
            assert!(s.hermitian_deviation().unwrap() >= 0.1);
            assert!(!classify_bi_g_frame(&sys, DEFAULT_TOL).is_frame);
            assert!(adjoint_identity_check(&sys));

            let spec = GenSpec::new(
                1 + seed as usize % 4,
                vec![2, 2],
                seed,
                GenKind::RankDeficient,
            );
            let sys = gen_negative(&spec).unwrap();
            let eig = bi_g_frame_operator(&sys).eig_hermitian().unwrap();
            assert!(eig.min() <= 1e-12 * eig.max());
            assert!(!classify_bi_g_frame(&sys, DEFAULT_TOL).is_frame);
            assert!(adjoint_identity_check(&sys));
        }
        let one = GenSpec::new(1, vec![1], 4, GenKind::NonHermitianPair);
        let s = bi_g_frame_operator(&gen_negative(&one).unwrap());
        assert!(s.hermitian_deviation().unwrap() >= 0.1);
    }

    #[test]
    fn shapes_respect_mode() {
        let limits = ShapeLimits::default();
        for seed in 0..300 {
            let (n, dims) = sample_shape(seed, limits, ShapeMode::Any);
            assert!((1..=16).contains(&n) && !dims.is_empty() && dims.len() <= 8);
            assert!(dims.iter().all(|&m| (1..=4).contains(&m)));
            let (n, dims) = sample_shape(seed, limits, ShapeMode::Covering);
            assert!(dims.iter().sum::<usize>() >= n && dims.len() <= 8);
            assert!(dims.iter().all(|&m| (1..=4).contains(&m)));
            let (n, dims) = sample_shape(seed, limits, ShapeMode::ExactCover);
            assert_eq!(dims.iter().sum::<usize>(), n);
            assert!(dims.iter().all(|&m| (1..=4).contains(&m)) && dims.len() <= 8);
        }
    }

    #[test]
    fn targets() {
        let p = random_pd_target(5, 9, 0.5, 3.0);
        assert!(is_valid_target(&p));
        let eig = p.eig_hermitian().unwrap();
        assert!(eig.min() >= 0.5 - 1e-12 && eig.max() <= 3.0 + 1e-12);
        assert_eq!(p, random_pd_target(5, 9, 0.5, 3.0));
    }
}
