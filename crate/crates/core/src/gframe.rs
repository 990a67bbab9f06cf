//! g-frames: families of operators `Λ_j : ℂⁿ → ℂ^{m_j}`.
//!
//! The synthesis map sends a block vector `{c_j} ∈ ⊕ ℂ^{m_j}` to
//! `Σ Λ_j* c_j`, analysis is `f ↦ {Λ_j f}`, and the g-frame operator is
//! `S_Λ = Σ Λ_j* Λ_j`. Block contributions are evaluated under an
//! [`Execution`] mode and summed in ascending `j`.

use crate::classical::{is_riesz_basis, VectorFrame};
use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::kernel::{check_vector, inner, Matrix, C64};
use crate::report::{ClassifyReport, SpectralVerdict};

/// Nonempty family of blocks, each with `dim` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GFrameSystem {
    dim: usize,
    blocks: Vec<Matrix>,
}

impl GFrameSystem {
    pub fn new(dim: usize, blocks: Vec<Matrix>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::Empty("ambient space"));
        }
        if blocks.is_empty() {
            return Err(FrameError::Empty("block family"));
        }
        if let Some((j, b)) = blocks.iter().enumerate().find(|(_, b)| b.cols() != dim) {
            return Err(FrameError::ShapeMismatch(format!(
                "block {j} has {} columns, expected {dim}",
                b.cols()
            )));
        }
        Ok(GFrameSystem { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `[m_1, …, m_J]`.
    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::rows).collect()
    }

    /// `Σ m_j`.
    pub fn total_rows(&self) -> usize {
        self.blocks.iter().map(Matrix::rows).sum()
    }

    /// Every block multiplied on the right by `m`.
    pub fn right_multiply(&self, m: &Matrix) -> Result<GFrameSystem> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.mul(m))
            .collect::<Result<Vec<_>>>()?;
        GFrameSystem::new(m.cols(), blocks)
    }
}

/// An element `{c_j}` of `⊕ ℂ^{m_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    parts: Vec<Vec<C64>>,
}

impl CoefficientSequence {
    pub fn new(parts: Vec<Vec<C64>>) -> Result<Self> {
        if parts
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(FrameError::NonFinite("coefficient sequence"));
        }
        Ok(CoefficientSequence { parts })
    }

    pub fn zeros(dims: &[usize]) -> Self {
        CoefficientSequence {
            parts: dims.iter().map(|&m| vec![C64::new(0.0, 0.0); m]).collect(),
        }
    }

    /// Splits a flat vector into consecutive parts of the given lengths.
    pub fn from_flat(dims: &[usize], flat: &[C64]) -> Result<Self> {
        let total: usize = dims.iter().sum();
        check_vector(flat, total, "flat coefficient vector")?;
        let mut parts = Vec::with_capacity(dims.len());
        let mut offset = 0;
        for &m in dims {
            parts.push(flat[offset..offset + m].to_vec());
            offset += m;
        }
        Ok(CoefficientSequence { parts })
    }

    pub fn parts(&self) -> &[Vec<C64>] {
        &self.parts
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn flatten(&self) -> Vec<C64> {
        self.parts.iter().flatten().copied().collect()
    }

    /// `Σ_j ⟨c_j, d_j⟩`. Shapes must match.
    pub fn inner(&self, other: &CoefficientSequence) -> C64 {
        debug_assert_eq!(self.dims(), other.dims());
        self.parts
            .iter()
            .zip(&other.parts)
            .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + inner(a, b))
    }

    pub fn norm_sq(&self) -> f64 {
        self.parts.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn add_scaled(&self, s: C64, other: &CoefficientSequence) -> CoefficientSequence {
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + s * y).collect())
            .collect();
        CoefficientSequence { parts }
    }

    pub(crate) fn check_shape(&self, sys: &GFrameSystem) -> Result<()> {
        if self.dims() != sys.block_dims() {
            return Err(FrameError::ShapeMismatch(format!(
                "coefficient parts {:?} do not match block dimensions {:?}",
                self.dims(),
                sys.block_dims()
            )));
        }
        Ok(())
    }
}

/// Sums matrices in slice order.
pub(crate) fn ordered_sum(terms: Vec<Matrix>) -> Matrix {
    let mut it = terms.into_iter();
    let first = it.next().expect("nonempty family");
    it.fold(first, |acc, t| acc.add(&t).expect("same shape"))
}

/// `Σ Λ_j* c_j`.
pub fn g_synthesis(sys: &GFrameSystem, c: &CoefficientSequence) -> Result<Vec<C64>> {
    c.check_shape(sys)?;
    let mut out = vec![C64::new(0.0, 0.0); sys.dim];
    for (block, part) in sys.blocks.iter().zip(c.parts()) {
        let contribution = block.adjoint().mul_vec(part)?;
        for (o, x) in out.iter_mut().zip(contribution) {
            *o += x;
        }
    }
    Ok(out)
}

/// `{Λ_j f}`.
pub fn g_analysis(sys: &GFrameSystem, f: &[C64]) -> Result<CoefficientSequence> {
    check_vector(f, sys.dim, "vector")?;
    let parts = sys
        .blocks
        .iter()
        .map(|b| b.mul_vec(f))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientSequence { parts })
}

pub fn g_frame_operator(sys: &GFrameSystem) -> Matrix {
    g_frame_operator_with(sys, Execution::default())
}

/// `S_Λ = Σ Λ_j* Λ_j`.
pub fn g_frame_operator_with(sys: &GFrameSystem, exec: Execution) -> Matrix {
    let terms = exec.map_slice(&sys.blocks, |b| b.adjoint().mul(b).expect("conformable"));
    ordered_sum(terms)
}

pub fn classify_g_frame(sys: &GFrameSystem, tol: f64) -> ClassifyReport {
    SpectralVerdict::of_operator(&g_frame_operator(sys), tol)
        .into_report(is_g_riesz_basis(sys, tol), tol)
}

/// `u_{j,k} = Λ_j* e_{j,k}` with `e_{j,k}` the standard basis of `ℂ^{m_j}`,
/// flattened `j`-major. These are the conjugated rows of the blocks.
pub fn induced_vectors(sys: &GFrameSystem) -> VectorFrame {
    let vectors = sys
        .blocks
        .iter()
        .flat_map(|b| (0..b.rows()).map(move |k| b.row(k).iter().map(|z| z.conj()).collect()))
        .collect();
    VectorFrame::new(sys.dim, vectors).expect("blocks are validated")
}

/// The blocks stacked vertically: a `Σm_j × n` matrix.
pub fn stacked_analysis(sys: &GFrameSystem) -> Matrix {
    let entries = sys.blocks.iter().flat_map(Matrix::row_major).collect();
    Matrix::from_row_major(sys.total_rows(), sys.dim, entries).expect("blocks are validated")
}

/// g-Riesz basis iff the induced vectors form a Riesz basis: `Σ m_j = n`
/// and the stacked analysis matrix is invertible.
pub fn is_g_riesz_basis(sys: &GFrameSystem, tol: f64) -> bool {
    is_riesz_basis(&induced_vectors(sys), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::frame_operator;
    use crate::kernel::{real_vector, DEFAULT_TOL};

    fn block(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real_rows(rows).unwrap()
    }

    fn identity_split() -> GFrameSystem {
        GFrameSystem::new(2, vec![block(&[&[1.0, 0.0]]), block(&[&[0.0, 1.0]])]).unwrap()
    }

    /// `{[1 0], [[0,1],[1,0]]}`.
    fn mixed() -> GFrameSystem {
        GFrameSystem::new(
            2,
            vec![block(&[&[1.0, 0.0]]), block(&[&[0.0, 1.0], &[1.0, 0.0]])],
        )
        .unwrap()
    }

    fn coeffs(parts: &[&[f64]]) -> CoefficientSequence {
        CoefficientSequence::new(parts.iter().map(|p| real_vector(p)).collect()).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(GFrameSystem::new(2, vec![]).is_err());
        assert!(matches!(
            GFrameSystem::new(3, vec![block(&[&[1.0, 0.0]])]),
            Err(FrameError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn synthesis_examples() {
        let out = g_synthesis(&identity_split(), &coeffs(&[&[1.0], &[1.0]])).unwrap();
        assert_eq!(out, real_vector(&[1.0, 1.0]));

        let sys = GFrameSystem::new(2, vec![Matrix::identity(2)]).unwrap();
        let out = g_synthesis(&sys, &coeffs(&[&[3.0, -2.0]])).unwrap();
        assert_eq!(out, real_vector(&[3.0, -2.0]));

        let out = g_synthesis(&mixed(), &coeffs(&[&[0.5], &[0.0, 0.5]])).unwrap();
        assert_eq!(out, real_vector(&[1.0, 0.0]));

        assert!(g_synthesis(&mixed(), &coeffs(&[&[0.5], &[0.5]])).is_err());
    }

    #[test]
    fn analysis_examples() {
        let sys = GFrameSystem::new(2, vec![Matrix::identity(2)]).unwrap();
        let f = real_vector(&[0.25, 7.0]);
        assert_eq!(
            g_analysis(&sys, &f).unwrap().parts(),
            std::slice::from_ref(&f)
        );
        let a = g_analysis(&identity_split(), &real_vector(&[3.0, 4.0])).unwrap();
        assert_eq!(a, coeffs(&[&[3.0], &[4.0]]));
        assert!(g_analysis(&sys, &real_vector(&[1.0])).is_err());
    }

    #[test]
    fn operator_examples() {
        assert_eq!(g_frame_operator(&identity_split()), Matrix::identity(2));
        assert_eq!(
            g_frame_operator(&mixed()),
            Matrix::from_diagonal(&[2.0, 1.0])
        );
        let sys = GFrameSystem::new(
            2,
            vec![Matrix::identity(2).scale(C64::new(2f64.sqrt(), 0.0))],
        )
        .unwrap();
        let r = classify_g_frame(&sys, DEFAULT_TOL);
        assert!(r.is_tight && !r.is_parseval);
        assert!((r.bounds.unwrap().lower - 2.0).abs() < 1e-14);
    }

    #[test]
    fn classify_examples() {
        assert!(classify_g_frame(&identity_split(), DEFAULT_TOL).is_parseval);
        let deficient = GFrameSystem::new(2, vec![block(&[&[1.0, 0.0]])]).unwrap();
        let r = classify_g_frame(&deficient, DEFAULT_TOL);
        assert!(r.is_bessel && !r.is_frame);
        let r = classify_g_frame(&mixed(), DEFAULT_TOL);
        let b = r.bounds.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 2.0).abs() < 1e-14);
    }

    #[test]
    fn induced_vector_examples() {
        let sys = GFrameSystem::new(2, vec![Matrix::identity(2)]).unwrap();
        assert_eq!(
            induced_vectors(&sys),
            VectorFrame::from_real(&[[1.0, 0.0], [0.0, 1.0]]).unwrap()
        );
        assert_eq!(
            induced_vectors(&mixed()),
            VectorFrame::from_real(&[[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap()
        );
        assert_eq!(
            frame_operator(&induced_vectors(&mixed())),
            g_frame_operator(&mixed())
        );
    }

    #[test]
    fn induced_vectors_conjugate_rows() {
        let b =
            Matrix::from_row_major(1, 2, vec![C64::new(0.0, 1.0), C64::new(2.0, -1.0)]).unwrap();
        let sys = GFrameSystem::new(2, vec![b]).unwrap();
        let u = induced_vectors(&sys);
        assert_eq!(
            u.vectors()[0],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 1.0)]
        );
    }

    #[test]
    fn riesz_examples() {
        assert!(is_g_riesz_basis(&identity_split(), DEFAULT_TOL));
        assert!(!is_g_riesz_basis(&mixed(), DEFAULT_TOL));
        let sys = GFrameSystem::new(2, vec![block(&[&[1.0, 2.0], &[3.0, 4.0]])]).unwrap();
        assert!(is_g_riesz_basis(&sys, DEFAULT_TOL));
    }

    #[test]
    fn stacked_and_flat_helpers() {
        let s = stacked_analysis(&mixed());
        assert_eq!(s, block(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]));
        let c = CoefficientSequence::from_flat(&[1, 2], &real_vector(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(c, coeffs(&[&[1.0], &[2.0, 3.0]]));
        assert_eq!(c.flatten(), real_vector(&[1.0, 2.0, 3.0]));
        assert!((c.norm_sq() - 14.0).abs() < 1e-15);
    }
}
