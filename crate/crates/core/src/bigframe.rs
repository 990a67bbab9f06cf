//! Bi-g-frames: pairs `(Λ, Γ)` of shape-matched g-frame systems whose mixed
//! pairing `Σ ⟨Λ_j f, Γ_j f⟩` is bounded above and below by multiples of
//! `‖f‖²`.
//!
//! The pairing is the quadratic form of the bi-g-frame operator
//! `S_{Λ,Γ} = Σ Γ_j* Λ_j`, so every verdict is read off that matrix: the
//! form is real exactly when `S_{Λ,Γ}` is Hermitian, and the optimal bounds
//! `C`, `D` are its extreme eigenvalues. From an invertible `S_{Λ,Γ}` we get
//! the canonical dual pair `Λ̃_j = Λ_j S_{Λ,Γ}⁻¹`, `Γ̃_j = Γ_j S_{Γ,Λ}⁻¹`
//! (with `S_{Γ,Λ} = S_{Λ,Γ}*`) and the two reconstruction formulas
//!
//! ```text
//! f = Σ Γ_j* Λ̃_j f        f = Σ Γ̃_j* Λ_j f
//! ```

use crate::classical::{check_pair, VectorFrame};
use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::gframe::{
    g_analysis, g_synthesis, induced_vectors, is_g_riesz_basis, ordered_sum, stacked_analysis,
    CoefficientSequence, GFrameSystem,
};
use crate::kernel::{check_vector, inner, norm, norm_sq, Matrix, C64};
use crate::report::{FrameBounds, SpectralVerdict};
use crate::rng::GaussianSource;

/// Tolerance of [`adjoint_identity_check`].
pub const ADJOINT_IDENTITY_TOL: f64 = 1e-12;

const BESSEL_SAMPLE_SEED: u64 = 0x5EED_B1F4;

#[derive(Debug, Clone, PartialEq)]
pub struct BiGFrameSystem {
    lambda: GFrameSystem,
    gamma: GFrameSystem,
}

impl BiGFrameSystem {
    pub fn new(lambda: GFrameSystem, gamma: GFrameSystem) -> Result<Self> {
        if lambda.dim() != gamma.dim() {
            return Err(FrameError::ShapeMismatch(format!(
                "systems act on dimensions {} and {}",
                lambda.dim(),
                gamma.dim()
            )));
        }
        if lambda.block_dims() != gamma.block_dims() {
            return Err(FrameError::ShapeMismatch(format!(
                "block dimensions {:?} and {:?} differ",
                lambda.block_dims(),
                gamma.block_dims()
            )));
        }
        Ok(BiGFrameSystem { lambda, gamma })
    }

    pub fn lambda(&self) -> &GFrameSystem {
        &self.lambda
    }

    pub fn gamma(&self) -> &GFrameSystem {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }
}

/// `Σ ⟨Λ_j f, Γ_j f⟩`, which equals `⟨S_{Λ,Γ} f, f⟩`.
pub fn pairing_sum(sys: &BiGFrameSystem, f: &[C64]) -> Result<C64> {
    let a = g_analysis(&sys.lambda, f)?;
    let b = g_analysis(&sys.gamma, f)?;
    Ok(a.inner(&b))
}

pub fn bi_g_frame_operator(sys: &BiGFrameSystem) -> Matrix {
    bi_g_frame_operator_with(sys, Execution::default())
}

/// `S_{Λ,Γ} = Σ Γ_j* Λ_j`. Not Hermitian in general.
pub fn bi_g_frame_operator_with(sys: &BiGFrameSystem, exec: Execution) -> Matrix {
    let (lam, gam) = (sys.lambda.blocks(), sys.gamma.blocks());
    let terms = exec.map_indexed(lam.len(), |j| {
        gam[j].adjoint().mul(&lam[j]).expect("conformable")
    });
    ordered_sum(terms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiGReport {
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    /// `(C, D)` when `is_frame`.
    pub bounds: Option<FrameBounds>,
    pub hermitian_deviation: f64,
    /// `‖S_{Λ,Γ}⁻¹‖` when `is_frame`; never above `1/C` up to rounding.
    pub inverse_norm: Option<f64>,
    pub tolerance: f64,
}

pub fn classify_bi_g_frame(sys: &BiGFrameSystem, tol: f64) -> BiGReport {
    classify_operator(&bi_g_frame_operator(sys), tol)
}

fn classify_operator(s: &Matrix, tol: f64) -> BiGReport {
    let v = SpectralVerdict::of_operator(s, tol);
    let inverse_norm = if v.is_frame {
        s.inverse().ok().map(|inv| inv.operator_norm())
    } else {
        None
    };
    BiGReport {
        is_bessel: v.is_bessel,
        is_frame: v.is_frame,
        is_tight: v.is_tight,
        is_parseval: v.is_parseval,
        bounds: v.bounds,
        hermitian_deviation: v.hermitian_deviation,
        inverse_norm,
        tolerance: tol,
    }
}

/// Largest entrywise gap between `S_{Λ,Γ}*` and `S_{Γ,Λ}`.
pub fn adjoint_identity_deviation(sys: &BiGFrameSystem) -> f64 {
    let lhs = bi_g_frame_operator(sys).adjoint();
    let rhs = bi_g_frame_operator(&swap(sys));
    lhs.max_abs_diff(&rhs).expect("same shape")
}

/// `S_{Λ,Γ}* = S_{Γ,Λ}`; holds for every shape-matched pair.
pub fn adjoint_identity_check(sys: &BiGFrameSystem) -> bool {
    adjoint_identity_deviation(sys) <= ADJOINT_IDENTITY_TOL
}

/// `(Γ, Λ)`.
pub fn swap(sys: &BiGFrameSystem) -> BiGFrameSystem {
    BiGFrameSystem {
        lambda: sys.gamma.clone(),
        gamma: sys.lambda.clone(),
    }
}

/// Canonical dual pair `(Λ̃, Γ̃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    pub lambda_tilde: GFrameSystem,
    pub gamma_tilde: GFrameSystem,
}

impl DualPair {
    pub fn as_system(&self) -> BiGFrameSystem {
        BiGFrameSystem {
            lambda: self.lambda_tilde.clone(),
            gamma: self.gamma_tilde.clone(),
        }
    }
}

/// `S_{Λ,Γ}` after checking the pair is a bi-g-frame at `tol`.
fn frame_operator_checked(sys: &BiGFrameSystem, tol: f64) -> Result<(Matrix, BiGReport)> {
    let s = bi_g_frame_operator(sys);
    let report = classify_operator(&s, tol);
    if !report.is_frame {
        return Err(FrameError::NotBiGFrame);
    }
    Ok((s, report))
}

fn dual_pair_from_operator(sys: &BiGFrameSystem, s: &Matrix) -> Result<DualPair> {
    let s_inv = s.inverse()?;
    let s_adj_inv = s.adjoint().inverse()?;
    Ok(DualPair {
        lambda_tilde: sys.lambda.right_multiply(&s_inv)?,
        gamma_tilde: sys.gamma.right_multiply(&s_adj_inv)?,
    })
}

/// `Λ̃_j = Λ_j S_{Λ,Γ}⁻¹`, `Γ̃_j = Γ_j S_{Γ,Λ}⁻¹`.
pub fn canonical_pair(sys: &BiGFrameSystem, tol: f64) -> Result<DualPair> {
    let (s, _) = frame_operator_checked(sys, tol)?;
    dual_pair_from_operator(sys, &s)
}

/// Which reconstruction formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reconstruction {
    /// `f = Σ Γ_j* Λ_j S_{Λ,Γ}⁻¹ f = Σ Γ_j* Λ̃_j f`.
    DualAnalysis,
    /// `f = Σ (Γ_j S_{Γ,Λ}⁻¹)* Λ_j f = Σ Γ̃_j* Λ_j f`.
    DualSynthesis,
}

pub fn reconstruct(
    sys: &BiGFrameSystem,
    f: &[C64],
    variant: Reconstruction,
    tol: f64,
) -> Result<Vec<C64>> {
    check_vector(f, sys.dim(), "vector")?;
    let dual = canonical_pair(sys, tol)?;
    match variant {
        Reconstruction::DualAnalysis => {
            g_synthesis(&sys.gamma, &g_analysis(&dual.lambda_tilde, f)?)
        }
        Reconstruction::DualSynthesis => {
            g_synthesis(&dual.gamma_tilde, &g_analysis(&sys.lambda, f)?)
        }
    }
}

/// Outcome of checking that `(Λ̃, Γ̃)` is bi-g-Bessel with bound `1/C`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBesselCheck {
    /// `λ_max` of the Hermitian part of `Σ Γ̃_j* Λ̃_j`.
    pub bound: f64,
    /// `1/C` for the source pair.
    pub inverse_lower: f64,
    /// Largest `Re Σ⟨Λ̃_j f, Γ̃_j f⟩ / ‖f‖²` over the samples.
    pub max_sample_ratio: f64,
    /// Largest relative gap between the dual pairing and `⟨f, S_{Γ,Λ}⁻¹ f⟩`.
    pub max_identity_gap: f64,
    pub ok: bool,
}

/// Checks the dual pair's Bessel bound spectrally and on `trials` seeded
/// random vectors, comparing each dual pairing with `⟨f, S_{Γ,Λ}⁻¹ f⟩`.
pub fn dual_pair_bessel_check(
    sys: &BiGFrameSystem,
    trials: usize,
    tol: f64,
) -> Result<DualBesselCheck> {
    let (s, report) = frame_operator_checked(sys, tol)?;
    let lower = report.bounds.expect("frame has bounds").lower;
    let dual = dual_pair_from_operator(sys, &s)?.as_system();
    let dual_op = bi_g_frame_operator(&dual);
    let bound = dual_op
        .hermitian_part()?
        .eig_hermitian_tol(f64::INFINITY)?
        .max();
    let s_adj = s.adjoint();
    let n = sys.dim();

    let samples = Execution::default().map_indexed(trials, |t| -> Result<(f64, f64)> {
        let f = GaussianSource::stream(BESSEL_SAMPLE_SEED, t as u64).complex_vector(n);
        let pairing = pairing_sum(&dual, &f)?;
        let rhs_vec = s_adj
            .solve(&Matrix::from_columns(n, std::slice::from_ref(&f))?)?
            .column(0);
        let expected = inner(&f, &rhs_vec);
        let scale = norm_sq(&f);
        Ok((pairing.re / scale, (pairing - expected).norm() / scale))
    });
    let mut max_sample_ratio = f64::NEG_INFINITY;
    let mut max_identity_gap: f64 = 0.0;
    for sample in samples {
        let (ratio, gap) = sample?;
        max_sample_ratio = max_sample_ratio.max(ratio);
        max_identity_gap = max_identity_gap.max(gap);
    }
    let inverse_lower = 1.0 / lower;
    let slack = tol * inverse_lower.max(1.0);
    let ok = bound <= inverse_lower + slack
        && (trials == 0 || (max_sample_ratio <= inverse_lower + slack && max_identity_gap <= tol));
    Ok(DualBesselCheck {
        bound,
        inverse_lower,
        max_sample_ratio,
        max_identity_gap,
        ok,
    })
}

/// Which synthesis constraint the coefficients satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `f = Σ Γ_j* g_j`.
    Gamma,
    /// `f = Σ Λ_j* g_j`.
    Lambda,
}

impl Side {
    fn synthesis<'a>(&self, sys: &'a BiGFrameSystem) -> &'a GFrameSystem {
        match self {
            Side::Gamma => &sys.gamma,
            Side::Lambda => &sys.lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisSolution {
    pub particular: CoefficientSequence,
    /// Orthonormal basis of the kernel of the side's synthesis map.
    pub null_basis: Vec<CoefficientSequence>,
}

/// Coefficients `g` with `Σ Γ_j* g_j = f` (or `Σ Λ_j* g_j = f`): the
/// particular solution `Λ̃ f` (resp. `Γ̃ f`) and a basis of all homogeneous
/// solutions.
pub fn solve_synthesis_coefficients(
    sys: &BiGFrameSystem,
    f: &[C64],
    side: Side,
    tol: f64,
) -> Result<SynthesisSolution> {
    check_vector(f, sys.dim(), "vector")?;
    let dual = canonical_pair(sys, tol)?;
    let particular = match side {
        Side::Gamma => g_analysis(&dual.lambda_tilde, f)?,
        Side::Lambda => g_analysis(&dual.gamma_tilde, f)?,
    };
    let synth = side.synthesis(sys);
    let dims = synth.block_dims();
    let null_basis = stacked_analysis(synth)
        .adjoint()
        .null_space(tol)
        .iter()
        .map(|v| CoefficientSequence::from_flat(&dims, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SynthesisSolution {
        particular,
        null_basis,
    })
}

/// Both sides of the coefficient identity for one coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientIdentity {
    /// `Σ ‖g_j‖²`.
    pub lhs: f64,
    pub rhs: C64,
    /// `‖Σ X_j* g_j − f‖` for the side's synthesis system `X`.
    pub constraint_residual: f64,
    pub holds: bool,
}

/// Evaluates
///
/// ```text
/// Σ‖g_j‖² = Σ⟨g_j, g_j − Γ̃_j f⟩ + Σ⟨Λ̃_j f, Γ̃_j f⟩      (side Γ: f = Σ Γ_j* g_j)
/// Σ‖g_j‖² = Σ⟨g_j − Λ̃_j f, g_j⟩ + Σ⟨Λ̃_j f, Γ̃_j f⟩      (side Λ: f = Σ Λ_j* g_j)
/// ```
///
/// `holds` is `|LHS − RHS| <= tol · (1 + |LHS|)`.
pub fn coefficient_identity_check(
    sys: &BiGFrameSystem,
    f: &[C64],
    g: &CoefficientSequence,
    side: Side,
    tol: f64,
) -> Result<CoefficientIdentity> {
    check_vector(f, sys.dim(), "vector")?;
    let synth = side.synthesis(sys);
    g.check_shape(synth)?;
    let constraint_residual = norm(&crate::kernel::sub(&g_synthesis(synth, g)?, f));
    if constraint_residual > tol * norm(f).max(1.0) {
        return Err(FrameError::ConstraintViolated {
            residual: constraint_residual,
        });
    }
    let dual = canonical_pair(sys, tol)?;
    let lt = g_analysis(&dual.lambda_tilde, f)?;
    let gt = g_analysis(&dual.gamma_tilde, f)?;
    let dual_pairing = lt.inner(&gt);
    let mixed = match side {
        Side::Gamma => g.inner(&g.add_scaled(C64::new(-1.0, 0.0), &gt)),
        Side::Lambda => g.add_scaled(C64::new(-1.0, 0.0), &lt).inner(g),
    };
    let lhs = g.norm_sq();
    let rhs = mixed + dual_pairing;
    let holds = (C64::new(lhs, 0.0) - rhs).norm() <= tol * (1.0 + lhs.abs());
    Ok(CoefficientIdentity {
        lhs,
        rhs,
        constraint_residual,
        holds,
    })
}

/// Induced vector families `(u, v)` with `u_{j,k} = Λ_j* e_{j,k}` and
/// `v_{j,k} = Γ_j* e_{j,k}`, in the same flattening order.
pub fn lift_to_biframe(sys: &BiGFrameSystem) -> (VectorFrame, VectorFrame) {
    (induced_vectors(&sys.lambda), induced_vectors(&sys.gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RieszTransfer {
    pub lambda_is_riesz: bool,
    pub gamma_is_riesz: bool,
}

impl RieszTransfer {
    /// `Λ` is a g-Riesz basis iff `Γ` is.
    pub fn agrees(&self) -> bool {
        self.lambda_is_riesz == self.gamma_is_riesz
    }
}

pub fn riesz_transfer_check(sys: &BiGFrameSystem, tol: f64) -> Result<RieszTransfer> {
    frame_operator_checked(sys, tol)?;
    Ok(RieszTransfer {
        lambda_is_riesz: is_g_riesz_basis(&sys.lambda, tol),
        gamma_is_riesz: is_g_riesz_basis(&sys.gamma, tol),
    })
}

/// The pair of functional families `Λ_j f = ⟨f, f_j⟩`, `Γ_j f = ⟨f, g_j⟩`,
/// each block the `1 × n` row `f_j*`.
pub fn from_vector_biframe(f_list: &VectorFrame, g_list: &VectorFrame) -> Result<BiGFrameSystem> {
    check_pair(f_list, g_list)?;
    let functionals = |family: &VectorFrame| -> Result<GFrameSystem> {
        let blocks = family
            .vectors()
            .iter()
            .map(|v| Matrix::from_row_major(1, family.dim(), v.iter().map(|z| z.conj()).collect()))
            .collect::<Result<Vec<_>>>()?;
        GFrameSystem::new(family.dim(), blocks)
    };
    BiGFrameSystem::new(functionals(f_list)?, functionals(g_list)?)
}
