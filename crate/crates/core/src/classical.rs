//! Vector frames, controlled frames, biframes, duals and Riesz bases.
//!
//! A finite family `{f_j}` in `ℂⁿ` is represented by its synthesis matrix
//! `T = [f_1 … f_J]`; the frame operator is `S = T T*`, a controlled frame
//! operator is `C S`, and a biframe `({f_j}, {g_j})` is governed by
//! `S_bi = Σ g_j f_j* = T_g T_f*`, whose quadratic form is
//! `Σ ⟨f, f_j⟩⟨g_j, f⟩`.

use crate::error::{FrameError, Result};
use crate::kernel::{check_vector, Matrix, C64, PD_RATIO};
use crate::report::{ClassifyReport, SpectralVerdict};

/// Nonempty ordered family of vectors in `ℂ^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFrame {
    dim: usize,
    vectors: Vec<Vec<C64>>,
}

impl VectorFrame {
    pub fn new(dim: usize, vectors: Vec<Vec<C64>>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::Empty("ambient space"));
        }
        if vectors.is_empty() {
            return Err(FrameError::Empty("vector family"));
        }
        for v in &vectors {
            check_vector(v, dim, "frame vector")?;
        }
        Ok(VectorFrame { dim, vectors })
    }

    pub fn from_real<R: AsRef<[f64]>>(vectors: &[R]) -> Result<Self> {
        let dim = vectors.first().map(|v| v.as_ref().len()).unwrap_or(0);
        let vectors = vectors
            .iter()
            .map(|v| v.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::new(dim, vectors)
    }

    /// The columns of `m` as a family.
    pub fn from_matrix_columns(m: &Matrix) -> Self {
        VectorFrame {
            dim: m.rows(),
            vectors: (0..m.cols()).map(|j| m.column(j)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }
}

pub(crate) fn check_pair(f: &VectorFrame, g: &VectorFrame) -> Result<()> {
    if f.dim != g.dim || f.len() != g.len() {
        return Err(FrameError::ShapeMismatch(format!(
            "families of {} vectors in dimension {} and {} vectors in dimension {}",
            f.len(),
            f.dim,
            g.len(),
            g.dim
        )));
    }
    Ok(())
}

/// `n × |J|` matrix whose `j`-th column is `f_j`.
pub fn synthesis_matrix(frame: &VectorFrame) -> Matrix {
    Matrix::from_columns(frame.dim, &frame.vectors).expect("validated at construction")
}

/// `S = T T* = Σ f_j f_j*`.
pub fn frame_operator(frame: &VectorFrame) -> Matrix {
    let t = synthesis_matrix(frame);
    t.mul(&t.adjoint()).expect("conformable")
}

pub fn classify_frame(frame: &VectorFrame, tol: f64) -> ClassifyReport {
    SpectralVerdict::of_operator(&frame_operator(frame), tol)
        .into_report(is_riesz_basis(frame, tol), tol)
}

/// `{S⁻¹ f_j}`.
pub fn canonical_dual(frame: &VectorFrame) -> Result<VectorFrame> {
    let s = frame_operator(frame);
    let dual = s.solve_pd(&synthesis_matrix(frame))?;
    Ok(VectorFrame::from_matrix_columns(&dual))
}

fn near_identity(m: &Matrix, tol: f64) -> bool {
    let n = m.rows();
    let err = m
        .sub(&Matrix::identity(n))
        .expect("square")
        .frobenius_norm();
    err <= tol * (n as f64).sqrt()
}

/// Whether `Σ g_j f_j* = I = Σ f_j g_j*`, i.e. both reconstruction formulas
/// `f = Σ⟨f, f_j⟩ g_j = Σ⟨f, g_j⟩ f_j` hold.
pub fn check_duality(f: &VectorFrame, g: &VectorFrame, tol: f64) -> Result<bool> {
    check_pair(f, g)?;
    let (tf, tg) = (synthesis_matrix(f), synthesis_matrix(g));
    let gf = tg.mul(&tf.adjoint())?;
    let fg = tf.mul(&tg.adjoint())?;
    Ok(near_identity(&gf, tol) && near_identity(&fg, tol))
}

/// A frame weighted by an invertible controller `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledSystem {
    frame: VectorFrame,
    controller: Matrix,
}

impl ControlledSystem {
    pub fn new(frame: VectorFrame, controller: Matrix) -> Result<Self> {
        if !controller.is_square() || controller.rows() != frame.dim {
            return Err(FrameError::ShapeMismatch(format!(
                "controller is {}x{}, frame dimension is {}",
                controller.rows(),
                controller.cols(),
                frame.dim
            )));
        }
        let s = controller.singular_values();
        let (sigma_max, sigma_min) = (s[0], s[s.len() - 1]);
        if sigma_max == 0.0 || sigma_min <= PD_RATIO * sigma_max {
            return Err(FrameError::NotInvertibleController {
                sigma_min,
                sigma_max,
            });
        }
        Ok(ControlledSystem { frame, controller })
    }

    pub fn frame(&self) -> &VectorFrame {
        &self.frame
    }

    pub fn controller(&self) -> &Matrix {
        &self.controller
    }
}

/// `S_c = C S`, so that `⟨S_c f, f⟩ = Σ ⟨f, f_j⟩⟨C f_j, f⟩`.
pub fn controlled_frame_operator(sys: &ControlledSystem) -> Matrix {
    sys.controller
        .mul(&frame_operator(&sys.frame))
        .expect("conformable")
}

pub fn classify_controlled(sys: &ControlledSystem, tol: f64) -> ClassifyReport {
    SpectralVerdict::of_operator(&controlled_frame_operator(sys), tol)
        .into_report(is_riesz_basis(&sys.frame, tol), tol)
}

/// Whether `g` is a `C`-controlled dual of the controlled frame:
/// `f = Σ ⟨f, g_j⟩ C f_j`, i.e. `C T_f T_g* = I`. Only this one-sided
/// equation is checked.
pub fn check_controlled_duality(sys: &ControlledSystem, g: &VectorFrame, tol: f64) -> Result<bool> {
    check_pair(&sys.frame, g)?;
    let m = sys
        .controller
        .mul(&synthesis_matrix(&sys.frame))?
        .mul(&synthesis_matrix(g).adjoint())?;
    Ok(near_identity(&m, tol))
}

/// `S_bi = Σ g_j f_j*`.
pub fn biframe_operator(f: &VectorFrame, g: &VectorFrame) -> Result<Matrix> {
    check_pair(f, g)?;
    synthesis_matrix(g).mul(&synthesis_matrix(f).adjoint())
}

/// Biframe verdicts for `({f_j}, {g_j})`. `is_riesz` reports whether both
/// families are Riesz bases.
pub fn classify_biframe(f: &VectorFrame, g: &VectorFrame, tol: f64) -> Result<ClassifyReport> {
    let op = biframe_operator(f, g)?;
    let riesz = is_riesz_basis(f, tol) && is_riesz_basis(g, tol);
    Ok(SpectralVerdict::of_operator(&op, tol).into_report(riesz, tol))
}

/// Finite-dimensional Riesz basis criterion: exactly `dim` vectors with an
/// invertible synthesis matrix (`σ_min > tol · σ_max`).
pub fn is_riesz_basis(frame: &VectorFrame, tol: f64) -> bool {
    if frame.len() != frame.dim {
        return false;
    }
    let s = synthesis_matrix(frame).singular_values();
    let (hi, lo) = (s[0], s[s.len() - 1]);
    hi > 0.0 && lo > tol * hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{c64, DEFAULT_TOL};

    fn fr(v: &[&[f64]]) -> VectorFrame {
        VectorFrame::from_real(v).unwrap()
    }

    fn onb() -> VectorFrame {
        fr(&[&[1.0, 0.0], &[0.0, 1.0]])
    }

    fn redundant() -> VectorFrame {
        fr(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]])
    }

    fn close(a: &Matrix, b: &Matrix, eps: f64) -> bool {
        a.max_abs_diff(b).unwrap() <= eps
    }

    #[test]
    fn construction_rejects_degenerate_input() {
        assert!(matches!(
            VectorFrame::new(2, vec![]),
            Err(FrameError::Empty(_))
        ));
        assert!(matches!(
            VectorFrame::new(2, vec![vec![c64(1.0, 0.0)]]),
            Err(FrameError::ShapeMismatch(_))
        ));
        assert!(VectorFrame::new(0, vec![vec![]]).is_err());
    }

    #[test]
    fn synthesis_matrix_examples() {
        assert_eq!(synthesis_matrix(&onb()), Matrix::identity(2));
        let t = synthesis_matrix(&redundant());
        let expect = Matrix::from_real_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(t, expect);
        let t = synthesis_matrix(&fr(&[&[3.0, 4.0]]));
        assert_eq!(t, Matrix::from_real_rows(&[[3.0], [4.0]]).unwrap());
    }

    #[test]
    fn frame_operator_examples() {
        assert!(close(&frame_operator(&onb()), &Matrix::identity(2), 0.0));
        assert!(close(
            &frame_operator(&redundant()),
            &Matrix::from_diagonal(&[2.0, 1.0]),
            0.0
        ));
        let s = 0.5f64.sqrt();
        let op = frame_operator(&fr(&[&[s, s]]));
        let half = Matrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!(close(&op, &half, 1e-15));
    }

    #[test]
    fn classify_frame_examples() {
        let r = classify_frame(&onb(), DEFAULT_TOL);
        assert!(r.is_parseval && r.is_riesz);
        let b = r.bounds.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14);

        let r = classify_frame(&redundant(), DEFAULT_TOL);
        assert!(r.is_frame && !r.is_tight && !r.is_riesz);
        let b = r.bounds.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 2.0).abs() < 1e-14);

        let r = classify_frame(&fr(&[&[1.0, 0.0]]), DEFAULT_TOL);
        assert!(r.is_bessel && !r.is_frame && r.bounds.is_none());
    }

    #[test]
    fn canonical_dual_examples() {
        let d = canonical_dual(&onb()).unwrap();
        assert_eq!(d, onb());

        let d = canonical_dual(&redundant()).unwrap();
        let expect = fr(&[&[0.5, 0.0], &[0.0, 1.0], &[0.5, 0.0]]);
        assert!(close(
            &synthesis_matrix(&d),
            &synthesis_matrix(&expect),
            1e-15
        ));

        // S = diag(4, 1), so S⁻¹(2, 0) = (1/2, 0).
        let d = canonical_dual(&fr(&[&[2.0, 0.0], &[0.0, 1.0]])).unwrap();
        let expect = fr(&[&[0.5, 0.0], &[0.0, 1.0]]);
        assert!(close(
            &synthesis_matrix(&d),
            &synthesis_matrix(&expect),
            1e-15
        ));

        assert!(matches!(
            canonical_dual(&fr(&[&[1.0, 0.0]])),
            Err(FrameError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn duality_examples() {
        assert!(check_duality(&onb(), &onb(), DEFAULT_TOL).unwrap());
        let f = redundant();
        assert!(check_duality(&f, &canonical_dual(&f).unwrap(), DEFAULT_TOL).unwrap());
        let swapped = fr(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(!check_duality(&onb(), &swapped, DEFAULT_TOL).unwrap());
        assert!(matches!(
            check_duality(&onb(), &redundant(), DEFAULT_TOL),
            Err(FrameError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn controlled_examples() {
        let sys = ControlledSystem::new(onb(), Matrix::identity(2)).unwrap();
        let r = classify_controlled(&sys, DEFAULT_TOL);
        assert!(r.is_parseval);

        let sys = ControlledSystem::new(redundant(), Matrix::from_diagonal(&[0.5, 1.0])).unwrap();
        assert!(close(
            &controlled_frame_operator(&sys),
            &Matrix::identity(2),
            1e-15
        ));
        assert!(classify_controlled(&sys, DEFAULT_TOL).is_parseval);

        let swap = Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let sys = ControlledSystem::new(onb(), swap).unwrap();
        let r = classify_controlled(&sys, DEFAULT_TOL);
        assert!(!r.is_frame && r.bounds.is_none());

        assert!(matches!(
            ControlledSystem::new(onb(), Matrix::from_diagonal(&[1.0, 0.0])),
            Err(FrameError::NotInvertibleController { .. })
        ));
    }

    #[test]
    fn controlled_dual() {
        // C T T_g* = I with g = canonical dual of the uncontrolled frame and C = I.
        let f = redundant();
        let sys = ControlledSystem::new(f.clone(), Matrix::identity(2)).unwrap();
        let g = canonical_dual(&f).unwrap();
        assert!(check_controlled_duality(&sys, &g, DEFAULT_TOL).unwrap());
        // with C = diag(1/2, 1), the family g_j = f_j gives C S = I.
        let sys = ControlledSystem::new(f.clone(), Matrix::from_diagonal(&[0.5, 1.0])).unwrap();
        assert!(check_controlled_duality(&sys, &f, DEFAULT_TOL).unwrap());
        assert!(!check_controlled_duality(&sys, &g, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn biframe_examples() {
        let f = redundant();
        let a = classify_biframe(&f, &f, DEFAULT_TOL).unwrap();
        let b = classify_frame(&f, DEFAULT_TOL);
        assert_eq!(a.is_frame, b.is_frame);
        assert!(a.bounds.unwrap().distance(&b.bounds.unwrap()) < 1e-12);

        let g = fr(&[&[2.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let r = classify_biframe(&f, &g, DEFAULT_TOL).unwrap();
        assert!(r.is_frame);
        let bounds = r.bounds.unwrap();
        assert!((bounds.lower - 1.0).abs() < 1e-14 && (bounds.upper - 2.0).abs() < 1e-14);

        let r = classify_biframe(&fr(&[&[1.0, 0.0]]), &fr(&[&[0.0, 1.0]]), DEFAULT_TOL).unwrap();
        assert!(!r.is_bessel && !r.is_frame);
        assert!(r.hermitian_deviation > 0.1);
    }

    #[test]
    fn riesz_examples() {
        assert!(is_riesz_basis(&onb(), DEFAULT_TOL));
        assert!(!is_riesz_basis(&redundant(), DEFAULT_TOL));
        assert!(is_riesz_basis(
            &fr(&[&[1.0, 0.0], &[1.0, 1.0]]),
            DEFAULT_TOL
        ));
        assert!(!is_riesz_basis(
            &fr(&[&[1.0, 1.0], &[2.0, 2.0]]),
            DEFAULT_TOL
        ));
    }
}
