use crate::kernel::Matrix;

/// Optimal lower/upper bounds: the extreme eigenvalues of the (Hermitian)
/// operator whose quadratic form is being bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    /// Largest difference between corresponding bounds.
    pub fn distance(&self, other: &FrameBounds) -> f64 {
        (self.lower - other.lower)
            .abs()
            .max((self.upper - other.upper).abs())
    }
}

/// Verdicts for frames, g-frames, controlled frames and biframes.
///
/// `is_parseval ⇒ is_tight ⇒ is_frame ⇒ is_bessel`, and `bounds` is present
/// exactly when `is_frame` holds.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyReport {
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_riesz: bool,
    pub bounds: Option<FrameBounds>,
    pub hermitian_deviation: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SpectralVerdict {
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub bounds: Option<FrameBounds>,
    pub hermitian_deviation: f64,
}

impl SpectralVerdict {
    /// Decides the frame-type verdicts from the operator representing the
    /// quadratic form `f ↦ ⟨S f, f⟩`.
    ///
    /// A form that takes non-real values cannot satisfy a two-sided real
    /// inequality, so a deviation above `tol` rules out even the Bessel
    /// property. Otherwise the form is bounded above and the frame verdict
    /// is `λ_min > tol · λ_max`.
    pub fn of_operator(op: &Matrix, tol: f64) -> Self {
        let deviation = op
            .hermitian_deviation()
            .expect("frame operators are square");
        let negative = SpectralVerdict {
            is_bessel: false,
            is_frame: false,
            is_tight: false,
            is_parseval: false,
            bounds: None,
            hermitian_deviation: deviation,
        };
        if deviation > tol {
            return negative;
        }
        let eig = match op.eig_hermitian_tol(tol) {
            Ok(e) => e,
            Err(_) => return negative,
        };
        let (lo, hi) = (eig.min(), eig.max());
        let is_frame = hi > 0.0 && lo > tol * hi;
        let is_tight = is_frame && hi - lo <= tol * hi;
        let is_parseval = is_tight && (hi - 1.0).abs() <= tol;
        SpectralVerdict {
            is_bessel: true,
            is_frame,
            is_tight,
            is_parseval,
            bounds: is_frame.then_some(FrameBounds {
                lower: lo,
                upper: hi,
            }),
            hermitian_deviation: deviation,
        }
    }

    pub fn into_report(self, is_riesz: bool, tolerance: f64) -> ClassifyReport {
        ClassifyReport {
            is_bessel: self.is_bessel,
            is_frame: self.is_frame,
            is_tight: self.is_tight,
            is_parseval: self.is_parseval,
            is_riesz,
            bounds: self.bounds,
            hermitian_deviation: self.hermitian_deviation,
            tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implication_chain() {
        let cases = [
            Matrix::identity(3),
            Matrix::from_diagonal(&[2.0, 2.0]),
            Matrix::from_diagonal(&[1.0, 2.0]),
            Matrix::from_diagonal(&[0.0, 2.0]),
            Matrix::from_diagonal(&[-1.0, 1.0]),
            Matrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap(),
        ];
        for op in &cases {
            let v = SpectralVerdict::of_operator(op, 1e-9);
            assert!(!v.is_parseval || v.is_tight);
            assert!(!v.is_tight || v.is_frame);
            assert!(!v.is_frame || v.is_bessel);
            assert_eq!(v.bounds.is_some(), v.is_frame);
        }
    }

    #[test]
    fn indefinite_and_negative_forms_are_not_frames() {
        let v = SpectralVerdict::of_operator(&Matrix::from_diagonal(&[-1.0, 1.0]), 1e-9);
        assert!(v.is_bessel && !v.is_frame);
        let v = SpectralVerdict::of_operator(&Matrix::from_diagonal(&[-2.0, -1.0]), 1e-9);
        assert!(!v.is_frame);
    }
}
