//! Bi-g-frames on finite-dimensional complex Hilbert spaces.
//!
//! A g-frame is a family of operators `Λ_j : ℂⁿ → ℂ^{m_j}`; a bi-g-frame is
//! a shape-matched pair `(Λ, Γ)` for which the mixed pairing
//! `Σ ⟨Λ_j f, Γ_j f⟩` is bounded between `C‖f‖²` and `D‖f‖²`. The crate
//! assembles the associated operators, computes optimal bounds, builds the
//! canonical dual pair, reconstructs vectors, and relates bi-g-frames to
//! biframes of vectors and to g-Riesz bases.
//!
//! Layers, bottom up:
//!
//! * [`kernel`]: dense complex matrices, Hermitian eigensolver, solves, norms.
//! * [`classical`]: vector frames, controlled frames, biframes, Riesz bases.
//! * [`gframe`]: g-frames, block synthesis/analysis, induced vectors.
//! * [`bigframe`]: the bi-g-frame operator, verdicts, duals, reconstruction.
//! * [`generators`]: seeded instances for tests and the CLI.
//!
//! Data-parallel loops run under an [`exec::Execution`] mode (rayon with the
//! default `parallel` feature); results are identical in both modes.

pub mod bigframe;
pub mod classical;
pub mod error;
pub mod exec;
pub mod generators;
pub mod gframe;
pub mod kernel;
pub mod report;
pub mod rng;

pub use bigframe::{BiGFrameSystem, BiGReport, DualPair, Reconstruction, Side};
pub use classical::{ControlledSystem, VectorFrame};
pub use error::{FrameError, Result};
pub use exec::Execution;
pub use gframe::{CoefficientSequence, GFrameSystem};
pub use kernel::{Matrix, C64, DEFAULT_TOL};
pub use report::{ClassifyReport, FrameBounds};
