//! Generalized graphons on `[0, inf)` for sparse graph sequences.
//!
//! A generalized graphon is a symmetric measurable `W: R+^2 -> [0, 1]` with
//! finite `L1` norm. Stretching by `r = sqrt(||W||_1)` normalizes it to unit
//! mass, and the stretched cut distance compares sparse graphs whose dense
//! graphon sequence would collapse to zero.

pub mod cut;
pub mod edgelist;
pub mod error;
pub mod filterfit;
pub mod graph;
pub mod graphon;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod signal;
pub mod spectral;

pub use error::{GraphonError, Result};
pub use graph::Graph;
pub use graphon::{GraphonSpec, SignedStepGraphon, StepGraphon, StretchTag};
pub use scalar::{Real, Scalar};
pub use signal::{SignalProfile, StepSignal};
pub use cut::{AlignmentResult, Alignment, CutMode, CutResult, DistanceOptions};
pub use operators::{GraphonOperator, PolynomialFilter, SpectralFilter};
pub use spectral::{EdgeScale, EigenOptions, EigenReport};

pub type StepGraphonF64 = StepGraphon<f64>;
pub type StepGraphonF32 = StepGraphon<f32>;
pub type SignedStepGraphonF64 = SignedStepGraphon<f64>;
pub type GraphonSpecF64 = GraphonSpec<f64>;
pub type StepSignalF64 = StepSignal<f64>;
pub type StepSignalF32 = StepSignal<f32>;
pub type ExactStepGraphon = StepGraphon<num_rational::Rational64>;
pub type ExactSignedStepGraphon = SignedStepGraphon<num_rational::Rational64>;
