//! Numerical engine for skeletal modular tensor categories and their tube
//! categories.
//!
//! The crate is layered bottom-up:
//!
//! * [`category`] holds the fusion/F/R/pivotal data of a skeletal MTC, the
//!   builtin catalogue, the JSON loader and the axiom checker.
//! * [`homspace`] is the linear algebra of `Hom_C` spaces in left-associated
//!   fusion-tree bases: composition, tensor products, braidings, bends,
//!   pairings, dual bases and traces.
//! * [`diagram`] is a slice-wise string-diagram IR with a small text DSL and
//!   an evaluator that lowers diagrams to [`homspace::Morphism`]s.
//! * [`tube`] builds the tube category: Hom spaces `⊕_R Hom(R⊗X, Y⊗R)`,
//!   composition by stacking cylinders, and the tube algebra.
//! * [`reps`] implements the functors `F_IJ`, the λ/μ maps, primitive
//!   idempotents and block decompositions of `End_TC(X)`.
//! * [`verify`] runs every identity as a named, seeded check and produces
//!   reports.

pub mod category;
pub mod diagram;
pub mod exec;
pub mod homspace;
pub mod reps;
pub mod tube;
pub mod verify;

mod linalg;

pub use category::{AxiomReport, CategoryData, CategoryError, Label};
pub use diagram::{DiagramError, DiagramIR};
pub use exec::Exec;
pub use homspace::{HomError, Morphism, ObjectWord};
pub use reps::BlockDecomposition;
pub use tube::{TubeAlgebra, TubeMorphism};
pub use verify::CheckReport;
pub use linalg::tidy;

/// Complex scalar used throughout the engine.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
