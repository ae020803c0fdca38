//! Exact analysis of continuous piecewise-linear (CPWL) functions given as
//! signed rational combinations of max-of-affine terms.
//!
//! The central question answered by this crate: what is the minimal number of
//! arguments `k*` needed in the max terms of any such representation of a
//! given function? The answer is read off the tessellation the function
//! induces on its input space, through piecewise-constant delta functions of
//! the gradient field along flags of affine subspaces. Everything is exact
//! rational arithmetic, so constancy and equality are decided rather than
//! approximated.
//!
//! Capabilities, one runnable example each under `examples/`:
//! * build and evaluate CPWL expressions ([`CpwlExpr`]),
//! * enumerate the induced hyperplane arrangement's cells exactly
//!   ([`enumerate_cells`]),
//! * compute delta functions of the gradient field along flags ([`delta`]),
//! * certify the minimal max-arity `k*` ([`minimal_arity`]),
//! * synthesize explicit decompositions of that arity for `k* <= 3`
//!   ([`decompose`]),
//! * decide exact equivalence of two expressions ([`equivalent`]).

pub mod arity;
pub mod arrangement;
pub mod cli;
pub mod decompose;
pub mod delta;
pub mod expr;
pub mod feas;
pub mod json;
pub mod linalg;
pub mod rat;
pub mod report;

pub use arity::{check_arity, minimal_arity, ArityCertificate};
pub use arrangement::{
    arrangement_of, clearance, enumerate_cells, restrict, Cell, Hyperplane, Sign, StratifiedFamily,
};
pub use decompose::{decompose, decompose_low_dim, homogenize, split_lineality, Decomposition};
pub use delta::{
    delta, lineality, lineality_of_delta, make_directional, nonconstant_flags, DeltaFunction,
    Directional, Flag, GradientField, LinealityResult,
};
pub use expr::{equivalent, AffineFunc, AffineMap, CpwlExpr, Equivalence, MaxTerm};
pub use linalg::{complement_basis, AffineSubspace, LinearSubspace};
pub use rat::{parse_rat, QVec, Rat};
pub use report::{report, Report};

/// Errors surfaced by the public API.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not generic: a max term has a tied argmax")]
    NonGeneric,
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal verification failed: {0}")]
    InternalVerification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
