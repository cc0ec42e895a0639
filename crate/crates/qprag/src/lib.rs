//! A workbench for pragmatic quantum logic over finite-dimensional Hilbert
//! spaces.
//!
//! The library mechanizes a justification-valued ("pragmatic") reading of
//! quantum logic on `ℂ^d`:
//!
//! * [`subspace`] — closed subspaces of `ℂ^d` with orthonormal bases and
//!   cached projectors; orthocomplement, meet, join, inclusion, all under a
//!   single numerical tolerance.
//! * [`extension`] — pragmatic extensions: finite unions of subspaces kept in
//!   antichain normal form, with union, intersection, closure and the
//!   extended complement.
//! * [`formula`] — the assertive language: elementary assertions `|-E(x)`
//!   and the connectives `N`, `K`, `A`, plus the defined `Aq`/`Iq` which are
//!   rewritten into primitives at construction time.
//! * [`model`] — property models binding names to subspaces, state
//!   references, classification of properties at a state, JSON loading and
//!   the built-in qubit/qutrit fixtures.
//! * [`pragmatics`] — evaluation of formulas at states, p-validity,
//!   the preorder on formulas, decidability analysis and justification
//!   assignments.
//! * [`quotient`] — the quotient of the decidable fragment by extensional
//!   equivalence, its order structure, and checks that it mirrors the
//!   subspace lattice; DOT and JSON exports.
//! * [`axioms`] — a battery of candidate axiom schemata verified by seeded
//!   instantiation, together with counterexample searches (failure of the
//!   excluded middle, non-closed disjunctions, failure of distributivity).
//! * [`cli`] — the `qprag` command-line interface.

pub mod axioms;
pub mod cli;
pub mod extension;
pub mod formula;
pub mod model;
pub mod pragmatics;
pub mod quotient;
pub mod subspace;

pub use extension::Extension;
pub use formula::{AssertiveFormula, Fragment, RadicalFormula};
pub use model::{PropertyModel, StateClassification, StateRef};
pub use pragmatics::JustificationValue;
pub use subspace::{Subspace, Tolerance};

/// Errors shared by every layer of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ambient dimension must lie in 1..={max}, got {got}", max = subspace::MAX_AMBIENT_DIM)]
    AmbientDim { got: usize },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("vector has {got} entries, expected {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("vector contains a non-finite entry")]
    NonFinite,
    #[error("a zero vector cannot denote a state or a ray")]
    ZeroVector,
    #[error("tolerance must lie strictly between 0 and 1, got {0}")]
    InvalidTolerance(f64),
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("duplicate property name `{0}`")]
    DuplicateName(String),
    #[error("property `{name}` would duplicate the subspace registered for `{existing}`")]
    DuplicateSubspace { name: String, existing: String },
    #[error("invalid property name `{0}`: use characters A-Z a-z 0-9 _ + - and avoid the connective keywords")]
    InvalidPropertyName(String),
    #[error("enumeration depth {0} exceeds the supported maximum of 6")]
    DepthTooLarge(usize),
    #[error("enumeration would exceed {limit} formulas; restrict the property set or the depth")]
    UniverseTooLarge { limit: usize },
    #[error("formula lies outside the decidable fragment (contains the connective A): {0}")]
    OutsideDecidableFragment(String),
    #[error("axiom schema {schema} takes {expected} arguments, got {got}")]
    ArityMismatch {
        schema: String,
        expected: usize,
        got: usize,
    },
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
