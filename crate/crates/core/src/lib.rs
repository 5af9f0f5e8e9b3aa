//! Classification of isometries into direct ones (products of squares) and
//! indirect ones, for real quadratic spaces `O(p,q)`, their affine groups,
//! Minkowski spacetime in either sign convention and the Galilean group of
//! Newton–Cartan spacetime; plus symmetry search and chirality verdicts
//! for spacetime objects.
//!
//! Every linear-algebra routine is generic over [`Scalar`], implemented for
//! `f64` (tolerance-based) and [`Rational`] (exact).

pub mod affine;
pub mod classify;
pub mod error;
pub mod galilean;
pub mod linalg;
pub mod objects;
pub mod orthogonal;
pub mod poincare;
pub mod quadspace;
pub mod scalar;

pub use affine::{AffineGroup, AffineIsometry};
pub use classify::{
    expected_class, parity_invariant_check, square_closure, Classification, ClassifiedGroup, DirectProduct,
    ExpectedClass, SemidirectElement, SemidirectProduct,
};
pub use error::{Error, Result};
pub use galilean::{Event, GalileanGroup, GalileanIsometry, KleinElement};
pub use linalg::{Matrix, Vector};
pub use objects::{chirality_verdict, ChiralityVerdict, FamilySpec, RigidBodySummary};
pub use orthogonal::{OrthogonalGroup, OrthogonalMap, ParityPair, ReflectionFactorization};
pub use poincare::{Axis, Convention, Generator, PoincareElement};
pub use quadspace::{QuadraticSpace, Signature, VectorSign};
pub use scalar::{Rational, Scalar, DEFAULT_TOLERANCE};
