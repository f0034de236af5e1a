//! Φ-functions: x-independent curves, their conjugates and x-dependent families.

pub mod conjugate;
pub mod curve;
pub mod function;

pub use conjugate::Conjugate;
pub use curve::{MonotoneFunction, Piece, PhiCurve, PowerTerm};
pub use function::{make_family, FieldCurve, FieldPiece, FieldTerm, PhiFunction, PhiSpec, Provenance};
