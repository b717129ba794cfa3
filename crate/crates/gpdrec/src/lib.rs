#![allow(clippy::needless_range_loop)] // parallel-array index loops are the local idiom
#![allow(clippy::manual_is_multiple_of)] // divisibility tests read better as `x % p == 0`

//! Finite ("desk-scale") groupoid reconstruction from convolution algebras.
//!
//! A finite discrete groupoid with a grading cocycle gives rise to a
//! convolution algebra over a finite commutative coefficient ring, together
//! with a distinguished commutative diagonal subalgebra.  This crate computes
//! the graded normalizer of that diagonal, factors it by its diagonal kernel,
//! and rebuilds the groupoid as a groupoid of germs of the quotient acting on
//! the ultracharacter space of its idempotent semilattice.  Every step is
//! backed by exhaustive brute-force oracles, which is the point of working at
//! finite scale: all the structure theory is checkable by enumeration.
//!
//! Finiteness is used aggressively.  Every finite Hausdorff space is
//! discrete, so "ample Hausdorff" is automatic, the interior of the isotropy
//! bundle is the isotropy bundle itself, and every point of the unit space is
//! isolated.  The non-discrete topology of the general theory degenerates to
//! power sets throughout.

pub mod algebra;
pub mod error;
pub mod germ;
pub mod group;
pub mod groupoid;
pub mod instance;
pub mod invsemi;
pub mod iso;
pub mod leavitt;
pub mod linalg;
pub mod normalizer;
pub mod ring;

pub use error::Error;

/// Crate version reported by the CLI and embedded in machine reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
