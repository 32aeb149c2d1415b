//! Combinatorial invariants of Laurent polynomials whose Newton polytope is
//! a lattice simplicial polytope with the origin in its interior.
//!
//! The pipeline has two independent halves that must agree:
//!
//! * the combinatorial half ([`fan`], [`boxes`], [`conewise`], [`diamond`])
//!   computes stacky-fan data, box elements, h-vectors of quotient fans and
//!   assembles Hodge diamonds and the singularity spectrum;
//! * the algebraic half ([`oracle`]) builds the Newton-graded Jacobian ring
//!   of `f = sum a_v t^v` with exact rational linear algebra and re-derives
//!   the same numbers from scratch, checking hard Lefschetz, the monodromy
//!   filtration and the opposite-filtration (Birkhoff) splitting on the way.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod boxes;
pub mod conewise;
pub mod diamond;
pub mod exact;
pub mod fan;
pub mod oracle;
pub mod par;
pub mod polytope;
pub mod sample;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
