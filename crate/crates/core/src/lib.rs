//! Exact knot Floer complexes over F2[U].
//!
//! The crate is organised bottom-up:
//!
//! * [`grading`], [`f2`]: exact rational gradings and packed F2 linear algebra;
//! * [`complex`], [`homology`]: free graded complexes over F2[U], tensor
//!   products, cancellation and the F2[U]-module structure of homology;
//! * [`cfk`]: bigraded knot complexes, the built-in zoo and hat-level invariants;
//! * [`surgery`]: the integer surgery mapping cone, d-invariants, Kunneth sums
//!   and exact-triangle forcing;
//! * [`whitehead`]: Whitehead doubles of tau = 0 knots and clasp cobordism steps;
//! * [`endfloer`]: graded directed systems and end Floer reports of slice R^4s;
//! * [`json`], [`cli`], [`verify`]: corpus I/O, the command-line front end and
//!   the reproduction suite.

pub mod cfk;
pub mod cli;
pub mod complex;
pub mod endfloer;
pub mod error;
pub mod f2;
pub mod grading;
pub mod homology;
pub mod json;
pub mod surgery;
pub mod verify;
pub mod whitehead;

pub use cfk::{Ambient, KnotComplex, ReducedBasisForm, Sign};
pub use complex::{tensor_complexes, validate_complex, Arrow, FreeComplex, Generator, ValidationReport};
pub use error::{Error, Result};
pub use grading::Grading;
pub use homology::{homology_decomposition, plus_presentation, Convention, FUDecomposition, Torsion};
