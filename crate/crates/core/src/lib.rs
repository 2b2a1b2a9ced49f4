//! Stringy Chow rings of weighted blowups, computed in exact integer
//! arithmetic.
//!
//! The layers build on one another:
//! - [`zlin`]: Hermite/Smith normal forms and abelian-group presentations.
//! - [`graded`]: degree-truncated normal forms of graded ℤ-algebras.
//! - [`blowup`]: Chow rings of the exceptional divisor and of the blowup.
//! - [`stringy`]: sectors, ages and the star product.
//! - [`presentation`]: the ambient subring and the finite-generation
//!   presentation, with machine verification.

pub mod blowup;
pub mod graded;
pub mod presentation;
pub mod stringy;
pub mod zlin;

/// Arbitrary-precision integer used for all Chow-group coordinates.
pub type Int = num_bigint::BigInt;

/// Integer matrix over [`Int`].
pub type IntMatrix = zlin::Matrix<Int>;

/// Exact rational number (ages, fractional degrees).
pub type Rational = num_rational::Ratio<i64>;

/// Degrees live in `(1/L)ℤ` for a declared denominator `L`.
pub type Degree = Rational;


pub use blowup::{BlowupError, BlowupInstance, CenterData, CenterIdeal, IdealData, InstanceData, PairElement, PairRing, RingData};
pub use stringy::{SectorId, StringyClass, StringyError, StringyRing};
pub use graded::{Element, Graded, GradedError, GradedMorphism, GradedRing, Polynomial, RingPresentation};

pub use zlin::{AbGroupPresentation, Lattice};
