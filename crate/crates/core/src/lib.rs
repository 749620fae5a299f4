//! Exact-arithmetic measures of sign-representation and rational approximation
//! for Boolean functions on finite rational domains.
//!
//! Everything here is computed over arbitrary-precision rationals: threshold
//! degree and approximate degree via exact linear programming, rational
//! approximation error brackets with verifiable certificates on both sides,
//! the classical explicit approximants (Newman's construction and its
//! derivatives), dual witnesses for direct-product lower bounds, and threshold
//! density at desk scale. No floating point appears on any certificate path.

pub mod acceptance;
pub mod boolfun;
pub mod certificates;
pub mod composition;
pub mod degrees;
pub mod density;
pub mod error;
pub mod lp;
pub mod poly;
pub mod rat;
pub mod rational;

pub use boolfun::{BooleanFunction, CompositionSpec, Family};
pub use degrees::{DegreeReport, DualWitness, WitnessKind};
pub use error::Error;
pub use lp::{LinearProgram, LpOutcome, LpStatus, Relation};
pub use poly::{SparsePolynomial, UnivariatePolynomial, UnivariateRational};
pub use rat::Rat;
pub use rational::{ErrorBracket, RationalApproximant};

pub type Result<T> = std::result::Result<T, Error>;
