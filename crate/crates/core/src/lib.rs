//! Algebraic cochain machinery: graded algebras, noncommutative forms, bar
//! constructions, cochains with values in differential graded algebras, and
//! the Clifford/exterior models used by the Bott, JLO and Thom form
//! computations.

pub mod bar;
pub mod cliffext;
pub mod cochains;
pub mod conventions;
pub mod heat;
pub mod linear;
pub mod ncalg;
pub mod ncforms;
pub mod scalars;
pub mod scenarios;
pub mod superalg;
pub mod symbol;
pub mod verify;

pub use ncalg::{Algebra, AlgebraBuilder, GenId, GradedElement, NcalgError, Word};
pub use scalars::{Monomial, Rational, Scalar, ScalarError};
pub use symbol::Symbol;
pub use ncforms::{connes_b, hochschild_b, Form, FormWord};
pub use verify::{run_suite, CheckResult, CheckStatus, RunReport, Suite, VerifyOptions};
