//! Numerical radius and a-numerical radius bounds built on Orlicz functions.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod orlicz;
pub mod state;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use orlicz::{complementary, ComplementaryPair, OrliczFn, TriState};
pub use state::{a_numerical_radius, a_seminorm, numerical_radius, AState, Weight};
