//! Modular composition over prime fields via bivariate relations.
//!
//! The main entry point is [`compose::univariate_compose`] (and the reusable
//! [`compose::Composer`]), which computes `g(a) mod f` through a basis of
//! polynomial relations between `x` and `a`. Simpler reference algorithms
//! (Horner, Brent–Kung, Nüsken–Ziegler) live alongside it and are used as
//! fallbacks and test oracles.

pub mod error;
pub mod approximant;
pub mod bipoly;
pub mod field;
pub mod instance;
pub mod interp;
pub mod linalg;
pub mod poly;
pub mod polymat;
pub mod compose;
pub mod duality;
pub mod relations;
pub mod truncated;

pub use error::{Error, NonGenericReason, Result};
pub use bipoly::{BiPoly, MultiPoly3};
pub use field::{Field, FieldElement};
pub use poly::Poly;
pub use polymat::{PolyMatrix, Shift, Var};
