//! Exact computations in Lusztig's algebra `f` attached to a symmetrizable
//! Cartan datum: the free algebra and its bilinear form, weight spaces of the
//! quotient by the radical, Lusztig's braid group symmetries on `_i f`, and
//! the Grothendieck-group model of those symmetries coming from quivers with
//! automorphism.

pub mod braid;
pub mod cartan;
pub mod error;
mod exec;
pub mod falg;
pub mod freealg;
pub mod kgroup;
mod linalg;
pub mod quiver;
pub mod scalars;
pub mod verify;

pub use cartan::{CartanDatum, Weight};
pub use error::{Error, Result};
pub use exec::PARALLEL_AVAILABLE;
pub use falg::{Algebra, WeightSpace, WeightSpaceReport, DEFAULT_MAX_HEIGHT};
pub use freealg::{pair, Element, ElementJson, Word, WordForm};
pub use quiver::{unfold, Folding, Orientation, Quiver, QuiverAut, QuiverJson};
pub use scalars::{
    quantum_binomial, quantum_factorial, quantum_integer, rf_normalize, LaurentPoly, RationalFn,
};
