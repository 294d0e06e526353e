//! Exact scalars: rationals with p-adic structure, cyclotomic values and
//! Laurent polynomials in `q^{\pm s}`.

pub mod cyclotomic;
pub mod laurent;
pub mod modarith;
pub mod padic;

pub use cyclotomic::{CycValue, Root};
pub use laurent::{LaurentPoly, Substitution, Variable};
pub use padic::{KElement, PadicContext, Valuation};
