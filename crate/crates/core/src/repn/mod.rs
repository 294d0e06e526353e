//! Strongly cuspidal data `sigma` on `SL_2(Z/p^l)`, its genuine extension,
//! the induced supercuspidal representation, `X(pi)`, and Whittaker
//! functionals.

mod induced;
mod matrix;
mod sigma;

pub use induced::{EigenBasis, EigenEntry, InducedVector, SpectrumXPi, Supercuspidal, XiRep};
pub use matrix::Mat;
pub(crate) use sigma::parse_rational;
pub use sigma::{
    check_strongly_cuspidal, enumerate_sl2, mul_mod, Residue, SigmaFile, SigmaFileEntry, SigmaRep,
    SigmaTerm,
};
