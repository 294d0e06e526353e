//! Exact p-adic integration, Bessel functions, gamma factors, local zeta
//! functions and the functional equation relating them.

mod bessel;
mod gamma;
mod integrate;

use std::collections::HashMap;
use std::sync::Mutex;

pub use bessel::BesselTable;
pub use gamma::{FeReport, GammaFactor, GammaSet, ZetaFunction};
pub use integrate::{
    coset_points, improper_integral, integrate_shell, shell_sum, BallPartialSums, Domain, Measure,
    ShellIntegralPlan, Stabilized,
};

use crate::error::Result;
use crate::exactnum::{CycValue, KElement};
use crate::localchar::ChiPsiTable;
use crate::repn::Supercuspidal;

/// Default cap on `|valuation|` for improper integrals and zeta windows.
pub const DEFAULT_MAX_RANGE: i64 = 40;

/// Computes Bessel functions, gamma factors and zeta functions of one
/// supercuspidal representation. Shareable across threads; Bessel values are
/// memoized.
pub struct ZetaEngine {
    pi: Supercuspidal,
    chi: ChiPsiTable,
    max_range: i64,
    bessel_cache: Mutex<HashMap<(KElement, KElement, KElement), CycValue>>,
}

impl ZetaEngine {
    pub fn new(pi: Supercuspidal, max_range: i64) -> Result<Self> {
        let chi = ChiPsiTable::new(pi.ctx())?;
        Ok(Self {
            pi,
            chi,
            max_range,
            bessel_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn pi(&self) -> &Supercuspidal {
        &self.pi
    }

    pub fn max_range(&self) -> i64 {
        self.max_range
    }

    pub fn chi_psi(&self, a: &KElement) -> Result<CycValue> {
        self.chi.eval(a)
    }
}

#[cfg(test)]
mod tests;
