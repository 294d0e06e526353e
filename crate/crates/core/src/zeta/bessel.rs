//! Bessel functions `J^{xi,eta}(g)` by the defining improper integral and by
//! the closed shell formula.

use std::collections::BTreeMap;

use super::integrate::{
    coset_points, improper_integral, BallPartialSums, Domain, Measure, ShellIntegralPlan,
    Stabilized,
};
use super::ZetaEngine;
use crate::error::{Error, Result};
use crate::exactnum::{CycValue, KElement};
use crate::localchar::{hilbert_symbol, psi_value};
use crate::metaplectic::MetaElement;
use crate::repn::InducedVector;

/// `x -> J^{xi,eta}(<x> w)` tabulated on shells `v(x) = n`, keyed by the unit
/// residue `u mod p^L` of `x = p^n u`.
#[derive(Clone, Debug)]
pub struct BesselTable {
    pub xi: KElement,
    pub eta: KElement,
    pub level: u32,
    pub values: BTreeMap<i64, BTreeMap<u64, CycValue>>,
}

impl BesselTable {
    pub fn get(&self, x: &KElement) -> Option<&CycValue> {
        let n = x.val()?;
        let u = x.unit_part().ok()?.residue(self.level).ok()?;
        self.values.get(&n)?.get(&u)
    }
}

fn val_or_inf(x: &KElement) -> Option<i64> {
    x.val()
}

impl ZetaEngine {
    fn eigen_index(&self, eta: &KElement) -> Result<usize> {
        self.pi
            .eigenbasis()
            .matching(eta)
            .map(|e| e.index)
            .ok_or_else(|| Error::NotInSpectrum(eta.to_string()))
    }

    /// `J^{xi,eta}(<x> w)` from the defining integral, with its stabilization trace.
    pub fn bessel_direct_trace(
        &self,
        xi: &KElement,
        eta: &KElement,
        x: &KElement,
    ) -> Result<Stabilized> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let g = MetaElement::torus(x)?.mul(&MetaElement::w(x.ctx()));
        self.bessel_at(xi, eta, &g)
    }

    /// `J^{xi,eta}(<x> w)`, memoized.
    pub fn bessel_direct(&self, xi: &KElement, eta: &KElement, x: &KElement) -> Result<CycValue> {
        let key = (xi.clone(), eta.clone(), x.clone());
        if let Some(v) = self.bessel_cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = self.bessel_direct_trace(xi, eta, x)?.value;
        self.bessel_cache
            .lock()
            .expect("cache lock")
            .insert(key, v.clone());
        Ok(v)
    }

    /// `J^{xi,eta}(g) = int^+ W^xi_v(g n(y)) psi(-eta y) dy` with
    /// `v = phi^e_{b'}`, `b'` the eigenline of `eta`, so that `W^eta_v(e) = 1`.
    ///
    /// The integrand is constant on cosets of `P^l` in `y`. It vanishes unless
    /// `n(-y) g^-1` lies in a coset with `n = 0`, which is decided from
    /// valuations alone on most shells.
    pub fn bessel_at(&self, xi: &KElement, eta: &KElement, g: &MetaElement) -> Result<Stabilized> {
        self.bessel_of_vector(
            xi,
            eta,
            g,
            &InducedVector::basis(&KElement::zero(g.ctx()), 0, self.eigen_index(eta)?),
        )
    }

    pub(crate) fn bessel_of_vector(
        &self,
        xi: &KElement,
        eta: &KElement,
        g: &MetaElement,
        v: &InducedVector,
    ) -> Result<Stabilized> {
        let ctx = g.ctx();
        let l = self.pi.level() as i64;
        self.eigen_index(xi)?;
        let ginv = g.matrix().inv();
        let (a, c) = (ginv.a().clone(), ginv.c().clone());
        let va = val_or_inf(&a);
        let vc = val_or_inf(&c)
            .ok_or_else(|| Error::Config("Bessel integral needs g in B w N".into()))?;
        // the coset index of n(-y) g^-1 is min(v(a - y c), v(c))
        let shell_index = |k: i64| -> Option<i64> {
            let yc = k + vc;
            match va {
                None => Some(yc.min(vc)),
                Some(va) if va != yc => Some(va.min(yc).min(vc)),
                _ => None,
            }
        };
        let mut integrand = |k: i64, y: &KElement| -> Result<CycValue> {
            let index = if y.is_zero() {
                va.unwrap_or(i64::MAX).min(vc)
            } else {
                shell_index(k).unwrap_or(0)
            };
            if index != 0 {
                return Ok(CycValue::zero());
            }
            let h = g.mul(&MetaElement::n(y));
            let w = self.pi.whittaker_function(xi, v, &h)?;
            if w.is_zero() {
                return Ok(w);
            }
            Ok(&w * &psi_value(&(-&(eta * y))))
        };
        let mut sums = BallPartialSums::new(ctx, l, &mut integrand);
        let start = (vc - va.unwrap_or(0).min(0)).max(0);
        improper_integral(|n| sums.partial(n), start, self.max_range)
    }

    /// `J^{xi,eta}(<x> w)` for `v(x) = n <= -l` by the closed formula
    /// `int_{p^n O^x} |sigma(<x y^-1>) b'|_b (x^-1 y, y^-1) psi(-xi x^2 y^-1 - eta y) dy`.
    pub fn bessel_closed(&self, xi: &KElement, eta: &KElement, x: &KElement) -> Result<CycValue> {
        let ctx = x.ctx();
        let l = self.pi.level() as i64;
        let n = x.val().ok_or(Error::ZeroArgument)?;
        if n > -l {
            return Err(Error::Config(format!(
                "closed Bessel formula needs v(x) <= -{l}, got {n}"
            )));
        }
        let b = self.eigen_index(xi)?;
        let bp = self.eigen_index(eta)?;
        let x2 = x * x;
        let mut f = |y: &KElement| -> Result<CycValue> {
            let m = self.pi.genuine_eig(&MetaElement::torus(&(x / y))?)?;
            let coeff = m.get(b, bp);
            if coeff.is_zero() {
                return Ok(CycValue::zero());
            }
            let sign = hilbert_symbol(&(y / x), &y.inv()?)?;
            let phase = psi_value(&(-&(&(xi * &(&x2 / y)) + &(eta * y))));
            Ok((coeff * &phase).scale_int(sign as i64))
        };
        let plan = ShellIntegralPlan::shell(n, (l - n) as u32, Measure::Additive);
        super::integrate::integrate_shell(ctx, &mut f, &plan)
    }

    /// Tabulates `J^{xi,eta}(<x> w)` on the given shells at unit level
    /// `level`, by the direct method, cross-checked by the closed formula
    /// where it applies.
    pub fn bessel_table(
        &self,
        xi: &KElement,
        eta: &KElement,
        shells: std::ops::RangeInclusive<i64>,
        level: u32,
    ) -> Result<BesselTable> {
        let ctx = xi.ctx();
        let l = self.pi.level() as i64;
        let mut values = BTreeMap::new();
        for n in shells {
            let mut row = BTreeMap::new();
            for x in coset_points(ctx, n, level, Domain::Shell) {
                let j = self.bessel_direct(xi, eta, &x)?;
                if n <= -l {
                    let closed = self.bessel_closed(xi, eta, &x)?;
                    if closed != j {
                        return Err(Error::InconsistentConstant(format!(
                            "J({x}) is {j} by the direct integral and {closed} by the closed formula"
                        )));
                    }
                }
                row.insert(x.unit_part()?.residue(level)?, j);
            }
            values.insert(n, row);
        }
        Ok(BesselTable {
            xi: xi.clone(),
            eta: eta.clone(),
            level,
            values,
        })
    }

    /// `max |J(<x> w)| / max(1, |x|)` over the table entries.
    pub fn bessel_growth(&self, table: &BesselTable) -> f64 {
        let q = self.pi.ctx().q() as f64;
        let mut c: f64 = 0.0;
        for (n, row) in &table.values {
            let abs_x = q.powi(-(*n as i32));
            for j in row.values() {
                c = c.max(j.to_complex().norm() / abs_x.max(1.0));
            }
        }
        c
    }
}
