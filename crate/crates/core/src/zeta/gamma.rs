//! Gamma factors, local zeta functions, the functional equation and the
//! Fourier inversion identity behind it.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::integrate::{integrate_shell, scaled_q_half_power, Measure, ShellIntegralPlan};
use super::ZetaEngine;
use crate::error::{Error, Result};
use crate::exactnum::{CycValue, KElement, LaurentPoly, Substitution, Variable};
use crate::localchar::{hilbert_symbol, MultCharacter};
use crate::metaplectic::MetaElement;
use crate::repn::{InducedVector, XiRep};

/// `Gamma^{xi,eta}(s) = sum_n gamma(n) q^{ns}`.
#[derive(Clone, Debug)]
pub struct GammaFactor {
    pub xi: KElement,
    pub eta: KElement,
    pub poly: LaurentPoly,
    /// Every `gamma(n)` computed, including the checked zero beyond the bound.
    pub coefficients: BTreeMap<i64, CycValue>,
    /// `M = 2 max(l, m) - l`.
    pub bound: i64,
}

/// The gamma factors `Gamma^{xi,eta}` for one `xi`, one character and every
/// square-class representative `eta`.
#[derive(Clone, Debug)]
pub struct GammaSet {
    pub xi: KElement,
    pub entries: Vec<(XiRep, GammaFactor)>,
}

/// `Z(s) = sum_n z(n) q^{-ns}` together with the valuation window scanned.
#[derive(Clone, Debug)]
pub struct ZetaFunction {
    pub poly: LaurentPoly,
    pub window: (i64, i64),
}

/// Both sides of the functional equation and their difference, in `q^{-s}`.
#[derive(Clone, Debug)]
pub struct FeReport {
    pub xi: KElement,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub residual: LaurentPoly,
    /// `omega_pi(-1) != chi_psi mu(-1)`, so both sides vanish identically.
    pub parity_vacuous: bool,
}

impl FeReport {
    pub fn pass(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Scans valuations outward from `[-r, r]` until the five outermost values at
/// each end are zero.
fn scan_window<F>(r: i64, max_range: i64, mut f: F) -> Result<(BTreeMap<i64, CycValue>, (i64, i64))>
where
    F: FnMut(i64) -> Result<CycValue>,
{
    const CLOSURE: i64 = 5;
    let (mut lo, mut hi) = (-r, r);
    let mut values = BTreeMap::new();
    for n in lo..=hi {
        values.insert(n, f(n)?);
    }
    let closed = |values: &BTreeMap<i64, CycValue>, from: i64, step: i64| {
        (0..CLOSURE).all(|i| values[&(from + step * i)].is_zero())
    };
    while !closed(&values, lo, 1) {
        lo -= 1;
        if lo < -max_range {
            return Err(Error::WindowExhausted { lo: -max_range, hi });
        }
        values.insert(lo, f(lo)?);
    }
    while !closed(&values, hi, -1) {
        hi += 1;
        if hi > max_range {
            return Err(Error::WindowExhausted { lo, hi: max_range });
        }
        values.insert(hi, f(hi)?);
    }
    Ok((values, (lo, hi)))
}

impl ZetaEngine {
    fn level(&self) -> i64 {
        self.pi.level() as i64
    }

    /// Level at which `x -> W^xi_v(<x>) chi_psi(x) mu(x)` is constant on
    /// `x (1 + P^L)`.
    fn torus_level(&self, v: &InducedVector, m: u32) -> u32 {
        let tmax = v
            .terms()
            .filter_map(|((t, _, _), _)| t.val())
            .map(|e| -e)
            .max()
            .unwrap_or(0);
        (self.level()).max(m as i64).max(1).max(tmax) as u32
    }

    /// `omega_pi(-1) = chi_psi(-1) mu(-1)`.
    pub fn parity_holds(&self, mu: &MultCharacter) -> Result<bool> {
        let minus_one = KElement::from_int(self.pi.ctx(), -1);
        let rhs = self.chi_psi(&minus_one)?.scale_int(mu.sign() as i64);
        Ok(self.pi.central_value()? == rhs)
    }

    /// `gamma(n) = 2 q^{-n/2} int_{v(x) = -n} J(<x> w) chi_psi(x) mu(x) d^x x`.
    pub fn gamma_coefficient(
        &self,
        xi: &KElement,
        eta: &KElement,
        mu: &MultCharacter,
        n: i64,
    ) -> Result<CycValue> {
        let ctx = self.pi.ctx();
        let level = (self.level() + n.max(0)).max(mu.conductor() as i64).max(1) as u32;
        let mut f = |x: &KElement| -> Result<CycValue> {
            let j = self.bessel_direct(xi, eta, x)?;
            if j.is_zero() {
                return Ok(j);
            }
            Ok(&(&j * &self.chi_psi(x)?) * &mu.eval(x)?)
        };
        let integral = integrate_shell(
            ctx,
            &mut f,
            &ShellIntegralPlan::shell(-n, level, Measure::Multiplicative),
        )?;
        Ok(&integral * &scaled_q_half_power(ctx, 2, -n))
    }

    /// `Gamma^{xi,eta}(s) = sum_{n=0}^{M} gamma(n) q^{ns}`; `gamma(M + 1)` is
    /// also computed and must vanish.
    pub fn gamma_factor(
        &self,
        xi: &KElement,
        eta: &KElement,
        mu: &MultCharacter,
    ) -> Result<GammaFactor> {
        let l = self.level();
        let bound = 2 * l.max(mu.conductor() as i64) - l;
        let q = self.pi.ctx().q();
        let mut poly = LaurentPoly::zero(Variable::QPosS, q);
        let mut coefficients = BTreeMap::new();
        for n in 0..=bound + 1 {
            let c = self.gamma_coefficient(xi, eta, mu, n)?;
            if n > bound && !c.is_zero() {
                return Err(Error::SupportViolation(format!(
                    "gamma({n}) = {c} beyond the bound {bound}"
                )));
            }
            poly.add_coeff(n, &c);
            coefficients.insert(n, c);
        }
        Ok(GammaFactor {
            xi: xi.clone(),
            eta: eta.clone(),
            poly,
            coefficients,
            bound,
        })
    }

    /// `Gamma^{xi,eta}` for every square-class representative `eta`.
    pub fn gamma_set(&self, xi: &KElement, mu: &MultCharacter) -> Result<GammaSet> {
        let mut entries = Vec::new();
        for rep in self.pi.spectrum().classes {
            let g = self.gamma_factor(xi, &rep.xi, mu)?;
            entries.push((rep, g));
        }
        Ok(GammaSet {
            xi: xi.clone(),
            entries,
        })
    }

    /// `Z(s, mu, l^xi, v) = 2 int W^xi_v(<x>) chi_psi(x) mu(x) |x|^{s-1/2} d^x x`,
    /// whose `q^{-ns}` coefficient is `2 q^{n/2}` times the integral over `v(x) = n`.
    pub fn zeta_function(
        &self,
        xi: &KElement,
        mu: &MultCharacter,
        v: &InducedVector,
    ) -> Result<ZetaFunction> {
        let ctx = self.pi.ctx();
        let level = self.torus_level(v, mu.conductor());
        let coeff = |n: i64| -> Result<CycValue> {
            if v.is_zero() {
                return Ok(CycValue::zero());
            }
            let mut f = |x: &KElement| -> Result<CycValue> {
                let w = self.pi.whittaker_function(xi, v, &MetaElement::torus(x)?)?;
                if w.is_zero() {
                    return Ok(w);
                }
                Ok(&(&w * &self.chi_psi(x)?) * &mu.eval(x)?)
            };
            let integral = integrate_shell(
                ctx,
                &mut f,
                &ShellIntegralPlan::shell(n, level, Measure::Multiplicative),
            )?;
            Ok(&integral * &scaled_q_half_power(ctx, 2, n))
        };
        let (values, window) = scan_window(self.level() + 6, self.max_range, coeff)?;
        let mut poly = LaurentPoly::zero(Variable::QNegS, ctx.q());
        for (n, c) in &values {
            poly.add_coeff(*n, c);
        }
        Ok(ZetaFunction { poly, window })
    }

    /// `Z(s, mu, l^xi, pi(w) v) - (1/4) sum_eta |eta| Gamma^{xi,eta}(s) Z(1 - s, mu^-1, l^eta, v)`.
    pub fn check_fe(
        &self,
        xi: &KElement,
        mu: &MultCharacter,
        v: &InducedVector,
    ) -> Result<FeReport> {
        let gammas = self.gamma_set(xi, mu)?;
        self.check_fe_with(&gammas, mu, v)
    }

    /// As `check_fe`, with precomputed gamma factors.
    pub fn check_fe_with(
        &self,
        gammas: &GammaSet,
        mu: &MultCharacter,
        v: &InducedVector,
    ) -> Result<FeReport> {
        let ctx = self.pi.ctx();
        let xi = &gammas.xi;
        let wv = self.pi.act(&MetaElement::w(ctx), v)?;
        let lhs = self.zeta_function(xi, mu, &wv)?.poly;
        let mu_inv = mu.inverse();
        let mut rhs = LaurentPoly::zero(Variable::QNegS, ctx.q());
        for (rep, gamma) in &gammas.entries {
            let z = self
                .zeta_function(&rep.xi, &mu_inv, v)?
                .poly
                .substitute(Substitution::SToOneMinusS);
            let weight = CycValue::from_rational(&rep.abs / BigRational::from_integer(4.into()));
            rhs = rhs.add(&gamma.poly.mul(&z).scale(&weight));
        }
        let residual = lhs.sub(&rhs);
        Ok(FeReport {
            xi: xi.clone(),
            lhs,
            rhs,
            residual,
            parity_vacuous: !self.parity_holds(mu)?,
        })
    }

    /// Valuations `n` for which `W^xi_v(<x>)` is not identically zero on `v(x) = n`.
    pub fn whittaker_torus_support(&self, xi: &KElement, v: &InducedVector) -> Result<Vec<i64>> {
        let ctx = self.pi.ctx();
        let level = self.torus_level(v, 0);
        let probe = |n: i64| -> Result<CycValue> {
            for x in
                super::integrate::coset_points(ctx, n, level + 1, super::integrate::Domain::Shell)
            {
                if !self
                    .pi
                    .whittaker_function(xi, v, &MetaElement::torus(&x)?)?
                    .is_zero()
                {
                    return Ok(CycValue::one());
                }
            }
            Ok(CycValue::zero())
        };
        let (values, _) = scan_window(self.level() + 6, self.max_range, probe)?;
        Ok(values
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, _)| n)
            .collect())
    }

    /// Both sides of
    /// `W^xi_v(<a> w) = sum_eta (|eta| / 2) int J^{xi,eta}(<a y> w) (a y, y) W^eta_v(<y>) d^x y`.
    pub fn fourier_inversion(
        &self,
        xi: &KElement,
        v: &InducedVector,
        a: &KElement,
    ) -> Result<(CycValue, CycValue)> {
        let ctx = self.pi.ctx();
        let l = self.level();
        let va = a.val().ok_or(Error::ZeroArgument)?;
        let g = MetaElement::torus(a)?.mul(&MetaElement::w(ctx));
        let lhs = self.pi.whittaker_function(xi, v, &g)?;
        let mut rhs = CycValue::zero();
        for rep in self.pi.spectrum().classes {
            let eta = &rep.xi;
            let mut total = CycValue::zero();
            for k in self.whittaker_torus_support(eta, v)? {
                let level = (self.torus_level(v, 0) as i64).max(l - (va + k).min(0)) as u32;
                let mut f = |y: &KElement| -> Result<CycValue> {
                    let w = self
                        .pi
                        .whittaker_function(eta, v, &MetaElement::torus(y)?)?;
                    if w.is_zero() {
                        return Ok(w);
                    }
                    let ay = a * y;
                    let j = self.bessel_direct(xi, eta, &ay)?;
                    Ok((&j * &w).scale_int(hilbert_symbol(&ay, y)? as i64))
                };
                total += &integrate_shell(
                    ctx,
                    &mut f,
                    &ShellIntegralPlan::shell(k, level, Measure::Multiplicative),
                )?;
            }
            let weight = &rep.abs / BigRational::from_integer(2.into());
            rhs += &total.scale(&weight);
        }
        Ok((lhs, rhs))
    }

    /// Both sides of
    /// `J^{t^2 xi, u^2 eta}(<a> w) = c_eta(u) c_xi(t)^-1 (u, -1) |u|^-2 J^{xi,eta}(<a><t><u> w)`
    /// for units `t`, `u` keeping `t^2 xi`, `u^2 eta` in `X(pi)`.
    pub fn bessel_transform_check(
        &self,
        xi: &KElement,
        eta: &KElement,
        t: &KElement,
        u: &KElement,
        a: &KElement,
    ) -> Result<(CycValue, CycValue)> {
        let ctx = self.pi.ctx();
        let w = MetaElement::w(ctx);
        let xi2 = &(t * t) * xi;
        let eta2 = &(u * u) * eta;
        let lhs = self
            .bessel_at(&xi2, &eta2, &MetaElement::torus(a)?.mul(&w))?
            .value;
        let g = MetaElement::torus(a)?
            .mul(&MetaElement::torus(t)?)
            .mul(&MetaElement::torus(u)?)
            .mul(&w);
        let j = self.bessel_at(xi, eta, &g)?.value;
        let minus_one = KElement::from_int(ctx, -1);
        let abs_u = u.abs();
        let factor = self
            .pi
            .c_factor(eta, u)?
            .div(&self.pi.c_factor(xi, t)?)?
            .scale_int(hilbert_symbol(u, &minus_one)? as i64)
            .scale(&(BigRational::from_integer(1.into()) / (&abs_u * &abs_u)));
        Ok((lhs, &factor * &j))
    }
}
