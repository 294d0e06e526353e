//! Exact integration of locally constant functions over p-adic shells and
//! balls, and improper integrals `lim_N int_{P^-N}`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::{CycValue, KElement, PadicContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `dx` with `vol(O) = 1`.
    Additive,
    /// `d^x x = dx / |x|`, so `vol(O^x) = 1 - 1/q`.
    Multiplicative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `p^n O^x`
    Shell,
    /// `p^n O`
    Ball,
}

/// How to integrate over `p^n O^x` (or `p^n O`): the integrand is assumed
/// constant on cosets `x + p^{n+L} O`, which is checked against level `L + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellIntegralPlan {
    pub valuation: i64,
    pub level: u32,
    pub measure: Measure,
    pub domain: Domain,
}

impl ShellIntegralPlan {
    pub fn shell(valuation: i64, level: u32, measure: Measure) -> Self {
        Self {
            valuation,
            level,
            measure,
            domain: Domain::Shell,
        }
    }

    pub fn ball(valuation: i64, level: u32) -> Self {
        Self {
            valuation,
            level,
            measure: Measure::Additive,
            domain: Domain::Ball,
        }
    }
}

fn rational_q_power(ctx: PadicContext, e: i64) -> BigRational {
    KElement::p_power(ctx, e).value().clone()
}

/// Points `p^n u` with `u` running over `(O/P^L)^x` (shell) or `O/P^L` (ball).
pub fn coset_points(
    ctx: PadicContext,
    valuation: i64,
    level: u32,
    domain: Domain,
) -> Vec<KElement> {
    let m = ctx.pow(level);
    let p = ctx.p();
    let pn = KElement::p_power(ctx, valuation);
    (0..m)
        .filter(|u| domain == Domain::Ball || u % p != 0)
        .map(|u| &pn * &KElement::from_int(ctx, u as i64))
        .collect()
}

/// One Riemann sum at a fixed level.
pub fn shell_sum<F>(
    ctx: PadicContext,
    plan: &ShellIntegralPlan,
    level: u32,
    f: &mut F,
) -> Result<CycValue>
where
    F: FnMut(&KElement) -> Result<CycValue>,
{
    let mut acc = CycValue::zero();
    for x in coset_points(ctx, plan.valuation, level, plan.domain) {
        acc += &f(&x)?;
    }
    // each coset has dx-volume q^{-n-L}; dividing by |x| = q^{-n} gives q^{-L}
    let vol = match plan.measure {
        Measure::Additive => rational_q_power(ctx, -plan.valuation - level as i64),
        Measure::Multiplicative => {
            if plan.domain == Domain::Ball {
                return Err(Error::Config(
                    "multiplicative measure on a ball containing 0".into(),
                ));
            }
            rational_q_power(ctx, -(level as i64))
        }
    };
    Ok(acc.scale(&vol))
}

/// Integrates `f` according to `plan`. The value at level `L` must equal the
/// value at `L + 1`; on mismatch the level is doubled (at most twice) before
/// giving up.
pub fn integrate_shell<F>(
    ctx: PadicContext,
    f: &mut F,
    plan: &ShellIntegralPlan,
) -> Result<CycValue>
where
    F: FnMut(&KElement) -> Result<CycValue>,
{
    let mut level = plan.level.max(1);
    for _ in 0..3 {
        let coarse = shell_sum(ctx, plan, level, f)?;
        let fine = shell_sum(ctx, plan, level + 1, f)?;
        if coarse == fine {
            return Ok(coarse);
        }
        level *= 2;
    }
    Err(Error::NotLocallyConstant {
        shell: plan.valuation,
        level,
    })
}

/// Result of an improper integral: the limit and the partial sums seen.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub value: CycValue,
    /// `(N, int_{P^-N} f)` for every `N` evaluated.
    pub trace: Vec<(i64, CycValue)>,
}

/// `lim_{N -> inf} int_{P^-N} f`, where `partial(N)` returns `int_{P^-N} f`.
/// Starting at `start`, the limit is accepted once three consecutive
/// enlargements leave the partial sum unchanged.
pub fn improper_integral<F>(mut partial: F, start: i64, max_range: i64) -> Result<Stabilized>
where
    F: FnMut(i64) -> Result<CycValue>,
{
    let mut trace: Vec<(i64, CycValue)> = Vec::new();
    let mut stable = 0;
    let mut n = start;
    while n <= max_range {
        let v = partial(n)?;
        match trace.last() {
            Some((_, prev)) if *prev == v => stable += 1,
            _ => stable = 0,
        }
        trace.push((n, v));
        if stable == 3 {
            let value = trace.last().expect("nonempty").1.clone();
            return Ok(Stabilized { value, trace });
        }
        n += 1;
    }
    let trace = trace
        .iter()
        .map(|(n, v)| format!("N={n}: {v}"))
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::NoStabilization { max_range, trace })
}

/// `int_{P^-N} f` for `f` constant on cosets of `P^l`, evaluated shell by
/// shell and memoized so successive `N` only add the new shell.
pub struct BallPartialSums<F> {
    ctx: PadicContext,
    resolution: i64,
    f: F,
    computed_down_to: Option<i64>,
    total: CycValue,
}

impl<F> BallPartialSums<F>
where
    F: FnMut(i64, &KElement) -> Result<CycValue>,
{
    /// `f(k, y)` is called with the shell valuation `k` of `y` (or
    /// `resolution` for the single point `0` standing for `P^resolution`).
    pub fn new(ctx: PadicContext, resolution: i64, f: F) -> Self {
        Self {
            ctx,
            resolution,
            f,
            computed_down_to: None,
            total: CycValue::zero(),
        }
    }

    /// `int_{P^-N} f`.
    pub fn partial(&mut self, n: i64) -> Result<CycValue> {
        let res = self.resolution;
        let vol = rational_q_power(self.ctx, -res);
        if self.computed_down_to.is_none() {
            let zero = KElement::zero(self.ctx);
            self.total = (self.f)(res, &zero)?.scale(&vol);
            self.computed_down_to = Some(res);
        }
        while self.computed_down_to.expect("initialized") > -n {
            let k = self.computed_down_to.expect("initialized") - 1;
            let mut acc = CycValue::zero();
            for y in coset_points(self.ctx, k, (res - k) as u32, Domain::Shell) {
                acc += &(self.f)(k, &y)?;
            }
            self.total += &acc.scale(&vol);
            self.computed_down_to = Some(k);
        }
        Ok(self.total.clone())
    }
}

/// `2 q^{e/2}` style constants: `c q^{e/2}` as a field element.
pub fn scaled_q_half_power(ctx: PadicContext, c: i64, e: i64) -> CycValue {
    CycValue::q_half_power(ctx.q(), e).scale(&BigRational::from_integer(BigInt::from(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localchar::psi_value;

    fn c3() -> PadicContext {
        PadicContext::new(3).unwrap()
    }

    #[test]
    fn shell_examples() {
        let c = c3();
        let mut one = |_: &KElement| Ok(CycValue::one());
        let v = integrate_shell(
            c,
            &mut one,
            &ShellIntegralPlan::shell(0, 1, Measure::Multiplicative),
        )
        .unwrap();
        assert_eq!(v, CycValue::from_frac(2, 3));

        let mut f = |x: &KElement| Ok(psi_value(&(x / &KElement::from_int(c, 3))));
        let v = integrate_shell(c, &mut f, &ShellIntegralPlan::ball(0, 1)).unwrap();
        assert!(v.is_zero());
        let v = integrate_shell(
            c,
            &mut f,
            &ShellIntegralPlan::shell(0, 1, Measure::Additive),
        )
        .unwrap();
        assert_eq!(v, CycValue::from_frac(-1, 3));
    }

    #[test]
    fn shell_volumes() {
        let c = PadicContext::new(5).unwrap();
        let mut one = |_: &KElement| Ok(CycValue::one());
        for n in -2..=2 {
            let v = integrate_shell(
                c,
                &mut one,
                &ShellIntegralPlan::shell(n, 2, Measure::Additive),
            )
            .unwrap();
            let expect = KElement::p_power(c, -n).value() * BigRational::new(4.into(), 5.into());
            assert_eq!(v, CycValue::from_rational(expect));
        }
    }

    #[test]
    fn refinement_gate_rejects_fine_structure() {
        let c = c3();
        // psi(x / 3^6) is not constant on cosets of P^1..P^4
        let mut f = |x: &KElement| Ok(psi_value(&(x / &KElement::from_int(c, 729))));
        let r = integrate_shell(
            c,
            &mut f,
            &ShellIntegralPlan::shell(0, 1, Measure::Additive),
        );
        assert!(matches!(r, Err(Error::NotLocallyConstant { .. })));
    }

    #[test]
    fn improper_examples() {
        let c = c3();
        let indicator = BallPartialSums::new(c, 0, |k: i64, _: &KElement| {
            Ok(if k >= 0 {
                CycValue::one()
            } else {
                CycValue::zero()
            })
        });
        let mut indicator = indicator;
        let r = improper_integral(|n| indicator.partial(n), 0, 20).unwrap();
        assert!(r.value.is_one());

        let xi = KElement::from_frac(c, 1, 3);
        let mut chi = BallPartialSums::new(c, 1, |k: i64, y: &KElement| {
            Ok(if k >= -2 {
                psi_value(&(-&(&xi * y)))
            } else {
                CycValue::zero()
            })
        });
        let r = improper_integral(|n| chi.partial(n), 0, 20).unwrap();
        assert!(r.value.is_zero());

        let r = improper_integral(|n| Ok(CycValue::from_int(n)), 0, 10);
        assert!(matches!(r, Err(Error::NoStabilization { .. })));
    }
}
