//! The Weil constant `alpha_psi` and the genuine-character ingredient
//! `chi_psi(a) = alpha_psi(1) / alpha_psi(a)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{psi_root, square_class_data, square_class_representatives, SquareClass};
use crate::error::{Error, Result};
use crate::exactnum::{CycValue, KElement, PadicContext};

/// `int_O psi(c x^2) dx` as the finite sum `p^{-level} sum_{x mod p^level}`,
/// exact once `level >= -v(c)`.
fn quadratic_sum_over_o(c: &KElement, level: u32) -> CycValue {
    let ctx = c.ctx();
    let m = ctx.pow(level);
    let mut acc = CycValue::zero();
    for x in 0..m {
        let xk = KElement::from_int(ctx, x as i64);
        acc.add_term(
            psi_root(&(c * &(&xk * &xk))),
            BigRational::from_integer(BigInt::from(1)),
        );
    }
    acc.scale(&BigRational::new(1.into(), BigInt::from(m)))
}

/// `int_O psi(c x^2) dx` for `c != 0`.
///
/// When `v(c) <= -2` the units contribute nothing (on `x0 + P^{k-1}` the
/// phase is linear with conductor `P`), so the integral equals
/// `q^{-1} int_O psi(c p^2 y^2) dy`. This reduces to `v(c) >= -1`, where
/// the level-1 sum is exact.
fn quadratic_integral_over_o(c: &KElement) -> CycValue {
    let ctx = c.ctx();
    let mut c = c.clone();
    let mut v = c.val().expect("nonzero coefficient");
    let mut shifts = 0u32;
    while v <= -2 {
        c = &c * &KElement::p_power(ctx, 2);
        v += 2;
        shifts += 1;
    }
    let base = if v >= 0 {
        CycValue::one()
    } else {
        quadratic_sum_over_o(&c, 1)
    };
    base.scale(&BigRational::new(
        1.into(),
        BigInt::from(ctx.q()).pow(shifts),
    ))
}

/// The Weil constant `alpha(a)`, solved from
/// `int Phi^(x) psi(a x^2) dx = |a|^{-1/2} alpha(a) int Phi(x) psi(-x^2/a) dx`
/// with `Phi = 1_O`. Under `Phi^(y) = int Phi(x) psi(-2yx) dx` and odd `p`,
/// `Phi^ = 1_O`, so both sides are Gauss-type integrals over `O`.
pub fn weil_alpha(a: &KElement) -> Result<CycValue> {
    let v = a.val().ok_or(Error::ZeroArgument)?;
    let ctx = a.ctx();
    let minus_inv = -&a.inv()?;
    let lhs = quadratic_integral_over_o(a);
    let rhs = quadratic_integral_over_o(&minus_inv);
    if rhs.is_zero() {
        return Err(Error::DivisionByZero);
    }
    // |a|^{1/2} = q^{-v/2}
    let abs_half = CycValue::q_half_power(ctx.q(), -v);
    Ok(&abs_half * &lhs.div(&rhs)?)
}

/// `chi_psi(a) = alpha_psi(1) / alpha_psi(a)`.
pub fn chi_psi(a: &KElement) -> Result<CycValue> {
    let one = KElement::one(a.ctx());
    weil_alpha(&one)?.div(&weil_alpha(a)?)
}

/// `chi_psi` tabulated on the four square classes.
#[derive(Clone, Debug)]
pub struct ChiPsiTable {
    values: HashMap<SquareClass, CycValue>,
}

impl ChiPsiTable {
    pub fn new(ctx: PadicContext) -> Result<Self> {
        let mut values = HashMap::new();
        for r in square_class_representatives(ctx) {
            values.insert(square_class_data(&r)?, chi_psi(&r)?);
        }
        Ok(Self { values })
    }

    pub fn eval(&self, a: &KElement) -> Result<CycValue> {
        Ok(self.values[&square_class_data(a)?].clone())
    }
}
