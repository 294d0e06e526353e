//! Exact rationals viewed inside `Q_p`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modarith::{ipow, is_prime, mod_inv};
use crate::error::{Error, Result};

/// The local field `Q_p` for an odd prime `p`. The uniformizer is `p` itself
/// and the residue field has `q = p` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicContext {
    p: u64,
}

impl PadicContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Cardinality of the residue field.
    pub fn q(&self) -> u64 {
        self.p
    }

    /// `p^e` as a machine integer.
    pub fn pow(&self, e: u32) -> u64 {
        ipow(self.p, e)
    }
}

/// A p-adic valuation, with `Infinity` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

/// An exact rational number regarded as an element of `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElement {
    value: BigRational,
    ctx: PadicContext,
}

/// Exponent of `p` dividing a nonzero integer.
fn p_adic_order(n: &BigInt, p: u64) -> u64 {
    if let Some(mut small) = n.to_i128() {
        let p = p as i128;
        let mut k = 0;
        while small % p == 0 {
            small /= p;
            k += 1;
        }
        return k;
    }
    let bp = BigInt::from(p);
    let mut k = 0;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.div_rem(&bp);
        if !r.is_zero() {
            return k;
        }
        cur = q;
        k += 1;
    }
}

/// `n mod m` as a machine integer in `[0, m)`.
fn big_mod(n: &BigInt, m: u64) -> u64 {
    if let Some(small) = n.to_i128() {
        return small.rem_euclid(m as i128) as u64;
    }
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits")
}

impl KElement {
    pub fn new(ctx: PadicContext, value: BigRational) -> Self {
        Self { value, ctx }
    }

    pub fn from_int(ctx: PadicContext, n: i64) -> Self {
        Self::new(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(ctx: PadicContext, num: i64, den: i64) -> Self {
        Self::new(ctx, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero(ctx: PadicContext) -> Self {
        Self::from_int(ctx, 0)
    }

    pub fn one(ctx: PadicContext) -> Self {
        Self::from_int(ctx, 1)
    }

    /// `p^n` for any integer `n`.
    pub fn p_power(ctx: PadicContext, n: i64) -> Self {
        let base = BigInt::from(ctx.p()).pow(n.unsigned_abs() as u32);
        let value = if n >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        };
        Self::new(ctx, value)
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let p = self.ctx.p();
        let up = p_adic_order(self.value.numer(), p) as i64;
        let down = p_adic_order(self.value.denom(), p) as i64;
        Valuation::Finite(up - down)
    }

    /// Finite valuation, or `None` for zero.
    pub fn val(&self) -> Option<i64> {
        self.valuation().finite()
    }

    pub fn is_integral(&self) -> bool {
        self.valuation() >= Valuation::Finite(0)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// `x / p^{v(x)}`; fails on zero.
    pub fn unit_part(&self) -> Result<KElement> {
        let v = self.val().ok_or(Error::ZeroArgument)?;
        Ok(self * &KElement::p_power(self.ctx, -v))
    }

    pub fn inv(&self) -> Result<KElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(self.ctx, self.value.recip()))
    }

    pub fn pow(&self, e: i64) -> Result<KElement> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        Ok(Self::new(
            self.ctx,
            num_traits::pow(self.value.clone(), e as usize),
        ))
    }

    /// The canonical representative of `x + O` in `k/O`: the unique rational in
    /// `[0, 1)` with p-power denominator congruent to `x` modulo `Z_p`.
    pub fn fractional_part(&self) -> KElement {
        let p = self.ctx.p();
        let den = self.value.denom();
        let e = p_adic_order(den, p) as u32;
        if e == 0 {
            return KElement::zero(self.ctx);
        }
        let pe = ipow(p, e);
        let cofactor = den / BigInt::from(pe);
        let c = big_mod(&cofactor, pe);
        let n = big_mod(self.value.numer(), pe);
        let inv = mod_inv(c, pe).expect("cofactor is prime to p");
        let r = (n as u128 * inv as u128 % pe as u128) as u64;
        Self::new(
            self.ctx,
            BigRational::new(BigInt::from(r), BigInt::from(pe)),
        )
    }

    /// Residue of an integral element modulo `p^level`, in `[0, p^level)`.
    pub fn residue(&self, level: u32) -> Result<u64> {
        if !self.is_integral() {
            return Err(Error::NotIntegral(self.to_string()));
        }
        let m = self.ctx.pow(level);
        if m == 1 {
            return Ok(0);
        }
        let n = big_mod(self.value.numer(), m);
        let d = big_mod(self.value.denom(), m);
        let inv = mod_inv(d, m).expect("denominator of an integral element is prime to p");
        Ok((n as u128 * inv as u128 % m as u128) as u64)
    }

    /// The fractional part as `(numerator, p-power denominator)`.
    pub fn fractional_pair(&self) -> (u64, u64) {
        let f = self.fractional_part();
        (
            f.value.numer().to_u64().expect("small numerator"),
            f.value.denom().to_u64().expect("small denominator"),
        )
    }

    /// `|x| = q^{-v(x)}` as an exact rational (zero for zero).
    pub fn abs(&self) -> BigRational {
        match self.val() {
            None => BigRational::zero(),
            Some(v) => KElement::p_power(self.ctx, -v).value,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }
}

impl PartialOrd for KElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order on the underlying rationals (used for deterministic keys).
impl Ord for KElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a KElement> for &'a KElement {
            type Output = KElement;
            fn $method(self, rhs: &'a KElement) -> KElement {
                debug_assert_eq!(self.ctx, rhs.ctx);
                KElement::new(self.ctx, &self.value $op &rhs.value)
            }
        }
        impl $trait<KElement> for KElement {
            type Output = KElement;
            fn $method(self, rhs: KElement) -> KElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a KElement> for KElement {
            type Output = KElement;
            fn $method(self, rhs: &'a KElement) -> KElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

/// Panics on division by zero; use [`KElement::inv`] for a checked inverse.
impl<'a> Div<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn div(self, rhs: &'a KElement) -> KElement {
        assert!(!rhs.is_zero(), "division by zero in Q_p");
        KElement::new(self.ctx, &self.value / &rhs.value)
    }
}

impl Div<KElement> for KElement {
    type Output = KElement;
    fn div(self, rhs: KElement) -> KElement {
        &self / &rhs
    }
}

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement::new(self.ctx, -&self.value)
    }
}

impl Neg for KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx3() -> PadicContext {
        PadicContext::new(3).unwrap()
    }

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(PadicContext::new(2), Err(Error::InvalidPrime(2)));
        assert!(PadicContext::new(9).is_err());
        assert_eq!(PadicContext::new(7).unwrap().q(), 7);
    }

    #[test]
    fn valuation_examples() {
        let c = ctx3();
        assert_eq!(KElement::one(c).valuation(), Valuation::Finite(0));
        assert_eq!(KElement::from_int(c, 9).valuation(), Valuation::Finite(2));
        assert_eq!(
            KElement::from_frac(c, 5, 27).valuation(),
            Valuation::Finite(-3)
        );
        assert_eq!(KElement::zero(c).valuation(), Valuation::Infinity);
    }

    #[test]
    fn unit_part_recombines() {
        let c = ctx3();
        let x = KElement::from_frac(c, 10, 81);
        let u = x.unit_part().unwrap();
        assert!(u.is_unit());
        assert_eq!(&u * &KElement::p_power(c, -4), x);
    }

    #[test]
    fn fractional_part_and_residue() {
        let c = ctx3();
        // 1/5 + 1/9: the 1/5 part is integral in Z_3
        let a = KElement::from_frac(c, 1, 5) + KElement::from_frac(c, 1, 9);
        let f = a.fractional_part();
        assert!((&a - &f).is_integral());
        assert_eq!(f.fractional_pair().1, 9);
        assert_eq!(KElement::from_frac(c, 1, 2).residue(1).unwrap(), 2);
        assert_eq!(KElement::from_frac(c, -1, 2).residue(2).unwrap(), 4);
        assert!(KElement::from_frac(c, 1, 3).residue(1).is_err());
        assert_eq!(
            KElement::from_int(c, 7).fractional_part(),
            KElement::zero(c)
        );
    }

    fn rational() -> impl Strategy<Value = (i64, i64)> {
        (-2000i64..2000, 1i64..2000).prop_filter("nonzero", |(n, _)| *n != 0)
    }

    proptest! {
        #[test]
        fn valuation_is_additive_and_ultrametric((a, b) in rational(), (c, d) in rational()) {
            let ctx = ctx3();
            let x = KElement::from_frac(ctx, a, b);
            let y = KElement::from_frac(ctx, c, d);
            let vx = x.val().unwrap();
            let vy = y.val().unwrap();
            prop_assert_eq!((&x * &y).val().unwrap(), vx + vy);
            let s = (&x + &y).valuation();
            prop_assert!(s >= Valuation::Finite(vx.min(vy)));
            if vx != vy {
                prop_assert_eq!(s, Valuation::Finite(vx.min(vy)));
            }
        }
    }
}
