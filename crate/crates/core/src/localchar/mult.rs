//! Multiplicative characters `mu` of `Q_p^x` with finite conductor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::modarith::{gcd, mod_pow};
use crate::exactnum::{CycValue, KElement, PadicContext, Root};

/// Largest accepted conductor exponent unless overridden.
pub const DEFAULT_CONDUCTOR_CAP: u32 = 3;

/// Serialized form of a character:
/// `mu(p) = e^{2 pi i num/den}` and `mu(g) = e^{2 pi i j / phi(p^m)}` for the
/// least positive integer `g` generating `(Z/p^m)^x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSpec {
    pub conductor_exponent: u32,
    pub value_at_p_numerator_of_exponent: i64,
    pub value_at_p_denominator_of_exponent: u64,
    pub generator_image_exponent: u64,
}

impl CharacterSpec {
    pub fn trivial() -> Self {
        Self {
            conductor_exponent: 0,
            value_at_p_numerator_of_exponent: 0,
            value_at_p_denominator_of_exponent: 1,
            generator_image_exponent: 0,
        }
    }
}

/// A character of `Q_p^x` of conductor exponent `m`: trivial on `1 + P^m`
/// and (for `m >= 1`) nontrivial on `1 + P^{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultCharacter {
    ctx: PadicContext,
    conductor: u32,
    value_at_p: Root,
    generator: u64,
    generator_exponent: u64,
    /// discrete logarithm base `generator`, indexed by residue mod `p^m`
    dlog: Vec<u64>,
}

/// Least positive integer generating `(Z/p^m)^x` (a primitive root mod `p^2`
/// is one for every `m`).
fn primitive_root(ctx: PadicContext) -> u64 {
    let p = ctx.p();
    let order = p - 1;
    let factors: Vec<u64> = (2..=order)
        .filter(|d| order % d == 0 && crate::exactnum::modarith::is_prime(*d))
        .collect();
    let g = (2..p)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, order / f, p) != 1))
        .unwrap_or(1);
    if mod_pow(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

impl MultCharacter {
    pub fn trivial(ctx: PadicContext) -> Self {
        Self::from_spec(ctx, &CharacterSpec::trivial(), DEFAULT_CONDUCTOR_CAP)
            .expect("trivial character is valid")
    }

    pub fn from_spec(ctx: PadicContext, spec: &CharacterSpec, cap: u32) -> Result<Self> {
        let m = spec.conductor_exponent;
        if m > cap {
            return Err(Error::InvalidCharacter(format!(
                "conductor exponent {m} exceeds cap {cap}"
            )));
        }
        if spec.value_at_p_denominator_of_exponent == 0 {
            return Err(Error::InvalidCharacter("zero denominator for mu(p)".into()));
        }
        let p = ctx.p();
        let modulus = ctx.pow(m);
        let phi = if m == 0 { 1 } else { (p - 1) * ctx.pow(m - 1) };
        let j = spec.generator_image_exponent % phi;
        match m {
            0 => {}
            1 if j == 0 => {
                return Err(Error::InvalidCharacter(
                    "conductor 1 requires a nontrivial unit character".into(),
                ))
            }
            _ if m >= 2 && j % p == 0 => {
                return Err(Error::InvalidCharacter(format!(
                    "generator exponent {j} is trivial on 1 + P^{}",
                    m - 1
                )))
            }
            _ => {}
        }
        let generator = primitive_root(ctx) % modulus.max(1);
        let mut dlog = vec![u64::MAX; modulus as usize];
        if m > 0 {
            let mut cur = 1u64;
            for k in 0..phi {
                dlog[cur as usize] = k;
                cur = cur * generator % modulus;
            }
        }
        Ok(Self {
            ctx,
            conductor: m,
            value_at_p: Root::new(
                spec.value_at_p_numerator_of_exponent as i128,
                spec.value_at_p_denominator_of_exponent,
            ),
            generator,
            generator_exponent: j,
            dlog,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    fn phi(&self) -> u64 {
        if self.conductor == 0 {
            1
        } else {
            (self.ctx.p() - 1) * self.ctx.pow(self.conductor - 1)
        }
    }

    pub fn spec(&self) -> CharacterSpec {
        CharacterSpec {
            conductor_exponent: self.conductor,
            value_at_p_numerator_of_exponent: self.value_at_p.num() as i64,
            value_at_p_denominator_of_exponent: self.value_at_p.den(),
            generator_image_exponent: self.generator_exponent,
        }
    }

    pub fn eval_root(&self, x: &KElement) -> Result<Root> {
        let v = x.val().ok_or(Error::ZeroArgument)?;
        let mut r = self.value_at_p.pow(v);
        if self.conductor > 0 {
            let u = x.unit_part()?.residue(self.conductor)?;
            let k = self.dlog[u as usize];
            debug_assert_ne!(k, u64::MAX);
            let phi = self.phi();
            let e = (self.generator_exponent as u128 * k as u128 % phi as u128) as i128;
            r = r.mul(Root::new(e, phi));
        }
        Ok(r)
    }

    pub fn eval(&self, x: &KElement) -> Result<CycValue> {
        Ok(CycValue::root(self.eval_root(x)?))
    }

    pub fn inverse(&self) -> MultCharacter {
        let phi = self.phi();
        let mut out = self.clone();
        out.value_at_p = self.value_at_p.inv();
        out.generator_exponent = (phi - self.generator_exponent % phi) % phi;
        out
    }

    /// `mu(-1)` as a sign.
    pub fn sign(&self) -> i8 {
        let r = self
            .eval_root(&KElement::from_int(self.ctx, -1))
            .expect("-1 is a unit");
        if r == Root::ONE {
            1
        } else {
            -1
        }
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor == 0 && self.value_at_p == Root::ONE
    }
}

impl std::fmt::Display for MultCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = gcd(self.generator_exponent, self.phi().max(1));
        write!(
            f,
            "mu[m={}, mu(p)={}, mu(g={})=e({}/{})]",
            self.conductor,
            self.value_at_p,
            self.generator,
            self.generator_exponent / g.max(1),
            self.phi() / g.max(1)
        )
    }
}
