//! Characters of `Q_p`: the canonical additive character, Legendre and
//! Hilbert symbols, the Weil constant, `chi_psi`, and multiplicative
//! characters of finite conductor.

mod mult;
mod weil;

pub use mult::{CharacterSpec, MultCharacter, DEFAULT_CONDUCTOR_CAP};
pub use weil::{chi_psi, weil_alpha, ChiPsiTable};

use crate::error::{Error, Result};
use crate::exactnum::modarith::mod_pow;
use crate::exactnum::{CycValue, KElement, PadicContext, Root};

/// `psi(a) = e^{2 pi i [a]}` as a root of unity, `[a]` the fractional part.
pub fn psi_root(a: &KElement) -> Root {
    let (num, den) = a.fractional_pair();
    Root::new(num as i128, den)
}

/// The additive character `psi(a) = e^{2 pi i [a]}`; trivial on `Z_p`.
pub fn psi_value(a: &KElement) -> CycValue {
    CycValue::root(psi_root(a))
}

/// `psi^xi(a) = psi(xi a)`.
pub fn psi_xi(xi: &KElement, a: &KElement) -> CycValue {
    psi_value(&(xi * a))
}

/// Legendre symbol of a p-adic unit.
pub fn legendre(u: &KElement) -> Result<i8> {
    if !u.is_unit() {
        return Err(Error::NotAUnit(u.to_string()));
    }
    let p = u.ctx().p();
    let r = u.residue(1)?;
    Ok(if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    })
}

/// Decomposes `x = p^v u` for nonzero `x`.
fn split(x: &KElement) -> Result<(i64, KElement)> {
    let v = x.val().ok_or(Error::ZeroArgument)?;
    Ok((v, x.unit_part()?))
}

/// The Hilbert symbol `(a, b)` over `Q_p` for odd `p`:
/// `(-1)^{v(a) v(b) (p-1)/2} (u/p)^{v(b)} (w/p)^{v(a)}` with `a = p^{v(a)} u`,
/// `b = p^{v(b)} w`.
pub fn hilbert_symbol(a: &KElement, b: &KElement) -> Result<i8> {
    let (va, ua) = split(a)?;
    let (vb, ub) = split(b)?;
    let p = a.ctx().p();
    let mut s: i8 = 1;
    if (va * vb).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        s = -s;
    }
    if vb.rem_euclid(2) == 1 {
        s *= legendre(&ua)?;
    }
    if va.rem_euclid(2) == 1 {
        s *= legendre(&ub)?;
    }
    Ok(s)
}

/// Brute-force Hilbert symbol: decides whether `z^2 = b y^2 + a x^2` has a
/// primitive solution over `Z_p` by searching residues modulo `p^3` for a
/// solution that Hensel-lifts.
///
/// After scaling `a` and `b` by even powers of `p` to valuation 0 or 1, every
/// primitive `Z_p`-solution has a gradient coordinate of valuation at most 1,
/// so a solution modulo `p^3` with that property lifts and conversely.
/// Intended for small `p` (the search is `p^6`).
pub fn hilbert_symbol_bruteforce(a: &KElement, b: &KElement) -> Result<i8> {
    let ctx = a.ctx();
    let p = ctx.p();
    let reduce = |x: &KElement| -> Result<u64> {
        let v = x.val().ok_or(Error::ZeroArgument)?;
        let scaled = x * &KElement::p_power(ctx, -2 * v.div_euclid(2));
        scaled.residue(3)
    };
    let ar = reduce(a)? as u128;
    let br = reduce(b)? as u128;
    let m = ctx.pow(3);
    let m128 = m as u128;
    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for z in 0..m {
        roots[((z as u128 * z as u128) % m128) as usize].push(z);
    }
    let val = |r: u128| -> u32 {
        let mut r = r % m128;
        if r == 0 {
            return 3;
        }
        let mut k = 0;
        while r % p as u128 == 0 {
            r /= p as u128;
            k += 1;
        }
        k
    };
    for x in 0..m {
        for y in 0..m {
            let (xx, yy) = (x as u128, y as u128);
            let t = (br * yy % m128 * yy + ar * xx % m128 * xx) % m128;
            for &z in &roots[t as usize] {
                let zz = z as u128;
                let primitive = xx % p as u128 != 0 || yy % p as u128 != 0 || zz % p as u128 != 0;
                if !primitive {
                    continue;
                }
                let grad = val(2 * zz).min(val(2 * br * yy)).min(val(2 * ar * xx));
                if grad <= 1 {
                    return Ok(1);
                }
            }
        }
    }
    Ok(-1)
}

/// Square-class invariants of a nonzero element: parity of the valuation and
/// the Legendre symbol of the unit part. For odd `p` these classify
/// `Q_p^x / (Q_p^x)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub odd_valuation: bool,
    pub unit_legendre: i8,
}

pub fn square_class_data(x: &KElement) -> Result<SquareClass> {
    let (v, u) = split(x)?;
    Ok(SquareClass {
        odd_valuation: v.rem_euclid(2) == 1,
        unit_legendre: legendre(&u)?,
    })
}

/// A fixed representative of each of the four square classes: `1, n, p, n p`
/// with `n` the least quadratic non-residue.
pub fn square_class_representatives(ctx: PadicContext) -> Vec<KElement> {
    let p = ctx.p();
    let n = (2..p)
        .find(|&r| mod_pow(r, (p - 1) / 2, p) != 1)
        .expect("odd prime has a non-residue");
    let pp = p as i64;
    vec![
        KElement::one(ctx),
        KElement::from_int(ctx, n as i64),
        KElement::from_int(ctx, pp),
        KElement::from_int(ctx, n as i64 * pp),
    ]
}
