//! `SL_2(Q_p)`, its metaplectic double cover, the splitting over
//! `SL_2(Z_p)`, and the decomposition `g = h n(t) diag(p^n, p^-n)` with `h`
//! integral.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{KElement, PadicContext};
use crate::localchar::hilbert_symbol;

/// A matrix `(a b; c d)` over `Q_p` with determinant one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SL2Element {
    a: KElement,
    b: KElement,
    c: KElement,
    d: KElement,
}

impl SL2Element {
    pub fn new(a: KElement, b: KElement, c: KElement, d: KElement) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det != KElement::one(a.ctx()) {
            return Err(Error::NotSpecialLinear(format!(
                "({a} {b}; {c} {d}) has determinant {det}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    fn new_unchecked(a: KElement, b: KElement, c: KElement, d: KElement) -> Self {
        debug_assert_eq!(&(&a * &d) - &(&b * &c), KElement::one(a.ctx()));
        Self { a, b, c, d }
    }

    pub fn from_ints(ctx: PadicContext, [a, b, c, d]: [i64; 4]) -> Result<Self> {
        let k = |x| KElement::from_int(ctx, x);
        Self::new(k(a), k(b), k(c), k(d))
    }

    pub fn identity(ctx: PadicContext) -> Self {
        Self::new_unchecked(
            KElement::one(ctx),
            KElement::zero(ctx),
            KElement::zero(ctx),
            KElement::one(ctx),
        )
    }

    /// `n(x) = (1 x; 0 1)`.
    pub fn n(x: &KElement) -> Self {
        let ctx = x.ctx();
        Self::new_unchecked(
            KElement::one(ctx),
            x.clone(),
            KElement::zero(ctx),
            KElement::one(ctx),
        )
    }

    /// `(1 0; x 1)`.
    pub fn lower(x: &KElement) -> Self {
        let ctx = x.ctx();
        Self::new_unchecked(
            KElement::one(ctx),
            KElement::zero(ctx),
            x.clone(),
            KElement::one(ctx),
        )
    }

    /// `diag(x, x^-1)`.
    pub fn diag(x: &KElement) -> Result<Self> {
        let ctx = x.ctx();
        let inv = x.inv().map_err(|_| Error::ZeroArgument)?;
        Ok(Self::new_unchecked(
            x.clone(),
            KElement::zero(ctx),
            KElement::zero(ctx),
            inv,
        ))
    }

    /// `w = (0 -1; 1 0)`.
    pub fn w(ctx: PadicContext) -> Self {
        Self::new_unchecked(
            KElement::zero(ctx),
            KElement::from_int(ctx, -1),
            KElement::one(ctx),
            KElement::zero(ctx),
        )
    }

    pub fn ctx(&self) -> PadicContext {
        self.a.ctx()
    }

    pub fn a(&self) -> &KElement {
        &self.a
    }

    pub fn b(&self) -> &KElement {
        &self.b
    }

    pub fn c(&self) -> &KElement {
        &self.c
    }

    pub fn d(&self) -> &KElement {
        &self.d
    }

    pub fn mul(&self, o: &SL2Element) -> SL2Element {
        Self::new_unchecked(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn inv(&self) -> SL2Element {
        Self::new_unchecked(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> SL2Element {
        Self::new_unchecked(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.ctx())
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|x| x.is_integral())
    }

    /// Entries `[a, b, c, d]` reduced modulo `p^level`.
    pub fn reduce(&self, level: u32) -> Result<[u64; 4]> {
        Ok([
            self.a.residue(level)?,
            self.b.residue(level)?,
            self.c.residue(level)?,
            self.d.residue(level)?,
        ])
    }
}

impl fmt::Display for SL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `chi(g) = c` if `c != 0`, else `d`.
pub fn chi_entry(g: &SL2Element) -> KElement {
    if g.c.is_zero() {
        g.d.clone()
    } else {
        g.c.clone()
    }
}

/// The cocycle `{g, h} = (chi(gh)/chi(g), chi(gh)/chi(h))`.
pub fn cocycle(g: &SL2Element, h: &SL2Element) -> i8 {
    let x = chi_entry(&g.mul(h));
    cocycle_with_product(g, h, &x)
}

fn cocycle_with_product(g: &SL2Element, h: &SL2Element, chi_gh: &KElement) -> i8 {
    let u = chi_gh / &chi_entry(g);
    let v = chi_gh / &chi_entry(h);
    hilbert_symbol(&u, &v).expect("chi never vanishes on SL_2")
}

/// An element `[g, eps]` of the double cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetaElement {
    g: SL2Element,
    eps: i8,
}

impl MetaElement {
    pub fn new(g: SL2Element, eps: i8) -> Self {
        assert!(eps == 1 || eps == -1, "sign must be +1 or -1");
        Self { g, eps }
    }

    pub fn identity(ctx: PadicContext) -> Self {
        Self::new(SL2Element::identity(ctx), 1)
    }

    /// The kernel element `[1, eps]`.
    pub fn kernel(ctx: PadicContext, eps: i8) -> Self {
        Self::new(SL2Element::identity(ctx), eps)
    }

    pub fn n(x: &KElement) -> Self {
        Self::new(SL2Element::n(x), 1)
    }

    /// `<x> = [diag(x, x^-1), 1]`.
    pub fn torus(x: &KElement) -> Result<Self> {
        Ok(Self::new(SL2Element::diag(x)?, 1))
    }

    pub fn w(ctx: PadicContext) -> Self {
        Self::new(SL2Element::w(ctx), 1)
    }

    pub fn matrix(&self) -> &SL2Element {
        &self.g
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }

    pub fn ctx(&self) -> PadicContext {
        self.g.ctx()
    }

    pub fn mul(&self, o: &MetaElement) -> MetaElement {
        let gh = self.g.mul(&o.g);
        let s = cocycle_with_product(&self.g, &o.g, &chi_entry(&gh));
        Self::new(gh, s * self.eps * o.eps)
    }

    /// `[g, eps]^-1 = [g^-1, eps {g, g^-1}]`.
    pub fn inv(&self) -> MetaElement {
        let gi = self.g.inv();
        let s = cocycle(&self.g, &gi);
        Self::new(gi, self.eps * s)
    }
}

impl fmt::Display for MetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.g,
            if self.eps > 0 { "+1" } else { "-1" }
        )
    }
}

/// The splitting `s` of the cover over `SL_2(Z_p)`:
/// `s(h) = (c, d)` if `c != 0` and `v(c) > 0`, else `+1`.
/// It satisfies `s(g) s(h) {g, h} = s(gh)`, so `h -> [h, s(h)]` is a
/// homomorphism.
pub fn kubota_split(h: &SL2Element) -> Result<i8> {
    if !h.is_integral() {
        return Err(Error::NotIntegral(h.to_string()));
    }
    match h.c.val() {
        Some(v) if v > 0 => hilbert_symbol(&h.c, &h.d),
        _ => Ok(1),
    }
}

/// `n(t) diag(p^n, p^-n)`.
pub fn coset_representative(t: &KElement, n: i64) -> SL2Element {
    let ctx = t.ctx();
    let pn = KElement::p_power(ctx, n);
    let pmn = KElement::p_power(ctx, -n);
    SL2Element::new_unchecked(pn, t * &pmn, KElement::zero(ctx), pmn)
}

/// `g = h n(t) diag(p^n, p^-n)` with `h` integral and `t` the canonical
/// representative of `t + O` in `[0, 1)`. As lifts,
/// `[g, eps] = [h, eps * eps_track] [n(t) diag(p^n, p^-n), 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetDecomposition {
    pub h: SL2Element,
    pub t: KElement,
    pub n: i64,
    pub eps_track: i8,
}

impl CosetDecomposition {
    pub fn representative(&self) -> SL2Element {
        coset_representative(&self.t, self.n)
    }

    /// The integral part as a cover element, `[h, eps * eps_track]` for input sign `eps`.
    pub fn lifted_h(&self, eps: i8) -> MetaElement {
        MetaElement::new(self.h.clone(), eps * self.eps_track)
    }
}

pub fn coset_decompose(x: &MetaElement) -> CosetDecomposition {
    let g = &x.g;
    let ctx = g.ctx();
    let va = g.a.val();
    let vc = g.c.val();
    let n = match (va, vc) {
        (Some(a), Some(c)) => a.min(c),
        (Some(a), None) => a,
        (None, Some(c)) => c,
        (None, None) => unreachable!("first column of an invertible matrix"),
    };
    let pn = KElement::p_power(ctx, n);
    let pmn = KElement::p_power(ctx, -n);
    let a1 = &g.a * &pmn;
    let t = if a1.is_unit() {
        (&(&pn * &g.b) / &a1).fractional_part()
    } else {
        let c1 = &g.c * &pmn;
        (&(&pn * &g.d) / &c1).fractional_part()
    };
    let r = coset_representative(&t, n);
    let h = g.mul(&r.inv());
    debug_assert!(h.is_integral(), "integral part {h} of {g}");
    let eps_track = cocycle(&h, &r);
    CosetDecomposition { h, t, n, eps_track }
}
