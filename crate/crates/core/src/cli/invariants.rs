//! Seeded randomized invariant suites behind `check-invariants`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exactnum::{CycValue, KElement, PadicContext};
use crate::localchar::{
    chi_psi, hilbert_symbol, hilbert_symbol_bruteforce, psi_value, weil_alpha, MultCharacter,
};
use crate::metaplectic::{cocycle, coset_decompose, kubota_split, MetaElement, SL2Element};
use crate::repn::InducedVector;
use crate::zeta::ZetaEngine;

/// Outcome of one suite; `counterexample` holds the first failure found.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
}

struct Suite {
    name: &'static str,
    cases: usize,
    counterexample: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            cases: self.cases,
            pass: self.counterexample.is_none(),
            counterexample: self.counterexample,
        }
    }
}

fn unit_int(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    loop {
        let u: i64 = rng.gen_range(-40..=40);
        if u != 0 && u.rem_euclid(p as i64) != 0 {
            return u;
        }
    }
}

/// `p^e u / d` with small unit numerator and denominator.
pub fn random_k(rng: &mut ChaCha8Rng, ctx: PadicContext, emin: i64, emax: i64) -> KElement {
    let p = ctx.p();
    let u = unit_int(rng, p);
    let d = unit_int(rng, p).abs();
    &KElement::p_power(ctx, rng.gen_range(emin..=emax)) * &KElement::from_frac(ctx, u, d)
}

/// A product of a few elementary matrices with arbitrary p-adic entries.
pub fn random_sl2(rng: &mut ChaCha8Rng, ctx: PadicContext) -> SL2Element {
    let mut g = SL2Element::identity(ctx);
    for _ in 0..3 {
        let x = random_k(rng, ctx, -2, 2);
        let e = match rng.gen_range(0..4) {
            0 => SL2Element::n(&x),
            1 => SL2Element::lower(&x),
            2 => SL2Element::diag(&x).expect("nonzero"),
            _ => SL2Element::w(ctx),
        };
        g = g.mul(&e);
    }
    g
}

/// A random element of `SL_2(Z_p)`.
pub fn random_integral(rng: &mut ChaCha8Rng, ctx: PadicContext) -> SL2Element {
    let p = ctx.p() as i64;
    let mut g = SL2Element::identity(ctx);
    for _ in 0..3 {
        let e = match rng.gen_range(0..3) {
            0 => SL2Element::n(&KElement::from_int(ctx, rng.gen_range(-30..=30))),
            1 => SL2Element::lower(&KElement::from_int(ctx, p * rng.gen_range(-30..=30))),
            _ => SL2Element::diag(&KElement::from_int(ctx, unit_int(rng, p as u64))).expect("unit"),
        };
        g = g.mul(&e);
    }
    g
}

fn random_vector(rng: &mut ChaCha8Rng, ctx: PadicContext, dim: usize) -> InducedVector {
    let mut v = InducedVector::zero();
    let p = ctx.p() as i64;
    for _ in 0..3 {
        let t = KElement::from_frac(ctx, rng.gen_range(0..p * p), p * p);
        let c = CycValue::from_frac(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        v.add_term(&t, rng.gen_range(-1..=1), rng.gen_range(0..dim), &c);
    }
    v
}

pub fn cocycle_suite(rng: &mut ChaCha8Rng, ctx: PadicContext, n: usize) -> SuiteResult {
    let mut s = Suite::new("cocycle");
    for _ in 0..n {
        let (g, h, k) = (
            random_sl2(rng, ctx),
            random_sl2(rng, ctx),
            random_sl2(rng, ctx),
        );
        let lhs = cocycle(&g, &h) * cocycle(&g.mul(&h), &k);
        let rhs = cocycle(&g, &h.mul(&k)) * cocycle(&h, &k);
        s.check(lhs == rhs, || format!("g={g} h={h} k={k}"));
    }
    s.finish()
}

pub fn splitting_suite(rng: &mut ChaCha8Rng, ctx: PadicContext, n: usize) -> Result<SuiteResult> {
    let mut s = Suite::new("splitting");
    for _ in 0..n {
        let (g, h) = (random_integral(rng, ctx), random_integral(rng, ctx));
        let ok =
            kubota_split(&g)? * kubota_split(&h)? * cocycle(&g, &h) == kubota_split(&g.mul(&h))?;
        s.check(ok, || format!("g={g} h={h}"));
    }
    Ok(s.finish())
}

pub fn coset_suite(rng: &mut ChaCha8Rng, ctx: PadicContext, n: usize) -> SuiteResult {
    let mut s = Suite::new("coset-decomposition");
    for _ in 0..n {
        let x = MetaElement::new(
            random_sl2(rng, ctx),
            *[1i8, -1].choose(rng).expect("nonempty"),
        );
        let d = coset_decompose(&x);
        let back = d
            .lifted_h(x.eps())
            .mul(&MetaElement::new(d.representative(), 1));
        s.check(back == x && d.h.is_integral(), || format!("x={x}"));
    }
    s.finish()
}

pub fn character_suite(
    rng: &mut ChaCha8Rng,
    ctx: PadicContext,
    mus: &[MultCharacter],
    n: usize,
) -> Result<SuiteResult> {
    let mut s = Suite::new("characters");
    for _ in 0..n {
        let a = random_k(rng, ctx, -3, 3);
        let b = random_k(rng, ctx, -3, 3);
        let u = random_k(rng, ctx, -2, 2);
        let ca = chi_psi(&a)?;
        s.check(chi_psi(&(&a * &a))?.is_one(), || {
            format!("chi_psi(a^2) != 1 for a={a}")
        });
        let twisted = (&ca * &chi_psi(&b)?).scale_int(hilbert_symbol(&a, &b)? as i64);
        s.check(chi_psi(&(&a * &b))? == twisted, || {
            format!("twisted multiplicativity fails at a={a} b={b}")
        });
        let al = weil_alpha(&a)?;
        s.check((&al * &al.conj()).is_one(), || format!("|alpha({a})| != 1"));
        s.check(weil_alpha(&(&a * &(&u * &u)))? == al, || {
            format!("alpha not square-class invariant at a={a} u={u}")
        });
        for mu in mus {
            let ok = mu.eval(&(&a * &b))? == &mu.eval(&a)? * &mu.eval(&b)?;
            s.check(ok, || format!("{mu} not multiplicative at a={a} b={b}"));
        }
    }
    let p = ctx.p() as i64;
    let small: Vec<KElement> = [1, 2, p - 1, p + 1, p, 2 * p, p * p]
        .iter()
        .flat_map(|&x| [x, -x])
        .map(|x| KElement::from_int(ctx, x))
        .collect();
    for a in &small {
        for b in &small {
            s.check(
                hilbert_symbol(a, b)? == hilbert_symbol_bruteforce(a, b)?,
                || format!("Hilbert symbol oracle disagrees at ({a}, {b})"),
            );
        }
    }
    Ok(s.finish())
}

pub fn eigenbasis_suite(eng: &ZetaEngine) -> Result<SuiteResult> {
    let mut s = Suite::new("eigenbasis");
    let pi = eng.pi();
    let ctx = pi.ctx();
    for x in 0..ctx.pow(pi.level()) {
        let x = KElement::from_int(ctx, x as i64);
        let m = pi.genuine_eig(&MetaElement::n(&x))?;
        for e in &pi.eigenbasis().entries {
            for j in 0..pi.dim() {
                let expect = if j == e.index {
                    psi_value(&(&e.beta * &x))
                } else {
                    CycValue::zero()
                };
                s.check(*m.get(j, e.index) == expect, || {
                    format!("sigma(n({x})) on eigenline {}", e.index)
                });
            }
        }
    }
    Ok(s.finish())
}

pub fn whittaker_suite(rng: &mut ChaCha8Rng, eng: &ZetaEngine, n: usize) -> Result<SuiteResult> {
    let mut s = Suite::new("whittaker-equivariance");
    let pi = eng.pi();
    let ctx = pi.ctx();
    for rep in pi.spectrum().reps {
        for _ in 0..n {
            let v = random_vector(rng, ctx, pi.dim());
            let x = random_k(rng, ctx, -2, 1);
            let lhs = pi.whittaker_functional(&rep.xi, &pi.act(&MetaElement::n(&x), &v)?)?;
            let rhs = &psi_value(&(&rep.xi * &x)) * &pi.whittaker_functional(&rep.xi, &v)?;
            s.check(lhs == rhs, || format!("xi={} x={x} v={v}", rep.xi));
        }
    }
    Ok(s.finish())
}

pub fn bessel_agreement_suite(eng: &ZetaEngine) -> Result<SuiteResult> {
    let mut s = Suite::new("bessel-agreement");
    let pi = eng.pi();
    let ctx = pi.ctx();
    let l = pi.level() as i64;
    let classes = pi.spectrum().classes;
    for xi in &classes {
        for eta in &classes {
            for n in -(l + 2)..=-l {
                for u in [1, 2] {
                    let x = &KElement::p_power(ctx, n) * &KElement::from_int(ctx, u);
                    let d = eng.bessel_direct(&xi.xi, &eta.xi, &x)?;
                    let c = eng.bessel_closed(&xi.xi, &eta.xi, &x)?;
                    s.check(d == c, || {
                        format!("xi={} eta={} x={x}: direct {d}, closed {c}", xi.xi, eta.xi)
                    });
                }
            }
            for x in [ctx.p() as i64, 2 * ctx.p() as i64] {
                let x = KElement::from_int(ctx, x);
                let d = eng.bessel_direct(&xi.xi, &eta.xi, &x)?;
                s.check(d.is_zero(), || format!("J(<{x}>w) = {d} for x in P"));
            }
        }
    }
    Ok(s.finish())
}

pub fn shell_vanishing_suite(eng: &ZetaEngine, mus: &[MultCharacter]) -> Result<SuiteResult> {
    let mut s = Suite::new("shell-vanishing");
    let pi = eng.pi();
    let l = pi.level() as i64;
    let classes = pi.spectrum().classes;
    for mu in mus {
        let bound = 2 * l.max(mu.conductor() as i64) - l;
        for xi in &classes {
            for eta in &classes {
                for n in [-2, -1, bound, bound + 1] {
                    let g = eng.gamma_coefficient(&xi.xi, &eta.xi, mu, n)?;
                    s.check(g.is_zero(), || {
                        format!("gamma({n}) = {g} for xi={} eta={} {mu}", xi.xi, eta.xi)
                    });
                }
            }
        }
    }
    Ok(s.finish())
}
