//! End-to-end acceptance run on the p = 3 example. Prints one PASS/FAIL line
//! per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use metazeta::cli::{
    character_suite, cocycle_suite, coset_suite, splitting_suite, whittaker_suite,
};
use metazeta::exactnum::{CycValue, KElement, LaurentPoly, PadicContext, Variable};
use metazeta::localchar::{psi_value, CharacterSpec, MultCharacter};
use metazeta::metaplectic::MetaElement;
use metazeta::repn::{InducedVector, SigmaRep, Supercuspidal};
use metazeta::zeta::{ZetaEngine, DEFAULT_MAX_RANGE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ctx() -> PadicContext {
    PadicContext::new(3).unwrap()
}

fn k(a: i64, b: i64) -> KElement {
    KElement::from_frac(ctx(), a, b)
}

fn engine(which: u8) -> ZetaEngine {
    let pi = Supercuspidal::new(SigmaRep::builtin_p3(ctx(), which).unwrap()).unwrap();
    ZetaEngine::new(pi, DEFAULT_MAX_RANGE).unwrap()
}

fn xi_of(eng: &ZetaEngine) -> KElement {
    eng.pi().spectrum().classes[0].xi.clone()
}

fn characters() -> Vec<MultCharacter> {
    let conductor_one = CharacterSpec {
        conductor_exponent: 1,
        value_at_p_numerator_of_exponent: 0,
        value_at_p_denominator_of_exponent: 1,
        generator_image_exponent: 1,
    };
    vec![
        MultCharacter::trivial(ctx()),
        MultCharacter::from_spec(ctx(), &conductor_one, 3).unwrap(),
    ]
}

/// phi^e, phi^{n(1/3)}, a vector supported on <3>, and a seeded random
/// three-term combination.
fn vectors() -> Vec<InducedVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut combo = InducedVector::basis(&k(0, 1), rng.gen_range(-1..=1), 0);
    for _ in 0..2 {
        let t = k(rng.gen_range(0..9), 9);
        let c = CycValue::from_frac(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        combo.add_term(&t, rng.gen_range(-1..=1), 0, &c);
    }
    vec![
        InducedVector::basis(&k(0, 1), 0, 0),
        InducedVector::basis(&k(1, 3), 0, 0),
        InducedVector::basis(&k(0, 1), 1, 0),
        combo,
    ]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit), || {
        format!("took {elapsed:?}, limit {limit} s")
    })
}

fn example_reproduction() -> Outcome {
    let start = Instant::now();
    let eng = engine(1);
    let xi = k(1, 3);
    let g = eng
        .gamma_factor(&xi, &xi, &MultCharacter::trivial(ctx()))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expect = LaurentPoly::constant(Variable::QPosS, 3, CycValue::from_frac(4, 3));
    ensure(g.poly.in_variable(Variable::QPosS) == expect, || {
        format!("gamma = {}", g.poly)
    })?;
    within(elapsed, 10)?;
    Ok(format!("gamma = {} in {elapsed:.2?}", g.poly))
}

fn functional_equation() -> Outcome {
    let start = Instant::now();
    let eng = engine(1);
    let xi = xi_of(&eng);
    let mut cases = 0;
    for mu in characters() {
        let gammas = eng.gamma_set(&xi, &mu).map_err(|e| e.to_string())?;
        for v in vectors() {
            let r = eng
                .check_fe_with(&gammas, &mu, &v)
                .map_err(|e| e.to_string())?;
            ensure(r.residual.is_zero(), || {
                format!("{mu}, v = {v}: residual {}", r.residual)
            })?;
            cases += 1;
        }
    }
    ensure(cases >= 6, || format!("only {cases} cases"))?;
    within(start.elapsed(), 60)?;
    Ok(format!(
        "{cases} cases with zero residual in {:.2?}",
        start.elapsed()
    ))
}

fn gamma_support() -> Outcome {
    let mut checked = 0;
    for which in [1, 2] {
        let eng = engine(which);
        let l = eng.pi().level() as i64;
        let classes = eng.pi().spectrum().classes;
        for mu in characters() {
            let bound = 2 * l.max(mu.conductor() as i64) - l;
            for xi in &classes {
                for eta in &classes {
                    for n in (-3..=-1).chain(bound + 1..=bound + 3) {
                        let g = eng
                            .gamma_coefficient(&xi.xi, &eta.xi, &mu, n)
                            .map_err(|e| e.to_string())?;
                        ensure(g.is_zero(), || {
                            format!("builtin{which} {mu} gamma({n}) = {g}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} coefficients vanish"))
}

fn zeta_finiteness_and_parity() -> Outcome {
    let mut zero_by_parity = 0;
    for which in [1, 2] {
        let eng = engine(which);
        let xi = xi_of(&eng);
        for mu in characters() {
            let parity = eng.parity_holds(&mu).map_err(|e| e.to_string())?;
            // independent parity test: omega(-1) against chi_psi(-1) mu(-1)
            let minus_one = k(-1, 1);
            let rhs = eng.chi_psi(&minus_one).unwrap().scale_int(mu.sign() as i64);
            ensure(parity == (eng.pi().central_value().unwrap() == rhs), || {
                format!("parity disagrees for {mu}")
            })?;
            for v in vectors() {
                let z = eng.zeta_function(&xi, &mu, &v).map_err(|e| e.to_string())?;
                if let Some((lo, hi)) = z.poly.support() {
                    ensure(-10 <= lo && hi <= 10, || {
                        format!("support {lo}..{hi} for {v}")
                    })?;
                }
                if !parity {
                    ensure(z.poly.is_zero(), || {
                        format!("Z = {} although parity fails", z.poly)
                    })?;
                    zero_by_parity += 1;
                }
            }
        }
    }
    ensure(zero_by_parity > 0, || {
        "no parity-failing case exercised".into()
    })?;
    Ok(format!(
        "supports within [-10, 10], {zero_by_parity} parity-zero cases"
    ))
}

fn bessel_cross_validation() -> Outcome {
    let eng = engine(1);
    let xi = xi_of(&eng);
    let mut agree = 0;
    for n in -5..=-1 {
        for u in [1, 2, 4, 5] {
            let x = &KElement::p_power(ctx(), n) * &k(u, 1);
            let d = eng.bessel_direct(&xi, &xi, &x).map_err(|e| e.to_string())?;
            let c = eng.bessel_closed(&xi, &xi, &x).map_err(|e| e.to_string())?;
            ensure(d == c, || format!("x = {x}: direct {d}, closed {c}"))?;
            agree += 1;
        }
    }
    let in_p = [3, 6, 9, 12, 15, 18, 27, -3, -6, 54];
    for x in in_p {
        let d = eng
            .bessel_direct(&xi, &xi, &k(x, 1))
            .map_err(|e| e.to_string())?;
        ensure(d.is_zero(), || format!("J(<{x}> w) = {d}"))?;
    }
    ensure(agree >= 20, || format!("only {agree} points"))?;
    Ok(format!(
        "{agree} points agree, {} points in P vanish",
        in_p.len()
    ))
}

fn group_suites() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let suites = [
        cocycle_suite(&mut rng, ctx(), 1000),
        splitting_suite(&mut rng, ctx(), 1000).map_err(|e| e.to_string())?,
        coset_suite(&mut rng, ctx(), 1000),
    ];
    for s in &suites {
        ensure(s.pass && s.cases >= 1000, || {
            format!("{}: {:?}", s.name, s.counterexample)
        })?;
    }
    within(start.elapsed(), 30)?;
    Ok(format!("3 x 1000 cases in {:.2?}", start.elapsed()))
}

fn character_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = character_suite(&mut rng, ctx(), &characters(), 500).map_err(|e| e.to_string())?;
    ensure(s.pass, || format!("{:?}", s.counterexample))?;
    Ok(format!("{} checks", s.cases))
}

fn whittaker_and_bessel_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = 0;
    for which in [1, 2] {
        let eng = engine(which);
        let pi = eng.pi();
        let s = whittaker_suite(&mut rng, &eng, 50).map_err(|e| e.to_string())?;
        ensure(s.pass, || format!("{:?}", s.counterexample))?;
        checks += s.cases;
        let xi = xi_of(&eng);
        let units = [1, 2, 4, 5, 7, 8, -1, 10];
        for a in units {
            let a = k(a, 1);
            let torus = MetaElement::torus(&a).unwrap();
            let xi2 = &(&a * &a) * &xi;
            // the proportionality constant measured on phi^e must serve every vector
            let base = InducedVector::basis(&k(0, 1), 0, 0);
            let c = pi
                .whittaker_functional(&xi, &pi.act(&torus, &base).unwrap())
                .unwrap()
                .div(&pi.whittaker_functional(&xi2, &base).unwrap())
                .unwrap();
            for t in 0..9 {
                let v = InducedVector::basis(&k(t, 9), 0, 0)
                    .add(&InducedVector::basis(&k(0, 1), 0, 0).scale(&CycValue::from_frac(t, 7)));
                let lhs = pi
                    .whittaker_functional(&xi, &pi.act(&torus, &v).unwrap())
                    .unwrap();
                let rhs = &c * &pi.whittaker_functional(&xi2, &v).unwrap();
                ensure(lhs == rhs, || format!("c_xi({a}) not constant at {v}"))?;
                checks += 1;
            }
            let x = k(5, 7);
            let lhs = pi
                .whittaker_functional(&xi, &pi.act(&MetaElement::n(&x), &base).unwrap())
                .unwrap();
            ensure(
                lhs == &psi_value(&(&xi * &x)) * &pi.whittaker_functional(&xi, &base).unwrap(),
                || "n(x) equivariance".into(),
            )?;
            for u in [1, 2, 4, 5] {
                for av in [k(1, 3), k(2, 9), k(1, 1)] {
                    let (l, r) = eng
                        .bessel_transform_check(&xi, &xi, &a, &k(u, 1), &av)
                        .map_err(|e| e.to_string())?;
                    ensure(l == r, || format!("t = {a}, u = {u}, a = {av}: {l} vs {r}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} exact checks"))
}

fn fourier_inversion() -> Outcome {
    let mut nonzero = 0;
    for which in [1, 2] {
        let eng = engine(which);
        let xi = xi_of(&eng);
        let v = InducedVector::basis(&k(1, 3), 0, 0)
            .add(&InducedVector::basis(&k(0, 1), 0, 0).scale(&CycValue::from_frac(-1, 2)));
        for a in [k(1, 3), k(2, 3)] {
            let (lhs, rhs) = eng
                .fourier_inversion(&xi, &v, &a)
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || {
                format!("builtin{which} a = {a}: {lhs} vs {rhs}")
            })?;
            nonzero += usize::from(!lhs.is_zero());
        }
    }
    ensure(nonzero > 0, || "only trivial values".into())?;
    Ok(format!("exact at v(a) = -1, {nonzero} nonzero values"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("example gamma = 4/3", example_reproduction),
        ("functional equation", functional_equation),
        ("gamma support", gamma_support),
        ("zeta finiteness and parity", zeta_finiteness_and_parity),
        ("Bessel cross-validation", bessel_cross_validation),
        ("group-theoretic suites", group_suites),
        ("character suites", character_suites),
        ("Whittaker and Bessel laws", whittaker_and_bessel_laws),
        ("Fourier inversion", fourier_inversion),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
