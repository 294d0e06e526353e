use super::*;
use crate::exactnum::{LaurentPoly, PadicContext, Variable};
use crate::localchar::{psi_value, CharacterSpec, MultCharacter};
use crate::metaplectic::MetaElement;
use crate::repn::{InducedVector, SigmaRep};
use crate::Error;

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

fn mu(m: u32, num: i64, den: u64, j: u64) -> MultCharacter {
    let spec = CharacterSpec {
        conductor_exponent: m,
        value_at_p_numerator_of_exponent: num,
        value_at_p_denominator_of_exponent: den,
        generator_image_exponent: j,
    };
    MultCharacter::from_spec(ctx(), &spec, 3).unwrap()
}

fn phi(t: KElement, n: i64) -> InducedVector {
    InducedVector::basis(&t, n, 0)
}

/// `J(<x> w)` for a unit `x` as the finite double sum
/// `p^{-2l} sum_{z, y mod p^l} sigma(n(z) <x> w n(y)) psi(-xi z - eta y)`.
fn triple_sum_oracle(eng: &ZetaEngine, xi: &KElement, eta: &KElement, x: &KElement) -> CycValue {
    let c = ctx();
    let l = eng.pi().level();
    let m = c.pow(l) as i64;
    let mut acc = CycValue::zero();
    for z in 0..m {
        for y in 0..m {
            let (z, y) = (KElement::from_int(c, z), KElement::from_int(c, y));
            let g = MetaElement::n(&z)
                .mul(&MetaElement::torus(x).unwrap())
                .mul(&MetaElement::w(c))
                .mul(&MetaElement::n(&y));
            let s = eng.pi().genuine_eig(&g).unwrap().get(0, 0).clone();
            acc += &(&s * &psi_value(&(-&(&(xi * &z) + &(eta * &y)))));
        }
    }
    acc.scale(&KElement::p_power(c, -2 * l as i64).value().clone())
}

#[test]
fn gamma_example() {
    let eng = engine(1);
    let xi = k(1, 3);
    let triv = MultCharacter::trivial(ctx());
    let g = eng.gamma_factor(&xi, &xi, &triv).unwrap();
    assert_eq!(
        g.poly,
        LaurentPoly::constant(Variable::QPosS, 3, CycValue::from_frac(4, 3))
    );
    assert_eq!(g.bound, 1);
    assert!(eng.gamma_coefficient(&xi, &xi, &triv, 1).unwrap().is_zero());
    for n in -3..0 {
        assert!(eng.gamma_coefficient(&xi, &xi, &triv, n).unwrap().is_zero());
    }
}

#[test]
fn gamma_support_for_both_sigmas_and_conductors() {
    for which in [1, 2] {
        let eng = engine(which);
        let xi = xi_of(&eng);
        for m in [mu(0, 0, 1, 0), mu(1, 0, 1, 1)] {
            let l = eng.pi().level() as i64;
            let bound = 2 * l.max(m.conductor() as i64) - l;
            for n in (-3..0).chain(bound..bound + 3) {
                assert!(
                    eng.gamma_coefficient(&xi, &xi, &m, n).unwrap().is_zero(),
                    "which={which} mu={m} n={n}"
                );
            }
            let g = eng.gamma_factor(&xi, &xi, &m).unwrap();
            assert!(g
                .poly
                .support()
                .map_or(true, |(lo, hi)| lo >= 0 && hi <= g.bound));
        }
    }
}

#[test]
fn bessel_on_units_matches_triple_sum() {
    for which in [1, 2] {
        let eng = engine(which);
        let xi = xi_of(&eng);
        for u in [1, 2, 4, 5, 7, 8, -1, 10] {
            let x = k(u, 1);
            assert_eq!(
                eng.bessel_direct(&xi, &xi, &x).unwrap(),
                triple_sum_oracle(&eng, &xi, &xi, &x)
            );
        }
        let eta = &xi + &k(1, 1);
        assert_eq!(
            eng.bessel_direct(&xi, &eta, &k(2, 1)).unwrap(),
            triple_sum_oracle(&eng, &xi, &eta, &k(2, 1))
        );
    }
}

#[test]
fn bessel_vanishes_on_p() {
    let eng = engine(1);
    let xi = k(1, 3);
    for x in [k(3, 1), k(6, 1), k(9, 1), k(-3, 1), k(27, 2)] {
        assert!(eng.bessel_direct(&xi, &xi, &x).unwrap().is_zero());
    }
}

#[test]
fn bessel_is_independent_of_vector_scaling() {
    let eng = engine(1);
    let xi = k(1, 3);
    let x = k(2, 9);
    let g = MetaElement::torus(&x).unwrap().mul(&MetaElement::w(ctx()));
    let v5 = phi(k(0, 1), 0).scale(&CycValue::from_int(5));
    let scaled = eng.bessel_of_vector(&xi, &xi, &g, &v5).unwrap().value;
    let w_e = eng.pi().whittaker_functional(&xi, &v5).unwrap();
    assert_eq!(
        scaled.div(&w_e).unwrap(),
        eng.bessel_direct(&xi, &xi, &x).unwrap()
    );
}

#[test]
fn bessel_trace_stabilizes() {
    let eng = engine(1);
    let xi = k(1, 3);
    let s = eng.bessel_direct_trace(&xi, &xi, &k(1, 9)).unwrap();
    assert!(s.trace.len() >= 4);
    let tail: Vec<_> = s
        .trace
        .iter()
        .rev()
        .take(4)
        .map(|(_, v)| v.clone())
        .collect();
    assert!(tail.iter().all(|v| *v == s.value));
}

#[test]
fn bessel_methods_agree() {
    for which in [1, 2] {
        let eng = engine(which);
        let xi = xi_of(&eng);
        let table = eng.bessel_table(&xi, &xi, -4..=1, 2).unwrap();
        assert_eq!(table.values.len(), 6);
        assert!(table.get(&k(7, 27)).is_some());
        assert!(table.values[&1].values().all(CycValue::is_zero));
        let c1 = eng.bessel_growth(&table);
        let wider = eng.bessel_table(&xi, &xi, -6..=1, 2).unwrap();
        assert!(c1.is_finite() && c1 > 0.0);
        assert_eq!(c1, eng.bessel_growth(&wider));
    }
}

#[test]
fn closed_formula_rejects_small_shells() {
    let eng = engine(1);
    let xi = k(1, 3);
    assert!(matches!(
        eng.bessel_closed(&xi, &xi, &k(2, 1)),
        Err(Error::Config(_))
    ));
}

#[test]
fn bessel_transformation_law() {
    let eng = engine(1);
    let xi = k(1, 3);
    for (t, u) in [(k(1, 1), k(2, 1)), (k(4, 1), k(-2, 1)), (k(-1, 1), k(5, 1))] {
        for a in [k(1, 9), k(5, 27), k(2, 3)] {
            let (lhs, rhs) = eng.bessel_transform_check(&xi, &xi, &t, &u, &a).unwrap();
            assert_eq!(lhs, rhs, "t={t} u={u} a={a}");
        }
    }
}

#[test]
fn zeta_examples() {
    let eng = engine(1);
    let xi = k(1, 3);
    let triv = MultCharacter::trivial(ctx());
    let v = phi(k(0, 1), 0);
    let z = eng.zeta_function(&xi, &triv, &v).unwrap();
    assert_eq!(
        z.poly,
        LaurentPoly::constant(Variable::QNegS, 3, CycValue::from_frac(4, 3))
    );
    assert!(z.window.0 >= -10 && z.window.1 <= 10);

    let neg = eng.pi().act(&MetaElement::kernel(ctx(), -1), &v).unwrap();
    let zn = eng.zeta_function(&xi, &triv, &neg).unwrap();
    assert_eq!(zn.poly, z.poly.scale(&CycValue::from_int(-1)));

    // psi(xi a x^2) = 1 on the support O^x for a in P
    let shifted = eng.pi().act(&MetaElement::n(&k(3, 1)), &v).unwrap();
    assert_eq!(
        eng.zeta_function(&xi, &triv, &shifted).unwrap().poly,
        z.poly
    );

    let zero = eng
        .zeta_function(&xi, &triv, &InducedVector::zero())
        .unwrap();
    assert!(zero.poly.is_zero());
}

#[test]
fn zeta_vanishes_when_parity_fails() {
    let eng = engine(1);
    let xi = k(1, 3);
    let quad = mu(1, 0, 1, 1);
    assert!(!eng.parity_holds(&quad).unwrap());
    assert!(eng.parity_holds(&mu(2, 0, 1, 2)).unwrap());
    for v in [phi(k(0, 1), 0), phi(k(0, 1), 1), phi(k(1, 9), -1)] {
        assert!(eng.zeta_function(&xi, &quad, &v).unwrap().poly.is_zero());
    }
}

fn fe_vectors() -> Vec<InducedVector> {
    let combo = phi(k(2, 9), 1)
        .add(&phi(k(1, 3), -1).scale(&CycValue::from_frac(-2, 5)))
        .add(&phi(k(0, 1), 0).scale(&CycValue::root_of_unity(1, 3)));
    vec![
        phi(k(0, 1), 0),
        phi(k(1, 3), 0),
        phi(k(0, 1), 1),
        phi(k(0, 1), -1),
        combo,
    ]
}

#[test]
fn functional_equation() {
    let eng = engine(1);
    let xi = k(1, 3);
    let chars = [
        mu(0, 0, 1, 0),
        mu(1, 0, 1, 1),
        mu(0, 1, 2, 0),
        mu(2, 0, 1, 2),
    ];
    for m in &chars {
        let gammas = eng.gamma_set(&xi, m).unwrap();
        for v in fe_vectors() {
            let r = eng.check_fe_with(&gammas, m, &v).unwrap();
            assert!(r.pass(), "mu={m} v={v}: residual {}", r.residual);
            assert_eq!(r.parity_vacuous, !eng.parity_holds(m).unwrap());
            if r.parity_vacuous {
                assert!(r.lhs.is_zero() && r.rhs.is_zero());
            }
        }
    }
    let r = eng.check_fe(&xi, &chars[0], &phi(k(0, 1), 1)).unwrap();
    assert!(!r.lhs.is_zero());
    let r = eng
        .check_fe(&xi, &chars[0], &InducedVector::zero())
        .unwrap();
    assert!(r.lhs.is_zero() && r.rhs.is_zero());
}

#[test]
fn functional_equation_detects_corrupted_gamma() {
    let eng = engine(1);
    let xi = k(1, 3);
    let triv = MultCharacter::trivial(ctx());
    let mut gammas = eng.gamma_set(&xi, &triv).unwrap();
    gammas.entries[0]
        .1
        .poly
        .add_coeff(0, &CycValue::from_frac(1, 7));
    let r = eng.check_fe_with(&gammas, &triv, &phi(k(0, 1), 0)).unwrap();
    assert!(!r.pass());
    assert_eq!(r.residual.support(), Some((0, 0)));
}

#[test]
fn fourier_inversion() {
    for which in [1, 2] {
        let eng = engine(which);
        let xi = xi_of(&eng);
        for v in fe_vectors() {
            for a in [k(1, 3), k(2, 3)] {
                let (lhs, rhs) = eng.fourier_inversion(&xi, &v, &a).unwrap();
                assert_eq!(lhs, rhs, "v={v} a={a}");
            }
        }
    }
}

#[test]
fn improper_integral_reports_non_stabilization() {
    let pi = Supercuspidal::new(SigmaRep::builtin_p3(ctx(), 1).unwrap()).unwrap();
    let eng = ZetaEngine::new(pi, 2).unwrap();
    let r = eng.bessel_direct(&k(1, 3), &k(1, 3), &k(1, 243));
    assert!(matches!(r, Err(Error::NoStabilization { .. })));
}
