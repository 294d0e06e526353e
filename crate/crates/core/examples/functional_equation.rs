//! Checks the functional equation relating Z(s, pi(w) v, mu) to the
//! gamma-weighted sum of Z(1 - s, v, mu^-1), plus Fourier inversion.

use metazeta::exactnum::{KElement, PadicContext};
use metazeta::localchar::{CharacterSpec, MultCharacter};
use metazeta::repn::{InducedVector, SigmaRep, Supercuspidal};
use metazeta::zeta::ZetaEngine;

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    let k = |a, b| KElement::from_frac(ctx, a, b);
    let ramified = CharacterSpec {
        conductor_exponent: 2,
        value_at_p_numerator_of_exponent: 0,
        value_at_p_denominator_of_exponent: 1,
        generator_image_exponent: 2,
    };
    let mus = [
        MultCharacter::trivial(ctx),
        MultCharacter::from_spec(ctx, &ramified, 4)?,
    ];
    let vectors = [
        InducedVector::basis(&k(0, 1), 0, 0),
        InducedVector::basis(&k(1, 3), 0, 0),
        InducedVector::basis(&k(0, 1), -1, 0),
    ];

    for which in [1, 2] {
        let eng = ZetaEngine::new(Supercuspidal::new(SigmaRep::builtin_p3(ctx, which)?)?, 40)?;
        let xi = eng.pi().spectrum().classes[0].xi.clone();
        for mu in &mus {
            let gammas = eng.gamma_set(&xi, mu)?;
            for v in &vectors {
                let r = eng.check_fe_with(&gammas, mu, v)?;
                let verdict = match (r.pass(), r.parity_vacuous) {
                    (true, true) => "PASS vacuous (parity)",
                    (true, false) => "PASS",
                    _ => "FAIL",
                };
                println!(
                    "builtin{which} {mu} v = {v}: lhs {} rhs {} {verdict}",
                    r.lhs, r.rhs
                );
            }
        }
        for v in &vectors[..2] {
            for a in [k(1, 3), k(2, 3), k(1, 1)] {
                let (lhs, rhs) = eng.fourier_inversion(&xi, v, &a)?;
                println!("builtin{which} Fourier inversion for {v} at a = {a}: {lhs} = {rhs}");
            }
        }
    }
    Ok(())
}
