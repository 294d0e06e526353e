//! Local zeta functions Z(s, v, mu) of a few test vectors.

use metazeta::exactnum::{CycValue, KElement, PadicContext};
use metazeta::localchar::{CharacterSpec, MultCharacter};
use metazeta::repn::{InducedVector, SigmaRep, Supercuspidal};
use metazeta::zeta::ZetaEngine;

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    let eng = ZetaEngine::new(Supercuspidal::new(SigmaRep::builtin_p3(ctx, 1)?)?, 40)?;
    let xi = eng.pi().spectrum().classes[0].xi.clone();
    let k = |a, b| KElement::from_frac(ctx, a, b);

    let vectors = [
        InducedVector::basis(&k(0, 1), 0, 0),
        InducedVector::basis(&k(0, 1), 1, 0),
        InducedVector::basis(&k(1, 3), -1, 0).scale(&CycValue::from_frac(2, 5)),
    ];
    let unramified = CharacterSpec {
        conductor_exponent: 0,
        value_at_p_numerator_of_exponent: 1,
        value_at_p_denominator_of_exponent: 2,
        generator_image_exponent: 0,
    };
    for mu in [
        MultCharacter::trivial(ctx),
        MultCharacter::from_spec(ctx, &unramified, 4)?,
    ] {
        println!("{mu} (parity holds: {})", eng.parity_holds(&mu)?);
        for v in &vectors {
            let z = eng.zeta_function(&xi, &mu, v)?;
            println!("  Z(s, {v}) = {}   [window {:?}]", z.poly, z.window);
        }
    }
    Ok(())
}
