//! The gamma factor of the builtin level-one representation at p = 3
//! against the trivial character; its value is 4/3.

use std::time::Instant;

use metazeta::exactnum::PadicContext;
use metazeta::localchar::MultCharacter;
use metazeta::repn::{SigmaRep, Supercuspidal};
use metazeta::zeta::ZetaEngine;

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    let eng = ZetaEngine::new(Supercuspidal::new(SigmaRep::builtin_p3(ctx, 1)?)?, 40)?;
    let xi = eng.pi().spectrum().classes[0].xi.clone();
    let mu = MultCharacter::trivial(ctx);

    let start = Instant::now();
    let g = eng.gamma_factor(&xi, &xi, &mu)?;
    println!("coefficients (support bound {}):", g.bound);
    for (n, c) in &g.coefficients {
        println!("  gamma({n}) = {c}");
    }
    println!("Gamma(s) = {} in {:?}", g.poly, start.elapsed());
    Ok(())
}
