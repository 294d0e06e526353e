//! Bessel functions J(<x> w) by direct integration and by the closed
//! formula, tabulated on the shells v(x) = -5..=0.

use metazeta::exactnum::{KElement, PadicContext};
use metazeta::repn::{SigmaRep, Supercuspidal};
use metazeta::zeta::ZetaEngine;

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    let eng = ZetaEngine::new(Supercuspidal::new(SigmaRep::builtin_p3(ctx, 1)?)?, 40)?;
    let xi = eng.pi().spectrum().classes[0].xi.clone();

    for n in (-5..=-1).rev() {
        for u in [1, 2] {
            let x = &KElement::p_power(ctx, n) * &KElement::from_int(ctx, u);
            let direct = eng.bessel_direct(&xi, &xi, &x)?;
            let closed = eng.bessel_closed(&xi, &xi, &x)?;
            println!(
                "J(<{x}> w) = {direct}   closed formula agrees: {}",
                direct == closed
            );
        }
    }
    println!(
        "J(<3> w) = {}",
        eng.bessel_direct(&xi, &xi, &KElement::from_int(ctx, 3))?
    );

    let trace = eng.bessel_direct_trace(&xi, &xi, &KElement::from_frac(ctx, 1, 9))?;
    println!("partial integrals for x = 1/9:");
    for (n, v) in &trace.trace {
        println!("  N = {n}: {v}");
    }

    let table = eng.bessel_table(&xi, &xi, -4..=1, 2)?;
    println!(
        "growth constant on -4..=1: {:.4}",
        eng.bessel_growth(&table)
    );
    Ok(())
}
