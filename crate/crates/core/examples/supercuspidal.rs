//! A genuine supercuspidal representation compactly induced from a
//! representation of SL2(Z/3Z): eigenbasis, spectrum and Whittaker functionals.

use metazeta::exactnum::{CycValue, KElement, PadicContext};
use metazeta::metaplectic::MetaElement;
use metazeta::repn::{check_strongly_cuspidal, InducedVector, SigmaRep, Supercuspidal};

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    for which in [1, 2] {
        let sigma = SigmaRep::builtin_p3(ctx, which)?;
        println!(
            "builtin{which}: level {}, dim {}, strongly cuspidal {}",
            sigma.level(),
            sigma.dim(),
            check_strongly_cuspidal(&sigma)
        );
        let pi = Supercuspidal::new(sigma)?;
        for e in &pi.eigenbasis().entries {
            println!("  eigenline {} with beta = {}", e.index, e.beta);
        }
        println!("  central value {}", pi.central_value()?);
        let spectrum = pi.spectrum();
        for rep in &spectrum.classes {
            println!("  xi = {} (|xi| = {})", rep.xi, rep.abs);
        }

        let xi = spectrum.classes[0].xi.clone();
        let v = InducedVector::basis(&KElement::zero(ctx), 0, 0).add(
            &InducedVector::basis(&KElement::from_frac(ctx, 1, 3), 0, 0)
                .scale(&CycValue::from_frac(-1, 2)),
        );
        let x = KElement::from_frac(ctx, 2, 3);
        let lhs = pi.whittaker_functional(&xi, &pi.act(&MetaElement::n(&x), &v)?)?;
        let rhs =
            &metazeta::localchar::psi_value(&(&xi * &x)) * &pi.whittaker_functional(&xi, &v)?;
        println!("  l(pi(n(x)) v) = {lhs}\n  psi(xi x) l(v)  = {rhs}");
        println!(
            "  W(w) = {}",
            pi.whittaker_function(&xi, &v, &MetaElement::w(ctx))?
        );
    }
    Ok(())
}
