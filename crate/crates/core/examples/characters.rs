//! Hilbert symbols, the Weil index, the character chi_psi and
//! multiplicative characters of Q_p^x.

use metazeta::exactnum::{KElement, PadicContext};
use metazeta::localchar::{
    chi_psi, hilbert_symbol, square_class_representatives, weil_alpha, CharacterSpec, MultCharacter,
};

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    let reps = square_class_representatives(ctx);

    println!("Hilbert symbol table over the square classes of Q_3^x:");
    for a in &reps {
        let row: Vec<String> = reps
            .iter()
            .map(|b| format!("{:>2}", hilbert_symbol(a, b).unwrap()))
            .collect();
        println!("  {a:>4}: {}", row.join(" "));
    }

    for a in &reps {
        println!(
            "alpha({a}) = {}, chi_psi({a}) = {}",
            weil_alpha(a)?,
            chi_psi(a)?
        );
    }

    let spec = CharacterSpec {
        conductor_exponent: 2,
        value_at_p_numerator_of_exponent: 1,
        value_at_p_denominator_of_exponent: 4,
        generator_image_exponent: 1,
    };
    let mu = MultCharacter::from_spec(ctx, &spec, 4)?;
    println!("{mu}: conductor {}, mu(-1) = {}", mu.conductor(), mu.sign());
    for x in [2, 3, 4, 5, 10] {
        let x = KElement::from_int(ctx, x);
        println!("  mu({x}) = {}", mu.eval(&x)?);
    }
    Ok(())
}
