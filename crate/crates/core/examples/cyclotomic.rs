//! Exact arithmetic in cyclotomic fields and Laurent polynomials in q^{-s}.

use metazeta::exactnum::{CycValue, LaurentPoly, Substitution, Variable};

fn main() -> metazeta::Result<()> {
    let zeta3 = CycValue::root_of_unity(1, 3);
    let sum = &(&CycValue::one() + &zeta3) + &zeta3.pow(2)?;
    println!("1 + z3 + z3^2 = {sum}");

    let s3 = CycValue::sqrt_q(3);
    println!("sqrt(3) = {s3}, squared = {}", &s3 * &s3);
    println!("q^(3/2) for q = 3: {}", CycValue::q_half_power(3, 3));

    let x = &CycValue::from_frac(2, 3) + &CycValue::root_of_unity(1, 9);
    let inv = x.inv()?;
    println!("x = {x}\n1/x = {inv}\nx * (1/x) = {}", &x * &inv);

    let mut z = LaurentPoly::zero(Variable::QNegS, 3);
    z.add_coeff(0, &CycValue::one());
    z.add_coeff(1, &CycValue::from_frac(1, 3));
    println!("Z(s) = {z}");
    println!("Z(1 - s) = {}", z.substitute(Substitution::SToOneMinusS));
    Ok(())
}
