//! Machine-readable forms of exact values and Laurent polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CycValue, LaurentPoly, Root, Variable};

/// `(numerator / denominator) * e^{2 pi i num/den}`, times `sqrt(q)` if `sqrtq`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTerm {
    pub numerator: String,
    pub denominator: String,
    pub root_of_unity_num: u64,
    pub root_of_unity_den: u64,
    pub sqrtq: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactJson {
    pub terms: Vec<ExactTerm>,
}

impl ExactJson {
    /// Values are stored in the canonical cyclotomic basis, so `sqrtq` is
    /// always emitted as `false`.
    pub fn from_value(v: &CycValue) -> Self {
        let terms = v
            .terms()
            .map(|(r, c)| ExactTerm {
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
                root_of_unity_num: r.num(),
                root_of_unity_den: r.den(),
                sqrtq: false,
            })
            .collect();
        Self { terms }
    }

    pub fn to_value(&self, q: u64) -> Result<CycValue> {
        let mut out = CycValue::zero();
        for t in &self.terms {
            let bad = |what: &str| Error::Parse(format!("bad {what} in exact term {t:?}"));
            let n: BigInt = t.numerator.parse().map_err(|_| bad("numerator"))?;
            let d: BigInt = t.denominator.parse().map_err(|_| bad("denominator"))?;
            if d == BigInt::from(0) || t.root_of_unity_den == 0 {
                return Err(bad("denominator"));
            }
            let mut term = CycValue::monomial(
                BigRational::new(n, d),
                Root::new(t.root_of_unity_num as i128, t.root_of_unity_den),
            );
            if t.sqrtq {
                term = &term * &CycValue::sqrt_q(q);
            }
            out += &term;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: i64,
    pub value_float_re: f64,
    pub value_float_im: f64,
    pub value_exact: ExactJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub variable: String,
    pub terms: Vec<PolyTerm>,
}

impl PolyJson {
    pub fn from_poly(p: &LaurentPoly) -> Self {
        let terms = p
            .terms()
            .map(|(exp, c)| {
                let z = c.to_complex();
                PolyTerm {
                    exp,
                    value_float_re: z.re,
                    value_float_im: z.im,
                    value_exact: ExactJson::from_value(c),
                }
            })
            .collect();
        Self {
            variable: p.variable().label().to_string(),
            terms,
        }
    }

    pub fn to_poly(&self, q: u64) -> Result<LaurentPoly> {
        let var = match self.variable.as_str() {
            "q^-s" => Variable::QNegS,
            "q^s" => Variable::QPosS,
            other => return Err(Error::Parse(format!("unknown variable {other:?}"))),
        };
        let mut p = LaurentPoly::zero(var, q);
        for t in &self.terms {
            p.add_coeff(t.exp, &t.value_exact.to_value(q)?);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let v = &CycValue::from_frac(-7, 3) + &CycValue::root_of_unity(5, 27).scale_int(4);
        let v = &v * &CycValue::sqrt_q(3);
        let j = ExactJson::from_value(&v);
        let text = serde_json::to_string(&j).unwrap();
        let back: ExactJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_value(3).unwrap(), v);
    }

    #[test]
    fn sqrtq_flag_is_honoured() {
        let j = ExactJson {
            terms: vec![ExactTerm {
                numerator: "2".into(),
                denominator: "1".into(),
                root_of_unity_num: 0,
                root_of_unity_den: 1,
                sqrtq: true,
            }],
        };
        let v = j.to_value(5).unwrap();
        assert_eq!(&v * &v, CycValue::from_int(20));
    }

    #[test]
    fn poly_round_trip() {
        let mut p = LaurentPoly::zero(Variable::QPosS, 3);
        p.add_coeff(-2, &CycValue::root_of_unity(1, 9));
        p.add_coeff(3, &CycValue::q_half_power(3, 3));
        let j = PolyJson::from_poly(&p);
        let back: PolyJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_poly(3).unwrap(), p);
        assert!(PolyJson {
            variable: "s".into(),
            terms: vec![]
        }
        .to_poly(3)
        .is_err());
    }
}
