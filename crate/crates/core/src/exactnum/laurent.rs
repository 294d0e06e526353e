//! Finitely supported Laurent polynomials in `q^{-s}` or `q^{s}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::cyclotomic::CycValue;

/// Which formal variable the exponents refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    /// `q^{-s}`
    QNegS,
    /// `q^{s}`
    QPosS,
}

impl Variable {
    pub fn swapped(self) -> Self {
        match self {
            Variable::QNegS => Variable::QPosS,
            Variable::QPosS => Variable::QNegS,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Variable::QNegS => "q^-s",
            Variable::QPosS => "q^s",
        }
    }
}

/// Substitution rules acting on the complex variable `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `s -> 1 - s`
    SToOneMinusS,
    /// Rewrite in the other variable: `(q^{-s})^n = (q^{s})^{-n}`.
    NegateS,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    var: Variable,
    q: u64,
    coeffs: BTreeMap<i64, CycValue>,
}

impl LaurentPoly {
    /// The zero polynomial in `var`, where `q` is the residue cardinality
    /// used by `s -> 1 - s`.
    pub fn zero(var: Variable, q: u64) -> Self {
        Self {
            var,
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(var: Variable, q: u64, c: CycValue) -> Self {
        Self::monomial(var, q, 0, c)
    }

    pub fn monomial(var: Variable, q: u64, exp: i64, c: CycValue) -> Self {
        let mut p = Self::zero(var, q);
        p.add_coeff(exp, &c);
        p
    }

    pub fn variable(&self) -> Variable {
        self.var
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> CycValue {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycValue)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// `(min, max)` exponent of the support.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn add_coeff(&mut self, exp: i64, c: &CycValue) {
        let slot = self.coeffs.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// Rewrites the polynomial in the requested variable.
    pub fn in_variable(&self, var: Variable) -> LaurentPoly {
        if var == self.var {
            self.clone()
        } else {
            self.substitute(Substitution::NegateS)
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.q, other.q);
        let other = other.in_variable(self.var);
        let mut out = self.clone();
        for (e, c) in other.coeffs {
            out.add_coeff(e, &c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(&CycValue::from_int(-1)))
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let other = other.in_variable(self.var);
        let mut out = LaurentPoly::zero(self.var, self.q);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_coeff(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycValue) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.var, self.q);
        for (e, x) in &self.coeffs {
            out.add_coeff(*e, &(x * c));
        }
        out
    }

    /// Applies a substitution in `s`. Under `s -> 1 - s`, the monomial
    /// `(q^{-s})^n` becomes `q^{-n} (q^{s})^n` and `(q^{s})^n` becomes
    /// `q^{n} (q^{-s})^n`.
    pub fn substitute(&self, rule: Substitution) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.var.swapped(), self.q);
        match rule {
            Substitution::NegateS => {
                for (e, c) in &self.coeffs {
                    out.add_coeff(-e, c);
                }
            }
            Substitution::SToOneMinusS => {
                let q = self.q;
                for (e, c) in &self.coeffs {
                    let shift = match self.var {
                        Variable::QNegS => -e,
                        Variable::QPosS => *e,
                    };
                    out.add_coeff(*e, &c.scale(&rational_power(q, shift)));
                }
            }
        }
        out
    }
}

fn rational_power(q: u64, e: i64) -> BigRational {
    let b = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, c)| {
                if *e == 0 {
                    format!("({c})")
                } else {
                    format!("({c})*({})^{e}", self.var.label())
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
