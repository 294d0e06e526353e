//! The compactly induced representation `pi = cInd(sigma)` of the double
//! cover, in the basis `phi^{n(t)<p^n>}_b` (`t` in `k/O`, `b` an eigenvector
//! of `sigma(n(O))`), with its Whittaker functionals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::matrix::Mat;
use super::sigma::{Residue, SigmaRep};
use crate::error::{Error, Result};
use crate::exactnum::{CycValue, KElement, PadicContext};
use crate::localchar::{psi_value, square_class_data, SquareClass};
use crate::metaplectic::{coset_decompose, coset_representative, kubota_split, MetaElement};

/// One eigenline of `sigma(n(O))`: `sigma(n(a)) v = psi(beta a) v`.
#[derive(Clone, Debug)]
pub struct EigenEntry {
    pub index: usize,
    /// `beta` in `[0, 1)` with denominator exactly `p^l`.
    pub beta: KElement,
    /// `P_beta = p^{-l} sum_{x mod p^l} psi(-beta x) sigma(n(x))`.
    pub projection: Mat,
    /// A spanning vector of the image of `P_beta`.
    pub vector: Vec<CycValue>,
}

#[derive(Clone, Debug)]
pub struct EigenBasis {
    pub entries: Vec<EigenEntry>,
    /// Columns are the eigenvectors.
    pub change: Mat,
    pub change_inv: Mat,
}

impl EigenBasis {
    pub fn new(sigma: &SigmaRep) -> Result<Self> {
        let ctx = sigma.ctx();
        let m = sigma.modulus();
        let scale = BigRational::new(1.into(), BigInt::from(m));
        let mut entries = Vec::new();
        for k in 0..m {
            let beta = KElement::from_frac(ctx, k as i64, m as i64);
            let mut acc = Mat::zero(sigma.dim());
            for x in 0..m {
                let phase = psi_value(&(-&(&beta * &KElement::from_int(ctx, x as i64))));
                acc = acc.add(&sigma.eval_n(x).scale(&phase));
            }
            let projection = acc.scale(&CycValue::from_rational(scale.clone()));
            if projection.is_zero() {
                continue;
            }
            let rank = projection.rank()?;
            if rank > 1 {
                return Err(Error::InvalidSigma(format!(
                    "eigenspace for beta = {beta} has dimension {rank}; sigma is reducible"
                )));
            }
            if beta.val() != Some(-(sigma.level() as i64)) {
                return Err(Error::InvalidSigma(format!(
                    "character psi({beta} .) has conductor below p^l"
                )));
            }
            let col = (0..sigma.dim())
                .find(|&j| projection.column(j).iter().any(|x| !x.is_zero()))
                .expect("nonzero projection");
            entries.push(EigenEntry {
                index: entries.len(),
                beta,
                vector: projection.column(col),
                projection,
            });
        }
        if entries.len() != sigma.dim() {
            return Err(Error::InvalidSigma("eigenlines do not span".into()));
        }
        let n = entries.len();
        let mut change = Mat::zero(n);
        for (j, e) in entries.iter().enumerate() {
            for (i, x) in e.vector.iter().enumerate() {
                change.set(i, j, x.clone());
            }
        }
        let change_inv = change.inverse()?;
        Ok(Self {
            entries,
            change,
            change_inv,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entry whose character matches `psi^xi` on `O`, i.e. `xi - beta` integral.
    pub fn matching(&self, xi: &KElement) -> Option<&EigenEntry> {
        self.entries.iter().find(|e| (xi - &e.beta).is_integral())
    }
}

/// A finite combination of basis vectors `phi^{n(t)<p^n>}_b`, coefficients in
/// eigen coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InducedVector {
    terms: BTreeMap<(KElement, i64, usize), CycValue>,
}

impl InducedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `phi^{n(t)<p^n>}_b`; `t` is reduced to its representative in `[0, 1)`.
    pub fn basis(t: &KElement, n: i64, b: usize) -> Self {
        let mut v = Self::zero();
        v.add_term(t, n, b, &CycValue::one());
        v
    }

    pub fn add_term(&mut self, t: &KElement, n: i64, b: usize, c: &CycValue) {
        let key = (t.fractional_part(), n, b);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(KElement, i64, usize), &CycValue)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &InducedVector) -> InducedVector {
        let mut out = self.clone();
        for ((t, n, b), c) in &o.terms {
            out.add_term(t, *n, *b, c);
        }
        out
    }

    pub fn scale(&self, c: &CycValue) -> InducedVector {
        let mut out = Self::zero();
        for ((t, n, b), x) in &self.terms {
            out.add_term(t, *n, *b, &(x * c));
        }
        out
    }
}

impl fmt::Display for InducedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((t, n, b), c)| format!("({c})*phi(t={t}, n={n}, b={b})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of `X(pi)` with its bookkeeping.
#[derive(Clone, Debug)]
pub struct XiRep {
    pub xi: KElement,
    pub index: usize,
    pub class: SquareClass,
    /// `|xi| = q^l`.
    pub abs: BigRational,
}

/// `X(pi) = union_b (beta_b + O)`, one representative `beta_b` per eigenline,
/// and the square classes of `k(pi) = X(pi) (k^x)^2`.
#[derive(Clone, Debug)]
pub struct SpectrumXPi {
    pub reps: Vec<XiRep>,
    /// One representative per square class, the numerically smallest.
    pub classes: Vec<XiRep>,
}

/// `pi = cInd(sigma)` together with cached eigen-coordinate tables.
#[derive(Clone, Debug)]
pub struct Supercuspidal {
    sigma: SigmaRep,
    basis: EigenBasis,
    eig_table: HashMap<Residue, Mat>,
}

impl Supercuspidal {
    pub fn new(sigma: SigmaRep) -> Result<Self> {
        let basis = EigenBasis::new(&sigma)?;
        let eig_table = sigma
            .table()
            .iter()
            .map(|(g, t)| (*g, basis.change_inv.mul(t).mul(&basis.change)))
            .collect();
        Ok(Self {
            sigma,
            basis,
            eig_table,
        })
    }

    pub fn sigma(&self) -> &SigmaRep {
        &self.sigma
    }

    pub fn eigenbasis(&self) -> &EigenBasis {
        &self.basis
    }

    pub fn ctx(&self) -> PadicContext {
        self.sigma.ctx()
    }

    pub fn level(&self) -> u32 {
        self.sigma.level()
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    /// The genuine `sigma([h, eps])` in eigen coordinates.
    pub fn genuine_eig(&self, h: &MetaElement) -> Result<Mat> {
        let g = h.matrix();
        let sign = h.eps() * kubota_split(g)?;
        let t = &self.eig_table[&g.reduce(self.level())?];
        Ok(if sign == 1 {
            t.clone()
        } else {
            t.scale(&CycValue::from_int(-1))
        })
    }

    fn check_indices(&self, v: &InducedVector) -> Result<()> {
        match v.terms().find(|((_, _, b), _)| *b >= self.dim()) {
            Some(((_, _, b), _)) => Err(Error::Config(format!(
                "basis index b={b} out of range for dim {}",
                self.dim()
            ))),
            None => Ok(()),
        }
    }

    /// The value `phi(x)` in eigen coordinates.
    pub fn eval(&self, v: &InducedVector, x: &MetaElement) -> Result<Vec<CycValue>> {
        self.check_indices(v)?;
        let d = coset_decompose(x);
        let hbar = d.lifted_h(x.eps());
        let m = self.genuine_eig(&hbar)?;
        let mut out = vec![CycValue::zero(); self.dim()];
        for ((t, n, b), c) in v.terms() {
            if *t == d.t && *n == d.n {
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot += &(m.get(i, *b) * c);
                }
            }
        }
        Ok(out)
    }

    /// `pi(g) v`, where `(pi(g) phi)(x) = phi(x g)`.
    ///
    /// `pi(g) phi^r_v` is supported on `H r g^-1`; writing
    /// `[r, 1] g^-1 = hbar [r', 1]` gives `pi(g) phi^r_v = phi^{r'}_{sigma(hbar)^-1 v}`.
    pub fn act(&self, g: &MetaElement, v: &InducedVector) -> Result<InducedVector> {
        self.check_indices(v)?;
        let ginv = g.inv();
        let mut out = InducedVector::zero();
        for ((t, n, b), c) in v.terms() {
            let r = MetaElement::new(coset_representative(t, *n), 1);
            let x = r.mul(&ginv);
            let d = coset_decompose(&x);
            let hbar_inv = d.lifted_h(x.eps()).inv();
            let m = self.genuine_eig(&hbar_inv)?;
            for i in 0..self.dim() {
                let e = m.get(i, *b);
                if !e.is_zero() {
                    out.add_term(&d.t, d.n, i, &(e * c));
                }
            }
        }
        Ok(out)
    }

    pub fn spectrum(&self) -> SpectrumXPi {
        let ctx = self.ctx();
        let abs = KElement::p_power(ctx, self.level() as i64).value().clone();
        let reps: Vec<XiRep> = self
            .basis
            .entries
            .iter()
            .map(|e| XiRep {
                xi: e.beta.clone(),
                index: e.index,
                class: square_class_data(&e.beta).expect("beta is nonzero"),
                abs: abs.clone(),
            })
            .collect();
        let mut sorted = reps.clone();
        sorted.sort_by(|a, b| a.xi.cmp(&b.xi));
        let mut classes: Vec<XiRep> = Vec::new();
        for r in sorted {
            if !classes.iter().any(|c| c.class == r.class) {
                classes.push(r);
            }
        }
        SpectrumXPi { reps, classes }
    }

    fn matching_index(&self, xi: &KElement) -> Result<usize> {
        self.basis
            .matching(xi)
            .map(|e| e.index)
            .ok_or_else(|| Error::NotInSpectrum(xi.to_string()))
    }

    /// `l^xi(v)`: the `b`-coefficient of `int_k v(n(x)) psi(-xi x) dx`, which on
    /// basis vectors is `psi(-xi t)` if `n = 0` and `b' = b`, else `0`.
    /// Defined for every `xi` in `X(pi)`.
    pub fn whittaker_functional(&self, xi: &KElement, v: &InducedVector) -> Result<CycValue> {
        let b = self.matching_index(xi)?;
        let mut acc = CycValue::zero();
        for ((t, n, bb), c) in v.terms() {
            if *n == 0 && *bb == b {
                acc += &(c * &psi_value(&(-&(xi * t))));
            }
        }
        Ok(acc)
    }

    /// `W^xi_v(g) = l^xi(pi(g) v)`.
    pub fn whittaker_function(
        &self,
        xi: &KElement,
        v: &InducedVector,
        g: &MetaElement,
    ) -> Result<CycValue> {
        self.whittaker_functional(xi, &self.act(g, v)?)
    }

    /// The constant `c` with `l^xi(pi(<a>) v) = c l^{a^2 xi}(v)` for a unit
    /// `a`, measured on two vectors that must agree.
    pub fn c_factor(&self, xi: &KElement, a: &KElement) -> Result<CycValue> {
        if !a.is_unit() {
            return Err(Error::NotAUnit(a.to_string()));
        }
        let eta = &(a * a) * xi;
        let b = self.matching_index(&eta)?;
        self.matching_index(xi)?;
        let ctx = self.ctx();
        let torus = MetaElement::torus(a)?;
        let mut found: Option<CycValue> = None;
        for t in [
            KElement::zero(ctx),
            KElement::from_frac(ctx, 1, ctx.p() as i64),
        ] {
            let v = InducedVector::basis(&t, 0, b);
            let lhs = self.whittaker_functional(xi, &self.act(&torus, &v)?)?;
            let rhs = self.whittaker_functional(&eta, &v)?;
            let c = lhs.div(&rhs)?;
            match &found {
                Some(prev) if *prev != c => {
                    return Err(Error::InconsistentConstant(format!(
                        "c_xi({a}) is {prev} on one vector and {c} on another"
                    )))
                }
                _ => found = Some(c),
            }
        }
        Ok(found.expect("two vectors tested"))
    }

    /// `omega_pi([-I, 1])`, the scalar by which the central element acts.
    pub fn central_value(&self) -> Result<CycValue> {
        let ctx = self.ctx();
        let minus_one = MetaElement::torus(&KElement::from_int(ctx, -1))?;
        let m = self.genuine_eig(&minus_one)?;
        let c = m.get(0, 0).clone();
        if m != Mat::identity(self.dim()).scale(&c) {
            return Err(Error::InvalidSigma("-I does not act by a scalar".into()));
        }
        Ok(c)
    }
}
