//! Representations `sigma` of `SL_2(Z/p^l)` given by full tables, and their
//! genuine extension to the preimage of `SL_2(Z_p)` in the double cover.

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::Mat;
use crate::error::{Error, Result};
use crate::exactnum::{CycValue, PadicContext, Root};
use crate::metaplectic::{kubota_split, MetaElement, SL2Element};

/// A matrix `[a, b, c, d]` with entries in `[0, p^l)`.
pub type Residue = [u64; 4];

pub fn mul_mod(x: &Residue, y: &Residue, m: u64) -> Residue {
    let m = m as u128;
    let f = |a: u64, b: u64, c: u64, d: u64| {
        ((a as u128 * b as u128 + c as u128 * d as u128) % m) as u64
    };
    [
        f(x[0], y[0], x[1], y[2]),
        f(x[0], y[1], x[1], y[3]),
        f(x[2], y[0], x[3], y[2]),
        f(x[2], y[1], x[3], y[3]),
    ]
}

/// All elements of `SL_2(Z/m)`, in lexicographic order.
pub fn enumerate_sl2(m: u64) -> Vec<Residue> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let m128 = m as u128;
                    let det =
                        (a as u128 * d as u128 % m128 + m128 - b as u128 * c as u128 % m128) % m128;
                    if det == 1 % m128 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// A representation of `SL_2(Z/p^l)` on `C^d` with values in a cyclotomic
/// field, stored as a complete table.
#[derive(Clone, Debug)]
pub struct SigmaRep {
    ctx: PadicContext,
    level: u32,
    dim: usize,
    table: HashMap<Residue, Mat>,
}

impl SigmaRep {
    /// Builds and validates a table.
    pub fn from_table(
        ctx: PadicContext,
        level: u32,
        dim: usize,
        table: HashMap<Residue, Mat>,
    ) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidSigma("level must be positive".into()));
        }
        let s = Self {
            ctx,
            level,
            dim,
            table,
        };
        s.validate()?;
        Ok(s)
    }

    /// The one-dimensional representation of `SL_2(Z/3)` with
    /// `n(a) -> e^{2 pi i which a / 3}` and `w -> 1`.
    pub fn builtin_p3(ctx: PadicContext, which: u8) -> Result<Self> {
        if ctx.p() != 3 {
            return Err(Error::InvalidSigma(format!(
                "no one-dimensional strongly cuspidal datum for p = {}",
                ctx.p()
            )));
        }
        if which != 1 && which != 2 {
            return Err(Error::InvalidSigma(format!(
                "builtin sigma index {which} is not 1 or 2"
            )));
        }
        let m = 3;
        let gens: [(Residue, Root); 2] = [
            ([1, 1, 0, 1], Root::new(which as i128, 3)),
            ([0, 2, 1, 0], Root::ONE),
        ];
        let mut values: HashMap<Residue, Root> = HashMap::new();
        values.insert([1, 0, 0, 1], Root::ONE);
        let mut queue = VecDeque::from([[1u64, 0, 0, 1]]);
        while let Some(g) = queue.pop_front() {
            let vg = values[&g];
            for (s, vs) in &gens {
                let gs = mul_mod(&g, s, m);
                let val = vg.mul(*vs);
                match values.get(&gs) {
                    Some(existing) if *existing != val => {
                        return Err(Error::InvalidSigma(
                            "generator images do not define a homomorphism".into(),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        values.insert(gs, val);
                        queue.push_back(gs);
                    }
                }
            }
        }
        let table = values
            .into_iter()
            .map(|(g, r)| (g, Mat::scalar(CycValue::root(r))))
            .collect();
        Self::from_table(ctx, 1, 1, table)
    }

    pub fn ctx(&self) -> PadicContext {
        self.ctx
    }

    /// The conductor `l`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.ctx.pow(self.level)
    }

    pub fn table(&self) -> &HashMap<Residue, Mat> {
        &self.table
    }

    pub fn eval_residue(&self, g: &Residue) -> &Mat {
        &self.table[g]
    }

    /// `sigma(g mod p^l)` for an integral matrix.
    pub fn eval(&self, g: &SL2Element) -> Result<&Mat> {
        Ok(self.eval_residue(&g.reduce(self.level)?))
    }

    /// `sigma(n(x))` for an integer `x` taken modulo `p^l`.
    pub fn eval_n(&self, x: u64) -> &Mat {
        self.eval_residue(&[1, x % self.modulus(), 0, 1])
    }

    fn validate(&self) -> Result<()> {
        let m = self.modulus();
        let group = enumerate_sl2(m);
        if self.table.len() != group.len() || group.iter().any(|g| !self.table.contains_key(g)) {
            return Err(Error::InvalidSigma(format!(
                "table has {} entries, SL_2(Z/{m}) has {} elements",
                self.table.len(),
                group.len()
            )));
        }
        if self.table.values().any(|t| t.dim() != self.dim) {
            return Err(Error::InvalidSigma("matrix of the wrong size".into()));
        }
        if *self.eval_residue(&[1, 0, 0, 1]) != Mat::identity(self.dim) {
            return Err(Error::InvalidSigma(
                "identity does not act trivially".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let pairs: Vec<(Residue, Residue)> = if group.len() <= 64 {
            group
                .iter()
                .flat_map(|g| group.iter().map(move |h| (*g, *h)))
                .collect()
        } else {
            (0..100)
                .map(|_| {
                    (
                        group[rng.gen_range(0..group.len())],
                        group[rng.gen_range(0..group.len())],
                    )
                })
                .collect()
        };
        for (g, h) in pairs {
            let lhs = self.eval_residue(&g).mul(self.eval_residue(&h));
            if lhs != *self.eval_residue(&mul_mod(&g, &h, m)) {
                return Err(Error::InvalidSigma(format!(
                    "not a homomorphism at {g:?}, {h:?}"
                )));
            }
        }
        // nontrivial on the kernel of reduction mod p^{l-1}
        let prev = self.ctx.pow(self.level - 1);
        let id = Mat::identity(self.dim);
        let nontrivial = group.iter().any(|g| {
            let reduced = [g[0] % prev, g[1] % prev, g[2] % prev, g[3] % prev];
            reduced == [1 % prev, 0, 0, 1 % prev] && *self.eval_residue(g) != id
        });
        if !nontrivial {
            return Err(Error::InvalidSigma(format!(
                "conductor is smaller than {}",
                self.level
            )));
        }
        if !check_strongly_cuspidal(self) {
            return Err(Error::InvalidSigma(format!(
                "not strongly cuspidal: sum over x in p^{}Z/p^{}Z of sigma(n(x)) is\n{}",
                self.level - 1,
                self.level,
                cuspidal_sum(self)
            )));
        }
        Ok(())
    }

    /// `sigma([h, eps]) = eps s(h) sigma(h mod p^l)` for integral `h`.
    pub fn genuine_eval(&self, h: &MetaElement) -> Result<Mat> {
        let g = h.matrix();
        let sign = h.eps() * kubota_split(g)?;
        let t = self.eval(g)?;
        Ok(if sign == 1 {
            t.clone()
        } else {
            t.scale(&CycValue::from_int(-1))
        })
    }

    pub fn to_file(&self) -> SigmaFile {
        let mut keys: Vec<&Residue> = self.table.keys().collect();
        keys.sort();
        SigmaFile {
            p: self.ctx.p(),
            l: self.level,
            dim: self.dim,
            entries: keys
                .into_iter()
                .map(|g| {
                    let t = &self.table[g];
                    SigmaFileEntry {
                        matrix: [[g[0], g[1]], [g[2], g[3]]],
                        rep: (0..self.dim)
                            .map(|i| {
                                (0..self.dim)
                                    .map(|j| SigmaTerm::encode(t.get(i, j)))
                                    .collect()
                            })
                            .collect(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_file(file: &SigmaFile) -> Result<Self> {
        let ctx = PadicContext::new(file.p)?;
        let m = ctx.pow(file.l);
        let mut table = HashMap::new();
        for e in &file.entries {
            let g = [
                e.matrix[0][0],
                e.matrix[0][1],
                e.matrix[1][0],
                e.matrix[1][1],
            ];
            if g.iter().any(|&x| x >= m) {
                return Err(Error::InvalidSigma(format!(
                    "matrix entries {g:?} not reduced mod {m}"
                )));
            }
            let m128 = m as u128;
            let det = (g[0] as u128 * g[3] as u128 % m128 + m128
                - g[1] as u128 * g[2] as u128 % m128)
                % m128;
            if det != 1 % m as u128 {
                return Err(Error::InvalidSigma(format!(
                    "matrix {g:?} has determinant {det} mod {m}"
                )));
            }
            if e.rep.len() != file.dim || e.rep.iter().any(|r| r.len() != file.dim) {
                return Err(Error::InvalidSigma(format!(
                    "entry {g:?} is not {0}x{0}",
                    file.dim
                )));
            }
            let rows = e
                .rep
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| SigmaTerm::decode(x))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if table.insert(g, Mat::from_rows(rows)?).is_some() {
                return Err(Error::InvalidSigma(format!("duplicate entry {g:?}")));
            }
        }
        Self::from_table(ctx, file.l, file.dim, table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: SigmaFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// `sum_{x in p^{l-1} Z / p^l Z} sigma(n(x)) = 0`.
pub fn check_strongly_cuspidal(sigma: &SigmaRep) -> bool {
    cuspidal_sum(sigma).is_zero()
}

fn cuspidal_sum(sigma: &SigmaRep) -> Mat {
    let step = sigma.ctx.pow(sigma.level - 1);
    let mut acc = Mat::zero(sigma.dim);
    for k in 0..sigma.ctx.p() {
        acc = acc.add(sigma.eval_n(k * step));
    }
    acc
}

/// On-disk form of a sigma table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SigmaFile {
    pub p: u64,
    pub l: u32,
    pub dim: usize,
    pub entries: Vec<SigmaFileEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SigmaFileEntry {
    /// `[[a, b], [c, d]]` reduced modulo `p^l`.
    pub matrix: [[u64; 2]; 2],
    /// `rep[i][j]` is a list of terms summing to the matrix entry.
    pub rep: Vec<Vec<Vec<SigmaTerm>>>,
}

/// `coeff * e^{2 pi i num/den}`, `coeff` a rational written `"a/b"` or `"a"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SigmaTerm {
    pub coeff: String,
    pub num: i64,
    pub den: u64,
}

impl SigmaTerm {
    fn encode(v: &CycValue) -> Vec<SigmaTerm> {
        v.terms()
            .map(|(r, c)| SigmaTerm {
                coeff: c.to_string(),
                num: r.num() as i64,
                den: r.den(),
            })
            .collect()
    }

    fn decode(terms: &[SigmaTerm]) -> Result<CycValue> {
        let mut v = CycValue::zero();
        for t in terms {
            if t.den == 0 {
                return Err(Error::InvalidSigma(
                    "root of unity with zero denominator".into(),
                ));
            }
            v.add_term(Root::new(t.num as i128, t.den), parse_rational(&t.coeff)?);
        }
        Ok(v)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::KElement;

    /// A residue-class representative of an integral element, as a `KElement`.
    fn lift_residue(ctx: PadicContext, g: &Residue) -> SL2Element {
        let k = |x: u64| KElement::from_int(ctx, x as i64);
        // ad - bc = 1 mod p^l; solve for d (or b) exactly to get determinant one.
        let (a, b, c, d) = (k(g[0]), k(g[1]), k(g[2]), k(g[3]));
        let det = &(&a * &d) - &(&b * &c);
        if det == KElement::one(ctx) {
            return SL2Element::new(a, b, c, d).expect("determinant one");
        }
        if a.is_unit() {
            let d = &(&KElement::one(ctx) + &(&b * &c)) / &a;
            SL2Element::new(a, b, c, d).expect("determinant one")
        } else {
            let b = &(&(&a * &d) - &KElement::one(ctx)) / &c;
            SL2Element::new(a, b, c, d).expect("determinant one")
        }
    }

    fn c3() -> PadicContext {
        PadicContext::new(3).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_sl2(3).len(), 24);
        assert_eq!(enumerate_sl2(5).len(), 120);
        assert_eq!(enumerate_sl2(9).len(), 648);
    }

    #[test]
    fn builtin_values() {
        let s = SigmaRep::builtin_p3(c3(), 1).unwrap();
        assert_eq!(s.eval_n(1), &Mat::scalar(CycValue::root_of_unity(1, 3)));
        assert_eq!(s.eval_residue(&[0, 2, 1, 0]), &Mat::identity(1));
        assert_eq!(s.eval_residue(&[2, 0, 0, 2]), &Mat::identity(1));
        let s2 = SigmaRep::builtin_p3(c3(), 2).unwrap();
        assert_eq!(s2.eval_n(1), &Mat::scalar(CycValue::root_of_unity(2, 3)));
        assert!(check_strongly_cuspidal(&s) && check_strongly_cuspidal(&s2));
        assert!(SigmaRep::builtin_p3(PadicContext::new(5).unwrap(), 1).is_err());
    }

    #[test]
    fn trivial_sigma_is_rejected() {
        let table = enumerate_sl2(3)
            .into_iter()
            .map(|g| (g, Mat::identity(1)))
            .collect();
        assert!(SigmaRep::from_table(c3(), 1, 1, table).is_err());
        let s = SigmaRep {
            ctx: c3(),
            level: 1,
            dim: 1,
            table: enumerate_sl2(3)
                .into_iter()
                .map(|g| (g, Mat::identity(1)))
                .collect(),
        };
        assert!(!check_strongly_cuspidal(&s));
    }

    #[test]
    fn genuine_extension() {
        let c = c3();
        let s = SigmaRep::builtin_p3(c, 1).unwrap();
        assert_eq!(
            s.genuine_eval(&MetaElement::kernel(c, -1)).unwrap(),
            Mat::scalar(CycValue::from_int(-1))
        );
        let n1 = MetaElement::n(&KElement::one(c));
        assert_eq!(
            s.genuine_eval(&n1).unwrap(),
            Mat::scalar(CycValue::root_of_unity(1, 3))
        );
        assert!(s
            .genuine_eval(&MetaElement::n(&KElement::from_frac(c, 1, 3)))
            .is_err());
    }

    #[test]
    fn genuine_extension_is_multiplicative() {
        let c = c3();
        let s = SigmaRep::builtin_p3(c, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut random = || {
            // words in integral generators, with lower entries divisible by 3 often
            let mut g = MetaElement::new(
                SL2Element::identity(c),
                if rng.gen_bool(0.5) { 1 } else { -1 },
            );
            for _ in 0..rng.gen_range(1..5) {
                let x = KElement::from_frac(
                    c,
                    rng.gen_range(-20..20),
                    [1, 2, 4, 5][rng.gen_range(0..4)],
                );
                let m = match rng.gen_range(0..4) {
                    0 => SL2Element::n(&x),
                    1 => SL2Element::lower(&(&x * &KElement::from_int(c, 3))),
                    2 => SL2Element::w(c),
                    _ => SL2Element::diag(&KElement::from_int(
                        c,
                        [1, 2, 4, 5, -1][rng.gen_range(0..5)],
                    ))
                    .unwrap(),
                };
                g = g.mul(&MetaElement::new(m, 1));
            }
            g
        };
        for _ in 0..500 {
            let (x, y) = (random(), random());
            let lhs = s.genuine_eval(&x.mul(&y)).unwrap();
            let rhs = s
                .genuine_eval(&x)
                .unwrap()
                .mul(&s.genuine_eval(&y).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn file_round_trip_and_rejections() {
        let s = SigmaRep::builtin_p3(c3(), 1).unwrap();
        let file = s.to_file();
        let json = serde_json::to_string(&file).unwrap();
        let back = SigmaRep::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.table(), s.table());

        let mut broken = file.clone();
        broken.entries.pop();
        assert!(SigmaRep::from_file(&broken).is_err());

        let mut broken = file.clone();
        broken.entries[0].matrix = [[1, 1], [1, 1]];
        assert!(SigmaRep::from_file(&broken).is_err());

        let mut broken = file.clone();
        for e in broken.entries.iter_mut() {
            if e.matrix == [[1, 1], [0, 1]] {
                e.rep = vec![vec![vec![SigmaTerm {
                    coeff: "1".into(),
                    num: 2,
                    den: 3,
                }]]];
            }
        }
        assert!(SigmaRep::from_file(&broken).is_err());
    }

    #[test]
    fn residue_lift() {
        let c = c3();
        for g in enumerate_sl2(9) {
            let lifted = lift_residue(c, &g);
            assert_eq!(lifted.reduce(2).unwrap(), g);
        }
    }
}
