//! Small dense square matrices over `CycValue`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::CycValue;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    n: usize,
    data: Vec<CycValue>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            data: vec![CycValue::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = CycValue::one();
        }
        m
    }

    pub fn scalar(c: CycValue) -> Self {
        Self {
            n: 1,
            data: vec![c],
        }
    }

    pub fn from_rows(rows: Vec<Vec<CycValue>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSigma("matrix is not square".into()));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycValue {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycValue) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<CycValue> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycValue::is_zero)
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &CycValue) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn apply(&self, v: &[CycValue]) -> Vec<CycValue> {
        (0..self.n)
            .map(|i| {
                let mut acc = CycValue::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelon(rows: &mut [Vec<CycValue>], ncols: usize) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r][col].inv()?;
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][col].is_zero() {
                    let f = rows[i][col].clone();
                    for j in 0..rows[i].len() {
                        let delta = &f * &rows[r][j];
                        rows[i][j] = &rows[i][j] - &delta;
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        Ok(pivots)
    }

    pub fn rank(&self) -> Result<usize> {
        let mut rows: Vec<Vec<CycValue>> = (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        Ok(Self::echelon(&mut rows, self.n)?.len())
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.n;
        let mut rows: Vec<Vec<CycValue>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        CycValue::one()
                    } else {
                        CycValue::zero()
                    }
                }));
                row
            })
            .collect();
        let pivots = Self::echelon(&mut rows, n)?;
        if pivots.len() < n {
            return Err(Error::DivisionByZero);
        }
        Mat::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_rank() {
        let z = CycValue::root_of_unity(1, 3);
        let m = Mat::from_rows(vec![
            vec![CycValue::one(), z.clone()],
            vec![z.clone(), CycValue::from_int(2)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert_eq!(m.rank().unwrap(), 2);
        let singular = Mat::from_rows(vec![
            vec![CycValue::one(), z.clone()],
            vec![z.clone(), &z * &z],
        ])
        .unwrap();
        assert_eq!(singular.rank().unwrap(), 1);
        assert!(singular.inverse().is_err());
    }
}
