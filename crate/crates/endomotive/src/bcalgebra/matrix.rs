//! Dense exact matrices over the rationals, with a mod-p shadow rank
//! for cross-checking the exact linear algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![vec![BigRational::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&v| BigRational::from(BigInt::from(v))).collect())
            .collect();
        RatMat { rows: r, cols: c, data }
    }

    pub fn diag(v: &[BigRational]) -> Self {
        let mut m = RatMat::zeros(v.len(), v.len());
        for (i, x) in v.iter().enumerate() {
            m.data[i][i] = x.clone();
        }
        m
    }

    pub fn mul(&self, other: &RatMat) -> Result<RatMat, Error> {
        if self.cols != other.rows {
            return Err(Error::Inconsistent(format!(
                "matrix shapes {}x{} and {}x{} do not compose",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other.data[k][j].is_zero() {
                        continue;
                    }
                    let add = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += add;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>, Error> {
        if v.len() != self.cols {
            return Err(Error::Inconsistent("vector length does not match matrix".into()));
        }
        let mut out = vec![BigRational::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.data[i][j].is_zero() && !v[j].is_zero() {
                    out[i] += &self.data[i][j] * &v[j];
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> RatMat {
        let mut out = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn is_zero_one(&self) -> bool {
        self.data
            .iter()
            .flatten()
            .all(|v| v.is_zero() || v.is_one())
    }

    /// Rank by rational Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < self.rows && col < self.cols {
            let pivot = (rank..self.rows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][col].recip();
            for j in col..self.cols {
                let v = &m[rank][j] * &inv;
                m[rank][j] = v;
            }
            for r in 0..self.rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for j in col..self.cols {
                        let sub = &factor * &m[rank][j];
                        m[r][j] -= sub;
                    }
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Basis of the right kernel, from the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.data.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for col in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][col].recip();
            for j in col..self.cols {
                let v = &m[r][j] * &inv;
                m[r][j] = v;
            }
            for i in 0..self.rows {
                if i != r && !m[i][col].is_zero() {
                    let factor = m[i][col].clone();
                    for j in col..self.cols {
                        let sub = &factor * &m[r][j];
                        m[i][j] -= sub;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[ri][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Rank of the image mod p; fails if any denominator vanishes mod p.
    pub fn rank_mod(&self, p: u64) -> Result<usize, Error> {
        let pb = BigInt::from(p);
        let mut m = vec![vec![0u64; self.cols]; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &self.data[i][j];
                let den = (v.denom() % &pb + &pb) % &pb;
                let den = den.to_u64().unwrap();
                if den == 0 {
                    return Err(Error::Inconsistent("denominator vanishes mod p".into()));
                }
                let num = ((v.numer() % &pb + &pb) % &pb).to_u64().unwrap();
                m[i][j] = mulmod(num, invmod(den, p), p);
            }
        }
        Ok(rank_mod_p(m, p))
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < rows && col < cols {
        let pivot = (rank..rows).find(|&r| m[r][col] != 0);
        let Some(piv) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, piv);
        let inv = invmod(m[rank][col], p);
        for j in col..cols {
            m[rank][j] = mulmod(m[rank][j], inv, p);
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for j in col..cols {
                    let sub = mulmod(factor, m[rank][j], p);
                    m[r][j] = (m[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// The all-ones vector.
pub fn ones(n: usize) -> Vec<BigRational> {
    vec![BigRational::one(); n]
}

/// The i-th standard basis vector.
pub fn basis_vector(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_vectors_are_killed_and_count_the_corank() {
        let m = RatMat::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).unwrap().iter().all(|e| e.is_zero()));
        }
        assert_eq!(m.rank() + ker.len(), m.cols);
        assert!(RatMat::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn small_products_and_rank() {
        let a = RatMat::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        let b = RatMat::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, RatMat::from_int_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.rank(), 2);
        let singular = RatMat::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.rank(), 1);
        assert_eq!(singular.rank_mod(1_000_003).unwrap(), 1);
    }

    #[test]
    fn identity_behaves() {
        let a = RatMat::from_int_rows(&[vec![5, -1, 2], vec![0, 3, 7]]);
        assert_eq!(a.mul(&RatMat::identity(3)).unwrap(), a);
        assert_eq!(RatMat::identity(2).mul(&a).unwrap(), a);
        let v = a.apply(&basis_vector(3, 1)).unwrap();
        assert_eq!(v[0], BigRational::from(BigInt::from(-1)));
        assert_eq!(v[1], BigRational::from(BigInt::from(3)));
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 3)) {
            let m = RatMat::from_int_rows(&rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn mod_p_rank_agrees_on_small_integer_matrices(rows in prop::collection::vec(prop::collection::vec(0i64..2, 4), 4)) {
            let m = RatMat::from_int_rows(&rows);
            prop_assert_eq!(m.rank(), m.rank_mod(1_000_003).unwrap() as usize);
        }
    }
}
