//! Equivariant functions on a level, valued in the rational group algebra
//! of the invertible classes.
//!
//! A value is a rational function on `C_f`; the group acts by translation
//! `(nu . a)(c) = a(nu^{-1} c)` and values multiply pointwise. The
//! functions `h` on `DR_f` with `h(nu x) = nu . h(x)` form a finite
//! dimensional rational space. Its basis is computed here by exact linear
//! algebra on the full constraint system, then measured against the
//! orbit-by-orbit prediction.

use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bcalgebra::matrix::RatMat;
use crate::bcalgebra::orbits::{galois_orbit_structure, OrbitStructure};
use crate::drmonoid::{DrLevel, LevelStore};
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

/// Translate a value by a unit class.
pub fn translate(level: &DrLevel, nu: usize, a: &[BigRational]) -> Vec<BigRational> {
    let g = &level.groups[0].group;
    (0..a.len()).map(|c| a[g.mul(g.inv(nu), c)].clone()).collect()
}

/// Pointwise product of two values.
pub fn pointwise(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

pub struct EquivariantModule {
    pub level: Rc<DrLevel>,
    pub orbits: OrbitStructure,
    /// Basis functions, stored as `basis[k][x][c]`.
    pub basis: Vec<Vec<Vec<BigRational>>>,
}

/// Solve the equivariance constraints over the rationals. The kernel
/// dimension must match the orbit-stabilizer count or the level data is
/// broken somewhere.
pub fn equivariant_basis(
    store: &mut LevelStore,
    f: &IntegralIdeal,
) -> Result<EquivariantModule, Error> {
    let orbits = galois_orbit_structure(store, f)?;
    let level = orbits.level.clone();
    let n = level.size;
    let nc = level.groups[0].order();
    let g = &level.groups[0].group;

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for nu in level.unit_indices() {
        for x in 0..n {
            let nx = level.mul(x, nu)?;
            for c in 0..nc {
                let mut row = vec![BigRational::zero(); n * nc];
                row[nx * nc + c] += BigRational::one();
                row[x * nc + g.mul(g.inv(nu), c)] -= BigRational::one();
                if row.iter().any(|e| !e.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        RatMat::zeros(1, n * nc)
    } else {
        RatMat { rows: rows.len(), cols: n * nc, data: rows }
    };
    let kernel = system.kernel_basis();

    let predicted: usize = orbits.stabilizers.iter().map(|s| nc / s.len()).sum();
    if kernel.len() != predicted {
        return Err(Error::Inconsistent(format!(
            "equivariant space has dimension {} against the predicted {}",
            kernel.len(),
            predicted
        )));
    }

    let basis = kernel
        .into_iter()
        .map(|v| (0..n).map(|x| v[x * nc..(x + 1) * nc].to_vec()).collect())
        .collect();
    Ok(EquivariantModule { level, orbits, basis })
}

impl EquivariantModule {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether some basis function takes different values at every pair of
    /// distinct points.
    pub fn separates_points(&self) -> bool {
        let n = self.level.size;
        for x in 0..n {
            for y in x + 1..n {
                if self.basis.iter().all(|h| h[x] == h[y]) {
                    return false;
                }
            }
        }
        true
    }

    /// Rank of the joint evaluation at one point, as vectors in the value
    /// algebra.
    pub fn evaluation_rank_at(&self, x: usize) -> usize {
        let nc = self.level.groups[0].order();
        let data: Vec<Vec<BigRational>> = self.basis.iter().map(|h| h[x].clone()).collect();
        RatMat { rows: data.len(), cols: nc, data }.rank()
    }

    /// Rank of the span of all products (indicator on `C_f`) times
    /// (equivariant function), inside the full function space on
    /// `DR_f x C_f`. Returned twice: exact and reduced mod a large prime.
    pub fn density_rank(&self, p: u64) -> Result<(usize, usize), Error> {
        let n = self.level.size;
        let nc = self.level.groups[0].order();
        let mut data = Vec::with_capacity(self.basis.len() * nc);
        for h in &self.basis {
            for c0 in 0..nc {
                let mut v = vec![BigRational::zero(); n * nc];
                for x in 0..n {
                    v[x * nc + c0] = h[x][c0].clone();
                }
                data.push(v);
            }
        }
        let mat = RatMat { rows: data.len(), cols: n * nc, data };
        Ok((mat.rank(), mat.rank_mod(p)?))
    }

    /// Evaluation at invertible points intertwines the translation action
    /// with monoid multiplication.
    pub fn unit_evaluations_intertwine(&self) -> Result<(), Error> {
        for h in &self.basis {
            for omega in self.level.unit_indices() {
                for nu in self.level.unit_indices() {
                    let moved = self.level.mul(omega, nu)?;
                    if h[moved] != translate(&self.level, nu, &h[omega]) {
                        return Err(Error::Inconsistent(
                            "unit evaluation does not intertwine the action".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pointwise products of basis functions stay inside the span.
    pub fn closed_under_product(&self) -> bool {
        let n = self.level.size;
        let nc = self.level.groups[0].order();
        let flatten = |h: &Vec<Vec<BigRational>>| -> Vec<BigRational> {
            h.iter().flat_map(|a| a.iter().cloned()).collect()
        };
        let span: Vec<Vec<BigRational>> = self.basis.iter().map(flatten).collect();
        let base_rank = RatMat { rows: span.len(), cols: n * nc, data: span.clone() }.rank();
        for i in 0..self.basis.len() {
            for j in i..self.basis.len() {
                let prod: Vec<Vec<BigRational>> = (0..n)
                    .map(|x| pointwise(&self.basis[i][x], &self.basis[j][x]))
                    .collect();
                let mut data = span.clone();
                data.push(flatten(&prod));
                let r = RatMat { rows: data.len(), cols: n * nc, data }.rank();
                if r != base_rank {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::NumberField;
    use num_bigint::BigInt;

    fn ideal(field: &NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field.clone(), &BigInt::from(n)).unwrap()
    }

    #[test]
    fn rational_six_dimension_separation_density() {
        let k = NumberField::rational();
        let mut store = LevelStore::new(k.clone());
        let em = equivariant_basis(&mut store, &ideal(&k, 6)).unwrap();
        assert_eq!(em.dimension(), 6);
        assert!(em.separates_points());
        for omega in em.level.unit_indices() {
            assert_eq!(em.evaluation_rank_at(omega), 2);
        }
        let three = em.level.classify_ideal(&ideal(&k, 3)).unwrap();
        assert_eq!(em.evaluation_rank_at(three), 1);
        assert_eq!(em.density_rank(1_000_003).unwrap(), (12, 12));
        em.unit_evaluations_intertwine().unwrap();
        assert!(em.closed_under_product());
    }

    #[test]
    fn gauss_five_is_a_full_torsor_at_units() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k.clone());
        let em = equivariant_basis(&mut store, &ideal(&k, 5)).unwrap();
        assert_eq!(em.dimension(), 7);
        assert!(em.separates_points());
        for omega in em.level.unit_indices() {
            assert_eq!(em.evaluation_rank_at(omega), 4);
        }
        assert_eq!(em.density_rank(1_000_003).unwrap(), (28, 28));
        em.unit_evaluations_intertwine().unwrap();
    }

    #[test]
    fn class_number_two_at_trivial_conductor() {
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k.clone());
        let em = equivariant_basis(&mut store, &ideal(&k, 1)).unwrap();
        assert_eq!(em.dimension(), 2);
        assert!(em.separates_points());
        assert_eq!(em.density_rank(1_000_003).unwrap(), (4, 4));
        assert!(em.closed_under_product());
    }
}
