//! The level operators sigma, rho and pi, and their relation suite.
//!
//! Functions on the levels are pulled back along the multiplication
//! embeddings (sigma), extended by zero against them (rho), and pulled
//! back along the projections (xi).  Every one of these operators has a
//! 0/1 matrix with at most one nonzero entry per row, so an operator is
//! stored as a partial map on basis indices; the dense rational matrix
//! is materialized on demand and the identities hold as literal matrix
//! equalities.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drmonoid::maps::{mult_embed, project};
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

use super::matrix::{ones, RatMat};

/// A function-space operator with at most one unit entry per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpMat {
    pub rows: usize,
    pub cols: usize,
    pub row: Vec<Option<usize>>,
}

impl OpMat {
    pub fn identity(n: usize) -> Self {
        OpMat { rows: n, cols: n, row: (0..n).map(Some).collect() }
    }

    /// Matrix product self * inner.
    pub fn compose(&self, inner: &OpMat) -> Result<OpMat, Error> {
        if self.cols != inner.rows {
            return Err(Error::Inconsistent(format!(
                "operator shapes {}x{} and {}x{} do not compose",
                self.rows, self.cols, inner.rows, inner.cols
            )));
        }
        let row = self
            .row
            .iter()
            .map(|r| r.and_then(|j| inner.row[j]))
            .collect();
        Ok(OpMat { rows: self.rows, cols: inner.cols, row })
    }

    pub fn to_mat(&self) -> RatMat {
        let mut m = RatMat::zeros(self.rows, self.cols);
        for (i, r) in self.row.iter().enumerate() {
            if let Some(j) = r {
                m.data[i][*j] = BigRational::one();
            }
        }
        m
    }

    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>, Error> {
        if v.len() != self.cols {
            return Err(Error::Inconsistent("vector length does not match operator".into()));
        }
        Ok(self
            .row
            .iter()
            .map(|r| r.map_or_else(BigRational::zero, |j| v[j].clone()))
            .collect())
    }
}

/// sigma_d at base f: Fun(DR_{fd}) -> Fun(DR_f), precomposition with the
/// multiplication embedding.
pub fn sigma_op(store: &mut LevelStore, f: &IntegralIdeal, d: &IntegralIdeal) -> Result<OpMat, Error> {
    let em = mult_embed(store, f, d)?;
    Ok(OpMat {
        rows: em.base.size,
        cols: em.target.size,
        row: em.map.iter().map(|&v| Some(v)).collect(),
    })
}

/// rho_d at base f: Fun(DR_f) -> Fun(DR_{fd}), extension by zero off the
/// image of the embedding.
pub fn rho_op(store: &mut LevelStore, f: &IntegralIdeal, d: &IntegralIdeal) -> Result<OpMat, Error> {
    let em = mult_embed(store, f, d)?;
    let mut row = vec![None; em.target.size];
    for (x, &v) in em.map.iter().enumerate() {
        row[v] = Some(x);
    }
    Ok(OpMat { rows: em.target.size, cols: em.base.size, row })
}

/// xi at a pair f | f': Fun(DR_f) -> Fun(DR_{f'}), precomposition with
/// the projection.
pub fn xi_op(store: &mut LevelStore, f: &IntegralIdeal, fprime: &IntegralIdeal) -> Result<OpMat, Error> {
    let pr = project(store, fprime, f)?;
    Ok(OpMat {
        rows: pr.fine.size,
        cols: pr.coarse.size,
        row: pr.map.iter().map(|&v| Some(v)).collect(),
    })
}

/// The projection pi_d at base f, as the indicator vector of the image
/// of the embedding inside DR_{fd}.
pub fn pi_vector(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    d: &IntegralIdeal,
) -> Result<Vec<BigRational>, Error> {
    let em = mult_embed(store, f, d)?;
    Ok(em
        .image_indicator()
        .into_iter()
        .map(|b| if b { BigRational::one() } else { BigRational::zero() })
        .collect())
}

/// The six relations, checked as exact operator identities with the
/// appropriate level transitions.  Any failure is fatal.
pub fn verify_relation_suite(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    d: &IntegralIdeal,
    e: &IntegralIdeal,
) -> Result<(), Error> {
    let fail = |name: &str| Error::Inconsistent(format!("relation {name} failed"));
    // rho_d(1) = pi_d
    let rho_d = rho_op(store, f, d)?;
    let pi_d = pi_vector(store, f, d)?;
    if rho_d.apply(&ones(rho_d.cols))? != pi_d {
        return Err(fail("rho(1) = pi"));
    }
    // pi_d pi_e = pi_lcm at the common level f * lcm(d, e)
    let l = d.intersect(e);
    let common = f.mul(&l);
    let lift_d = xi_op(store, &f.mul(d), &common)?.apply(&pi_d)?;
    let pi_e = pi_vector(store, f, e)?;
    let lift_e = xi_op(store, &f.mul(e), &common)?.apply(&pi_e)?;
    let pi_l = pi_vector(store, f, &l)?;
    let prod: Vec<BigRational> = lift_d.iter().zip(&lift_e).map(|(a, b)| a * b).collect();
    if prod != pi_l {
        return Err(fail("pi pi = pi(lcm)"));
    }
    // sigma_d sigma_e = sigma_{de}
    let de = d.mul(e);
    let s_outer = sigma_op(store, f, d)?;
    let s_inner = sigma_op(store, &f.mul(d), e)?;
    if s_outer.compose(&s_inner)? != sigma_op(store, f, &de)? {
        return Err(fail("sigma sigma = sigma(de)"));
    }
    // rho_d rho_e = rho_{de}
    let r_inner = rho_op(store, f, e)?;
    let r_outer = rho_op(store, &f.mul(e), d)?;
    if r_outer.compose(&r_inner)? != rho_op(store, f, &de)? {
        return Err(fail("rho rho = rho(de)"));
    }
    // rho_d sigma_d = multiplication by pi_d
    let sigma_d = sigma_op(store, f, d)?;
    let rs = rho_d.compose(&sigma_d)?;
    let n = rs.rows;
    let as_mult: Vec<Option<usize>> = (0..n)
        .map(|y| if pi_d[y].is_one() { Some(y) } else { None })
        .collect();
    if rs.row != as_mult {
        return Err(fail("rho sigma = mult by pi"));
    }
    // sigma_d rho_d = identity
    if sigma_d.compose(&rho_d)? != OpMat::identity(sigma_d.rows) {
        return Err(fail("sigma rho = 1"));
    }
    Ok(())
}

/// The transition compatibility xi_{f,f'} sigma_d = sigma_d xi_{fd,f'd}.
pub fn transition_compat(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    fprime: &IntegralIdeal,
    d: &IntegralIdeal,
) -> Result<(), Error> {
    if !f.divides(fprime) {
        return Err(Error::BadIdeal("transition needs f dividing f'".into()));
    }
    let lhs = xi_op(store, f, fprime)?.compose(&sigma_op(store, f, d)?)?;
    let rhs = sigma_op(store, fprime, d)?.compose(&xi_op(store, &f.mul(d), &fprime.mul(d))?)?;
    if lhs != rhs {
        return Err(Error::Inconsistent("transition square does not commute".into()));
    }
    Ok(())
}

/// Random composable words in sigma, rho and xi, evaluated both as
/// exact rational matrix products and as composed partial maps; the two
/// routes must agree entry for entry.
pub fn random_word_functoriality(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    seed: u64,
    trials: usize,
) -> Result<(), Error> {
    let field = store.field;
    let pool: Vec<IntegralIdeal> = IntegralIdeal::ideals_up_to(field, 3)
        .into_iter()
        .filter(|i| !i.is_one())
        .collect();
    let cap = 64u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut level = f.clone();
        let mut pm = OpMat::identity(store.level(&level)?.size);
        let mut mat = RatMat::identity(pm.rows);
        for _ in 0..4 {
            let step = rng.gen_range(0..3);
            let next = match step {
                0 => {
                    // sigma: descend along a divisor of the current level.
                    let divs = crate::classgroups::divisors(&level);
                    let d = divs[rng.gen_range(0..divs.len())].clone();
                    let base = level.div_exact(&d).expect("divisor divides");
                    let op = sigma_op(store, &base, &d)?;
                    level = base;
                    op
                }
                1 => {
                    let d = pool[rng.gen_range(0..pool.len())].clone();
                    if level.mul(&d).norm() > cap.into() {
                        continue;
                    }
                    let op = rho_op(store, &level, &d)?;
                    level = level.mul(&d);
                    op
                }
                _ => {
                    let m = pool[rng.gen_range(0..pool.len())].clone();
                    if level.mul(&m).norm() > cap.into() {
                        continue;
                    }
                    let fine = level.mul(&m);
                    let op = xi_op(store, &level, &fine)?;
                    level = fine;
                    op
                }
            };
            mat = next.to_mat().mul(&mat)?;
            pm = next.compose(&pm)?;
            if mat != pm.to_mat() {
                return Err(Error::Inconsistent(
                    "matrix route and point route disagree on a random word".into(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::{FieldElement, NumberField};
    use num_bigint::BigInt;

    fn int_ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn sigma_rational_halving() {
        // Fun(Z/6) -> Fun(Z/3), h maps to h(2x).
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let s = sigma_op(&mut store, &int_ideal(q, 3), &int_ideal(q, 2)).unwrap();
        assert_eq!(s.rows, 3);
        assert_eq!(s.cols, 6);
        let m = s.to_mat();
        assert!(m.is_zero_one());
        let l3 = store.level(&int_ideal(q, 3)).unwrap();
        let l6 = store.level(&int_ideal(q, 6)).unwrap();
        for a in 1i64..=3 {
            let x = l3.classify_ideal(&int_ideal(q, a)).unwrap();
            let y = l6.classify_ideal(&int_ideal(q, 2 * a)).unwrap();
            assert_eq!(s.row[x], Some(y));
        }
    }

    #[test]
    fn sigma_and_rho_with_trivial_multiplier_are_identity() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let f = int_ideal(k, 2);
        let one = IntegralIdeal::one(k);
        assert_eq!(sigma_op(&mut store, &f, &one).unwrap(), OpMat::identity(3));
        assert_eq!(rho_op(&mut store, &f, &one).unwrap(), OpMat::identity(3));
    }

    #[test]
    fn rho_of_one_is_the_image_indicator() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 3);
        let d = int_ideal(q, 2);
        let r = rho_op(&mut store, &f, &d).unwrap();
        let v = r.apply(&ones(3)).unwrap();
        assert_eq!(v, pi_vector(&mut store, &f, &d).unwrap());
        // On Z/6 the image of doubling is the even residues.
        let l6 = store.level(&int_ideal(q, 6)).unwrap();
        for a in 1i64..=6 {
            let c = l6.classify_ideal(&int_ideal(q, a)).unwrap();
            assert_eq!(v[c].is_one(), a % 2 == 0, "{a}");
        }
    }

    #[test]
    fn relation_suite_rational() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        verify_relation_suite(&mut store, &int_ideal(q, 1), &int_ideal(q, 2), &int_ideal(q, 3))
            .unwrap();
        verify_relation_suite(&mut store, &int_ideal(q, 1), &int_ideal(q, 1), &int_ideal(q, 1))
            .unwrap();
        verify_relation_suite(&mut store, &int_ideal(q, 4), &int_ideal(q, 2), &int_ideal(q, 2))
            .unwrap();
    }

    #[test]
    fn relation_suite_gauss_ramified() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let pi = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        verify_relation_suite(&mut store, &IntegralIdeal::one(k), &pi, &pi).unwrap();
        // rho squared along (1+i) is rho along (2).
        let r1 = rho_op(&mut store, &IntegralIdeal::one(k), &pi).unwrap();
        let r2 = rho_op(&mut store, &pi, &pi).unwrap();
        let direct = rho_op(&mut store, &IntegralIdeal::one(k), &int_ideal(k, 2)).unwrap();
        assert_eq!(r2.compose(&r1).unwrap(), direct);
    }

    #[test]
    fn transition_squares_commute() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        transition_compat(&mut store, &int_ideal(q, 2), &int_ideal(q, 4), &int_ideal(q, 3))
            .unwrap();
        transition_compat(&mut store, &int_ideal(q, 2), &int_ideal(q, 2), &int_ideal(q, 5))
            .unwrap();
        let w = NumberField::quadratic(-3).unwrap();
        let mut ws = LevelStore::new(w);
        transition_compat(&mut ws, &IntegralIdeal::one(w), &int_ideal(w, 2), &int_ideal(w, 2))
            .unwrap();
    }

    #[test]
    fn random_words_compose_both_ways() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        random_word_functoriality(&mut store, &int_ideal(q, 2), 11, 12).unwrap();
        let k = NumberField::quadratic(-1).unwrap();
        let mut ks = LevelStore::new(k);
        random_word_functoriality(&mut ks, &IntegralIdeal::one(k), 5, 8).unwrap();
    }
}
