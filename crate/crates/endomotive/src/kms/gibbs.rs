//! Finite-level KMS checks through the truncated regular representation.
//!
//! The representation space has basis e_a indexed by ideals of norm at
//! most B.  A crossed monomial U*_{s1} a U_{s2} sends e_b to
//! a([s2 b]) e_{s2 b / s1} when the division works and every ideal in
//! sight stays inside the basis, and to zero otherwise.  The Gibbs
//! state is the trace against the diagonal weights N(b)^-beta / Z.  On
//! such compressions the modular flow at time i beta multiplies a
//! monomial by exactly N(s1)^beta N(s2)^-beta, so the KMS condition
//! phi(x y) = phi(y sigma(x)) becomes the twisted trace identity
//! checked here, exactly in rationals at integer beta and through
//! certified intervals otherwise.  Compression is only multiplicative
//! on columns whose intermediate ideals stay under the bound, and the
//! comparison with the crossed-monomial algebra product is restricted
//! to those columns.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bcalgebra::monomial::{coefficient, mul, normalize, shift, shift_star, Monomial};
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

use super::interval::{pow_interval, pow_neg_interval, Interval};
use super::partition::TruncatedGibbsState;

type Cols = Vec<Option<(usize, BigRational)>>;

pub struct TruncatedRep {
    pub bound: u64,
    pub basis: Vec<IntegralIdeal>,
    index: BTreeMap<(BigInt, BigInt, BigInt, BigInt), usize>,
}

impl TruncatedRep {
    pub fn new(field: crate::nfield::NumberField, bound: u64) -> Self {
        let basis = IntegralIdeal::ideals_up_to(field, bound);
        let index = basis.iter().enumerate().map(|(i, a)| (a.key(), i)).collect();
        TruncatedRep { bound, basis, index }
    }

    fn find(&self, a: &IntegralIdeal) -> Option<usize> {
        self.index.get(&a.key()).copied()
    }

    /// The compressed matrix of a monomial, one entry per column.
    pub fn monomial(&self, store: &mut LevelStore, m: &Monomial) -> Result<Cols, Error> {
        let level = store.level(&m.level)?;
        let mut cols = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let up = b.mul(&m.right);
            let Some(_) = self.find(&up) else {
                cols.push(None);
                continue;
            };
            let v = m.coeff[level.classify_ideal(&up)?].clone();
            let Some(down) = up.div_exact(&m.left) else {
                cols.push(None);
                continue;
            };
            let Some(di) = self.find(&down) else {
                cols.push(None);
                continue;
            };
            if v.is_zero() {
                cols.push(None);
            } else {
                cols.push(Some((di, v)));
            }
        }
        Ok(cols)
    }

    /// outer * inner as sparse column maps.
    pub fn compose(outer: &Cols, inner: &Cols) -> Cols {
        inner
            .iter()
            .map(|c| {
                c.as_ref().and_then(|(k, v)| {
                    outer[*k].as_ref().map(|(i, w)| (*i, v * w))
                })
            })
            .collect()
    }

    pub fn weighted_trace(cols: &Cols, weights: &[BigRational]) -> BigRational {
        cols.iter()
            .enumerate()
            .filter_map(|(b, c)| match c {
                Some((r, v)) if *r == b => Some(v * &weights[b]),
                _ => None,
            })
            .sum()
    }

    fn interval_trace(cols: &Cols, weights: &[Interval]) -> Interval {
        let mut acc = Interval::zero();
        for (b, c) in cols.iter().enumerate() {
            if let Some((r, v)) = c {
                if *r == b {
                    acc = acc.add(&weights[b].scale(v));
                }
            }
        }
        acc
    }
}

pub struct GibbsReport {
    pub beta: BigRational,
    pub bound: u64,
    pub pairs: usize,
    pub kms_checks: usize,
    pub faithful_columns: usize,
    pub skipped_columns: usize,
}

/// N(left)^beta N(right)^-beta, the modular scaling factor of a
/// monomial, checked against every matrix entry of its compression.
fn modular_factor_exact(m: &Monomial, beta: u32) -> BigRational {
    BigRational::new(m.left.norm().pow(beta), m.right.norm().pow(beta))
}

fn entry_norms_consistent(rep: &TruncatedRep, m: &Monomial, cols: &Cols) -> bool {
    cols.iter().enumerate().all(|(b, c)| match c {
        Some((r, _)) => {
            rep.basis[*r].norm() * m.left.norm() == rep.basis[b].norm() * m.right.norm()
        }
        None => true,
    })
}

fn random_coeff(
    store: &mut LevelStore,
    rng: &mut ChaCha8Rng,
    level: &IntegralIdeal,
) -> Result<Vec<BigRational>, Error> {
    let size = store.level(level)?.size;
    Ok((0..size)
        .map(|_| {
            BigRational::new(
                BigInt::from(rng.gen_range(-3i64..=3)),
                BigInt::from(rng.gen_range(1i64..=3)),
            )
        })
        .collect())
}

/// Whether the compressed product of x and y is honest at this column:
/// every ideal in the application chain stays inside the basis.
fn chain_safe(
    rep: &TruncatedRep,
    x: &Monomial,
    y: &Monomial,
    z: &Monomial,
    b: &IntegralIdeal,
) -> bool {
    let limit = BigInt::from(rep.bound);
    if b.norm() * z.right.norm() > limit {
        return false;
    }
    let i1 = b.mul(&y.right);
    if i1.norm() > limit {
        return false;
    }
    match i1.div_exact(&y.left) {
        Some(i2) => i2.norm() * x.right.norm() <= limit,
        None => true,
    }
}

pub fn gibbs_kms_check(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    beta: &BigRational,
    bound: u64,
    seed: u64,
) -> Result<GibbsReport, Error> {
    if !beta.is_positive() {
        return Err(Error::Inconsistent("inverse temperature must be positive".into()));
    }
    let field = store.field;
    let rep = TruncatedRep::new(field, bound);
    let exact_beta = if beta.is_integer() {
        Some(beta.numer().to_u32().ok_or_else(|| {
            Error::BoundExceeded("integer beta too large for exact weights".into())
        })?)
    } else {
        None
    };
    let exact_weights = match exact_beta {
        Some(bi) => Some(TruncatedGibbsState::build(field, bi, bound)?.weights),
        None => None,
    };
    let interval_weights = if exact_weights.is_none() {
        let terms: Vec<Interval> = rep
            .basis
            .iter()
            .map(|a| pow_neg_interval(&a.norm(), beta))
            .collect::<Result<_, _>>()?;
        let z = terms.iter().fold(Interval::zero(), |acc, t| acc.add(t));
        let zinv = z.recip_pos()?;
        Some(terms.iter().map(|t| t.mul(&zinv)).collect::<Vec<_>>())
    } else {
        None
    };

    let pool_bound = bound.min(6);
    let pool: Vec<IntegralIdeal> = IntegralIdeal::ideals_up_to(field, pool_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut sample: Vec<Monomial> = Vec::new();
    for s in &pool {
        sample.push(shift(store, f, s)?);
        sample.push(shift_star(store, f, s)?);
    }
    for _ in 0..3 {
        let a = random_coeff(store, &mut rng, f)?;
        sample.push(coefficient(store, f, a)?);
    }
    for _ in 0..3 {
        let left = pool[rng.gen_range(0..pool.len())].clone();
        let right = pool[rng.gen_range(0..pool.len())].clone();
        let coeff = random_coeff(store, &mut rng, f)?;
        sample.push(normalize(store, Monomial { left, right, level: f.clone(), coeff })?);
    }

    let mut pairs = Vec::new();
    for s in &pool {
        let us = shift(store, f, s)?;
        let uss = shift_star(store, f, s)?;
        pairs.push((us, uss));
    }
    for _ in 0..8 {
        let x = sample[rng.gen_range(0..sample.len())].clone();
        let y = sample[rng.gen_range(0..sample.len())].clone();
        pairs.push((x, y));
    }

    let mut kms_checks = 0usize;
    let mut faithful_columns = 0usize;
    let mut skipped_columns = 0usize;
    for (x, y) in &pairs {
        let xc = rep.monomial(store, x)?;
        let yc = rep.monomial(store, y)?;
        if !entry_norms_consistent(&rep, x, &xc) || !entry_norms_consistent(&rep, y, &yc) {
            return Err(Error::Inconsistent(
                "monomial compression entries violate the norm ratio".into(),
            ));
        }
        let xy = TruncatedRep::compose(&xc, &yc);
        let yx = TruncatedRep::compose(&yc, &xc);
        match (&exact_weights, &interval_weights) {
            (Some(w), _) => {
                let lhs = TruncatedRep::weighted_trace(&xy, w);
                let rhs = modular_factor_exact(x, exact_beta.unwrap())
                    * TruncatedRep::weighted_trace(&yx, w);
                if lhs != rhs {
                    return Err(Error::Inconsistent(format!(
                        "KMS identity failed at beta {beta}: {lhs} vs {rhs}"
                    )));
                }
            }
            (None, Some(w)) => {
                let lhs = TruncatedRep::interval_trace(&xy, w);
                let factor = pow_interval(&x.left.norm(), beta)?
                    .mul(&pow_neg_interval(&x.right.norm(), beta)?);
                let rhs = factor.mul(&TruncatedRep::interval_trace(&yx, w));
                if !lhs.overlaps(&rhs) {
                    return Err(Error::Inconsistent(format!(
                        "KMS interval identity failed at beta {beta}"
                    )));
                }
            }
            (None, None) => unreachable!(),
        }
        kms_checks += 1;

        let z = mul(store, x, y)?;
        let zc = rep.monomial(store, &z)?;
        for (bi, b) in rep.basis.iter().enumerate() {
            if !chain_safe(&rep, x, y, &z, b) {
                skipped_columns += 1;
                continue;
            }
            if zc[bi] != xy[bi] {
                return Err(Error::Inconsistent(
                    "compressed product disagrees with the algebra product inside the bound"
                        .into(),
                ));
            }
            faithful_columns += 1;
        }
    }

    Ok(GibbsReport {
        beta: beta.clone(),
        bound,
        pairs: pairs.len(),
        kms_checks,
        faithful_columns,
        skipped_columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::{FieldElement, NumberField};

    fn ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn two_shift_at_beta_two_traces_the_even_ideals() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = ideal(q, 1);
        let rep = TruncatedRep::new(q, 20);
        let w = TruncatedGibbsState::build(q, 2, 20).unwrap().weights;

        let us = shift(&mut store, &f, &ideal(q, 2)).unwrap();
        let uss = shift_star(&mut store, &f, &ideal(q, 2)).unwrap();
        let xc = rep.monomial(&mut store, &us).unwrap();
        let yc = rep.monomial(&mut store, &uss).unwrap();
        let xy = TruncatedRep::compose(&xc, &yc);
        let yx = TruncatedRep::compose(&yc, &xc);

        let lhs = TruncatedRep::weighted_trace(&xy, &w);
        let even_fraction: BigRational = (1..=10)
            .map(|m: i64| &w[(2 * m - 1) as usize])
            .sum();
        assert_eq!(lhs, even_fraction);
        let rhs = rat(1, 4) * TruncatedRep::weighted_trace(&yx, &w);
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn rational_suite_beta_two() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = gibbs_kms_check(&mut store, &ideal(q, 1), &rat(2, 1), 24, 5).unwrap();
        assert!(rep.kms_checks > 0);
        assert!(rep.faithful_columns > 0);
    }

    #[test]
    fn rational_suite_at_a_deeper_conductor() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = gibbs_kms_check(&mut store, &ideal(q, 3), &rat(3, 1), 18, 7).unwrap();
        assert!(rep.kms_checks > 0);
    }

    #[test]
    fn gauss_suite_beta_three() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let rep = gibbs_kms_check(&mut store, &ideal(k, 1), &rat(3, 1), 16, 11).unwrap();
        assert!(rep.kms_checks > 0);
        let half = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        assert!(half.norm() == BigInt::from(2));
    }

    #[test]
    fn class_number_two_suite() {
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k);
        let rep = gibbs_kms_check(&mut store, &ideal(k, 1), &rat(2, 1), 12, 13).unwrap();
        assert!(rep.kms_checks > 0);
    }

    #[test]
    fn fractional_beta_uses_intervals() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = gibbs_kms_check(&mut store, &ideal(q, 1), &rat(3, 2), 12, 17).unwrap();
        assert!(rep.kms_checks > 0);
    }
}
