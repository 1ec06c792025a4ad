//! The zero-temperature simplex at a finite level.
//!
//! Ground states of the finite system are the point evaluations at the
//! invertible elements of DR_f.  The strict ray class group translates
//! them freely and transitively, and every such state kills a monomial
//! carrying a nontrivial shift: phi_omega(a U_s) = delta_{s,(1)} a(omega).
//! Restricted to the equivariant module the evaluations satisfy the
//! intertwining law checked there, which ties the simplex back to the
//! arithmetic model of the function algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bcalgebra::equivariant::equivariant_basis;
use crate::bcalgebra::monomial::{coefficient, mul, shift, shift_star, Monomial};
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

pub struct SimplexReport {
    pub states: usize,
    pub group_invariants: Vec<u64>,
    pub vanishing_checks: usize,
}

/// The value of the state at the unit omega on a normalized monomial
/// whose coefficient lives at the level itself.
fn state_value(f: &IntegralIdeal, m: &Monomial, omega: usize) -> Result<BigRational, Error> {
    if !m.left.norm().is_one() || !m.right.norm().is_one() {
        return Ok(BigRational::zero());
    }
    if m.level != *f {
        return Err(Error::Inconsistent(
            "point evaluation needs a coefficient at the state's level".into(),
        ));
    }
    Ok(m.coeff[omega].clone())
}

pub fn kms_infinity_simplex(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    seed: u64,
) -> Result<SimplexReport, Error> {
    let field = store.field;
    let level = store.level(f)?;
    let units: Vec<usize> = level.unit_indices().collect();

    for &a in &units {
        for &b in &units {
            let mut hits = 0usize;
            for &nu in &units {
                if level.mul(nu, a)? == b {
                    hits += 1;
                }
            }
            if hits != 1 {
                return Err(Error::Inconsistent(
                    "class group action on ground states is not free and transitive".into(),
                ));
            }
        }
    }
    let group_invariants = store.ray_group(f)?.group.invariants();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = store.level(f)?.size;
    let random_fn = |rng: &mut ChaCha8Rng| -> Vec<BigRational> {
        (0..size)
            .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-4i64..=4))))
            .collect()
    };

    let pool = IntegralIdeal::ideals_up_to(field, 6);
    let mut vanishing_checks = 0usize;
    for s in &pool {
        let a = coefficient(store, f, random_fn(&mut rng))?;
        let us = shift(store, f, s)?;
        let uss = shift_star(store, f, s)?;
        let right = mul(store, &a, &us)?;
        let left = mul(store, &uss, &a)?;
        for &omega in &units {
            if s.norm().is_one() {
                if state_value(f, &right, omega)? != a.coeff[omega] {
                    return Err(Error::Inconsistent(
                        "state at the trivial shift does not evaluate the coefficient".into(),
                    ));
                }
            } else {
                if !state_value(f, &right, omega)?.is_zero()
                    || !state_value(f, &left, omega)?.is_zero()
                {
                    return Err(Error::Inconsistent(
                        "ground state fails to kill a nontrivial shift".into(),
                    ));
                }
            }
            vanishing_checks += 1;
        }
    }

    // Distinct units give distinct states: the indicator of omega tells
    // them apart.
    for &omega in &units {
        let mut ind = vec![BigRational::zero(); size];
        ind[omega] = BigRational::one();
        let m = coefficient(store, f, ind)?;
        for &other in &units {
            let v = state_value(f, &m, other)?;
            if (other == omega) != v.is_one() {
                return Err(Error::Inconsistent("point evaluations do not separate units".into()));
            }
        }
    }

    // Cross-check against the equivariant module: evaluation at units
    // intertwines the class group action with translation.
    equivariant_basis(store, f)?.unit_evaluations_intertwine()?;

    Ok(SimplexReport { states: units.len(), group_invariants, vanishing_checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::NumberField;

    fn ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn rational_five_has_a_regular_four_state_simplex() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = kms_infinity_simplex(&mut store, &ideal(q, 5), 1).unwrap();
        assert_eq!(rep.states, 4);
        assert_eq!(rep.group_invariants, vec![4]);
        assert!(rep.vanishing_checks > 0);
    }

    #[test]
    fn trivial_conductor_has_one_state() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = kms_infinity_simplex(&mut store, &ideal(q, 1), 2).unwrap();
        assert_eq!(rep.states, 1);
        assert!(rep.group_invariants.is_empty());
    }

    #[test]
    fn narrow_class_group_of_real_quadratic_counts_states() {
        let k = NumberField::quadratic(3).unwrap();
        let mut store = LevelStore::new(k);
        let rep = kms_infinity_simplex(&mut store, &ideal(k, 1), 3).unwrap();
        assert_eq!(rep.states, 2);
        assert_eq!(rep.group_invariants, vec![2]);
    }

    #[test]
    fn gauss_five_simplex() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let rep = kms_infinity_simplex(&mut store, &ideal(k, 5), 4).unwrap();
        assert_eq!(rep.states, 4);
    }
}
