//! Residue totients, class groups and ray class groups.

pub mod abelian;
pub mod rayclass;

use num_bigint::BigInt;
use num_traits::One;

pub use abelian::FiniteAbelianGroup;
pub use rayclass::{
    minkowski_bound, same_ray_class, ClassGroup, EnumeratedRayClasses, RayClassGroup,
};

use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::NumberField;

/// Size of (O/f)^x by the multiplicative formula over prime factors.
pub fn euler_phi(ideal: &IntegralIdeal) -> BigInt {
    let mut phi = BigInt::one();
    for (p, e) in ideal.factor() {
        let np = p.norm();
        let mut term = &np - 1i32;
        for _ in 1..e {
            term *= &np;
        }
        phi *= term;
    }
    phi
}

/// All integral divisors of an ideal, sorted by (norm, HNF key).
pub fn divisors(ideal: &IntegralIdeal) -> Vec<IntegralIdeal> {
    let field = ideal.field;
    let fac = ideal.factor();
    let mut out = vec![IntegralIdeal::one(field)];
    for (p, e) in &fac {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*e {
                acc = acc.mul(p);
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out.sort_by_key(|d| d.key());
    out
}

pub fn field_of(ideal: &IntegralIdeal) -> NumberField {
    ideal.field
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::residue::ResidueRing;
    use crate::nfield::FieldElement;
    use num_traits::ToPrimitive;

    #[test]
    fn phi_matches_unit_count() {
        let q = NumberField::rational();
        for n in [2u32, 6, 9, 12, 16, 30] {
            let f = IntegralIdeal::from_integer(q, &BigInt::from(n)).unwrap();
            let ring = ResidueRing::new(q, f.clone());
            assert_eq!(
                euler_phi(&f).to_usize().unwrap(),
                ring.units().len(),
                "n = {n}"
            );
        }
        for m in [-1i64, -5, 2, 5] {
            let k = NumberField::quadratic(m).unwrap();
            for f in IntegralIdeal::ideals_up_to(k, 20) {
                let ring = ResidueRing::new(k, f.clone());
                assert_eq!(
                    euler_phi(&f).to_usize().unwrap(),
                    ring.units().len(),
                    "m = {m}, f = {f}"
                );
            }
        }
    }

    #[test]
    fn totient_identity_over_divisors() {
        // sum over d | f of phi(d) equals N(f).
        for m in [-1i64, 2, -5] {
            let k = NumberField::quadratic(m).unwrap();
            for f in IntegralIdeal::ideals_up_to(k, 24) {
                let total: BigInt = divisors(&f).iter().map(euler_phi).sum();
                assert_eq!(total, f.norm(), "m = {m}, f = {f}");
            }
        }
    }

    #[test]
    fn divisor_lists() {
        let k = NumberField::quadratic(-1).unwrap();
        let two = IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap();
        // (2) = (1+i)^2: divisors (1), (1+i), (2).
        let ds = divisors(&two);
        assert_eq!(ds.len(), 3);
        assert!(ds[0].is_one());
        assert_eq!(ds[1], IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap());
        assert_eq!(ds[2], two);
        let q = NumberField::rational();
        let twelve = IntegralIdeal::from_integer(q, &BigInt::from(12)).unwrap();
        assert_eq!(divisors(&twelve).len(), 6);
    }
}
