//! Finite quotient rings O/f with canonical coset representatives.
//!
//! A residue is stored by its unique representative x + y*w with
//! 0 <= x < a and 0 <= y < d in the HNF basis of the modulus.  For the
//! rationals this is the usual representative 0 <= x < n.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ideal::{IdealRepr, IntegralIdeal};
use super::{FieldElement, NumberField};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    pub x: BigInt,
    pub y: BigInt,
}

impl Residue {
    pub fn to_element(&self) -> FieldElement {
        FieldElement::from_bigint(self.x.clone(), self.y.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    pub field: NumberField,
    pub modulus: IntegralIdeal,
}

impl ResidueRing {
    pub fn new(field: NumberField, modulus: IntegralIdeal) -> Self {
        ResidueRing { field, modulus }
    }

    fn abd(&self) -> (BigInt, BigInt, BigInt) {
        match &self.modulus.repr {
            IdealRepr::Rational { n } => (n.clone(), BigInt::zero(), BigInt::one()),
            IdealRepr::Quadratic { a, c, d } => (a.clone(), c.clone(), d.clone()),
        }
    }

    pub fn size(&self) -> BigInt {
        self.modulus.norm()
    }

    /// Canonical representative of an integral element.
    pub fn reduce(&self, e: &FieldElement) -> Result<Residue, Error> {
        let (x, y) = e
            .int_coords()
            .ok_or_else(|| Error::BadElement("cannot reduce a non-integral element".into()))?;
        let (a, c, d) = self.abd();
        let ry = y.mod_floor(&d);
        let q = (&y - &ry).div_floor(&d);
        let x1 = x - &q * &c;
        let rx = x1.mod_floor(&a);
        Ok(Residue { x: rx, y: ry })
    }

    pub fn zero(&self) -> Residue {
        Residue { x: BigInt::zero(), y: BigInt::zero() }
    }

    pub fn one(&self) -> Residue {
        self.reduce(&FieldElement::one()).unwrap()
    }

    pub fn add(&self, r: &Residue, s: &Residue) -> Residue {
        let e = self.field.add(&r.to_element(), &s.to_element());
        self.reduce(&e).unwrap()
    }

    pub fn neg(&self, r: &Residue) -> Residue {
        let e = self.field.neg(&r.to_element());
        self.reduce(&e).unwrap()
    }

    pub fn mul(&self, r: &Residue, s: &Residue) -> Residue {
        let e = self.field.mul(&r.to_element(), &s.to_element());
        self.reduce(&e).unwrap()
    }

    pub fn pow(&self, r: &Residue, k: u64) -> Residue {
        let mut acc = self.one();
        let mut base = r.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// All residues, in lexicographic (y, x) order.
    pub fn elements(&self) -> Vec<Residue> {
        let (a, _, d) = self.abd();
        let an = a.to_u64().expect("residue ring too large to enumerate");
        let dn = d.to_u64().expect("residue ring too large to enumerate");
        let mut out = Vec::with_capacity((an * dn) as usize);
        for y in 0..dn {
            for x in 0..an {
                out.push(Residue { x: BigInt::from(x), y: BigInt::from(y) });
            }
        }
        out
    }

    /// A residue is a unit when its lift is coprime to the modulus.
    pub fn is_unit(&self, r: &Residue) -> bool {
        if self.modulus.is_one() {
            return true;
        }
        let e = r.to_element();
        if e.is_zero() {
            return false;
        }
        let ideal = IntegralIdeal::from_element(self.field, &e).unwrap();
        ideal.is_coprime(&self.modulus)
    }

    pub fn units(&self) -> Vec<Residue> {
        self.elements().into_iter().filter(|r| self.is_unit(r)).collect()
    }

    /// Multiplicative order of a unit residue.
    pub fn unit_order(&self, r: &Residue) -> Result<u64, Error> {
        if !self.is_unit(r) {
            return Err(Error::BadElement("order of a non-unit".into()));
        }
        let one = self.one();
        let cap = self.size().to_u64().unwrap_or(u64::MAX);
        let mut acc = r.clone();
        for k in 1..=cap {
            if acc == one {
                return Ok(k);
            }
            acc = self.mul(&acc, r);
        }
        Err(Error::Inconsistent("unit order exceeded ring size".into()))
    }

    pub fn inverse(&self, r: &Residue) -> Result<Residue, Error> {
        let ord = self.unit_order(r)?;
        Ok(self.pow(r, ord - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rational_ring() {
        let q = NumberField::rational();
        let m = IntegralIdeal::from_integer(q, &BigInt::from(12)).unwrap();
        let ring = ResidueRing::new(q, m);
        assert_eq!(ring.elements().len(), 12);
        assert_eq!(ring.units().len(), 4);
        let r7 = ring.reduce(&FieldElement::from_int(7, 0)).unwrap();
        assert_eq!(ring.unit_order(&r7).unwrap(), 2);
        let inv = ring.inverse(&r7).unwrap();
        assert_eq!(ring.mul(&r7, &inv), ring.one());
    }

    #[test]
    fn gauss_mod_two() {
        let k = NumberField::quadratic(-1).unwrap();
        let two = IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap();
        let ring = ResidueRing::new(k, two);
        assert_eq!(ring.elements().len(), 4);
        // Units mod 2 in Z[i]: 1 and i (1+i is a zero divisor).
        assert_eq!(ring.units().len(), 2);
        let i = ring.reduce(&FieldElement::from_int(0, 1)).unwrap();
        assert_eq!(ring.unit_order(&i).unwrap(), 2);
    }

    #[test]
    fn reduction_respects_lattice() {
        let k = NumberField::quadratic(-5).unwrap();
        let p = IntegralIdeal::from_generators(
            k,
            &[FieldElement::from_int(2, 0), FieldElement::from_int(1, 1)],
        )
        .unwrap();
        let ring = ResidueRing::new(k, p.clone());
        assert_eq!(ring.size(), BigInt::from(2));
        for e in [
            FieldElement::from_int(3, 1),
            FieldElement::from_int(-1, 1),
            FieldElement::from_int(5, 3),
        ] {
            let r = ring.reduce(&e).unwrap();
            let diff = k.sub(&e, &r.to_element());
            assert!(p.contains_element(&diff));
        }
    }

    #[test]
    fn reduce_rejects_fractions() {
        let k = NumberField::quadratic(2).unwrap();
        let m = IntegralIdeal::from_integer(k, &BigInt::from(3)).unwrap();
        let ring = ResidueRing::new(k, m);
        let half = FieldElement::new(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::zero(),
        );
        assert!(ring.reduce(&half).is_err());
    }
}
