//! The Deligne-Ribet monoid DR_f of ideal classes at a finite level.
//!
//! Two nonzero integral ideals a, b are identified at level f when some
//! totally positive x with (x) = a b^{-1} satisfies x - 1 in f b^{-1}.
//! The resulting quotient is a finite commutative monoid whose invertible
//! part is the strict ray class group C_f, and which decomposes over the
//! divisors of f: the class of a is determined by d = gcd(a, f) together
//! with the class of a/d in C_{f/d}.  That pair is a complete invariant,
//! which this module uses as the working representation; the honest
//! pairwise relation is kept alongside as a cross-check.

pub mod audit;
pub mod builds;
pub mod maps;
pub mod yspace;

use num_traits::ToPrimitive;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use crate::classgroups::rayclass::RayClassGroup;
use crate::error::Error;
use crate::nfield::ideal::{FractionalIdeal, IntegralIdeal};
use crate::nfield::units::{ray_generator_search, Congruence, SearchOutcome};
use crate::nfield::NumberField;

type IdealKey = (
    num_bigint::BigInt,
    num_bigint::BigInt,
    num_bigint::BigInt,
    num_bigint::BigInt,
);

/// Shared cache of ray class groups and monoid levels for one field.
pub struct LevelStore {
    pub field: NumberField,
    rays: BTreeMap<IdealKey, Rc<RayClassGroup>>,
    levels: BTreeMap<IdealKey, Rc<DrLevel>>,
}

impl LevelStore {
    pub fn new(field: NumberField) -> Self {
        LevelStore { field, rays: BTreeMap::new(), levels: BTreeMap::new() }
    }

    pub fn ray_group(&mut self, f: &IntegralIdeal) -> Result<Rc<RayClassGroup>, Error> {
        let key = f.key();
        if let Some(rc) = self.rays.get(&key) {
            return Ok(rc.clone());
        }
        let rc = Rc::new(RayClassGroup::build(self.field, f)?);
        self.rays.insert(key, rc.clone());
        Ok(rc)
    }

    pub fn level(&mut self, f: &IntegralIdeal) -> Result<Rc<DrLevel>, Error> {
        let key = f.key();
        if let Some(l) = self.levels.get(&key) {
            return Ok(l.clone());
        }
        let l = Rc::new(DrLevel::build(self, f)?);
        self.levels.insert(key, l.clone());
        Ok(l)
    }
}

/// DR_f with elements indexed by (divisor of f, ray class at the
/// complementary level).
pub struct DrLevel {
    pub field: NumberField,
    pub conductor: IntegralIdeal,
    pub divisors: Vec<IntegralIdeal>,
    pub groups: Vec<Rc<RayClassGroup>>,
    pub offsets: Vec<usize>,
    pub size: usize,
    div_index: BTreeMap<IdealKey, usize>,
    proj_cache: RefCell<BTreeMap<(usize, usize), Rc<Vec<usize>>>>,
    pair_cache: RefCell<BTreeMap<(usize, usize), (usize, usize)>>,
}

impl DrLevel {
    fn build(store: &mut LevelStore, conductor: &IntegralIdeal) -> Result<Self, Error> {
        let field = store.field;
        let divisors = crate::classgroups::divisors(conductor);
        let mut groups = Vec::with_capacity(divisors.len());
        let mut offsets = Vec::with_capacity(divisors.len());
        let mut div_index = BTreeMap::new();
        let mut size = 0usize;
        for (i, d) in divisors.iter().enumerate() {
            let cof = conductor.div_exact(d).expect("divisor divides conductor");
            let g = store.ray_group(&cof)?;
            offsets.push(size);
            size += g.order();
            div_index.insert(d.key(), i);
            groups.push(g);
        }
        Ok(DrLevel {
            field,
            conductor: conductor.clone(),
            divisors,
            groups,
            offsets,
            size,
            div_index,
            proj_cache: RefCell::new(BTreeMap::new()),
            pair_cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn index(&self, div: usize, unit: usize) -> usize {
        self.offsets[div] + unit
    }

    /// Position of a divisor of the conductor in the divisor list.
    pub fn divisor_index(&self, d: &IntegralIdeal) -> Option<usize> {
        self.div_index.get(&d.key()).copied()
    }

    /// Decode a flat index into (divisor index, ray class index).
    pub fn decode(&self, idx: usize) -> (usize, usize) {
        let mut div = self.divisors.len() - 1;
        for i in 0..self.offsets.len() {
            if idx < self.offsets[i] {
                div = i - 1;
                break;
            }
        }
        if idx >= *self.offsets.last().unwrap() {
            div = self.divisors.len() - 1;
        }
        (div, idx - self.offsets[div])
    }

    /// Indices of the invertible elements, the copy of C_f.
    pub fn unit_indices(&self) -> std::ops::Range<usize> {
        0..self.groups[0].order()
    }

    pub fn is_invertible(&self, idx: usize) -> bool {
        self.decode(idx).0 == 0
    }

    /// The class of a nonzero integral ideal.
    pub fn classify_ideal(&self, a: &IntegralIdeal) -> Result<usize, Error> {
        let d = a.gcd(&self.conductor);
        let i = *self
            .div_index
            .get(&d.key())
            .ok_or_else(|| Error::Inconsistent("gcd with conductor not a divisor".into()))?;
        let a0 = a.div_exact(&d).expect("gcd divides");
        let c = self.groups[i].classify(&a0)?;
        Ok(self.index(i, c))
    }

    /// Projection map between complementary-level ray class groups when
    /// divisor i divides divisor j.
    fn proj(&self, i: usize, j: usize) -> Result<Rc<Vec<usize>>, Error> {
        if let Some(m) = self.proj_cache.borrow().get(&(i, j)) {
            return Ok(m.clone());
        }
        let m = Rc::new(self.groups[i].project_map(&self.groups[j])?);
        self.proj_cache.borrow_mut().insert((i, j), m.clone());
        Ok(m)
    }

    /// For a divisor pair, the divisor index of the product label and the
    /// class of the excess ideal there.
    fn pair_data(&self, i: usize, j: usize) -> Result<(usize, usize), Error> {
        let key = (i.min(j), i.max(j));
        if let Some(&v) = self.pair_cache.borrow().get(&key) {
            return Ok(v);
        }
        let dd = self.divisors[key.0].mul(&self.divisors[key.1]);
        let d = dd.gcd(&self.conductor);
        let k = *self.div_index.get(&d.key()).unwrap();
        let excess = dd.div_exact(&d).expect("gcd divides product");
        let e = self.groups[k].classify(&excess)?;
        self.pair_cache.borrow_mut().insert(key, (k, e));
        Ok((k, e))
    }

    /// Monoid multiplication on flat indices.
    pub fn mul(&self, x: usize, y: usize) -> Result<usize, Error> {
        let (i, ci) = self.decode(x);
        let (j, cj) = self.decode(y);
        let (k, excess) = self.pair_data(i, j)?;
        let mi = self.proj(i, k)?;
        let mj = self.proj(j, k)?;
        let g = &self.groups[k].group;
        let c = g.mul(g.mul(mi[ci], mj[cj]), excess);
        Ok(self.index(k, c))
    }

    /// Identity element.
    pub fn one(&self) -> usize {
        self.index(0, self.groups[0].group.identity)
    }

    /// Representative integral ideal of a class.
    pub fn rep_ideal(&self, idx: usize) -> IntegralIdeal {
        let (i, c) = self.decode(idx);
        self.divisors[i].mul(&self.groups[i].reps[c])
    }

    /// Full multiplication table; for small levels only.
    pub fn monoid_table(&self) -> Result<Vec<Vec<usize>>, Error> {
        let n = self.size;
        let mut t = vec![vec![0usize; n]; n];
        for x in 0..n {
            for y in 0..n {
                t[x][y] = self.mul(x, y)?;
            }
        }
        Ok(t)
    }

    /// Norm of the divisor label, useful for measures.
    pub fn label_norm(&self, idx: usize) -> num_bigint::BigInt {
        let (i, _) = self.decode(idx);
        self.divisors[i].norm()
    }
}

/// The honest pairwise relation: a is equivalent to b at level f when a
/// totally positive x with (x) = a/b satisfies x - 1 in f b^{-1}.
pub fn same_dr_class(
    field: NumberField,
    conductor: &IntegralIdeal,
    a: &IntegralIdeal,
    b: &IntegralIdeal,
) -> Result<bool, Error> {
    let fb = FractionalIdeal::from_integral(conductor.clone())
        .div(&FractionalIdeal::from_integral(b.clone()));
    let target = FractionalIdeal::from_integral(a.clone())
        .div(&FractionalIdeal::from_integral(b.clone()));
    match ray_generator_search(field, &target, Congruence::Additive(&fb), true)? {
        SearchOutcome::Found(_) => Ok(true),
        _ => Ok(false),
    }
}

/// Classes of all ideals of norm at most `bound` under the honest
/// relation, as lists of ideals.
pub fn enumerate_classes(
    field: NumberField,
    conductor: &IntegralIdeal,
    bound: u64,
) -> Result<Vec<Vec<IntegralIdeal>>, Error> {
    let mut classes: Vec<Vec<IntegralIdeal>> = Vec::new();
    for cand in IntegralIdeal::ideals_up_to(field, bound) {
        // Bucket filter: the conductor gcd is an invariant of the
        // relation, so only compare against classes with the same label.
        let d = cand.gcd(conductor);
        let mut placed = false;
        for cls in classes.iter_mut() {
            if cls[0].gcd(conductor) != d {
                continue;
            }
            if same_dr_class(field, conductor, &cand, &cls[0])? {
                cls.push(cand.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![cand]);
        }
    }
    classes.sort_by_key(|c| c[0].key());
    Ok(classes)
}

/// A default enumeration bound guaranteeing every class of DR_f shows up:
/// every class has a representative d * r where r is a small coprime
/// representative of a ray class.
pub fn default_enumeration_bound(store: &mut LevelStore, f: &IntegralIdeal) -> Result<u64, Error> {
    let level = store.level(f)?;
    let mut bound = 1u64;
    for (i, d) in level.divisors.iter().enumerate() {
        for r in &level.groups[i].reps {
            let n = d.mul(r).norm().to_u64().ok_or_else(|| {
                Error::BoundExceeded("representative norm does not fit in u64".into())
            })?;
            bound = bound.max(n);
        }
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::FieldElement;
    use num_bigint::BigInt;

    fn int_ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn rational_level_six_is_z_mod_six() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let level = store.level(&f).unwrap();
        assert_eq!(level.size, 6);
        // The class of (a) corresponds to a mod 6; multiplication is
        // multiplication in the monoid Z/6.
        let rep = |m: u64| -> usize {
            let n = if m == 0 { 6 } else { m };
            level.classify_ideal(&int_ideal(q, n as i64)).unwrap()
        };
        for x in 0u64..6 {
            for y in 0u64..6 {
                let lhs = level.mul(rep(x), rep(y)).unwrap();
                assert_eq!(lhs, rep((x * y) % 6), "{x} {y}");
            }
        }
        // Distinct residues give distinct classes.
        let all: std::collections::BTreeSet<usize> = (0..6).map(rep).collect();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn gauss_small_levels() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let pi = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let l1 = store.level(&pi).unwrap();
        assert_eq!(l1.size, 2);
        let two = int_ideal(k, 2);
        let l2 = store.level(&two).unwrap();
        assert_eq!(l2.size, 3);
        let five = int_ideal(k, 5);
        let l5 = store.level(&five).unwrap();
        assert_eq!(l5.size, 7);
    }

    #[test]
    fn real_quadratic_level_two() {
        let k = NumberField::quadratic(2).unwrap();
        let mut store = LevelStore::new(k);
        let two = int_ideal(k, 2);
        let level = store.level(&two).unwrap();
        assert_eq!(level.size, 4);
    }

    #[test]
    fn class_number_two_level_one() {
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k);
        let one = IntegralIdeal::one(k);
        let level = store.level(&one).unwrap();
        assert_eq!(level.size, 2);
        assert_eq!(level.groups[0].group.invariants(), vec![2]);
    }

    #[test]
    fn classify_respects_multiplication() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 12);
        let level = store.level(&f).unwrap();
        for a in 1i64..=20 {
            for b in 1i64..=20 {
                let ca = level.classify_ideal(&int_ideal(q, a)).unwrap();
                let cb = level.classify_ideal(&int_ideal(q, b)).unwrap();
                let cab = level.classify_ideal(&int_ideal(q, a * b)).unwrap();
                assert_eq!(level.mul(ca, cb).unwrap(), cab, "{a} {b}");
            }
        }
    }

    #[test]
    fn honest_enumeration_matches_structure_rational() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let level = store.level(&f).unwrap();
        let bound = default_enumeration_bound(&mut store, &f).unwrap();
        let classes = enumerate_classes(q, &f, bound).unwrap();
        assert_eq!(classes.len(), level.size);
        for cls in &classes {
            let c0 = level.classify_ideal(&cls[0]).unwrap();
            for other in cls {
                assert_eq!(level.classify_ideal(other).unwrap(), c0);
            }
        }
    }

    #[test]
    fn honest_enumeration_matches_structure_gauss() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        for f in [int_ideal(k, 2), int_ideal(k, 5)] {
            let level = store.level(&f).unwrap();
            let bound = default_enumeration_bound(&mut store, &f).unwrap();
            let classes = enumerate_classes(k, &f, bound.max(8)).unwrap();
            assert_eq!(classes.len(), level.size, "f = {f}");
            for cls in &classes {
                let c0 = level.classify_ideal(&cls[0]).unwrap();
                for other in cls {
                    assert_eq!(level.classify_ideal(other).unwrap(), c0);
                }
            }
        }
    }

    #[test]
    fn relation_is_symmetric_and_reflexive() {
        let k = NumberField::quadratic(2).unwrap();
        let f = int_ideal(k, 2);
        let ideals = IntegralIdeal::ideals_up_to(k, 12);
        for a in &ideals {
            assert!(same_dr_class(k, &f, a, a).unwrap(), "{a}");
            for b in &ideals {
                let ab = same_dr_class(k, &f, a, b).unwrap();
                let ba = same_dr_class(k, &f, b, a).unwrap();
                assert_eq!(ab, ba, "{a} {b}");
            }
        }
    }

    #[test]
    fn units_are_the_ray_classes() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 12);
        let level = store.level(&f).unwrap();
        let units: Vec<usize> = level.unit_indices().collect();
        assert_eq!(units.len(), 4);
        for &u in &units {
            assert!(level.is_invertible(u));
            // Invertible: some v with uv = 1.
            let inv = units
                .iter()
                .find(|&&v| level.mul(u, v).unwrap() == level.one());
            assert!(inv.is_some());
        }
        // Non-units have no inverse.
        for x in 0..level.size {
            if level.is_invertible(x) {
                continue;
            }
            for y in 0..level.size {
                assert_ne!(level.mul(x, y).unwrap(), level.one());
            }
        }
    }
}
