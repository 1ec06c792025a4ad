//! Class groups and strict ray class groups.
//!
//! The class group is found by enumerating ideals up to a Minkowski-style
//! bound and testing principality.  The strict ray class group C_f sits in
//! the exact sequence
//!
//!   1 -> ((O/f)^x x signs)/units -> C_f -> Cl -> 1
//!
//! and is built from residue-sign data together with an explicit section
//! of the class group, chosen cyclic with a generator coprime to f.  An
//! independent construction classifies enumerated ideals directly through
//! ray generator searches; audits compare the two.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use std::collections::BTreeMap;

use super::abelian::FiniteAbelianGroup;
use crate::error::Error;
use crate::nfield::ideal::{FractionalIdeal, IntegralIdeal};
use crate::nfield::residue::{Residue, ResidueRing};
use crate::nfield::units::{
    plain_generator, ray_generator_search, Congruence, SearchOutcome, UnitGroup,
};
use crate::nfield::{FieldElement, NumberField};

/// Conservative integer bound above the Minkowski constant.
pub fn minkowski_bound(field: NumberField) -> u64 {
    match field.m() {
        None => 1,
        Some(m) => {
            let d = field.discriminant().unsigned_abs();
            let s = BigInt::from(d).sqrt().to_u64().unwrap() + 1;
            if m > 0 {
                s / 2 + 1
            } else {
                (2 * s) / 3 + 1
            }
        }
    }
}

/// The absolute class group with explicit representatives.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub field: NumberField,
    pub group: FiniteAbelianGroup,
    pub reps: Vec<IntegralIdeal>,
}

fn is_principal(field: NumberField, ideal: &IntegralIdeal) -> bool {
    plain_generator(field, ideal).is_some()
}

fn same_ideal_class(field: NumberField, x: &IntegralIdeal, y: &IntegralIdeal) -> bool {
    is_principal(field, &x.mul(&y.conj()))
}

impl ClassGroup {
    pub fn compute(field: NumberField) -> Result<Self, Error> {
        let bound = minkowski_bound(field).max(1);
        let ideals = IntegralIdeal::ideals_up_to(field, bound);
        let mut reps: Vec<IntegralIdeal> = Vec::new();
        for i in &ideals {
            if !reps.iter().any(|r| same_ideal_class(field, i, r)) {
                reps.push(i.clone());
            }
        }
        let n = reps.len();
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = reps[a].mul(&reps[b]);
                let k = (0..n)
                    .find(|&k| same_ideal_class(field, &p, &reps[k]))
                    .ok_or_else(|| Error::Inconsistent("class product not represented".into()))?;
                table[a][b] = k;
            }
        }
        let group = FiniteAbelianGroup::from_table(table)?;
        Ok(ClassGroup { field, group, reps })
    }

    pub fn number(&self) -> usize {
        self.reps.len()
    }

    pub fn classify(&self, ideal: &IntegralIdeal) -> Result<usize, Error> {
        (0..self.reps.len())
            .find(|&k| same_ideal_class(self.field, ideal, &self.reps[k]))
            .ok_or_else(|| Error::Inconsistent("ideal matches no class".into()))
    }
}

/// Residue-and-sign data defining the unit-quotient part of C_f.
#[derive(Debug, Clone)]
struct BQuotient {
    ring: ResidueRing,
    unit_index: BTreeMap<(BigInt, BigInt), usize>,
    nsigns: usize,
    /// Quotient of residue-sign pairs by the global unit image.
    group: FiniteAbelianGroup,
    proj: Vec<usize>,
}

impl BQuotient {
    fn build(field: NumberField, conductor: &IntegralIdeal) -> Result<Self, Error> {
        let ring = ResidueRing::new(field, conductor.clone());
        let units = ring.units();
        let mut unit_index = BTreeMap::new();
        for (i, u) in units.iter().enumerate() {
            unit_index.insert((u.x.clone(), u.y.clone()), i);
        }
        let r1 = field.signature().0;
        let nsigns = 1usize << r1;
        let nb = units.len() * nsigns;
        let mut table = vec![vec![0usize; nb]; nb];
        for i in 0..nb {
            for j in 0..nb {
                let (ui, si) = (i / nsigns, i % nsigns);
                let (uj, sj) = (j / nsigns, j % nsigns);
                let prod = ring.mul(&units[ui], &units[uj]);
                let pk = unit_index[&(prod.x.clone(), prod.y.clone())];
                table[i][j] = pk * nsigns + (si ^ sj);
            }
        }
        let big = FiniteAbelianGroup::from_table(table)?;
        let ug = UnitGroup::compute(field);
        let mut gen_elems = vec![ug.torsion_gen.clone()];
        if let Some(e) = &ug.fundamental {
            gen_elems.push(e.clone());
        }
        let mut gens = Vec::new();
        for g in &gen_elems {
            let idx = Self::index_of_raw(field, &ring, &unit_index, nsigns, g)?;
            gens.push(idx);
        }
        let sub = big.subgroup_closure(&gens);
        let (group, proj) = big.quotient(&sub)?;
        Ok(BQuotient { ring, unit_index, nsigns, group, proj })
    }

    fn sign_mask(field: NumberField, e: &FieldElement) -> usize {
        let mut mask = 0usize;
        for (i, s) in field.real_signs(e).iter().enumerate() {
            assert!(*s != 0);
            if *s < 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    fn index_of_raw(
        field: NumberField,
        ring: &ResidueRing,
        unit_index: &BTreeMap<(BigInt, BigInt), usize>,
        nsigns: usize,
        e: &FieldElement,
    ) -> Result<usize, Error> {
        let r = ring.reduce(e)?;
        let u = unit_index
            .get(&(r.x.clone(), r.y.clone()))
            .ok_or_else(|| Error::BadElement("element not coprime to the conductor".into()))?;
        Ok(u * nsigns + Self::sign_mask(field, e))
    }

    /// Class of an integral element coprime to the conductor.
    fn class_of_element(&self, field: NumberField, e: &FieldElement) -> Result<usize, Error> {
        let raw = Self::index_of_raw(field, &self.ring, &self.unit_index, self.nsigns, e)?;
        Ok(self.proj[raw])
    }

    /// Class of a unit residue taken with its totally positive lift, the
    /// canonical embedding of (O/f)^x.
    fn class_of_residue_positive(&self, r: &Residue) -> Result<usize, Error> {
        let u = self
            .unit_index
            .get(&(r.x.clone(), r.y.clone()))
            .ok_or_else(|| Error::BadElement("residue is not a unit".into()))?;
        Ok(self.proj[u * self.nsigns])
    }
}

/// The strict ray class group at an integral conductor.
#[derive(Debug, Clone)]
pub struct RayClassGroup {
    pub field: NumberField,
    pub conductor: IntegralIdeal,
    pub group: FiniteAbelianGroup,
    /// Integral ideal representative, coprime to the conductor, for each
    /// group element.
    pub reps: Vec<IntegralIdeal>,
    bu: BQuotient,
    pub class_number: usize,
    /// Ideal coprime to f whose class generates Cl, with a generator of
    /// its h-th power.
    section: Option<(IntegralIdeal, FieldElement, usize)>,
}

impl RayClassGroup {
    pub fn build(field: NumberField, conductor: &IntegralIdeal) -> Result<Self, Error> {
        let cl = ClassGroup::compute(field)?;
        let h = cl.number();
        let bu = BQuotient::build(field, conductor)?;
        let nb = bu.group.size;
        let section = if h == 1 {
            None
        } else {
            if !cl.group.is_cyclic() {
                return Err(Error::Inconsistent(
                    "only cyclic class groups are supported for ray class sections".into(),
                ));
            }
            // Smallest coprime ideal generating the class group.
            let mut found = None;
            'outer: for bound in [16u64, 64, 256, 1024] {
                for cand in IntegralIdeal::ideals_up_to(field, bound) {
                    if !cand.is_coprime(conductor) {
                        continue;
                    }
                    let c = cl.classify(&cand)?;
                    if cl.group.orders[c] == h as u64 {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
            let q = found.ok_or_else(|| {
                Error::BoundExceeded("no coprime class group generator found".into())
            })?;
            let qh = q.pow(h as u32);
            let gamma = plain_generator(field, &qh)
                .ok_or_else(|| Error::Inconsistent("q^h should be principal".into()))?;
            Some((q, gamma, h))
        };
        let bgamma = match &section {
            None => bu.group.identity,
            Some((_, gamma, _)) => bu.class_of_element(field, gamma)?,
        };
        let n = h * nb;
        let idx = |i: usize, b: usize| i * nb + b;
        let mut table = vec![vec![0usize; n]; n];
        for i1 in 0..h {
            for b1 in 0..nb {
                for i2 in 0..h {
                    for b2 in 0..nb {
                        let bsum = bu.group.mul(b1, b2);
                        let (i, b) = if i1 + i2 < h {
                            (i1 + i2, bsum)
                        } else {
                            (i1 + i2 - h, bu.group.mul(bsum, bgamma))
                        };
                        table[idx(i1, b1)][idx(i2, b2)] = idx(i, b);
                    }
                }
            }
        }
        let group = FiniteAbelianGroup::from_table(table)?;
        let mut rc = RayClassGroup {
            field,
            conductor: conductor.clone(),
            group,
            reps: Vec::new(),
            bu,
            class_number: h,
            section,
        };
        rc.reps = rc.find_reps()?;
        Ok(rc)
    }

    pub fn order(&self) -> usize {
        self.group.size
    }

    fn nb(&self) -> usize {
        self.bu.group.size
    }

    /// Class index of an integral ideal coprime to the conductor.
    pub fn classify(&self, ideal: &IntegralIdeal) -> Result<usize, Error> {
        if !ideal.is_coprime(&self.conductor) {
            return Err(Error::BadIdeal("ideal shares a factor with the conductor".into()));
        }
        let nb = self.nb();
        match &self.section {
            None => {
                let y = plain_generator(self.field, ideal)
                    .ok_or_else(|| Error::Inconsistent("trivial class group, ideal not principal".into()))?;
                let b = self.bu.class_of_element(self.field, &y)?;
                Ok(b)
            }
            Some((q, gamma, h)) => {
                let bgamma = self.bu.class_of_element(self.field, gamma)?;
                for i in 0..*h {
                    let j = ideal.mul(&q.pow((*h - i) as u32));
                    if let Some(y) = plain_generator(self.field, &j) {
                        let by = self.bu.class_of_element(self.field, &y)?;
                        let b = self.bu.group.mul(by, self.bu.group.inv(bgamma));
                        return Ok(i * nb + b);
                    }
                }
                Err(Error::Inconsistent("no power of the section matched".into()))
            }
        }
    }

    /// Class of a fractional ideal whose numerator and denominator are
    /// both coprime to the conductor.
    pub fn classify_fractional(&self, fr: &FractionalIdeal) -> Result<usize, Error> {
        let a = self.classify(&fr.num)?;
        if fr.den.is_one() {
            return Ok(a);
        }
        let den_ideal = IntegralIdeal::from_integer(self.field, &fr.den)?;
        let d = self.classify(&den_ideal)?;
        Ok(self.group.mul(a, self.group.inv(d)))
    }

    /// The map (O/f)^x -> C_f sending a residue to the class of the ideal
    /// generated by a totally positive lift.
    pub fn j_map(&self, r: &Residue) -> Result<usize, Error> {
        let b = self.bu.class_of_residue_positive(r)?;
        Ok(b)
    }

    pub fn residue_ring(&self) -> &ResidueRing {
        &self.bu.ring
    }

    /// Unit residues in the kernel of j.
    pub fn j_kernel(&self) -> Result<Vec<Residue>, Error> {
        let mut out = Vec::new();
        for u in self.bu.ring.units() {
            if self.j_map(&u)? == self.group.identity {
                out.push(u);
            }
        }
        Ok(out)
    }

    fn find_reps(&self) -> Result<Vec<IntegralIdeal>, Error> {
        let mut reps: Vec<Option<IntegralIdeal>> = vec![None; self.group.size];
        let mut missing = self.group.size;
        let mut bound = 4 * self.conductor.norm().to_u64().unwrap_or(4).max(1);
        loop {
            for cand in IntegralIdeal::ideals_up_to(self.field, bound) {
                if !cand.is_coprime(&self.conductor) {
                    continue;
                }
                let c = self.classify(&cand)?;
                if reps[c].is_none() {
                    reps[c] = Some(cand);
                    missing -= 1;
                    if missing == 0 {
                        return Ok(reps.into_iter().map(|r| r.unwrap()).collect());
                    }
                }
            }
            bound *= 2;
            if bound > 1_000_000 {
                return Err(Error::BoundExceeded(
                    "no small representatives for some ray classes".into(),
                ));
            }
        }
    }

    /// The natural projection onto the group at a divisor of the
    /// conductor, as an element map.
    pub fn project_map(&self, coarser: &RayClassGroup) -> Result<Vec<usize>, Error> {
        if !coarser.conductor.divides(&self.conductor) {
            return Err(Error::BadIdeal("projection target must divide the conductor".into()));
        }
        let mut map = vec![0usize; self.group.size];
        for (i, r) in self.reps.iter().enumerate() {
            map[i] = coarser.classify(r)?;
        }
        if !self.group.is_homomorphism(&coarser.group, &map) {
            return Err(Error::Inconsistent("level projection is not a homomorphism".into()));
        }
        Ok(map)
    }
}

/// Ray classes found by direct enumeration and pairwise generator
/// searches, the independent cross-check for the structural build.
#[derive(Debug, Clone)]
pub struct EnumeratedRayClasses {
    pub field: NumberField,
    pub conductor: IntegralIdeal,
    pub classes: Vec<Vec<IntegralIdeal>>,
    pub group: FiniteAbelianGroup,
    pub bound_used: u64,
}

/// Are two coprime integral ideals in the same strict ray class?
pub fn same_ray_class(
    field: NumberField,
    conductor: &IntegralIdeal,
    x: &IntegralIdeal,
    y: &IntegralIdeal,
) -> Result<bool, Error> {
    let t = FractionalIdeal::from_integral(x.clone())
        .div(&FractionalIdeal::from_integral(y.clone()));
    match ray_generator_search(field, &t, Congruence::Multiplicative(conductor), true)? {
        SearchOutcome::Found(_) => Ok(true),
        _ => Ok(false),
    }
}

impl EnumeratedRayClasses {
    /// Enumerate coprime ideals and classify them pairwise.  The bound
    /// starts near 4 N(f), and doubles until the class count stabilizes
    /// at `expected` (when given) or between two rounds.
    pub fn build(
        field: NumberField,
        conductor: &IntegralIdeal,
        expected: Option<usize>,
    ) -> Result<Self, Error> {
        let nf = conductor.norm().to_u64().unwrap_or(4);
        let mut bound = (4 * nf).max(minkowski_bound(field)).max(8);
        let mut last_count = 0usize;
        loop {
            let mut classes: Vec<Vec<IntegralIdeal>> = Vec::new();
            for cand in IntegralIdeal::ideals_up_to(field, bound) {
                if !cand.is_coprime(conductor) {
                    continue;
                }
                let mut placed = false;
                for cls in classes.iter_mut() {
                    if same_ray_class(field, conductor, &cand, &cls[0])? {
                        cls.push(cand.clone());
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    classes.push(vec![cand]);
                }
            }
            let done = match expected {
                Some(e) => classes.len() >= e,
                None => classes.len() == last_count && last_count > 0,
            };
            if done {
                if let Some(e) = expected {
                    if classes.len() != e {
                        return Err(Error::Inconsistent(format!(
                            "enumeration found {} ray classes, expected {e}",
                            classes.len()
                        )));
                    }
                }
                classes.sort_by_key(|c| c[0].key());
                let n = classes.len();
                let mut table = vec![vec![0usize; n]; n];
                for a in 0..n {
                    for b in 0..n {
                        let p = classes[a][0].mul(&classes[b][0]);
                        let k = {
                            let mut hit = None;
                            for (k, cls) in classes.iter().enumerate() {
                                if same_ray_class(field, conductor, &p, &cls[0])? {
                                    hit = Some(k);
                                    break;
                                }
                            }
                            hit.ok_or_else(|| {
                                Error::Inconsistent("product escapes enumerated classes".into())
                            })?
                        };
                        table[a][b] = k;
                    }
                }
                let group = FiniteAbelianGroup::from_table(table)?;
                return Ok(EnumeratedRayClasses {
                    field,
                    conductor: conductor.clone(),
                    classes,
                    group,
                    bound_used: bound,
                });
            }
            last_count = classes.len();
            bound *= 2;
            if bound > 1_000_000 {
                return Err(Error::BoundExceeded(
                    "ray class enumeration bound exhausted".into(),
                ));
            }
        }
    }
}
