//! Maps between levels of the tower and into it from the residue side.
//!
//! For f | f' every class at level f' determines a class at level f,
//! giving a surjective monoid map DR_{f'} -> DR_f.  In the opposite
//! direction multiplication by a fixed ideal d is injective DR_f ->
//! DR_{df}, because a ~_f b holds exactly when da ~_{df} db.  On the
//! residue side, iota sends a residue mod f to the class of any totally
//! positive lift, and the sigma classification splits O/f into the unit
//! groups of the quotients O/(f/d), one stratum per divisor.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::nfield::ideal::{FractionalIdeal, IntegralIdeal};
use crate::nfield::residue::{Residue, ResidueRing};
use crate::nfield::units::{totally_positive_lift, totally_positive_unit_generators};
use crate::nfield::{FieldElement, FieldKind, NumberField};

use super::{DrLevel, LevelStore};

/// The projection DR_{f'} -> DR_f for f | f'.
pub struct ProjectionMap {
    pub fine: Rc<DrLevel>,
    pub coarse: Rc<DrLevel>,
    pub map: Vec<usize>,
}

/// Classify every representative of the fine level at the coarse one.
pub fn project(
    store: &mut LevelStore,
    fine: &IntegralIdeal,
    coarse: &IntegralIdeal,
) -> Result<ProjectionMap, Error> {
    if !coarse.divides(fine) {
        return Err(Error::BadIdeal("projection target must divide the source conductor".into()));
    }
    let fine = store.level(fine)?;
    let coarse = store.level(coarse)?;
    let mut map = Vec::with_capacity(fine.size);
    for x in 0..fine.size {
        map.push(coarse.classify_ideal(&fine.rep_ideal(x))?);
    }
    Ok(ProjectionMap { fine, coarse, map })
}

impl ProjectionMap {
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.coarse.size];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_multiplicative(&self) -> Result<bool, Error> {
        for x in 0..self.fine.size {
            for y in 0..self.fine.size {
                let lhs = self.map[self.fine.mul(x, y)?];
                let rhs = self.coarse.mul(self.map[x], self.map[y])?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.coarse.size];
        for &v in &self.map {
            sizes[v] += 1;
        }
        sizes
    }

    pub fn fibers_uniform(&self) -> bool {
        let sizes = self.fiber_sizes();
        sizes.iter().all(|&n| n == sizes[0])
    }

    /// The same map computed from the labels alone: (E, C) goes to
    /// (gcd(E, f), proj(C) * [E / gcd(E, f)]).
    pub fn structural_map(&self) -> Result<Vec<usize>, Error> {
        let mut out = vec![0usize; self.fine.size];
        for (i, e) in self.fine.divisors.iter().enumerate() {
            let d = e.gcd(&self.coarse.conductor);
            let di = self
                .coarse
                .divisor_index(&d)
                .ok_or_else(|| Error::Inconsistent("conductor gcd missing at coarse level".into()))?;
            let proj = self.fine.groups[i].project_map(&self.coarse.groups[di])?;
            let excess = e.div_exact(&d).expect("gcd divides");
            let exc = self.coarse.groups[di].classify(&excess)?;
            let g = &self.coarse.groups[di].group;
            for c in 0..self.fine.groups[i].order() {
                out[self.fine.index(i, c)] = self.coarse.index(di, g.mul(proj[c], exc));
            }
        }
        Ok(out)
    }
}

/// The injective map DR_f -> DR_{df} induced by multiplication by d.
pub struct EmbeddingMap {
    pub base: Rc<DrLevel>,
    pub target: Rc<DrLevel>,
    pub multiplier: IntegralIdeal,
    pub map: Vec<usize>,
}

/// Multiply every representative by d and classify at level df.  A
/// collision would contradict the equivalence a ~_f b iff da ~_{df} db,
/// so it is a fatal inconsistency.
pub fn mult_embed(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    d: &IntegralIdeal,
) -> Result<EmbeddingMap, Error> {
    let base = store.level(f)?;
    let target = store.level(&f.mul(d))?;
    let mut map = Vec::with_capacity(base.size);
    let mut seen = vec![false; target.size];
    for x in 0..base.size {
        let v = target.classify_ideal(&base.rep_ideal(x).mul(d))?;
        if seen[v] {
            return Err(Error::Inconsistent(
                "multiplication embedding collided at the scaled level".into(),
            ));
        }
        seen[v] = true;
        map.push(v);
    }
    Ok(EmbeddingMap { base, target, multiplier: d.clone(), map })
}

impl EmbeddingMap {
    pub fn image_indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.target.size];
        for &v in &self.map {
            ind[v] = true;
        }
        ind
    }

    pub fn complement(&self) -> Vec<usize> {
        self.image_indicator()
            .into_iter()
            .enumerate()
            .filter_map(|(i, hit)| if hit { None } else { Some(i) })
            .collect()
    }

    /// On labels the embedding just scales the divisor: (e, c) -> (de, c).
    /// The complementary groups at e and de coincide, so the class index
    /// carries over unchanged.
    pub fn label_map(&self) -> Result<Vec<usize>, Error> {
        let mut out = vec![0usize; self.base.size];
        for (i, e) in self.base.divisors.iter().enumerate() {
            let de = e.mul(&self.multiplier);
            let ti = self
                .target
                .divisor_index(&de)
                .ok_or_else(|| Error::Inconsistent("scaled divisor missing at target level".into()))?;
            if self.base.groups[i].conductor != self.target.groups[ti].conductor {
                return Err(Error::Inconsistent(
                    "complementary conductors differ between levels".into(),
                ));
            }
            for c in 0..self.base.groups[i].order() {
                out[self.base.index(i, c)] = self.target.index(ti, c);
            }
        }
        Ok(out)
    }
}

/// The map O/f -> DR_f taking a residue to the class of a totally
/// positive lift.
pub struct IotaMap {
    pub ring: ResidueRing,
    pub level: Rc<DrLevel>,
    pub elements: Vec<Residue>,
    pub lifts: Vec<FieldElement>,
    pub map: Vec<usize>,
}

/// Build iota and confirm on the way that a second admissible lift of
/// every residue lands in the same class.
pub fn iota(store: &mut LevelStore, f: &IntegralIdeal) -> Result<IotaMap, Error> {
    let field = store.field;
    let level = store.level(f)?;
    let ring = ResidueRing::new(field, f.clone());
    let elements = ring.elements();
    let nf = FieldElement::from_bigint(f.norm(), BigInt::from(0));
    let mut lifts = Vec::with_capacity(elements.len());
    let mut map = Vec::with_capacity(elements.len());
    for r in &elements {
        let lift = totally_positive_lift(field, &ring, r)?;
        let c = level.classify_ideal(&IntegralIdeal::from_element(field, &lift)?)?;
        let other = field.add(&lift, &nf);
        let c2 = level.classify_ideal(&IntegralIdeal::from_element(field, &other)?)?;
        if c != c2 {
            return Err(Error::Inconsistent(
                "two lifts of a residue land in different classes".into(),
            ));
        }
        lifts.push(lift);
        map.push(c);
    }
    Ok(IotaMap { ring, level, elements, lifts, map })
}

impl IotaMap {
    fn position(&self) -> BTreeMap<Residue, usize> {
        self.elements.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect()
    }

    pub fn is_multiplicative(&self) -> Result<bool, Error> {
        let pos = self.position();
        for (i, r) in self.elements.iter().enumerate() {
            for (j, s) in self.elements.iter().enumerate() {
                let p = pos[&self.ring.mul(r, s)];
                if self.level.mul(self.map[i], self.map[j])? != self.map[p] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Partition of the residue indices by image class.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in self.map.iter().enumerate() {
            groups.entry(c).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Orbits of the residues under multiplication by the images of the
    /// totally positive global units.
    pub fn unit_orbits(&self) -> Result<Vec<Vec<usize>>, Error> {
        let pos = self.position();
        let gens: Vec<Residue> = totally_positive_unit_generators(self.ring.field)
            .iter()
            .map(|g| self.ring.reduce(g))
            .collect::<Result<_, _>>()?;
        let mut seen = vec![false; self.elements.len()];
        let mut orbits = Vec::new();
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(i) = queue.pop() {
                for g in &gens {
                    let j = pos[&self.ring.mul(&self.elements[i], g)];
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                        queue.push(j);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        Ok(orbits)
    }

    pub fn fibers_match_unit_orbits(&self) -> Result<bool, Error> {
        let mut fibers = self.fibers();
        for f in fibers.iter_mut() {
            f.sort_unstable();
        }
        fibers.sort();
        let mut orbits = self.unit_orbits()?;
        orbits.sort();
        Ok(fibers == orbits)
    }
}

/// The divisor-and-unit classification of O/f: every residue is a unit
/// times a fixed gauge element on its stratum, and the strata are
/// indexed by the divisors of f.
pub struct ResidueClassification {
    pub ring: ResidueRing,
    pub level: Rc<DrLevel>,
    pub elements: Vec<Residue>,
    pub stratum: Vec<usize>,
    pub unit_part: Vec<Residue>,
    pub gauges: Vec<FieldElement>,
    pub corrections: Vec<usize>,
}

/// A totally positive element of valuation one at p and zero at the
/// other primes of the conductor.
fn positive_uniformizer(
    field: NumberField,
    p: &IntegralIdeal,
    all: &[(IntegralIdeal, u32)],
) -> Result<FieldElement, Error> {
    let cap: i64 = {
        let n = p.norm().to_i64().unwrap_or(i64::MAX / 256);
        64 * (n + 2)
    };
    for shell in 0..=cap {
        let bs: Vec<i64> = if field.is_rational() {
            vec![0]
        } else {
            (-shell..=shell).rev().collect()
        };
        for a in -shell..=shell {
            for &b in &bs {
                if a.abs().max(b.abs()) != shell {
                    continue;
                }
                let e = FieldElement::from_int(a, b);
                if e.is_zero() {
                    continue;
                }
                let positive = match field.kind {
                    FieldKind::Quadratic { m } if m < 0 => true,
                    _ => field.is_totally_positive(&e),
                };
                if !positive {
                    continue;
                }
                let ie = IntegralIdeal::from_element(field, &e)?;
                if ie.valuation(p) != 1 {
                    continue;
                }
                if all.iter().any(|(q, _)| q != p && ie.valuation(q) != 0) {
                    continue;
                }
                return Ok(e);
            }
        }
    }
    Err(Error::BoundExceeded("no totally positive uniformizer within shell cap".into()))
}

/// Split O/f into strata.  The stratum of a residue is read off the
/// valuations of a lift, capped at the conductor exponents; on each
/// stratum the residue factors uniquely as gauge times unit.
pub fn classify_residue(
    store: &mut LevelStore,
    f: &IntegralIdeal,
) -> Result<ResidueClassification, Error> {
    let field = store.field;
    let level = store.level(f)?;
    let ring = ResidueRing::new(field, f.clone());
    let primes = f.factor();
    let mut unifs = Vec::with_capacity(primes.len());
    for (p, _) in &primes {
        unifs.push(positive_uniformizer(field, p, &primes)?);
    }
    let mut gauges = Vec::with_capacity(level.divisors.len());
    let mut corrections = Vec::with_capacity(level.divisors.len());
    for (i, d) in level.divisors.iter().enumerate() {
        let mut g = FieldElement::one();
        for ((p, _), t) in primes.iter().zip(&unifs) {
            for _ in 0..d.valuation(p) {
                g = field.mul(&g, t);
            }
        }
        let gi = IntegralIdeal::from_element(field, &g)?;
        let fr = FractionalIdeal::from_integral(gi)
            .div(&FractionalIdeal::from_integral(d.clone()));
        corrections.push(level.groups[i].classify_fractional(&fr)?);
        gauges.push(g);
    }
    let elements = ring.elements();
    let mut stratum = Vec::with_capacity(elements.len());
    let mut unit_part = Vec::with_capacity(elements.len());
    for r in &elements {
        let e = r.to_element();
        let (di, w) = if e.is_zero() {
            let di = level.divisor_index(f).expect("conductor is its own divisor");
            (di, level.groups[di].residue_ring().one())
        } else {
            let a = IntegralIdeal::from_element(field, &e)?;
            let mut d = IntegralIdeal::one(field);
            for (p, ep) in &primes {
                let v = a.valuation(p).min(*ep);
                d = d.mul(&p.pow(v));
            }
            let di = level
                .divisor_index(&d)
                .ok_or_else(|| Error::Inconsistent("stratum is not a divisor".into()))?;
            let rg = level.groups[di].residue_ring();
            let mut found = None;
            let mut matches = 0usize;
            for w in rg.units() {
                let gw = field.mul(&gauges[di], &w.to_element());
                if f.contains_element(&field.sub(&e, &gw)) {
                    matches += 1;
                    found = Some(w);
                }
            }
            if matches != 1 {
                return Err(Error::Inconsistent(format!(
                    "residue matched {matches} units on its stratum"
                )));
            }
            (di, found.unwrap())
        };
        stratum.push(di);
        unit_part.push(w);
    }
    for i in 0..level.divisors.len() {
        let count = stratum.iter().filter(|&&s| s == i).count();
        let expect = level.groups[i].residue_ring().units().len();
        if count != expect {
            return Err(Error::Inconsistent(format!(
                "stratum {i} holds {count} residues but the unit group has {expect}"
            )));
        }
    }
    Ok(ResidueClassification { ring, level, elements, stratum, unit_part, gauges, corrections })
}

impl ResidueClassification {
    /// iota factors through the classification: the class of a lift of x
    /// is (d, j(w) * [gauge / d]).  Any failure here is fatal.
    pub fn check_square(&self, io: &IotaMap) -> Result<(), Error> {
        if self.elements != io.elements {
            return Err(Error::Inconsistent("residue enumerations disagree".into()));
        }
        for t in 0..self.elements.len() {
            let di = self.stratum[t];
            let g = &self.level.groups[di];
            let j = g.j_map(&self.unit_part[t])?;
            let want = self.level.index(di, g.group.mul(j, self.corrections[di]));
            if io.map[t] != want {
                return Err(Error::Inconsistent(format!(
                    "classification square fails at residue index {t}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn projection_twelve_to_six() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let pr = project(&mut store, &int_ideal(q, 12), &int_ideal(q, 6)).unwrap();
        assert_eq!(pr.fine.size, 12);
        assert_eq!(pr.coarse.size, 6);
        assert!(pr.is_surjective());
        assert!(pr.is_multiplicative().unwrap());
        assert!(pr.fibers_uniform());
        assert_eq!(pr.fiber_sizes(), vec![2; 6]);
        assert_eq!(pr.structural_map().unwrap(), pr.map);
        // The map is reduction mod 6 on residues.
        let lvl12 = store.level(&int_ideal(q, 12)).unwrap();
        let lvl6 = store.level(&int_ideal(q, 6)).unwrap();
        for a in 1i64..=12 {
            let fine = lvl12.classify_ideal(&int_ideal(q, a)).unwrap();
            let coarse = lvl6.classify_ideal(&int_ideal(q, a)).unwrap();
            assert_eq!(pr.map[fine], coarse, "{a}");
        }
    }

    #[test]
    fn projection_at_equal_levels_is_identity() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let f = int_ideal(k, 5);
        let pr = project(&mut store, &f, &f).unwrap();
        assert_eq!(pr.map, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn projection_chains_compose() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f24 = int_ideal(q, 24);
        let f12 = int_ideal(q, 12);
        let f6 = int_ideal(q, 6);
        let ab = project(&mut store, &f24, &f12).unwrap();
        let bc = project(&mut store, &f12, &f6).unwrap();
        let ac = project(&mut store, &f24, &f6).unwrap();
        let composed: Vec<usize> = ab.map.iter().map(|&v| bc.map[v]).collect();
        assert_eq!(composed, ac.map);
    }

    #[test]
    fn projection_real_quadratic_fibers() {
        let k = NumberField::quadratic(2).unwrap();
        let mut store = LevelStore::new(k);
        let sqrt2 = IntegralIdeal::from_element(k, &FieldElement::from_int(0, 1)).unwrap();
        let pr = project(&mut store, &int_ideal(k, 2), &sqrt2).unwrap();
        assert_eq!(pr.fine.size, 4);
        assert_eq!(pr.coarse.size, 2);
        assert!(pr.is_surjective());
        assert!(pr.is_multiplicative().unwrap());
        assert_eq!(pr.fiber_sizes(), vec![2, 2]);
        assert_eq!(pr.structural_map().unwrap(), pr.map);
    }

    #[test]
    fn embedding_doubling_into_twelve() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let em = mult_embed(&mut store, &int_ideal(q, 6), &int_ideal(q, 2)).unwrap();
        assert_eq!(em.base.size, 6);
        assert_eq!(em.target.size, 12);
        assert_eq!(em.label_map().unwrap(), em.map);
        // x goes to 2x; the image is the even residues mod 12.
        let lvl6 = store.level(&int_ideal(q, 6)).unwrap();
        let lvl12 = store.level(&int_ideal(q, 12)).unwrap();
        for a in 1i64..=6 {
            let src = lvl6.classify_ideal(&int_ideal(q, a)).unwrap();
            let dst = lvl12.classify_ideal(&int_ideal(q, 2 * a)).unwrap();
            assert_eq!(em.map[src], dst, "{a}");
        }
        let ind = em.image_indicator();
        for a in 1i64..=12 {
            let c = lvl12.classify_ideal(&int_ideal(q, a)).unwrap();
            assert_eq!(ind[c], a % 2 == 0, "{a}");
        }
        assert_eq!(em.complement().len(), 6);
    }

    #[test]
    fn embedding_by_unit_ideal_is_identity() {
        let k = NumberField::quadratic(2).unwrap();
        let mut store = LevelStore::new(k);
        let em = mult_embed(&mut store, &int_ideal(k, 2), &IntegralIdeal::one(k)).unwrap();
        assert_eq!(em.map, (0..4).collect::<Vec<_>>());
        assert!(em.complement().is_empty());
    }

    #[test]
    fn embedding_gauss_prime() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let pi = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let em = mult_embed(&mut store, &pi, &pi).unwrap();
        assert_eq!(em.base.size, 2);
        assert_eq!(em.target.size, 3);
        assert_eq!(em.label_map().unwrap(), em.map);
        assert_eq!(em.complement().len(), 1);
        // The missing class is the identity: nothing of the form (1+i)a
        // is a unit at level (2).
        let missing = em.complement()[0];
        assert!(em.target.is_invertible(missing));
    }

    #[test]
    fn embedding_then_projecting_multiplies() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let d = int_ideal(q, 2);
        let em = mult_embed(&mut store, &f, &d).unwrap();
        let pr = project(&mut store, &int_ideal(q, 12), &f).unwrap();
        let lvl = store.level(&f).unwrap();
        let cd = lvl.classify_ideal(&d).unwrap();
        for x in 0..lvl.size {
            assert_eq!(pr.map[em.map[x]], lvl.mul(x, cd).unwrap());
        }
        let k = NumberField::quadratic(-1).unwrap();
        let mut ks = LevelStore::new(k);
        let pi = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let em = mult_embed(&mut ks, &pi, &pi).unwrap();
        let pr = project(&mut ks, &int_ideal(k, 2), &pi).unwrap();
        let lvl = ks.level(&pi).unwrap();
        let cd = lvl.classify_ideal(&pi).unwrap();
        for x in 0..lvl.size {
            assert_eq!(pr.map[em.map[x]], lvl.mul(x, cd).unwrap());
        }
    }

    #[test]
    fn embedding_composition_and_intersection() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 2);
        let d2 = int_ideal(q, 2);
        let d3 = int_ideal(q, 3);
        let d6 = int_ideal(q, 6);
        // lambda_2 after lambda_3 equals lambda_6 from DR_(2) into DR_(12).
        let l3 = mult_embed(&mut store, &f, &d3).unwrap();
        let l2_after = mult_embed(&mut store, &int_ideal(q, 6), &d2).unwrap();
        let l6 = mult_embed(&mut store, &f, &d6).unwrap();
        let composed: Vec<usize> = l3.map.iter().map(|&v| l2_after.map[v]).collect();
        assert_eq!(composed, l6.map);
        // Images intersect in the image of the lcm embedding, inside DR_(12).
        let from6 = mult_embed(&mut store, &int_ideal(q, 6), &d2).unwrap();
        let from4 = mult_embed(&mut store, &int_ideal(q, 4), &d3).unwrap();
        let from2 = mult_embed(&mut store, &f, &d6).unwrap();
        let a = from6.image_indicator();
        let b = from4.image_indicator();
        let c = from2.image_indicator();
        for i in 0..a.len() {
            assert_eq!(a[i] && b[i], c[i], "{i}");
        }
    }

    #[test]
    fn iota_rational_six_is_the_residue_dictionary() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let io = iota(&mut store, &f).unwrap();
        assert!(io.is_multiplicative().unwrap());
        let lvl = store.level(&f).unwrap();
        for (i, r) in io.elements.iter().enumerate() {
            let n = r.x.to_i64().unwrap();
            let c = lvl.classify_ideal(&int_ideal(q, if n == 0 { 6 } else { n })).unwrap();
            assert_eq!(io.map[i], c, "{n}");
        }
        // No nontrivial totally positive units: fibers are singletons.
        assert!(io.fibers().iter().all(|f| f.len() == 1));
        assert!(io.fibers_match_unit_orbits().unwrap());
    }

    #[test]
    fn iota_gauss_five_fibers_are_unit_orbits() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let io = iota(&mut store, &int_ideal(k, 5)).unwrap();
        assert!(io.is_multiplicative().unwrap());
        let fibers = io.fibers();
        assert_eq!(fibers.len(), 7);
        assert!(io.fibers_match_unit_orbits().unwrap());
        // One fixed point (zero) and six orbits of size four under i.
        let mut sizes: Vec<usize> = fibers.iter().map(|f| f.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn iota_real_quadratic_fibers() {
        let k = NumberField::quadratic(3).unwrap();
        let mut store = LevelStore::new(k);
        let f = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let io = iota(&mut store, &f).unwrap();
        assert!(io.is_multiplicative().unwrap());
        assert!(io.fibers_match_unit_orbits().unwrap());
        let k2 = NumberField::quadratic(2).unwrap();
        let mut s2 = LevelStore::new(k2);
        let f2 = IntegralIdeal::from_element(k2, &FieldElement::from_int(0, 2)).unwrap();
        let io2 = iota(&mut s2, &f2).unwrap();
        assert!(io2.is_multiplicative().unwrap());
        assert!(io2.fibers_match_unit_orbits().unwrap());
        // The square of the fundamental unit moves residues mod 2*sqrt(2).
        assert!(io2.unit_orbits().unwrap().iter().any(|o| o.len() > 1));
    }

    #[test]
    fn classification_rational_six() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let cls = classify_residue(&mut store, &f).unwrap();
        let lvl = store.level(&f).unwrap();
        for (t, r) in cls.elements.iter().enumerate() {
            let n = r.x.to_i64().unwrap();
            let d = if n == 0 { 6 } else { num_integer::gcd(n, 6) };
            let want = lvl.divisor_index(&int_ideal(q, d)).unwrap();
            assert_eq!(cls.stratum[t], want, "{n}");
        }
        let io = iota(&mut store, &f).unwrap();
        cls.check_square(&io).unwrap();
    }

    #[test]
    fn classification_gauss_two() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let f = int_ideal(k, 2);
        let cls = classify_residue(&mut store, &f).unwrap();
        let lvl = store.level(&f).unwrap();
        let pi = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let d_one = lvl.divisor_index(&IntegralIdeal::one(k)).unwrap();
        let d_pi = lvl.divisor_index(&pi).unwrap();
        let d_two = lvl.divisor_index(&f).unwrap();
        let ring = cls.ring.clone();
        let at = |x: i64, y: i64| {
            let r = ring.reduce(&FieldElement::from_int(x, y)).unwrap();
            cls.elements.iter().position(|e| *e == r).unwrap()
        };
        assert_eq!(cls.stratum[at(1, 0)], d_one);
        assert_eq!(cls.stratum[at(0, 1)], d_one);
        assert_eq!(cls.stratum[at(1, 1)], d_pi);
        assert_eq!(cls.stratum[at(0, 0)], d_two);
        let io = iota(&mut store, &f).unwrap();
        cls.check_square(&io).unwrap();
    }

    #[test]
    fn classification_counts_and_square_real() {
        let k = NumberField::quadratic(2).unwrap();
        let mut store = LevelStore::new(k);
        let f = int_ideal(k, 2);
        let cls = classify_residue(&mut store, &f).unwrap();
        let io = iota(&mut store, &f).unwrap();
        cls.check_square(&io).unwrap();
        let k5 = NumberField::quadratic(-5).unwrap();
        let mut s5 = LevelStore::new(k5);
        let f5 = int_ideal(k5, 2);
        let cls5 = classify_residue(&mut s5, &f5).unwrap();
        let io5 = iota(&mut s5, &f5).unwrap();
        cls5.check_square(&io5).unwrap();
    }
}
