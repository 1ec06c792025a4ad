//! Symmetries of a finite Y level.
//!
//! A coprime idele is recorded by its ideal together with its unit
//! residue along the conductor. It acts on the level three ways: the
//! semigroup action [rho, alpha] -> [rho u, [s]^{-1} alpha], the Galois
//! pullback through the Artin class, and the star action
//! [rho, alpha] -> [rho u, alpha] which forgets the Galois component.
//! Dividing against the star action and extending by zero gives an
//! endomorphism of the function algebra; composing it with the semigroup
//! action must recover the Galois automorphism. At a fixed level this is
//! a permutation identity; the genuinely partial character of the star
//! endomorphism only appears after raising the level by the acting
//! ideal, where divisibility becomes visible.

use num_bigint::BigInt;
use num_traits::One;

use crate::bcalgebra::operators::OpMat;
use crate::drmonoid::yspace::{Point, YSpace};
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::residue::{Residue, ResidueRing};
use crate::nfield::{FieldElement, NumberField};

pub struct SymmetryReport {
    /// Artin class of the idele in the ray class group of the conductor.
    pub gamma: usize,
    /// Class whose Galois pullback equals the fixed-level star pullback.
    pub star_level_class: usize,
    pub deep_points: usize,
    pub deep_zero_rows: usize,
    pub properly_partial: bool,
    /// Whether some unit residue turns the full semigroup action into a
    /// plain star action; always true over a trivial narrow class group.
    pub ideal_action_is_star: bool,
}

/// Totally positive element congruent to the unit residue along the
/// conductor, with the exact valuations of the acting ideal.
fn gauge_element(
    field: NumberField,
    ring: &ResidueRing,
    u: &Residue,
    s: &IntegralIdeal,
) -> Result<FieldElement, Error> {
    let factors = s.factor();
    for bound in [1i64, 2, 4, 8, 16, 32, 64] {
        for a in -bound..=bound {
            let brange = if field.is_rational() { 0..=0 } else { -bound..=bound };
            for b in brange {
                let t = FieldElement::from_int(a, b);
                if t.is_zero() || !field.is_totally_positive(&t) {
                    continue;
                }
                if ring.reduce(&t)? != *u {
                    continue;
                }
                let pt = IntegralIdeal::from_element(field, &t)?;
                if factors.iter().all(|(p, e)| pt.valuation(p) == *e) {
                    return Ok(t);
                }
            }
        }
    }
    Err(Error::BoundExceeded("no gauge element for the idele in the search box".into()))
}

/// Pullback matrix along a partial point map, checking that the map is
/// constant on unit orbits.
fn pullback(
    rows: &YSpace,
    cols: &YSpace,
    map: impl Fn(Point) -> Result<Option<Point>, Error>,
) -> Result<OpMat, Error> {
    let mut row = Vec::with_capacity(rows.len());
    for orbit in &rows.orbits {
        let mut target: Option<Option<usize>> = None;
        for &p in orbit {
            let img = match map(p)? {
                Some(q) => Some(cols.orbit_index(q)),
                None => None,
            };
            match &target {
                None => target = Some(img),
                Some(prev) if *prev == img => {}
                _ => {
                    return Err(Error::Inconsistent(
                        "point map does not descend to unit orbits".into(),
                    ))
                }
            }
        }
        row.push(target.expect("empty orbit"));
    }
    Ok(OpMat { rows: rows.len(), cols: cols.len(), row })
}

/// Check the compatibility identity between the star endomorphism and
/// the Galois automorphism of the idele (ideal s coprime to f, unit
/// residue u along f), at the level of f and again after raising the
/// level by s.
pub fn symmetry_compat(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    s: &IntegralIdeal,
    u: &Residue,
) -> Result<SymmetryReport, Error> {
    if !s.is_coprime(f) {
        return Err(Error::BadIdeal("acting ideal must be coprime to the conductor".into()));
    }
    let ray_f = store.ray_group(f)?;
    let yf = YSpace::build(ray_f.clone())?;
    let field = yf.field;
    let ring_f = ray_f.residue_ring().clone();
    if !ring_f.is_unit(u) {
        return Err(Error::BadElement("idele unit part must be a unit residue".into()));
    }
    let g = &ray_f.group;

    let cs = ray_f.classify(s)?;
    let ju = ray_f.j_map(u)?;
    let gamma = g.mul(cs, g.inv(ju));

    // The same Artin class through the gauge element: t generates s up
    // to a leftover ideal coprime to both levels, and the class of that
    // leftover inverts to gamma.
    let t = gauge_element(field, &ring_f, u, s)?;
    let pt = IntegralIdeal::from_element(field, &t)?;
    let rest = pt
        .div_exact(s)
        .ok_or_else(|| Error::Inconsistent("gauge element misses the acting ideal".into()))?;
    if g.inv(ray_f.classify(&rest)?) != gamma {
        return Err(Error::Inconsistent("two Artin routes to gamma disagree".into()));
    }

    // Fixed-level operators.
    let act_f = pullback(&yf, &yf, |p| Ok(Some(yf.semigroup_act(cs, u, p)?)))?;
    let u_inv = ring_f.inverse(u)?;
    let star_inv_f = pullback(&yf, &yf, |(r, a)| {
        Ok(Some((yf.residue_id(&ring_f.mul(&yf.residues[r], &u_inv)), a)))
    })?;
    let gal = pullback(&yf, &yf, |(r, a)| Ok(Some((r, g.mul(g.inv(gamma), a)))))?;

    if act_f.compose(&star_inv_f)? != gal {
        return Err(Error::Inconsistent("symmetry identity failed at the base level".into()));
    }
    let star_as_galois = pullback(&yf, &yf, |(r, a)| Ok(Some((r, g.mul(g.inv(ju), a)))))?;
    if star_inv_f != star_as_galois {
        return Err(Error::Inconsistent(
            "fixed-level star pullback is not the expected Galois permutation".into(),
        ));
    }

    // Raised level, where division against the star action is honest.
    let big = f.mul(s);
    let ray_big = store.ray_group(&big)?;
    let ybig = YSpace::build(ray_big.clone())?;
    let ring_big = ray_big.residue_ring().clone();
    let gb = &ray_big.group;
    let t_big = ring_big.reduce(&t)?;
    let proj = ray_big.project_map(&ray_f)?;
    let big_gamma = gb.inv(ray_big.classify(&rest)?);
    if proj[big_gamma] != gamma {
        return Err(Error::Inconsistent("Artin class does not project between levels".into()));
    }

    let act_big = pullback(&ybig, &ybig, |(r, a)| {
        let rr = ybig.residue_id(&ring_big.mul(&ybig.residues[r], &t_big));
        Ok(Some((rr, gb.mul(gb.inv(big_gamma), a))))
    })?;
    let star_big = pullback(&ybig, &yf, |(r, a)| {
        let big_r = &ybig.residues[r];
        let mut images = Vec::new();
        for x in &ybig.residues {
            if ring_big.mul(x, &t_big) == *big_r {
                let rf = ring_f.reduce(&x.to_element())?;
                images.push((yf.residue_id(&rf), proj[a]));
            }
        }
        images.sort();
        images.dedup();
        match images.len() {
            0 => Ok(None),
            1 => Ok(Some(images[0])),
            _ => Err(Error::Inconsistent("star division is not well defined".into())),
        }
    })?;
    let xi = pullback(&ybig, &yf, |(r, a)| {
        let rf = ring_f.reduce(&ybig.residues[r].to_element())?;
        Ok(Some((yf.residue_id(&rf), proj[a])))
    })?;

    if act_big.compose(&star_big)? != xi.compose(&gal)? {
        return Err(Error::Inconsistent("symmetry identity failed at the raised level".into()));
    }

    let deep_zero_rows = star_big.row.iter().filter(|r| r.is_none()).count();
    let properly_partial = deep_zero_rows > 0;
    if properly_partial == s.norm().is_one() {
        return Err(Error::Inconsistent(
            "extension by zero must appear exactly for nontrivial acting ideals".into(),
        ));
    }

    // A trivial narrow class group makes every coprime ideal action a
    // star action for a suitable unit residue.
    let one = IntegralIdeal::from_integer(field, &BigInt::one())?;
    let narrow = store.ray_group(&one)?.order();
    let absorbing = ring_f
        .units()
        .into_iter()
        .find(|w| ray_f.j_map(w).ok() == Some(cs));
    if narrow == 1 && absorbing.is_none() {
        return Err(Error::Inconsistent(
            "trivial narrow class group must realize the ideal class by a unit residue".into(),
        ));
    }
    if let Some(w) = &absorbing {
        for orbit in &yf.orbits {
            for &(r, a) in orbit {
                let acted = yf.semigroup_act(cs, w, (r, a))?;
                let starred = (yf.residue_id(&ring_f.mul(&yf.residues[r], w)), a);
                if yf.orbit_index(acted) != yf.orbit_index(starred) {
                    return Err(Error::Inconsistent(
                        "absorbed action should have no Galois component".into(),
                    ));
                }
            }
        }
    }

    Ok(SymmetryReport {
        gamma,
        star_level_class: ju,
        deep_points: ybig.len(),
        deep_zero_rows,
        properly_partial,
        ideal_action_is_star: absorbing.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::NumberField;

    fn ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn rational_five_acted_by_two() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = ideal(q, 5);
        let ray = store.ray_group(&f).unwrap();
        let u = ray.residue_ring().one();
        let rep = symmetry_compat(&mut store, &f, &ideal(q, 2), &u).unwrap();
        assert_eq!(ray.order(), 4);
        assert_eq!(rep.gamma, ray.classify(&ideal(q, 2)).unwrap());
        assert_ne!(rep.gamma, ray.group.identity);
        assert_eq!(rep.deep_points, 10);
        assert_eq!(rep.deep_zero_rows, 5);
        assert!(rep.properly_partial);
        assert!(rep.ideal_action_is_star);
    }

    #[test]
    fn unit_ideal_acts_trivially() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = ideal(q, 5);
        let u = store.ray_group(&f).unwrap().residue_ring().one();
        let rep = symmetry_compat(&mut store, &f, &ideal(q, 1), &u).unwrap();
        assert_eq!(rep.gamma, 0);
        assert_eq!(rep.deep_zero_rows, 0);
        assert!(!rep.properly_partial);
    }

    #[test]
    fn unit_part_twists_the_artin_class() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = ideal(q, 5);
        let ray = store.ray_group(&f).unwrap();
        let ring = ray.residue_ring().clone();
        let g = &ray.group;

        let u3 = ring.reduce(&FieldElement::from_int(3, 0)).unwrap();
        let rep = symmetry_compat(&mut store, &f, &ideal(q, 2), &u3).unwrap();
        let four = ring.reduce(&FieldElement::from_int(4, 0)).unwrap();
        assert_eq!(rep.gamma, ray.j_map(&four).unwrap());

        let u2 = ring.reduce(&FieldElement::from_int(2, 0)).unwrap();
        let rep = symmetry_compat(&mut store, &f, &ideal(q, 2), &u2).unwrap();
        assert_eq!(rep.gamma, g.identity);
    }

    #[test]
    fn gauss_ramified_action_on_three() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let f = ideal(k, 3);
        let ray = store.ray_group(&f).unwrap();
        let u = ray.residue_ring().one();
        let s = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let rep = symmetry_compat(&mut store, &f, &s, &u).unwrap();
        assert_eq!(ray.order(), 2);
        assert_ne!(rep.gamma, ray.group.identity);
        assert!(rep.properly_partial);
        assert!(rep.ideal_action_is_star);
    }

    #[test]
    fn nontrivial_class_group_blocks_absorption() {
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k);
        let f = ideal(k, 1);
        let u = store.ray_group(&f).unwrap().residue_ring().one();
        let p2 = ideal(k, 2).factor()[0].0.clone();
        assert_eq!(p2.norm(), BigInt::from(2));
        let rep = symmetry_compat(&mut store, &f, &p2, &u).unwrap();
        assert_eq!(rep.deep_points, 4);
        assert_eq!(rep.deep_zero_rows, 2);
        assert!(rep.properly_partial);
        assert!(!rep.ideal_action_is_star);
    }

    #[test]
    fn split_prime_over_conductor_three() {
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k);
        let f = ideal(k, 3);
        let u = store.ray_group(&f).unwrap().residue_ring().one();
        let p2 = ideal(k, 2).factor()[0].0.clone();
        let rep = symmetry_compat(&mut store, &f, &p2, &u).unwrap();
        assert!(rep.properly_partial);
    }
}
