//! The balanced-product model of the level space.
//!
//! Y_f is the quotient of (O/f) x C_f by the unit group (O/f)^x acting by
//! s.(rho, alpha) = (rho s, j(s)^{-1} alpha), where j sends a unit residue
//! to the ray class of the ideal generated by a totally positive lift.
//! Sending [rho, alpha] to the class of iota(rho) alpha^{-1} identifies
//! Y_f with DR_f; both sides carry compatible monoid structures and a
//! finite shadow of the idele action, and the identification is checked
//! rather than assumed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use std::rc::Rc;

use super::DrLevel;
use crate::classgroups::rayclass::RayClassGroup;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::residue::Residue;
use crate::nfield::units::totally_positive_lift;
use crate::nfield::NumberField;

/// A point of (O/f) x C_f, as indices into the residue list and the ray
/// class group.
pub type Point = (usize, usize);

pub struct YSpace {
    pub field: NumberField,
    pub conductor: IntegralIdeal,
    pub ray: Rc<RayClassGroup>,
    pub residues: Vec<Residue>,
    residue_index: BTreeMap<(BigInt, BigInt), usize>,
    /// Unit residue indices together with their j images.
    pub units: Vec<(usize, usize)>,
    pub orbit_of: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<Point>>,
}

impl YSpace {
    pub fn build(ray: Rc<RayClassGroup>) -> Result<Self, Error> {
        let field = ray.field;
        let conductor = ray.conductor.clone();
        let ring = ray.residue_ring().clone();
        let residues = ring.elements();
        let mut residue_index = BTreeMap::new();
        for (i, r) in residues.iter().enumerate() {
            residue_index.insert((r.x.clone(), r.y.clone()), i);
        }
        let mut units = Vec::new();
        for u in ring.units() {
            let idx = residue_index[&(u.x.clone(), u.y.clone())];
            units.push((idx, ray.j_map(&u)?));
        }
        let nc = ray.order();
        let mut orbit_of = vec![vec![usize::MAX; nc]; residues.len()];
        let mut orbits: Vec<Vec<Point>> = Vec::new();
        for r in 0..residues.len() {
            for a in 0..nc {
                if orbit_of[r][a] != usize::MAX {
                    continue;
                }
                let id = orbits.len();
                let mut orbit = Vec::new();
                for &(ui, ju) in &units {
                    let rr = residue_index[&{
                        let p = ring.mul(&residues[r], &residues[ui]);
                        (p.x.clone(), p.y.clone())
                    }];
                    let aa = ray.group.mul(ray.group.inv(ju), a);
                    if orbit_of[rr][aa] == usize::MAX {
                        orbit_of[rr][aa] = id;
                        orbit.push((rr, aa));
                    }
                }
                orbit.sort();
                orbits.push(orbit);
            }
        }
        Ok(YSpace {
            field,
            conductor,
            ray,
            residues,
            residue_index,
            units,
            orbit_of,
            orbits,
        })
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_index(&self, p: Point) -> usize {
        self.orbit_of[p.0][p.1]
    }

    pub fn residue_id(&self, r: &Residue) -> usize {
        self.residue_index[&(r.x.clone(), r.y.clone())]
    }

    /// Pointwise product [rho, alpha][rho', alpha'] = [rho rho', alpha alpha'].
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (r1, a1) = self.orbits[x][0];
        let (r2, a2) = self.orbits[y][0];
        let ring = self.ray.residue_ring();
        let r = self.residue_id(&ring.mul(&self.residues[r1], &self.residues[r2]));
        let a = self.ray.group.mul(a1, a2);
        self.orbit_index((r, a))
    }

    pub fn one(&self) -> usize {
        let r = self.residue_id(&self.ray.residue_ring().one());
        self.orbit_index((r, self.ray.group.identity))
    }

    /// The comparison map to DR_f: [rho, alpha] goes to the class of
    /// iota(rho) alpha^{-1}, with iota given by a totally positive lift.
    pub fn to_dr(&self, level: &DrLevel, orbit: usize) -> Result<usize, Error> {
        let (r, a) = self.orbits[orbit][0];
        let ring = self.ray.residue_ring();
        let lift = totally_positive_lift(self.field, ring, &self.residues[r])?;
        let numerator = IntegralIdeal::from_element(self.field, &lift)?;
        let inv_rep = &self.ray.reps[self.ray.group.inv(a)];
        level.classify_ideal(&numerator.mul(inv_rep))
    }

    /// Finite shadow of the idele action: a pair (class of a coprime
    /// ideal, unit residue) sends [rho, alpha] to [rho u, j(u) c_a^{-1} alpha].
    pub fn semigroup_act(&self, ca: usize, u: &Residue, p: Point) -> Result<Point, Error> {
        let ring = self.ray.residue_ring();
        if !ring.is_unit(u) {
            return Err(Error::BadElement("idele unit part must be a unit residue".into()));
        }
        let ju = self.ray.j_map(u)?;
        let r = self.residue_id(&ring.mul(&self.residues[p.0], u));
        let g = &self.ray.group;
        let a = g.mul(g.mul(ju, g.inv(ca)), p.1);
        Ok((r, a))
    }
}
