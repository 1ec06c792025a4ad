//! Orbits of the invertible classes acting on a Deligne-Ribet level.
//!
//! The invertible elements of `DR_f` form the strict ray class group
//! `C_f`, and multiplication by them partitions the monoid. The expected
//! picture has one orbit per divisor `d` of the conductor, the orbit
//! through the stratum of `d` being a free transitive set under the
//! quotient group `C_{f/d}`. Everything here is computed from monoid
//! products alone and then compared against that picture.

use std::rc::Rc;

use crate::drmonoid::{DrLevel, LevelStore};
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

pub struct OrbitStructure {
    pub level: Rc<DrLevel>,
    /// Sorted element indices, one list per orbit.
    pub orbits: Vec<Vec<usize>>,
    /// Divisor index attached to each orbit.
    pub divisor_of_orbit: Vec<usize>,
    /// Common stabilizer of the orbit, as unit class indices.
    pub stabilizers: Vec<Vec<usize>>,
}

impl OrbitStructure {
    /// Orbit index containing a given element.
    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbits
            .iter()
            .position(|orb| orb.binary_search(&x).is_ok())
            .expect("element outside every orbit")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }
}

/// Partition a level into orbits under multiplication by invertibles and
/// check the torsor picture stratum by stratum.
pub fn galois_orbit_structure(
    store: &mut LevelStore,
    f: &IntegralIdeal,
) -> Result<OrbitStructure, Error> {
    let level = store.level(f)?;
    let units: Vec<usize> = level.unit_indices().collect();
    let n = level.size;

    let mut orbit_id = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_id[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        for &u in &units {
            let y = level.mul(start, u)?;
            if orbit_id[y] == usize::MAX {
                orbit_id[y] = id;
                members.push(y);
            } else if orbit_id[y] != id {
                return Err(Error::Inconsistent(
                    "unit multiplication left its own orbit".into(),
                ));
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }

    if orbits.len() != level.divisors.len() {
        return Err(Error::Inconsistent(format!(
            "{} orbits against {} divisors of the conductor",
            orbits.len(),
            level.divisors.len()
        )));
    }

    let mut divisor_of_orbit = Vec::with_capacity(orbits.len());
    let mut seen_divisor = vec![false; level.divisors.len()];
    for orb in &orbits {
        let (div, _) = level.decode(orb[0]);
        for &x in orb {
            if level.decode(x).0 != div {
                return Err(Error::Inconsistent(
                    "orbit straddles two divisor strata".into(),
                ));
            }
        }
        if seen_divisor[div] {
            return Err(Error::Inconsistent(
                "two orbits over the same divisor".into(),
            ));
        }
        seen_divisor[div] = true;
        divisor_of_orbit.push(div);
    }

    let mut stabilizers = Vec::with_capacity(orbits.len());
    for (oi, orb) in orbits.iter().enumerate() {
        let div = divisor_of_orbit[oi];
        let quotient = &level.groups[div];
        if orb.len() != quotient.order() {
            return Err(Error::Inconsistent(format!(
                "orbit of size {} over a quotient group of order {}",
                orb.len(),
                quotient.order()
            )));
        }
        let proj = level.groups[0].project_map(quotient)?;
        let kernel: Vec<usize> = units
            .iter()
            .copied()
            .filter(|&u| proj[u] == quotient.group.identity)
            .collect();
        for &x in orb {
            let stab: Vec<usize> = units
                .iter()
                .copied()
                .filter(|&u| level.mul(x, u).map(|y| y == x).unwrap_or(false))
                .collect();
            if stab != kernel {
                return Err(Error::Inconsistent(
                    "stabilizer differs from the projection kernel".into(),
                ));
            }
        }
        // The quotient group acts through arbitrary lifts; the lifted
        // action from the base point must sweep the orbit bijectively.
        let base = orb[0];
        let mut images = Vec::with_capacity(quotient.order());
        for t in 0..quotient.order() {
            let lift = units
                .iter()
                .copied()
                .find(|&u| proj[u] == t)
                .ok_or_else(|| Error::Inconsistent("projection to the quotient is not onto".into()))?;
            images.push(level.mul(base, lift)?);
        }
        let mut swept = images.clone();
        swept.sort_unstable();
        swept.dedup();
        if swept != *orb {
            return Err(Error::Inconsistent(
                "lifted quotient action is not simply transitive".into(),
            ));
        }
        stabilizers.push(kernel);
    }

    Ok(OrbitStructure { level, orbits, divisor_of_orbit, stabilizers })
}
