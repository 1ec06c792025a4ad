//! Three constructions of the level monoid, compared through explicit
//! dictionaries.
//!
//! The direct build enumerates ideals and classifies them pairwise with
//! the honest level relation, using the balanced-quotient orbit count as
//! its termination oracle.  The quotient build takes the orbit monoid of
//! (O/f) x C_f.  The decomposition build lays out one ray class group
//! per divisor of f and multiplies representative ideals.  Nothing is
//! identified by fiat: the comparison maps are computed and checked.

use std::collections::BTreeSet;
use std::rc::Rc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::NumberField;

use super::yspace::YSpace;
use super::{enumerate_classes, same_dr_class, DrLevel, LevelStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildTag {
    Direct,
    Quotient,
    Decomp,
}

/// One construction of DR_f: representative ideals, coproduct labels,
/// the multiplication table, and the units read off the table.
pub struct DrTable {
    pub field: NumberField,
    pub conductor: IntegralIdeal,
    pub tag: BuildTag,
    pub reps: Vec<IntegralIdeal>,
    pub labels: Vec<(usize, usize)>,
    pub table: Vec<Vec<usize>>,
    pub units: Vec<usize>,
}

fn units_from_table(table: &[Vec<usize>]) -> Result<Vec<usize>, Error> {
    let n = table.len();
    let e = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| Error::Inconsistent("multiplication table has no identity".into()))?;
    Ok((0..n)
        .filter(|&x| (0..n).any(|y| table[x][y] == e && table[y][x] == e))
        .collect())
}

/// Associativity, commutativity and the identity, checked exhaustively
/// for tables up to 512 elements and by seeded random triples above.
pub fn check_monoid_axioms(table: &[Vec<usize>], seed: u64) -> Result<(), Error> {
    let n = table.len();
    for row in table {
        if row.len() != n || row.iter().any(|&v| v >= n) {
            return Err(Error::Inconsistent("table is not square with in-range entries".into()));
        }
    }
    units_from_table(table)?;
    for x in 0..n {
        for y in 0..x {
            if table[x][y] != table[y][x] {
                return Err(Error::Inconsistent(format!("table not commutative at ({x}, {y})")));
            }
        }
    }
    let check = |x: usize, y: usize, z: usize| -> Result<(), Error> {
        if table[table[x][y]][z] != table[x][table[y][z]] {
            return Err(Error::Inconsistent(format!("table not associative at ({x}, {y}, {z})")));
        }
        Ok(())
    };
    if n <= 512 {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    check(x, y, z)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
    }
    Ok(())
}

/// Does the dictionary carry one table onto the other, units included?
pub fn monoid_isomorphic(a: &DrTable, b: &DrTable, dict: &[usize]) -> bool {
    let n = a.table.len();
    if dict.len() != n || b.table.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in dict {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if dict[a.table[i][j]] != b.table[dict[i]][dict[j]] {
                return false;
            }
        }
    }
    let au: BTreeSet<usize> = a.units.iter().map(|&u| dict[u]).collect();
    let bu: BTreeSet<usize> = b.units.iter().copied().collect();
    au == bu
}

/// Enumerate ideals by increasing norm and classify them with the honest
/// relation, doubling the bound until the class count matches the orbit
/// count of the balanced quotient.  Representatives are norm-minimal.
pub fn build_dr_direct(store: &mut LevelStore, f: &IntegralIdeal) -> Result<DrTable, Error> {
    let field = store.field;
    let oracle = YSpace::build(store.ray_group(f)?)?.len();
    let nf = f.norm().to_u64().unwrap_or(4);
    let mut bound = (4 * nf).max(8);
    let classes = loop {
        let classes = enumerate_classes(field, f, bound)?;
        if classes.len() > oracle {
            return Err(Error::Inconsistent(format!(
                "direct build found {} classes but the quotient oracle says {}",
                classes.len(),
                oracle
            )));
        }
        if classes.len() == oracle {
            break classes;
        }
        bound *= 2;
        if bound > 1 << 24 {
            return Err(Error::BoundExceeded(
                "direct enumeration exhausted its bound schedule".into(),
            ));
        }
    };
    let mut reps: Vec<IntegralIdeal> = classes
        .iter()
        .map(|cls| cls.iter().min_by_key(|i| (i.norm(), i.key())).unwrap().clone())
        .collect();
    reps.sort_by_key(|i| (i.norm(), i.key()));
    let n = reps.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let p = reps[i].mul(&reps[j]);
            let d = p.gcd(f);
            let mut hit = None;
            for (k, r) in reps.iter().enumerate() {
                if r.gcd(f) != d {
                    continue;
                }
                if same_dr_class(field, f, &p, r)? {
                    hit = Some(k);
                    break;
                }
            }
            let k = hit.ok_or_else(|| {
                Error::Inconsistent("a product fell outside the enumerated classes".into())
            })?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    let units = units_from_table(&table)?;
    let level = store.level(f)?;
    let labels = reps
        .iter()
        .map(|r| Ok(level.decode(level.classify_ideal(r)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(DrTable { field, conductor: f.clone(), tag: BuildTag::Direct, reps, labels, table, units })
}

/// The orbit monoid of (O/f) x C_f, annotated through the comparison
/// map.
pub fn build_dr_quotient(
    store: &mut LevelStore,
    f: &IntegralIdeal,
) -> Result<(YSpace, DrTable), Error> {
    let field = store.field;
    let y = YSpace::build(store.ray_group(f)?)?;
    let n = y.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = y.mul(i, j);
        }
    }
    let units = units_from_table(&table)?;
    let level = store.level(f)?;
    let mut reps = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for o in 0..n {
        let c = y.to_dr(&level, o)?;
        reps.push(level.rep_ideal(c));
        labels.push(level.decode(c));
    }
    let t = DrTable {
        field,
        conductor: f.clone(),
        tag: BuildTag::Quotient,
        reps,
        labels,
        table,
        units,
    };
    Ok((y, t))
}

/// One ray class group per divisor; products of representative ideals
/// are reclassified, so the table closes by computation rather than by a
/// formula.
pub fn build_dr_decomp(store: &mut LevelStore, f: &IntegralIdeal) -> Result<DrTable, Error> {
    let field = store.field;
    let level = store.level(f)?;
    let n = level.size;
    let reps: Vec<IntegralIdeal> = (0..n).map(|x| level.rep_ideal(x)).collect();
    let labels: Vec<(usize, usize)> = (0..n).map(|x| level.decode(x)).collect();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let k = level.classify_ideal(&reps[i].mul(&reps[j]))?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    let units = units_from_table(&table)?;
    Ok(DrTable { field, conductor: f.clone(), tag: BuildTag::Decomp, reps, labels, table, units })
}

/// The comparison dictionary orbit -> class.  Failure to be a bijection
/// is fatal.
pub fn psi_map(y: &YSpace, level: &DrLevel) -> Result<Vec<usize>, Error> {
    if y.len() != level.size {
        return Err(Error::Inconsistent(format!(
            "orbit count {} differs from the structural size {}",
            y.len(),
            level.size
        )));
    }
    let mut map = Vec::with_capacity(y.len());
    let mut seen = vec![false; level.size];
    for o in 0..y.len() {
        let c = y.to_dr(level, o)?;
        if seen[c] {
            return Err(Error::Inconsistent("comparison map is not injective".into()));
        }
        seen[c] = true;
        map.push(c);
    }
    Ok(map)
}

/// Equivariance of the comparison map: ray classes act on the second
/// coordinate and match multiplication by units, and coprime ideals act
/// through the semigroup action and match multiplication by their class.
pub fn psi_equivariance(y: &YSpace, level: &DrLevel, map: &[usize]) -> Result<bool, Error> {
    let g = &y.ray.group;
    let coprime: Vec<IntegralIdeal> = IntegralIdeal::ideals_up_to(
        y.field,
        4 * y.conductor.norm().to_u64().unwrap_or(4).max(2),
    )
    .into_iter()
    .filter(|s| s.is_coprime(&y.conductor))
    .take(3)
    .collect();
    let one = y.ray.residue_ring().one();
    for o in 0..y.len() {
        let (r, a) = y.orbits[o][0];
        for gamma in 0..y.ray.order() {
            let moved = y.orbit_index((r, g.mul(a, g.inv(gamma))));
            let want = level.mul(map[o], level.index(0, gamma))?;
            if map[moved] != want {
                return Ok(false);
            }
        }
        for s in &coprime {
            let cs = y.ray.classify(s)?;
            let p = y.semigroup_act(cs, &one, (r, a))?;
            let want = level.mul(map[o], level.classify_ideal(s)?)?;
            if map[y.orbit_index(p)] != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All three builds with their dictionaries into the decomposition
/// build, each checked for the monoid axioms and for isomorphism.
pub struct TripleBuild {
    pub direct: DrTable,
    pub quotient: DrTable,
    pub decomp: DrTable,
    pub direct_dict: Vec<usize>,
    pub quotient_dict: Vec<usize>,
}

pub fn triple_build(store: &mut LevelStore, f: &IntegralIdeal) -> Result<TripleBuild, Error> {
    let direct = build_dr_direct(store, f)?;
    let (y, quotient) = build_dr_quotient(store, f)?;
    let decomp = build_dr_decomp(store, f)?;
    let level: Rc<DrLevel> = store.level(f)?;
    let quotient_dict = psi_map(&y, &level)?;
    if !psi_equivariance(&y, &level, &quotient_dict)? {
        return Err(Error::Inconsistent("comparison map is not equivariant".into()));
    }
    let direct_dict = direct
        .reps
        .iter()
        .map(|r| level.classify_ideal(r))
        .collect::<Result<Vec<usize>, Error>>()?;
    for t in [&direct, &quotient, &decomp] {
        check_monoid_axioms(&t.table, 0)?;
    }
    if !monoid_isomorphic(&direct, &decomp, &direct_dict) {
        return Err(Error::Inconsistent("direct and decomposition builds disagree".into()));
    }
    if !monoid_isomorphic(&quotient, &decomp, &quotient_dict) {
        return Err(Error::Inconsistent("quotient and decomposition builds disagree".into()));
    }
    Ok(TripleBuild { direct, quotient, decomp, direct_dict, quotient_dict })
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
    fn direct_build_rational_six_is_z_mod_six() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let t = build_dr_direct(&mut store, &int_ideal(q, 6)).unwrap();
        assert_eq!(t.reps.len(), 6);
        // Norm-minimal representatives are (1)..(6), so element i is the
        // residue i+1 mod 6 and the table is multiplication in Z/6.
        let residue: Vec<u64> = t.reps.iter().map(|r| r.norm().to_u64().unwrap() % 6).collect();
        for i in 0..6 {
            for j in 0..6 {
                let want = (residue[i] * residue[j]) % 6;
                assert_eq!(residue[t.table[i][j]], want, "{i} {j}");
            }
        }
        assert_eq!(t.units.len(), 2);
        check_monoid_axioms(&t.table, 0).unwrap();
    }

    #[test]
    fn psi_spec_point_rational_six() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let level = store.level(&f).unwrap();
        let y = YSpace::build(store.ray_group(&f).unwrap()).unwrap();
        // The point (2 mod 6, class of (5)) lands on the class of (4).
        let r2 = y
            .residues
            .iter()
            .position(|r| r.x == BigInt::from(2) && r.y == BigInt::from(0))
            .unwrap();
        let c5 = y.ray.classify(&int_ideal(q, 5)).unwrap();
        let o = y.orbit_index((r2, c5));
        let got = y.to_dr(&level, o).unwrap();
        assert_eq!(got, level.classify_ideal(&int_ideal(q, 4)).unwrap());
    }

    #[test]
    fn triple_builds_agree_on_small_grid() {
        let q = NumberField::rational();
        let mut qs = LevelStore::new(q);
        let tb = triple_build(&mut qs, &int_ideal(q, 6)).unwrap();
        assert_eq!(tb.decomp.table.len(), 6);

        let k = NumberField::quadratic(-1).unwrap();
        let mut ks = LevelStore::new(k);
        let pi = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let tb = triple_build(&mut ks, &pi).unwrap();
        assert_eq!(tb.decomp.table.len(), 2);
        let tb = triple_build(&mut ks, &int_ideal(k, 2)).unwrap();
        assert_eq!(tb.decomp.table.len(), 3);

        let r = NumberField::quadratic(2).unwrap();
        let mut rs = LevelStore::new(r);
        let tb = triple_build(&mut rs, &int_ideal(r, 2)).unwrap();
        assert_eq!(tb.decomp.table.len(), 4);
    }

    #[test]
    fn triple_build_with_class_number_two() {
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k);
        let tb = triple_build(&mut store, &IntegralIdeal::one(k)).unwrap();
        assert_eq!(tb.decomp.table.len(), 2);
        assert_eq!(tb.decomp.units.len(), 2);
    }

    #[test]
    fn units_read_off_the_table_match_labels() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let t = build_dr_decomp(&mut store, &int_ideal(q, 12)).unwrap();
        let from_labels: Vec<usize> = (0..t.table.len())
            .filter(|&x| t.labels[x].0 == 0)
            .collect();
        assert_eq!(t.units, from_labels);
    }

    #[test]
    fn axiom_checker_rejects_broken_tables() {
        // 2x2 with no identity row/column pairing.
        let broken = vec![vec![1, 1], vec![1, 0]];
        assert!(check_monoid_axioms(&broken, 0).is_err());
        // Commutative with identity but not associative:
        // 0 is the identity; 1*1 = 2, 1*2 = 2*1 = 1, 2*2 = 1.
        // Then (1*1)*2 = 2*2 = 1 but 1*(1*2) = 1*1 = 2.
        let nonassoc = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 1, 1]];
        assert!(check_monoid_axioms(&nonassoc, 0).is_err());
    }

    #[test]
    fn random_sampling_branch_on_large_cyclic_table() {
        let n = 600usize;
        let table: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        check_monoid_axioms(&table, 7).unwrap();
    }
}
