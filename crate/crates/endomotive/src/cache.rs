//! On-disk snapshots of monoid levels.
//!
//! A cache entry stores the field parameter, the conductor, one
//! representative ideal per element in HNF, the unit set and the full
//! multiplication table. Reloading rebuilds the level from scratch and
//! checks that classifying the stored representatives gives a monoid
//! isomorphism, so a stale or corrupted entry cannot pass silently.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::{IdealRepr, IntegralIdeal};
use crate::verify::{conductor_tag, field_tag, parse_field};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CachedMonoid {
    /// Quadratic parameter; 0 stands for the rational field.
    pub m: i64,
    /// HNF triple of the conductor as decimal strings (n, 0, 1 over the
    /// rationals).
    pub conductor: [String; 3],
    pub size: usize,
    /// Indices of the invertible elements.
    pub units: Vec<usize>,
    /// One representative ideal per element, HNF triples.
    pub reps: Vec<[String; 3]>,
    pub table: Vec<Vec<usize>>,
}

fn triple_of(ideal: &IntegralIdeal) -> [String; 3] {
    match &ideal.repr {
        IdealRepr::Rational { n } => [n.to_string(), "0".to_string(), "1".to_string()],
        IdealRepr::Quadratic { a, c, d } => [a.to_string(), c.to_string(), d.to_string()],
    }
}

fn ideal_of(m: i64, triple: &[String; 3]) -> Result<IntegralIdeal, Error> {
    let field = parse_field(m)?;
    let parse = |s: &String| {
        BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad integer {s} in cache entry")))
    };
    let a = parse(&triple[0])?;
    if field.is_rational() {
        IntegralIdeal::from_integer(field, &a)
    } else {
        IntegralIdeal::from_triple(field, &a, &parse(&triple[1])?, &parse(&triple[2])?)
    }
}

pub fn cache_key(m: i64, f: &IntegralIdeal) -> String {
    format!("{}.{}", field_tag(m), conductor_tag(f))
}

pub fn monoid_snapshot(
    store: &mut LevelStore,
    m: i64,
    f: &IntegralIdeal,
) -> Result<CachedMonoid, Error> {
    let level = store.level(f)?;
    let reps = (0..level.size).map(|i| triple_of(&level.rep_ideal(i))).collect();
    Ok(CachedMonoid {
        m,
        conductor: triple_of(f),
        size: level.size,
        units: level.unit_indices().collect(),
        reps,
        table: level.monoid_table()?,
    })
}

pub fn save_monoid(
    dir: &Path,
    store: &mut LevelStore,
    m: i64,
    f: &IntegralIdeal,
) -> Result<PathBuf, Error> {
    let snap = monoid_snapshot(store, m, f)?;
    fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    let path = dir.join(format!("{}.json", cache_key(m, f)));
    let text = serde_json::to_string_pretty(&snap).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&path, text).map_err(|e| Error::Io(e.to_string()))?;
    Ok(path)
}

pub fn load_monoid(path: &Path) -> Result<CachedMonoid, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn cached_path(dir: &Path, m: i64, f: &IntegralIdeal) -> PathBuf {
    dir.join(format!("{}.json", cache_key(m, f)))
}

/// Rebuild the level and check that the stored representatives realize
/// a monoid isomorphism onto it, units onto units.
pub fn check_cached(cached: &CachedMonoid) -> Result<(), Error> {
    let field = parse_field(cached.m)?;
    let f = ideal_of(cached.m, &cached.conductor)?;
    let mut store = LevelStore::new(field);
    let level = store.level(&f)?;
    if level.size != cached.size {
        return Err(Error::Inconsistent(format!(
            "cached size {} but fresh build has {}",
            cached.size, level.size
        )));
    }
    if cached.reps.len() != cached.size
        || cached.table.len() != cached.size
        || cached.table.iter().any(|row| row.len() != cached.size)
    {
        return Err(Error::Parse("cache entry tables have the wrong shape".into()));
    }
    let mut dict = Vec::with_capacity(cached.size);
    for t in &cached.reps {
        dict.push(level.classify_ideal(&ideal_of(cached.m, t)?)?);
    }
    let mut seen = dict.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != cached.size {
        return Err(Error::Inconsistent("cached representatives do not separate classes".into()));
    }
    for i in 0..cached.size {
        for j in 0..cached.size {
            if dict[cached.table[i][j]] != level.mul(dict[i], dict[j])? {
                return Err(Error::Inconsistent(format!(
                    "cached product table disagrees at ({i}, {j})"
                )));
            }
        }
    }
    let mut cached_units: Vec<usize> = cached.units.iter().map(|&u| dict[u]).collect();
    cached_units.sort_unstable();
    let fresh_units: Vec<usize> = level.unit_indices().collect();
    if cached_units != fresh_units {
        return Err(Error::Inconsistent("cached unit set disagrees with the fresh build".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::NumberField;

    fn int_ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn save_reload_check_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 6);
        let path = save_monoid(dir.path(), &mut store, 0, &f).unwrap();
        assert_eq!(path, cached_path(dir.path(), 0, &f));
        let cached = load_monoid(&path).unwrap();
        assert_eq!(cached.size, 6);
        assert_eq!(cached.units.len(), 2);
        check_cached(&cached).unwrap();
    }

    #[test]
    fn quadratic_entry_round_trips_the_hnf_triples() {
        let dir = tempfile::tempdir().unwrap();
        let k = NumberField::quadratic(-5).unwrap();
        let mut store = LevelStore::new(k);
        let f = int_ideal(k, 3);
        let path = save_monoid(dir.path(), &mut store, -5, &f).unwrap();
        let cached = load_monoid(&path).unwrap();
        assert_eq!(cached.size, 10);
        check_cached(&cached).unwrap();
        let back = ideal_of(-5, &cached.conductor).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn tampered_table_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let f = int_ideal(q, 4);
        let path = save_monoid(dir.path(), &mut store, 0, &f).unwrap();
        let mut cached = load_monoid(&path).unwrap();
        let h = cached.table[1][1];
        cached.table[1][1] = (h + 1) % cached.size;
        assert!(check_cached(&cached).is_err());
    }

    #[test]
    fn corrupt_json_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{ not json").unwrap();
        match load_monoid(&path) {
            Err(Error::Parse(_)) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
