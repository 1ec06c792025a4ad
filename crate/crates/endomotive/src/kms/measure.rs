//! Measures on the finite levels of the tower.
//!
//! Every level carries its normalized counting measure.  Uniformity
//! asks that the projection to a coarser level pushes this measure to
//! the normalized counting measure there, which amounts to all fibers
//! having the same size.  The scaling condition asks that the
//! multiplication embedding by d divides measure by the norm of d.
//! Both hold on the nose over the rationals; over a general field the
//! finite levels can deviate, and the deviation is reported with the
//! fiber histogram rather than treated as fatal.

use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drmonoid::maps::{mult_embed, project};
use crate::drmonoid::{DrLevel, LevelStore};
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

pub struct LevelMeasure {
    pub level: Rc<DrLevel>,
    pub weights: Vec<BigRational>,
}

impl LevelMeasure {
    pub fn new(level: Rc<DrLevel>, weights: Vec<BigRational>) -> Result<Self, Error> {
        if weights.len() != level.size {
            return Err(Error::Inconsistent("weight vector does not match the level".into()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Inconsistent("measure weights must be non-negative".into()));
        }
        Ok(LevelMeasure { level, weights })
    }

    pub fn normalized(store: &mut LevelStore, f: &IntegralIdeal) -> Result<Self, Error> {
        let level = store.level(f)?;
        let w = BigRational::new(BigInt::one(), BigInt::from(level.size));
        let weights = vec![w; level.size];
        LevelMeasure::new(level, weights)
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }

    pub fn mass(&self, set: &[usize]) -> BigRational {
        set.iter().map(|&x| self.weights[x].clone()).sum()
    }
}

pub struct UniformityReport {
    pub fine_size: usize,
    pub coarse_size: usize,
    pub uniform: bool,
    /// (fiber size, how many fibers).
    pub histogram: Vec<(usize, usize)>,
}

/// Push the normalized counting measure down the projection and compare
/// with the coarse normalized counting measure, element by element.
pub fn check_uniformity(
    store: &mut LevelStore,
    fine: &IntegralIdeal,
    coarse: &IntegralIdeal,
) -> Result<UniformityReport, Error> {
    let pr = project(store, fine, coarse)?;
    let sizes = pr.fiber_sizes();
    let expected = BigRational::new(BigInt::one(), BigInt::from(pr.coarse.size));
    let fine_total = BigInt::from(pr.fine.size);
    let uniform = sizes
        .iter()
        .all(|&s| BigRational::new(BigInt::from(s), fine_total.clone()) == expected);
    let mut histogram: Vec<(usize, usize)> = Vec::new();
    for s in sizes {
        match histogram.iter_mut().find(|(k, _)| *k == s) {
            Some((_, c)) => *c += 1,
            None => histogram.push((s, 1)),
        }
    }
    histogram.sort();
    Ok(UniformityReport {
        fine_size: pr.fine.size,
        coarse_size: pr.coarse.size,
        uniform,
        histogram,
    })
}

pub struct ScalingReport {
    pub checks: usize,
    pub exact: bool,
    /// Subsets where the scaling identity failed, with both sides.
    pub deviations: Vec<(Vec<usize>, BigRational, BigRational)>,
}

/// mu_{fd}(d Z) versus N(d)^{-1} mu_f(Z) for the given subsets of DR_f.
pub fn check_scaling(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    d: &IntegralIdeal,
    sets: &[Vec<usize>],
) -> Result<ScalingReport, Error> {
    let em = mult_embed(store, f, d)?;
    let mu_f = LevelMeasure::new(
        em.base.clone(),
        vec![BigRational::new(BigInt::one(), BigInt::from(em.base.size)); em.base.size],
    )?;
    let mu_fd = LevelMeasure::new(
        em.target.clone(),
        vec![BigRational::new(BigInt::one(), BigInt::from(em.target.size)); em.target.size],
    )?;
    let norm_inv = BigRational::new(BigInt::one(), d.norm());
    let mut deviations = Vec::new();
    for z in sets {
        let image: Vec<usize> = z.iter().map(|&x| em.map[x]).collect();
        let lhs = mu_fd.mass(&image);
        let rhs = &norm_inv * mu_f.mass(z);
        if lhs != rhs {
            deviations.push((z.clone(), lhs, rhs));
        }
    }
    Ok(ScalingReport { checks: sets.len(), exact: deviations.is_empty(), deviations })
}

/// All singletons plus seeded random subsets.
pub fn scaling_suite(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    d: &IntegralIdeal,
    seed: u64,
    samples: usize,
) -> Result<ScalingReport, Error> {
    let n = store.level(f)?.size;
    let mut sets: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let set: Vec<usize> = (0..n).filter(|_| rng.gen_range(0..2) == 1).collect();
        sets.push(set);
    }
    check_scaling(store, f, d, &sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::{FieldElement, NumberField};

    fn ideal(field: NumberField, n: i64) -> IntegralIdeal {
        IntegralIdeal::from_integer(field, &BigInt::from(n)).unwrap()
    }

    #[test]
    fn rational_tower_is_uniform() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = check_uniformity(&mut store, &ideal(q, 12), &ideal(q, 6)).unwrap();
        assert!(rep.uniform);
        assert_eq!(rep.fine_size, 12);
        assert_eq!(rep.coarse_size, 6);
        assert_eq!(rep.histogram, vec![(2, 6)]);

        let rep = check_uniformity(&mut store, &ideal(q, 6), &ideal(q, 6)).unwrap();
        assert!(rep.uniform);
        assert_eq!(rep.histogram, vec![(1, 6)]);
    }

    #[test]
    fn ramified_real_quadratic_is_uniform() {
        let k = NumberField::quadratic(2).unwrap();
        let mut store = LevelStore::new(k);
        let sqrt2 = IntegralIdeal::from_element(k, &FieldElement::from_int(0, 1)).unwrap();
        let rep = check_uniformity(&mut store, &ideal(k, 2), &sqrt2).unwrap();
        assert_eq!(rep.fine_size, 4);
        assert_eq!(rep.coarse_size, 2);
        assert!(rep.uniform);
        assert_eq!(rep.histogram, vec![(2, 2)]);
    }

    #[test]
    fn gauss_levels_deviate_from_uniformity() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let half = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let rep = check_uniformity(&mut store, &ideal(k, 2), &half).unwrap();
        assert_eq!(rep.fine_size, 3);
        assert_eq!(rep.coarse_size, 2);
        assert!(!rep.uniform);
        assert_eq!(rep.histogram, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn rational_scaling_is_exact() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let rep = scaling_suite(&mut store, &ideal(q, 3), &ideal(q, 2), 1, 5).unwrap();
        assert!(rep.exact);
        assert_eq!(rep.checks, 8);

        let f = ideal(q, 3);
        let d = ideal(q, 2);
        let em = mult_embed(&mut store, &f, &d).unwrap();
        let singleton = vec![1usize];
        let rep = check_scaling(&mut store, &f, &d, &[singleton.clone()]).unwrap();
        assert!(rep.exact);
        assert_eq!(em.target.size, 6);

        let rep = scaling_suite(&mut store, &ideal(q, 3), &ideal(q, 1), 2, 3).unwrap();
        assert!(rep.exact);
    }

    #[test]
    fn gauss_scaling_records_the_deviation() {
        let k = NumberField::quadratic(-1).unwrap();
        let mut store = LevelStore::new(k);
        let half = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        let rep = scaling_suite(&mut store, &half, &half, 3, 2).unwrap();
        assert!(!rep.exact);
        let (_, lhs, rhs) = &rep.deviations[0];
        assert_eq!(*lhs, BigRational::new(BigInt::one(), BigInt::from(3)));
        assert_eq!(*rhs, BigRational::new(BigInt::one(), BigInt::from(4)));
    }

    #[test]
    fn measures_are_validated() {
        let q = NumberField::rational();
        let mut store = LevelStore::new(q);
        let mu = LevelMeasure::normalized(&mut store, &ideal(q, 6)).unwrap();
        assert_eq!(mu.total(), BigRational::one());
        assert!(mu.mass(&[0, 1]) == BigRational::new(BigInt::from(2), BigInt::from(6)));
        let level = store.level(&ideal(q, 6)).unwrap();
        let bad = vec![BigRational::from_integer(BigInt::from(-1)); level.size];
        assert!(LevelMeasure::new(level, bad).is_err());
    }
}
