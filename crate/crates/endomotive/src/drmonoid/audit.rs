//! Audits of the monoid construction.
//!
//! The cardinality audit tabulates |DR_f| fiber by fiber and compares it
//! against the two candidate closed forms 2^{r1} h N(f) and h^+ N(f); it
//! records the comparison without asserting either one, since away from
//! the rationals both can fail.  The triple agreement audit cross-checks
//! the structural classification against the honest pairwise relation and
//! the balanced-product model on the same set of ideals.

use num_bigint::BigInt;
use num_traits::One;

use super::yspace::YSpace;
use super::{default_enumeration_bound, enumerate_classes, LevelStore};
use crate::classgroups::ClassGroup;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::NumberField;

#[derive(Debug, Clone)]
pub struct CardinalityAudit {
    pub field: NumberField,
    pub conductor: IntegralIdeal,
    pub computed: usize,
    /// 2^{r1} h N(f).
    pub sign_class_formula: BigInt,
    /// h^+ N(f).
    pub narrow_formula: BigInt,
    /// Divisor of f together with the fiber size |C_{f/d}|.
    pub fibers: Vec<(IntegralIdeal, usize)>,
}

impl CardinalityAudit {
    pub fn matches_sign_class(&self) -> bool {
        BigInt::from(self.computed) == self.sign_class_formula
    }

    pub fn matches_narrow(&self) -> bool {
        BigInt::from(self.computed) == self.narrow_formula
    }
}

pub fn cardinality_audit(
    store: &mut LevelStore,
    conductor: &IntegralIdeal,
) -> Result<CardinalityAudit, Error> {
    let field = store.field;
    let level = store.level(conductor)?;
    let fibers: Vec<(IntegralIdeal, usize)> = level
        .divisors
        .iter()
        .cloned()
        .zip(level.groups.iter().map(|g| g.order()))
        .collect();
    let computed = level.size;
    let h = ClassGroup::compute(field)?.number();
    let hplus = store.ray_group(&IntegralIdeal::one(field))?.order();
    let r1 = field.signature().0;
    let nf = conductor.norm();
    let sign_class_formula = (BigInt::one() << r1) * BigInt::from(h) * &nf;
    let narrow_formula = BigInt::from(hplus) * &nf;
    Ok(CardinalityAudit {
        field,
        conductor: conductor.clone(),
        computed,
        sign_class_formula,
        narrow_formula,
        fibers,
    })
}

#[derive(Debug, Clone)]
pub struct TripleAgreement {
    pub structural_size: usize,
    pub honest_classes: usize,
    pub balanced_orbits: usize,
    pub ideals_checked: usize,
    pub agreed: bool,
}

/// Compare the three constructions of DR_f on every ideal of norm up to
/// the enumeration bound (at least large enough to meet every class).
pub fn triple_agreement(
    store: &mut LevelStore,
    conductor: &IntegralIdeal,
    bound: u64,
) -> Result<TripleAgreement, Error> {
    let field = store.field;
    let level = store.level(conductor)?;
    let bound = bound.max(default_enumeration_bound(store, conductor)?);
    let classes = enumerate_classes(field, conductor, bound)?;
    let mut agreed = classes.len() == level.size;
    let mut checked = 0usize;
    let mut labels = Vec::new();
    for cls in &classes {
        let c0 = level.classify_ideal(&cls[0])?;
        for a in cls {
            checked += 1;
            if level.classify_ideal(a)? != c0 {
                agreed = false;
            }
        }
        labels.push(c0);
    }
    labels.sort();
    labels.dedup();
    if labels.len() != classes.len() {
        agreed = false;
    }
    let y = YSpace::build(store.ray_group(conductor)?)?;
    if y.len() != level.size {
        agreed = false;
    }
    let mut images: Vec<usize> = (0..y.len())
        .map(|o| y.to_dr(&level, o))
        .collect::<Result<_, _>>()?;
    images.sort();
    images.dedup();
    if images.len() != level.size {
        agreed = false;
    }
    Ok(TripleAgreement {
        structural_size: level.size,
        honest_classes: classes.len(),
        balanced_orbits: y.len(),
        ideals_checked: checked,
        agreed,
    })
}
