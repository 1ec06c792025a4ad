//! Unit groups, totally positive lifts and ray generator searches.
//!
//! The fundamental unit of a real quadratic field is computed from the
//! continued fraction of w: when a complete quotient repeats, the
//! corresponding automorph of the expansion yields the unit directly.
//! Searches for ray class representatives reduce to one generator search
//! per ideal plus a finite scan over a unit coset, with congruences
//! decided in a residue ring and signs decided exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

use super::ideal::{FractionalIdeal, IdealRepr, IntegralIdeal};
use super::residue::{Residue, ResidueRing};
use super::{FieldElement, FieldKind, NumberField};
use crate::error::Error;

/// Torsion part and (for real quadratic fields) fundamental unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroup {
    pub field: NumberField,
    pub torsion_order: u32,
    pub torsion_gen: FieldElement,
    pub fundamental: Option<FieldElement>,
}

impl UnitGroup {
    pub fn compute(field: NumberField) -> Self {
        let (torsion_order, torsion_gen) = match field.kind {
            FieldKind::Rational => (2, FieldElement::from_int(-1, 0)),
            FieldKind::Quadratic { m: -1 } => (4, FieldElement::from_int(0, 1)),
            FieldKind::Quadratic { m: -3 } => (6, FieldElement::from_int(0, 1)),
            FieldKind::Quadratic { .. } => (2, FieldElement::from_int(-1, 0)),
        };
        let fundamental = match field.kind {
            FieldKind::Quadratic { m } if m > 0 => Some(fundamental_unit(field, m)),
            _ => None,
        };
        UnitGroup { field, torsion_order, torsion_gen, fundamental }
    }

    /// All roots of unity.
    pub fn torsion_elements(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.torsion_order as usize);
        let mut acc = FieldElement::one();
        for _ in 0..self.torsion_order {
            out.push(acc.clone());
            acc = self.field.mul(&acc, &self.torsion_gen);
        }
        out
    }

    /// Norm of the fundamental unit, when there is one.
    pub fn fundamental_norm(&self) -> Option<i8> {
        self.fundamental.as_ref().map(|e| {
            let n = self.field.norm(e);
            if n.is_one() {
                1
            } else {
                -1
            }
        })
    }
}

/// Generators of the group of totally positive units.  Over the
/// rationals this group is trivial; in the imaginary case positivity is
/// vacuous and every root of unity qualifies; in the real case the
/// answer is the fundamental unit or its square, depending on its norm.
pub fn totally_positive_unit_generators(field: NumberField) -> Vec<FieldElement> {
    let ug = UnitGroup::compute(field);
    match field.kind {
        FieldKind::Rational => Vec::new(),
        FieldKind::Quadratic { m } if m < 0 => vec![ug.torsion_gen],
        FieldKind::Quadratic { .. } => {
            let eps = ug.fundamental.expect("real quadratic field has a fundamental unit");
            if field.is_totally_positive(&eps) {
                vec![eps]
            } else {
                vec![field.mul(&eps, &eps)]
            }
        }
    }
}

/// Fundamental unit of Q(sqrt(m)), m > 1 squarefree, normalized to be
/// greater than 1 at the first real embedding.
fn fundamental_unit(field: NumberField, m: i64) -> FieldElement {
    let d = BigInt::from(m);
    let s = d.sqrt();
    let (mut p, mut q) = if m.rem_euclid(4) == 1 {
        (BigInt::one(), BigInt::from(2))
    } else {
        (BigInt::zero(), BigInt::one())
    };
    // Convergent matrix for the expansion so far.
    let mut mat = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    let mut seen: HashMap<(BigInt, BigInt), (usize, [[BigInt; 2]; 2], BigInt, BigInt)> =
        HashMap::new();
    for step in 0..10_000usize {
        if let Some((_, mj, pj, qj)) = seen.get(&(p.clone(), q.clone())) {
            // The automorph fixing the repeated complete quotient.
            let det = &mj[0][0] * &mj[1][1] - &mj[0][1] * &mj[1][0];
            let inv = [
                [&mj[1][1] * &det, -(&mj[0][1]) * &det],
                [-(&mj[1][0]) * &det, &mj[0][0] * &det],
            ];
            let t10 = &inv[1][0] * &mat[0][0] + &inv[1][1] * &mat[1][0];
            let t11 = &inv[1][0] * &mat[0][1] + &inv[1][1] * &mat[1][1];
            // eps = t10 * xi + t11 with xi = (pj + sqrt(m))/qj.
            let xs = BigRational::new(&t10 * pj + &t11 * qj, qj.clone());
            let ys = BigRational::new(t10, qj.clone());
            let elem = from_sqrt_basis(field, &xs, &ys);
            return normalize_unit(field, elem);
        }
        seen.insert((p.clone(), q.clone()), (step, mat.clone(), p.clone(), q.clone()));
        let a = (&p + &s).div_floor(&q);
        let np = &a * &q - &p;
        let nq = (&d - &np * &np) / &q;
        assert!(nq.is_positive(), "continued fraction quotient went negative");
        let c0 = [
            [&mat[0][0] * &a + &mat[0][1], mat[0][0].clone()],
            [&mat[1][0] * &a + &mat[1][1], mat[1][0].clone()],
        ];
        mat = c0;
        p = np;
        q = nq;
    }
    panic!("continued fraction did not become periodic");
}

fn from_sqrt_basis(field: NumberField, xs: &BigRational, ys: &BigRational) -> FieldElement {
    if field.omega_trace() == 1 {
        let b = ys + ys;
        let a = xs - ys;
        FieldElement::new(a, b)
    } else {
        FieldElement::new(xs.clone(), ys.clone())
    }
}

fn normalize_unit(field: NumberField, e: FieldElement) -> FieldElement {
    assert!(e.is_integral(), "unit should be integral");
    assert!(field.norm(&e).abs().is_one(), "automorph should have norm +-1");
    let one = FieldElement::one();
    let cands = [
        e.clone(),
        field.neg(&e),
        field.conj(&e),
        field.neg(&field.conj(&e)),
    ];
    for c in cands {
        if field.cmp_real(&c, &one) == std::cmp::Ordering::Greater {
            return c;
        }
    }
    panic!("no associate of the unit exceeds 1");
}

/// Deterministic totally positive lift of a residue class.
///
/// Scans square shells of coordinates, first coordinate ascending and
/// second descending, and returns the first nonzero representative that
/// is congruent to the class and positive at every real embedding.
pub fn totally_positive_lift(
    field: NumberField,
    ring: &ResidueRing,
    r: &Residue,
) -> Result<FieldElement, Error> {
    let target = r.to_element();
    let cap: i64 = {
        let n = ring.size().to_i64().unwrap_or(i64::MAX / 128);
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
                let diff = field.sub(&e, &target);
                if !ring.modulus.contains_element(&diff) {
                    continue;
                }
                let ok = match field.kind {
                    FieldKind::Quadratic { m } if m < 0 => true,
                    _ => field.is_totally_positive(&e),
                };
                if ok {
                    return Ok(e);
                }
            }
        }
    }
    Err(Error::BoundExceeded("no totally positive lift within shell cap".into()))
}

/// How a ray generator search can conclude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(FieldElement),
    NotPrincipal,
    NoAdmissibleGenerator,
}

/// Congruence condition imposed on the generator.
#[derive(Debug, Clone, Copy)]
pub enum Congruence<'a> {
    None,
    /// x - 1 must lie in the given fractional ideal.
    Additive(&'a FractionalIdeal),
    /// x must be a quotient of integral elements coprime to the modulus
    /// that agree mod it.
    Multiplicative(&'a IntegralIdeal),
}

/// Look for a generator x of `target` with x totally positive (when
/// requested) and satisfying the congruence.
pub fn ray_generator_search(
    field: NumberField,
    target: &FractionalIdeal,
    congruence: Congruence<'_>,
    totally_positive: bool,
) -> Result<SearchOutcome, Error> {
    let y0 = match plain_generator(field, &target.num) {
        Some(y) => y,
        None => return Ok(SearchOutcome::NotPrincipal),
    };
    match unit_coset_scan(field, &y0, &target.den, congruence, totally_positive)? {
        Some(x) => Ok(SearchOutcome::Found(x)),
        None => Ok(SearchOutcome::NoAdmissibleGenerator),
    }
}

/// Any generator of an integral ideal, or None when the ideal is not
/// principal.  Deterministic.
pub fn plain_generator(field: NumberField, ideal: &IntegralIdeal) -> Option<FieldElement> {
    match &ideal.repr {
        IdealRepr::Rational { n } => Some(FieldElement::from_bigint(n.clone(), BigInt::zero())),
        IdealRepr::Quadratic { .. } => {
            let nrm = ideal.norm();
            match field.kind {
                FieldKind::Quadratic { m } if m < 0 => imaginary_generator(field, ideal, &nrm),
                FieldKind::Quadratic { .. } => real_generator(field, ideal, &nrm),
                FieldKind::Rational => unreachable!(),
            }
        }
    }
}

fn imaginary_generator(
    field: NumberField,
    ideal: &IntegralIdeal,
    nrm: &BigInt,
) -> Option<FieldElement> {
    // 4N(x + y w) = (2x + ty)^2 + |disc| y^2.
    let t = BigInt::from(field.omega_trace());
    let absd = BigInt::from(field.discriminant().abs());
    let four_n: BigInt = nrm * 4i32;
    let ymax: BigInt = (&four_n / &absd).sqrt() + 1i32;
    let ymax = ymax.to_i64().expect("generator search bound");
    for y in -ymax..=ymax {
        let yb = BigInt::from(y);
        let s2 = &four_n - &absd * &yb * &yb;
        if s2.is_negative() {
            continue;
        }
        let s = s2.sqrt();
        if &s * &s != s2 {
            continue;
        }
        for sg in [s.clone(), -s.clone()] {
            let two_x = &sg - &t * &yb;
            if !(&two_x % 2i32).is_zero() {
                continue;
            }
            let x = two_x / 2;
            let e = FieldElement::from_bigint(x, yb.clone());
            if e.is_zero() {
                continue;
            }
            if ideal.contains_element(&e) && field.norm(&e).to_integer() == *nrm {
                return Some(e);
            }
        }
    }
    None
}

fn real_generator(field: NumberField, ideal: &IntegralIdeal, nrm: &BigInt) -> Option<FieldElement> {
    // A principal ideal has a generator whose first embedding lies in
    // [sqrt(N), sqrt(N) * eps), which bounds the w-coordinate.
    let m = field.m().unwrap();
    let units = UnitGroup::compute(field);
    let eps = units.fundamental.clone().unwrap();
    let (ea, eb) = eps.int_coords().unwrap();
    let sm = BigInt::from(m).sqrt();
    let t = field.omega_trace();
    let ebound = if t == 1 {
        // sigma1(a + b w) <= a + b(1 + sqrt(m))/2 <= a + b(1 + floor + 1)/2.
        &ea + &eb * (&sm + 2i32)
    } else {
        &ea + &eb * (&sm + 1i32)
    };
    let s = nrm.sqrt() + 1i32;
    let ys = (&s * (&ebound + 1i32)) / (&sm * 2i32) + 2i32;
    let by = if t == 1 { &ys * 2i32 + 2i32 } else { ys.clone() };
    let by = by.to_i64().expect("generator search bound");
    let n = BigInt::from(field.omega_norm());
    let tb = BigInt::from(t);
    for y in -by..=by {
        let yb = BigInt::from(y);
        for target in [nrm.clone(), -nrm.clone()] {
            // x^2 + t x y + n y^2 = target.
            let disc = &tb * &tb * &yb * &yb - (&n * &yb * &yb - &target) * 4i32;
            if disc.is_negative() {
                continue;
            }
            let r = disc.sqrt();
            if &r * &r != disc {
                continue;
            }
            for sg in [r.clone(), -r.clone()] {
                let two_x = &sg - &tb * &yb;
                if !(&two_x % 2i32).is_zero() {
                    continue;
                }
                let x = two_x / 2;
                let e = FieldElement::from_bigint(x, yb.clone());
                if e.is_zero() {
                    continue;
                }
                if ideal.contains_element(&e) && field.norm(&e).to_integer().abs() == *nrm {
                    return Some(e);
                }
            }
        }
    }
    None
}

/// Scan the coset y0 * units / den for an element meeting the congruence
/// and positivity constraints.  Returns the witness, if any.
pub fn unit_coset_scan(
    field: NumberField,
    y0: &FieldElement,
    den: &BigInt,
    congruence: Congruence<'_>,
    totally_positive: bool,
) -> Result<Option<FieldElement>, Error> {
    enum Ctx {
        Ring { ring: ResidueRing, base: Residue, want: Residue },
        Member { modulus: IntegralIdeal, shift: FieldElement },
    }
    let ctx = match congruence {
        Congruence::None => None,
        Congruence::Additive(m) => {
            let ring = ResidueRing::new(field, m.num.mul_scalar(den));
            let t = BigRational::from_integer(m.den.clone());
            let base = ring.reduce(&field.mul_scalar(y0, &t))?;
            let want = ring.reduce(&FieldElement::from_bigint(
                &m.den * den,
                BigInt::zero(),
            ))?;
            Some(Ctx::Ring { ring, base, want })
        }
        Congruence::Multiplicative(f) => {
            // y u / den is 1 mod* f exactly when v_P(y u - den) reaches
            // v_P(f) + v_P(den) at every prime P of f, which is membership
            // of y u - den in f deepened by the den valuations.
            let mut modulus = f.clone();
            if !f.is_one() {
                let den_ideal = IntegralIdeal::from_integer(field, den)?;
                for (p, _) in f.factor() {
                    let v = den_ideal.valuation(&p);
                    if v > 0 {
                        modulus = modulus.mul(&p.pow(v));
                    }
                }
            }
            let shift = FieldElement::from_bigint(den.clone(), BigInt::zero());
            Some(Ctx::Member { modulus, shift })
        }
    };
    let units = UnitGroup::compute(field);
    let den_rat = BigRational::from_integer(den.clone());
    let accept = |u: &FieldElement| -> Option<FieldElement> {
        let yu = field.mul(y0, u);
        if totally_positive && !vacuous_or_positive(field, &yu) {
            return None;
        }
        match &ctx {
            None => {}
            Some(Ctx::Ring { ring, base, want }) => {
                let ru = ring.reduce(u).ok()?;
                if ring.mul(base, &ru) != *want {
                    return None;
                }
            }
            Some(Ctx::Member { modulus, shift }) => {
                if !modulus.contains_element(&field.sub(&yu, shift)) {
                    return None;
                }
            }
        }
        let x = FieldElement::new(&yu.a / &den_rat, &yu.b / &den_rat);
        Some(x)
    };
    if units.fundamental.is_none() {
        // Finitely many units: the torsion elements.
        for u in units.torsion_elements() {
            if let Some(x) = accept(&u) {
                return Ok(Some(x));
            }
        }
        return Ok(None);
    }
    let eps = units.fundamental.clone().unwrap();
    let period = match &ctx {
        None => 2u64,
        Some(Ctx::Ring { ring, .. }) => {
            let re = ring.reduce(&eps)?;
            let ord = ring.unit_order(&re)?;
            ord.lcm(&2)
        }
        Some(Ctx::Member { modulus, .. }) => {
            let ring = ResidueRing::new(field, modulus.clone());
            let re = ring.reduce(&eps)?;
            let ord = ring.unit_order(&re)?;
            ord.lcm(&2)
        }
    };
    let mut pw = FieldElement::one();
    for _ in 0..period {
        for u in [pw.clone(), field.neg(&pw)] {
            if let Some(x) = accept(&u) {
                return Ok(Some(x));
            }
        }
        pw = field.mul(&pw, &eps);
    }
    Ok(None)
}

fn vacuous_or_positive(field: NumberField, e: &FieldElement) -> bool {
    match field.kind {
        FieldKind::Quadratic { m } if m < 0 => !e.is_zero(),
        _ => field.is_totally_positive(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_units_match_tables() {
        let cases: Vec<(i64, (i64, i64), i8)> = vec![
            (2, (1, 1), -1),
            (3, (2, 1), 1),
            (5, (0, 1), -1),
            (6, (5, 2), 1),
            (7, (8, 3), 1),
            (10, (3, 1), -1),
            (11, (10, 3), 1),
            (13, (1, 1), -1),
            (14, (15, 4), 1),
            (15, (4, 1), 1),
            (19, (170, 39), 1),
            (21, (2, 1), 1),
        ];
        for (m, (a, b), nrm) in cases {
            let k = NumberField::quadratic(m).unwrap();
            let u = UnitGroup::compute(k);
            let eps = u.fundamental.clone().unwrap();
            assert_eq!(eps, FieldElement::from_int(a, b), "m = {m}");
            assert_eq!(u.fundamental_norm(), Some(nrm), "m = {m}");
        }
    }

    #[test]
    fn fundamental_unit_is_minimal() {
        // No unit strictly between 1 and eps: scan all candidate
        // w-coordinates up to that of eps.
        for m in [2i64, 3, 5, 6, 7, 10, 13] {
            let k = NumberField::quadratic(m).unwrap();
            let u = UnitGroup::compute(k);
            let eps = u.fundamental.clone().unwrap();
            let (_, eb) = eps.int_coords().unwrap();
            let bmax = eb.to_i64().unwrap();
            let one = FieldElement::one();
            for b in 1..=bmax {
                for a in -200..=200i64 {
                    let e = FieldElement::from_int(a, b);
                    if !k.norm(&e).abs().is_one() {
                        continue;
                    }
                    if k.cmp_real(&e, &one) == std::cmp::Ordering::Greater {
                        assert!(k.cmp_real(&e, &eps) != std::cmp::Ordering::Less, "m={m} {a}+{b}w");
                    }
                }
            }
        }
    }

    #[test]
    fn torsion_orders() {
        assert_eq!(UnitGroup::compute(NumberField::rational()).torsion_order, 2);
        assert_eq!(
            UnitGroup::compute(NumberField::quadratic(-1).unwrap()).torsion_order,
            4
        );
        assert_eq!(
            UnitGroup::compute(NumberField::quadratic(-3).unwrap()).torsion_order,
            6
        );
        assert_eq!(
            UnitGroup::compute(NumberField::quadratic(-7).unwrap()).torsion_order,
            2
        );
        let g = UnitGroup::compute(NumberField::quadratic(-1).unwrap());
        assert_eq!(g.torsion_elements().len(), 4);
    }

    #[test]
    fn lift_examples() {
        let q = NumberField::rational();
        let four = IntegralIdeal::from_integer(q, &BigInt::from(4)).unwrap();
        let ring = ResidueRing::new(q, four);
        let r3 = ring.reduce(&FieldElement::from_int(3, 0)).unwrap();
        assert_eq!(
            totally_positive_lift(q, &ring, &r3).unwrap(),
            FieldElement::from_int(3, 0)
        );
        let five = IntegralIdeal::from_integer(q, &BigInt::from(5)).unwrap();
        let ring5 = ResidueRing::new(q, five);
        let r0 = ring5.zero();
        assert_eq!(
            totally_positive_lift(q, &ring5, &r0).unwrap(),
            FieldElement::from_int(5, 0)
        );
    }

    #[test]
    fn lift_real_quadratic() {
        let k = NumberField::quadratic(2).unwrap();
        let two = IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap();
        let ring = ResidueRing::new(k, two);
        let r = ring.reduce(&FieldElement::from_int(1, 1)).unwrap();
        let lift = totally_positive_lift(k, &ring, &r).unwrap();
        assert_eq!(lift, FieldElement::from_int(3, 1));
        assert!(k.is_totally_positive(&lift));
    }

    #[test]
    fn plain_generators() {
        let k = NumberField::quadratic(-1).unwrap();
        for i in IntegralIdeal::ideals_up_to(k, 30) {
            let g = plain_generator(k, &i).unwrap();
            assert_eq!(IntegralIdeal::from_element(k, &g).unwrap(), i);
        }
        let r = NumberField::quadratic(2).unwrap();
        for i in IntegralIdeal::ideals_up_to(r, 30) {
            let g = plain_generator(r, &i).unwrap();
            assert_eq!(IntegralIdeal::from_element(r, &g).unwrap(), i);
        }
        let m5 = NumberField::quadratic(-5).unwrap();
        let p2 = IntegralIdeal::from_generators(
            m5,
            &[FieldElement::from_int(2, 0), FieldElement::from_int(1, 1)],
        )
        .unwrap();
        assert!(plain_generator(m5, &p2).is_none());
    }

    #[test]
    fn ray_search_rational() {
        let q = NumberField::rational();
        let six = IntegralIdeal::from_integer(q, &BigInt::from(6)).unwrap();
        let seven = FractionalIdeal::from_integral(
            IntegralIdeal::from_integer(q, &BigInt::from(7)).unwrap(),
        );
        let out = ray_generator_search(q, &seven, Congruence::Multiplicative(&six), true).unwrap();
        assert_eq!(out, SearchOutcome::Found(FieldElement::from_int(7, 0)));
        // (5) mod 6: 5 is not 1 mod 6 and -5 is negative, so no generator.
        let five = FractionalIdeal::from_integral(
            IntegralIdeal::from_integer(q, &BigInt::from(5)).unwrap(),
        );
        let out = ray_generator_search(q, &five, Congruence::Multiplicative(&six), true).unwrap();
        assert_eq!(out, SearchOutcome::NoAdmissibleGenerator);
        // Without positivity, -5 = 1 mod 6 works.
        let out = ray_generator_search(q, &five, Congruence::Multiplicative(&six), false).unwrap();
        assert_eq!(out, SearchOutcome::Found(FieldElement::from_int(-5, 0)));
    }

    #[test]
    fn ray_search_not_principal() {
        let m5 = NumberField::quadratic(-5).unwrap();
        let p2 = IntegralIdeal::from_generators(
            m5,
            &[FieldElement::from_int(2, 0), FieldElement::from_int(1, 1)],
        )
        .unwrap();
        let t = FractionalIdeal::from_integral(p2);
        let out = ray_generator_search(m5, &t, Congruence::None, false).unwrap();
        assert_eq!(out, SearchOutcome::NotPrincipal);
    }

    #[test]
    fn ray_search_real_sign_obstruction() {
        // In Q(sqrt(2)) with modulus (2): 3+sqrt(2) generates a principal
        // ideal, but no totally positive generator is 1 mod 2 times a
        // denominator, because every associate fails the congruence or a
        // sign condition.
        let k = NumberField::quadratic(2).unwrap();
        let e = FieldElement::from_int(3, 1);
        let c = FractionalIdeal::principal(k, &e).unwrap();
        let two = IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap();
        let out = ray_generator_search(k, &c, Congruence::Multiplicative(&two), true).unwrap();
        assert_eq!(out, SearchOutcome::NoAdmissibleGenerator);
        // Dropping the congruence, a totally positive generator exists.
        let out = ray_generator_search(k, &c, Congruence::None, true).unwrap();
        match out {
            SearchOutcome::Found(x) => {
                assert!(k.is_totally_positive(&x));
                assert_eq!(FractionalIdeal::principal(k, &x).unwrap(), c);
            }
            other => panic!("expected a generator, got {other:?}"),
        }
    }

    #[test]
    fn additive_congruence_search() {
        // a = (10), b = (2) at level (5) over Q: x = 5 generates a/b and
        // x - 1 = 4 lies in f b^{-1} = (5)/(2) iff 2(x-1)/5 integral: no.
        // The admissible generator is x = 5 only if 8 | ... ; check the
        // machinery against a direct statement instead.
        let q = NumberField::rational();
        let f = IntegralIdeal::from_integer(q, &BigInt::from(5)).unwrap();
        let b2 = IntegralIdeal::from_integer(q, &BigInt::from(2)).unwrap();
        let fb = FractionalIdeal::from_integral(f).div(&FractionalIdeal::from_integral(b2));
        // target (10)/(2) = (5): generators 5u: x - 1 in (5)/(2) means
        // 2(x-1)/5 in Z: x = 5: 8/5 no; x = -5: -12/5 no.
        let ten = IntegralIdeal::from_integer(q, &BigInt::from(10)).unwrap();
        let two = IntegralIdeal::from_integer(q, &BigInt::from(2)).unwrap();
        let tgt = FractionalIdeal::from_integral(ten).div(&FractionalIdeal::from_integral(two));
        let out = ray_generator_search(q, &tgt, Congruence::Additive(&fb), true).unwrap();
        assert_eq!(out, SearchOutcome::NoAdmissibleGenerator);
        // a = (6), b = (1) at level (5): x = 6, x - 1 = 5 in (5): found.
        let six = FractionalIdeal::from_integral(
            IntegralIdeal::from_integer(q, &BigInt::from(6)).unwrap(),
        );
        let f5 = FractionalIdeal::from_integral(
            IntegralIdeal::from_integer(q, &BigInt::from(5)).unwrap(),
        );
        let out = ray_generator_search(q, &six, Congruence::Additive(&f5), true).unwrap();
        assert_eq!(out, SearchOutcome::Found(FieldElement::from_int(6, 0)));
    }

    #[test]
    fn unit_scan_is_stable_under_unit_change() {
        // Replacing the seed generator by a unit multiple cannot change
        // whether the scan succeeds.
        let k = NumberField::quadratic(2).unwrap();
        let eps = UnitGroup::compute(k).fundamental.clone().unwrap();
        let two = IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap();
        for (a, b) in [(3i64, 1i64), (1, 1), (5, 1), (4, 1), (2, 3)] {
            let y = FieldElement::from_int(a, b);
            if y.is_zero() {
                continue;
            }
            let y2 = k.mul(&y, &eps);
            let y3 = k.neg(&y);
            let r1 = unit_coset_scan(k, &y, &BigInt::one(), Congruence::Multiplicative(&two), true);
            let r2 = unit_coset_scan(k, &y2, &BigInt::one(), Congruence::Multiplicative(&two), true);
            let r3 = unit_coset_scan(k, &y3, &BigInt::one(), Congruence::Multiplicative(&two), true);
            match (&r1, &r2, &r3) {
                (Ok(a1), Ok(a2), Ok(a3)) => {
                    assert_eq!(a1.is_some(), a2.is_some());
                    assert_eq!(a1.is_some(), a3.is_some());
                }
                _ => {
                    assert!(r1.is_err() && r2.is_err() && r3.is_err());
                }
            }
        }
    }
}
