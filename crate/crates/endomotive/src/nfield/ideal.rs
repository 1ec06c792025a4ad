//! Ideal arithmetic in Hermite normal form.
//!
//! A nonzero integral ideal of Z[w] is stored as the lattice
//! Z*a + Z*(c + d*w) with a, d > 0, 0 <= c < a, d | a, d | c and
//! a*d = N(ideal).  Over the rationals an ideal is a single positive
//! integer.  Products, gcds (sums), lcms (intersections), exact quotients
//! and factorizations are all computed on these lattice triples.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use super::{FieldElement, FieldKind, NumberField};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdealRepr {
    Rational { n: BigInt },
    Quadratic { a: BigInt, c: BigInt, d: BigInt },
}

/// Nonzero integral ideal of the ring of integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegralIdeal {
    pub field: NumberField,
    pub repr: IdealRepr,
}

/// Reduce rows (x, y) meaning x + y*w to the HNF triple (a, c, d).
fn hnf_rows(rows: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt, BigInt), Error> {
    let mut cur: Option<(BigInt, BigInt)> = None;
    let mut xs: Vec<BigInt> = Vec::new();
    for (x, y) in rows {
        if y.is_zero() {
            if !x.is_zero() {
                xs.push(x.abs());
            }
            continue;
        }
        match cur.take() {
            None => cur = Some((x.clone(), y.clone())),
            Some((cx, cy)) => {
                let eg = cy.extended_gcd(y);
                let g = eg.gcd;
                let nx = &eg.x * &cx + &eg.y * x;
                let zx = (y / &g) * &cx - (&cy / &g) * x;
                if !zx.is_zero() {
                    xs.push(zx.abs());
                }
                cur = Some((nx, g));
            }
        }
    }
    let (c0, mut d) = cur.ok_or_else(|| Error::BadIdeal("rank deficient lattice".into()))?;
    let mut c0 = c0;
    if d.is_negative() {
        d = -d;
        c0 = -c0;
    }
    let mut a = BigInt::zero();
    for x in xs {
        a = a.gcd(&x);
    }
    if a.is_zero() {
        return Err(Error::BadIdeal("rank deficient lattice".into()));
    }
    let c = c0.mod_floor(&a);
    Ok((a, c, d))
}

impl IntegralIdeal {
    pub fn one(field: NumberField) -> Self {
        match field.kind {
            FieldKind::Rational => IntegralIdeal {
                field,
                repr: IdealRepr::Rational { n: BigInt::one() },
            },
            FieldKind::Quadratic { .. } => IntegralIdeal {
                field,
                repr: IdealRepr::Quadratic {
                    a: BigInt::one(),
                    c: BigInt::zero(),
                    d: BigInt::one(),
                },
            },
        }
    }

    pub fn from_integer(field: NumberField, n: &BigInt) -> Result<Self, Error> {
        if n.is_zero() {
            return Err(Error::BadIdeal("zero ideal".into()));
        }
        let n = n.abs();
        match field.kind {
            FieldKind::Rational => Ok(IntegralIdeal { field, repr: IdealRepr::Rational { n } }),
            FieldKind::Quadratic { .. } => Ok(IntegralIdeal {
                field,
                repr: IdealRepr::Quadratic { a: n.clone(), c: BigInt::zero(), d: n },
            }),
        }
    }

    /// Principal ideal of an integral element.
    pub fn from_element(field: NumberField, e: &FieldElement) -> Result<Self, Error> {
        let (x, y) = e
            .int_coords()
            .ok_or_else(|| Error::BadElement("principal ideal needs an integral element".into()))?;
        if e.is_zero() {
            return Err(Error::BadIdeal("zero ideal".into()));
        }
        match field.kind {
            FieldKind::Rational => Ok(IntegralIdeal { field, repr: IdealRepr::Rational { n: x.abs() } }),
            FieldKind::Quadratic { .. } => {
                let we = field.mul(&field.omega(), e);
                let (wx, wy) = we.int_coords().unwrap();
                let (a, c, d) = hnf_rows(&[(x, y), (wx, wy)])?;
                Ok(IntegralIdeal { field, repr: IdealRepr::Quadratic { a, c, d } })
            }
        }
    }

    /// Ideal generated by a list of integral elements.
    pub fn from_generators(field: NumberField, gens: &[FieldElement]) -> Result<Self, Error> {
        match field.kind {
            FieldKind::Rational => {
                let mut n = BigInt::zero();
                for g in gens {
                    let (x, _) = g
                        .int_coords()
                        .ok_or_else(|| Error::BadElement("non-integral generator".into()))?;
                    n = n.gcd(&x);
                }
                if n.is_zero() {
                    return Err(Error::BadIdeal("zero ideal".into()));
                }
                Ok(IntegralIdeal { field, repr: IdealRepr::Rational { n } })
            }
            FieldKind::Quadratic { .. } => {
                let mut rows = Vec::with_capacity(2 * gens.len());
                for g in gens {
                    let (x, y) = g
                        .int_coords()
                        .ok_or_else(|| Error::BadElement("non-integral generator".into()))?;
                    let wg = field.mul(&field.omega(), g);
                    let (wx, wy) = wg.int_coords().unwrap();
                    rows.push((x, y));
                    rows.push((wx, wy));
                }
                let (a, c, d) = hnf_rows(&rows)?;
                Ok(IntegralIdeal { field, repr: IdealRepr::Quadratic { a, c, d } })
            }
        }
    }

    /// Build directly from an HNF triple, validating the ideal conditions.
    pub fn from_triple(field: NumberField, a: &BigInt, c: &BigInt, d: &BigInt) -> Result<Self, Error> {
        if field.is_rational() {
            return Err(Error::BadIdeal("triples only make sense for quadratic fields".into()));
        }
        if !a.is_positive() || !d.is_positive() || c.is_negative() || c >= a {
            return Err(Error::BadIdeal(format!("triple ({a}, {c}, {d}) is not normalized")));
        }
        if !(a % d).is_zero() || !(c % d).is_zero() {
            return Err(Error::BadIdeal(format!("triple ({a}, {c}, {d}): d must divide a and c")));
        }
        let a0 = a / d;
        let c0 = c / d;
        let t = BigInt::from(field.omega_trace());
        let n = BigInt::from(field.omega_norm());
        let val = &c0 * &c0 + &t * &c0 + &n;
        if !(val % &a0).is_zero() {
            return Err(Error::BadIdeal(format!("triple ({a}, {c}, {d}) is not an O-module")));
        }
        Ok(IntegralIdeal {
            field,
            repr: IdealRepr::Quadratic { a: a.clone(), c: c.clone(), d: d.clone() },
        })
    }

    pub fn norm(&self) -> BigInt {
        match &self.repr {
            IdealRepr::Rational { n } => n.clone(),
            IdealRepr::Quadratic { a, d, .. } => a * d,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            IdealRepr::Rational { n } => n.is_one(),
            IdealRepr::Quadratic { a, d, .. } => a.is_one() && d.is_one(),
        }
    }

    /// Sort and cache key.
    pub fn key(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        match &self.repr {
            IdealRepr::Rational { n } => (n.clone(), n.clone(), BigInt::zero(), BigInt::zero()),
            IdealRepr::Quadratic { a, c, d } => (self.norm(), a.clone(), c.clone(), d.clone()),
        }
    }

    /// Lattice basis as field elements.
    pub fn basis(&self) -> Vec<FieldElement> {
        match &self.repr {
            IdealRepr::Rational { n } => vec![FieldElement::from_bigint(n.clone(), BigInt::zero())],
            IdealRepr::Quadratic { a, c, d } => vec![
                FieldElement::from_bigint(a.clone(), BigInt::zero()),
                FieldElement::from_bigint(c.clone(), d.clone()),
            ],
        }
    }

    /// Largest integer s with self = s * (integral ideal).
    pub fn content(&self) -> BigInt {
        match &self.repr {
            IdealRepr::Rational { n } => n.clone(),
            IdealRepr::Quadratic { a, c, d } => a.gcd(c).gcd(d),
        }
    }

    pub fn contains_element(&self, e: &FieldElement) -> bool {
        let Some((x, y)) = e.int_coords() else { return false };
        match &self.repr {
            IdealRepr::Rational { n } => y.is_zero() && (&x % n).is_zero(),
            IdealRepr::Quadratic { a, c, d } => {
                if !(&y % d).is_zero() {
                    return false;
                }
                let q = &y / d;
                ((&x - &q * c) % a).is_zero()
            }
        }
    }

    pub fn contains_ideal(&self, other: &IntegralIdeal) -> bool {
        other.basis().iter().all(|b| self.contains_element(b))
    }

    /// Ideal divisibility: self | other.
    pub fn divides(&self, other: &IntegralIdeal) -> bool {
        self.contains_ideal(other)
    }

    pub fn mul(&self, other: &IntegralIdeal) -> IntegralIdeal {
        match (&self.repr, &other.repr) {
            (IdealRepr::Rational { n }, IdealRepr::Rational { n: m }) => IntegralIdeal {
                field: self.field,
                repr: IdealRepr::Rational { n: n * m },
            },
            _ => {
                let f = self.field;
                let ab = self.basis();
                let bb = other.basis();
                let mut rows = Vec::with_capacity(4);
                for x in &ab {
                    for y in &bb {
                        let p = f.mul(x, y);
                        rows.push(p.int_coords().unwrap());
                    }
                }
                let (a, c, d) = hnf_rows(&rows).expect("product of nonzero ideals");
                IntegralIdeal { field: f, repr: IdealRepr::Quadratic { a, c, d } }
            }
        }
    }

    pub fn mul_scalar(&self, s: &BigInt) -> IntegralIdeal {
        let s = s.abs();
        assert!(!s.is_zero());
        match &self.repr {
            IdealRepr::Rational { n } => IntegralIdeal {
                field: self.field,
                repr: IdealRepr::Rational { n: n * &s },
            },
            IdealRepr::Quadratic { a, c, d } => IntegralIdeal {
                field: self.field,
                repr: IdealRepr::Quadratic { a: a * &s, c: c * &s, d: d * &s },
            },
        }
    }

    /// Exact scalar quotient, if s divides the whole lattice.
    pub fn div_scalar(&self, s: &BigInt) -> Option<IntegralIdeal> {
        let s = s.abs();
        if s.is_zero() {
            return None;
        }
        match &self.repr {
            IdealRepr::Rational { n } => {
                if (n % &s).is_zero() {
                    Some(IntegralIdeal {
                        field: self.field,
                        repr: IdealRepr::Rational { n: n / &s },
                    })
                } else {
                    None
                }
            }
            IdealRepr::Quadratic { a, c, d } => {
                if (a % &s).is_zero() && (c % &s).is_zero() && (d % &s).is_zero() {
                    Some(IntegralIdeal {
                        field: self.field,
                        repr: IdealRepr::Quadratic { a: a / &s, c: c / &s, d: d / &s },
                    })
                } else {
                    None
                }
            }
        }
    }

    pub fn pow(&self, k: u32) -> IntegralIdeal {
        let mut acc = IntegralIdeal::one(self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(&self) -> IntegralIdeal {
        match &self.repr {
            IdealRepr::Rational { .. } => self.clone(),
            IdealRepr::Quadratic { a, c, d } => {
                let t = BigInt::from(self.field.omega_trace());
                let rows = vec![(a.clone(), BigInt::zero()), (c + d * &t, -d.clone())];
                let (a, c, d) = hnf_rows(&rows).unwrap();
                IntegralIdeal { field: self.field, repr: IdealRepr::Quadratic { a, c, d } }
            }
        }
    }

    /// Sum of ideals, the ideal gcd.
    pub fn gcd(&self, other: &IntegralIdeal) -> IntegralIdeal {
        match (&self.repr, &other.repr) {
            (IdealRepr::Rational { n }, IdealRepr::Rational { n: m }) => IntegralIdeal {
                field: self.field,
                repr: IdealRepr::Rational { n: n.gcd(m) },
            },
            _ => {
                let mut rows = Vec::with_capacity(4);
                for b in self.basis().iter().chain(other.basis().iter()) {
                    rows.push(b.int_coords().unwrap());
                }
                let (a, c, d) = hnf_rows(&rows).unwrap();
                IntegralIdeal { field: self.field, repr: IdealRepr::Quadratic { a, c, d } }
            }
        }
    }

    pub fn is_coprime(&self, other: &IntegralIdeal) -> bool {
        self.gcd(other).is_one()
    }

    /// Intersection of ideals, the ideal lcm, via an integer kernel.
    pub fn intersect(&self, other: &IntegralIdeal) -> IntegralIdeal {
        match (&self.repr, &other.repr) {
            (IdealRepr::Rational { n }, IdealRepr::Rational { n: m }) => IntegralIdeal {
                field: self.field,
                repr: IdealRepr::Rational { n: n.lcm(m) },
            },
            _ => {
                let ub: Vec<(BigInt, BigInt)> =
                    self.basis().iter().map(|b| b.int_coords().unwrap()).collect();
                let vb: Vec<(BigInt, BigInt)> =
                    other.basis().iter().map(|b| b.int_coords().unwrap()).collect();
                let mut m: Vec<[BigInt; 2]> = vec![
                    [ub[0].0.clone(), ub[0].1.clone()],
                    [ub[1].0.clone(), ub[1].1.clone()],
                    [-vb[0].0.clone(), -vb[0].1.clone()],
                    [-vb[1].0.clone(), -vb[1].1.clone()],
                ];
                let kernel = left_kernel(&mut m);
                let mut rows = Vec::new();
                for k in &kernel {
                    let x = &k[0] * &ub[0].0 + &k[1] * &ub[1].0;
                    let y = &k[0] * &ub[0].1 + &k[1] * &ub[1].1;
                    rows.push((x, y));
                }
                let (a, c, d) = hnf_rows(&rows).expect("intersection of nonzero ideals");
                IntegralIdeal { field: self.field, repr: IdealRepr::Quadratic { a, c, d } }
            }
        }
    }

    /// Exact quotient self / other, if other divides self.
    pub fn div_exact(&self, other: &IntegralIdeal) -> Option<IntegralIdeal> {
        match (&self.repr, &other.repr) {
            (IdealRepr::Rational { n }, IdealRepr::Rational { n: m }) => {
                if (n % m).is_zero() {
                    Some(IntegralIdeal {
                        field: self.field,
                        repr: IdealRepr::Rational { n: n / m },
                    })
                } else {
                    None
                }
            }
            _ => {
                let prod = self.mul(&other.conj());
                let q = prod.div_scalar(&other.norm())?;
                if q.mul(other) == *self {
                    Some(q)
                } else {
                    None
                }
            }
        }
    }

    /// Multiplicity of a prime ideal in self.
    pub fn valuation(&self, prime: &IntegralIdeal) -> u32 {
        let mut v = 0u32;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(prime) {
            v += 1;
            cur = q;
        }
        v
    }

    /// Prime ideals above a rational prime p, without multiplicity.
    pub fn primes_above(field: NumberField, p: &BigInt) -> Vec<IntegralIdeal> {
        match field.kind {
            FieldKind::Rational => vec![IntegralIdeal {
                field,
                repr: IdealRepr::Rational { n: p.clone() },
            }],
            FieldKind::Quadratic { .. } => {
                let t = BigInt::from(field.omega_trace());
                let n = BigInt::from(field.omega_norm());
                let pi = p.to_i64().expect("prime fits in i64");
                let ti = field.omega_trace();
                let ni = field.omega_norm();
                let mut roots = Vec::new();
                for r in 0..pi {
                    let v = (r * r - ti * r + ni).rem_euclid(pi);
                    if v == 0 {
                        roots.push(r);
                    }
                }
                if roots.is_empty() {
                    return vec![IntegralIdeal {
                        field,
                        repr: IdealRepr::Quadratic { a: p.clone(), c: BigInt::zero(), d: p.clone() },
                    }];
                }
                let mut out = Vec::new();
                for r in roots {
                    // (p, w - r): minimal polynomial of w is x^2 - t x + n,
                    // and r is a root mod p.
                    let r = BigInt::from(r);
                    let rows = vec![
                        (p.clone(), BigInt::zero()),
                        (-&r, BigInt::one()),
                        (BigInt::zero(), p.clone()),
                        (-&n, &t - &r),
                    ];
                    let (a, c, d) = hnf_rows(&rows).unwrap();
                    out.push(IntegralIdeal { field, repr: IdealRepr::Quadratic { a, c, d } });
                }
                out.sort_by_key(|i| i.key());
                out.dedup();
                out
            }
        }
    }

    /// Factor into prime ideals with multiplicities, sorted by key.
    pub fn factor(&self) -> Vec<(IntegralIdeal, u32)> {
        let mut out = Vec::new();
        let n = self.norm();
        let mut rest = n.clone();
        let mut p = BigInt::from(2);
        let mut rat_primes = Vec::new();
        while &p * &p <= rest {
            if (&rest % &p).is_zero() {
                rat_primes.push(p.clone());
                while (&rest % &p).is_zero() {
                    rest = &rest / &p;
                }
            }
            p += 1;
        }
        if rest > BigInt::one() {
            rat_primes.push(rest);
        }
        for p in rat_primes {
            for prime in IntegralIdeal::primes_above(self.field, &p) {
                let v = self.valuation(&prime);
                if v > 0 {
                    out.push((prime, v));
                }
            }
        }
        out.sort_by_key(|(i, _)| i.key());
        debug_assert_eq!(
            out.iter()
                .fold(IntegralIdeal::one(self.field), |acc, (q, e)| acc.mul(&q.pow(*e))),
            *self
        );
        out
    }

    /// All integral ideals of norm at most `bound`, sorted by (norm, HNF).
    pub fn ideals_up_to(field: NumberField, bound: u64) -> Vec<IntegralIdeal> {
        let mut out = Vec::new();
        match field.kind {
            FieldKind::Rational => {
                for n in 1..=bound {
                    out.push(IntegralIdeal {
                        field,
                        repr: IdealRepr::Rational { n: BigInt::from(n) },
                    });
                }
            }
            FieldKind::Quadratic { .. } => {
                let t = field.omega_trace() as i128;
                let n = field.omega_norm() as i128;
                let b = bound as i128;
                let mut d: i128 = 1;
                while d * d <= b {
                    let amax = b / (d * d);
                    for a0 in 1..=amax {
                        for c0 in 0..a0 {
                            let v = (c0 * c0 + t * c0 + n).rem_euclid(a0);
                            if v == 0 {
                                out.push(IntegralIdeal {
                                    field,
                                    repr: IdealRepr::Quadratic {
                                        a: BigInt::from(a0 * d),
                                        c: BigInt::from(c0 * d),
                                        d: BigInt::from(d),
                                    },
                                });
                            }
                        }
                    }
                    d += 1;
                }
                out.sort_by_key(|i| i.key());
            }
        }
        out
    }
}

/// Left kernel of an integer matrix, basis as rows.  The matrix is
/// destroyed.  Small sizes only.
fn left_kernel(m: &mut Vec<[BigInt; 2]>) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..2 {
        loop {
            let nz: Vec<usize> = (rank..rows).filter(|&i| !m[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            if nz.len() == 1 {
                let i = nz[0];
                m.swap(rank, i);
                u.swap(rank, i);
                rank += 1;
                break;
            }
            let &imin = nz
                .iter()
                .min_by_key(|&&i| m[i][col].abs())
                .unwrap();
            for &i in &nz {
                if i == imin {
                    continue;
                }
                let q = div_round(&m[i][col], &m[imin][col]);
                if q.is_zero() {
                    continue;
                }
                for c in 0..2 {
                    let sub = &q * &m[imin][c];
                    m[i][c] -= sub;
                }
                for c in 0..rows {
                    let sub = &q * &u[imin][c];
                    u[i][c] -= sub;
                }
            }
        }
    }
    (rank..rows).map(|i| u[i].clone()).collect()
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest-integer division keeps entries small.
    let (a, b) = if b.is_negative() {
        (-a, -b)
    } else {
        (a.clone(), b.clone())
    };
    let half: BigInt = &b / 2i32;
    (a + half).div_floor(&b)
}

impl fmt::Display for IntegralIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            IdealRepr::Rational { n } => write!(f, "({n})"),
            IdealRepr::Quadratic { a, c, d } => write!(f, "[{a}, {c}+{d}w]"),
        }
    }
}

/// A fractional ideal num / den with den > 0 and gcd(den, content(num)) = 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FractionalIdeal {
    pub num: IntegralIdeal,
    pub den: BigInt,
}

impl FractionalIdeal {
    pub fn new(num: IntegralIdeal, den: BigInt) -> Self {
        assert!(!den.is_zero());
        let den = den.abs();
        let g = den.gcd(&num.content());
        FractionalIdeal {
            num: num.div_scalar(&g).unwrap(),
            den: den / g,
        }
    }

    pub fn from_integral(num: IntegralIdeal) -> Self {
        FractionalIdeal { num, den: BigInt::one() }
    }

    pub fn one(field: NumberField) -> Self {
        FractionalIdeal::from_integral(IntegralIdeal::one(field))
    }

    /// Principal fractional ideal of a nonzero element.
    pub fn principal(field: NumberField, e: &FieldElement) -> Result<Self, Error> {
        if e.is_zero() {
            return Err(Error::BadIdeal("zero ideal".into()));
        }
        let da = e.a.denom().clone();
        let db = e.b.denom().clone();
        let den = da.lcm(&db);
        let scaled = field.mul_scalar(e, &BigRational::from_integer(den.clone()));
        let num = IntegralIdeal::from_element(field, &scaled)?;
        Ok(FractionalIdeal::new(num, den))
    }

    pub fn field(&self) -> NumberField {
        self.num.field
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn integral_part(&self) -> Option<&IntegralIdeal> {
        if self.is_integral() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn norm(&self) -> BigRational {
        let d = &self.den;
        let dd = match self.field().kind {
            FieldKind::Rational => d.clone(),
            FieldKind::Quadratic { .. } => d * d,
        };
        BigRational::new(self.num.norm(), dd)
    }

    pub fn mul(&self, other: &FractionalIdeal) -> FractionalIdeal {
        FractionalIdeal::new(self.num.mul(&other.num), &self.den * &other.den)
    }

    pub fn inverse(&self) -> FractionalIdeal {
        // (A/s)^{-1} = s * conj(A) / N(A).
        let field = self.field();
        match field.kind {
            FieldKind::Rational => {
                let n = self.num.norm();
                FractionalIdeal::new(
                    IntegralIdeal::from_integer(field, &self.den).unwrap(),
                    n,
                )
            }
            FieldKind::Quadratic { .. } => {
                let cj = self.num.conj().mul_scalar(&self.den);
                FractionalIdeal::new(cj, self.num.norm())
            }
        }
    }

    pub fn div(&self, other: &FractionalIdeal) -> FractionalIdeal {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, k: i64) -> FractionalIdeal {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = FractionalIdeal::one(self.field());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn contains_element(&self, e: &FieldElement) -> bool {
        let field = self.field();
        let scaled = field.mul_scalar(e, &BigRational::from_integer(self.den.clone()));
        if !scaled.is_integral() {
            return false;
        }
        self.num.contains_element(&scaled)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberField {
        NumberField::quadratic(-1).unwrap()
    }

    fn triple(i: &IntegralIdeal) -> (i64, i64, i64) {
        match &i.repr {
            IdealRepr::Quadratic { a, c, d } => (
                a.to_i64().unwrap(),
                c.to_i64().unwrap(),
                d.to_i64().unwrap(),
            ),
            IdealRepr::Rational { n } => (n.to_i64().unwrap(), 0, 0),
        }
    }

    #[test]
    fn gauss_ramified_square() {
        let k = gauss();
        let p = IntegralIdeal::from_element(k, &FieldElement::from_int(1, 1)).unwrap();
        assert_eq!(triple(&p), (2, 1, 1));
        assert_eq!(p.norm(), BigInt::from(2));
        let p2 = p.mul(&p);
        assert_eq!(triple(&p2), (2, 0, 2));
        assert_eq!(p2, IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap());
    }

    #[test]
    fn gauss_ideals_up_to_five() {
        let k = gauss();
        let list = IntegralIdeal::ideals_up_to(k, 5);
        let triples: Vec<(i64, i64, i64)> = list.iter().map(triple).collect();
        assert_eq!(
            triples,
            vec![(1, 0, 1), (2, 1, 1), (2, 0, 2), (5, 2, 1), (5, 3, 1)]
        );
    }

    #[test]
    fn splitting_in_gauss() {
        let k = gauss();
        let two = IntegralIdeal::primes_above(k, &BigInt::from(2));
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].norm(), BigInt::from(2));
        let three = IntegralIdeal::primes_above(k, &BigInt::from(3));
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].norm(), BigInt::from(9));
        let five = IntegralIdeal::primes_above(k, &BigInt::from(5));
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|p| p.norm() == BigInt::from(5)));
        assert_eq!(five[0].mul(&five[1]), IntegralIdeal::from_integer(k, &BigInt::from(5)).unwrap());
    }

    #[test]
    fn nonprincipal_square_in_m5() {
        let k = NumberField::quadratic(-5).unwrap();
        let p = IntegralIdeal::from_generators(
            k,
            &[FieldElement::from_int(2, 0), FieldElement::from_int(1, 1)],
        )
        .unwrap();
        assert_eq!(triple(&p), (2, 1, 1));
        let p2 = p.mul(&p);
        assert_eq!(p2, IntegralIdeal::from_integer(k, &BigInt::from(2)).unwrap());
    }

    /// Ideal counts from the HNF scan must match the Euler product count
    /// derived from prime splitting.
    fn zeta_coefficients(field: NumberField, bound: usize) -> Vec<u64> {
        let mut a = vec![0u64; bound + 1];
        a[1] = 1;
        let mut coeff = vec![0u64; bound + 1];
        coeff.clone_from_slice(&a);
        let mut primes = Vec::new();
        let mut sieve = vec![true; bound + 1];
        for p in 2..=bound {
            if sieve[p] {
                primes.push(p);
                let mut q = p * p;
                while q <= bound {
                    sieve[q] = false;
                    q += p;
                }
            }
        }
        for &p in &primes {
            let above = IntegralIdeal::primes_above(field, &BigInt::from(p));
            // Local count of ideals with norm p^k.
            let mut local = vec![0u64; 0];
            let split = above.len() == 2;
            let ram = above.len() == 1 && above[0].norm() == BigInt::from(p);
            let mut k = 0usize;
            let mut pk = 1usize;
            while pk <= bound {
                let cnt = if split {
                    (k + 1) as u64
                } else if ram {
                    1
                } else if k % 2 == 0 {
                    1
                } else {
                    0
                };
                local.push(cnt);
                k += 1;
                match pk.checked_mul(p) {
                    Some(v) => pk = v,
                    None => break,
                }
            }
            let mut next = vec![0u64; bound + 1];
            for n in 1..=bound {
                if coeff[n] == 0 {
                    continue;
                }
                let mut pk = 1usize;
                for lk in &local {
                    match n.checked_mul(pk) {
                        Some(v) if v <= bound => next[v] += coeff[n] * lk,
                        _ => break,
                    }
                    match pk.checked_mul(p) {
                        Some(v) => pk = v,
                        None => break,
                    }
                }
            }
            coeff = next;
        }
        coeff
    }

    #[test]
    fn enumeration_matches_zeta_coefficients() {
        for m in [-1i64, -5, 2, 5, -3, 10] {
            let k = NumberField::quadratic(m).unwrap();
            let bound = 60usize;
            let list = IntegralIdeal::ideals_up_to(k, bound as u64);
            let mut counts = vec![0u64; bound + 1];
            for i in &list {
                counts[i.norm().to_usize().unwrap()] += 1;
            }
            let zc = zeta_coefficients(k, bound);
            for n in 1..=bound {
                assert_eq!(counts[n], zc[n], "m={m} norm={n}");
            }
        }
    }

    #[test]
    fn gcd_lcm_product_identity() {
        let k = NumberField::quadratic(-5).unwrap();
        let list = IntegralIdeal::ideals_up_to(k, 20);
        for x in &list {
            for y in &list {
                let g = x.gcd(y);
                let l = x.intersect(y);
                assert_eq!(g.mul(&l), x.mul(y), "{x} {y}");
                assert!(g.divides(x) && g.divides(y));
                assert!(x.divides(&l) && y.divides(&l));
            }
        }
    }

    #[test]
    fn division_roundtrip() {
        let k = NumberField::quadratic(2).unwrap();
        let list = IntegralIdeal::ideals_up_to(k, 15);
        for x in &list {
            for y in &list {
                let p = x.mul(y);
                assert_eq!(p.div_exact(x), Some(y.clone()));
                assert_eq!(p.div_exact(y), Some(x.clone()));
                if !x.is_one() && !x.divides(y) {
                    assert_eq!(y.div_exact(x), None);
                }
            }
        }
    }

    #[test]
    fn factor_roundtrip() {
        for m in [-1i64, -5, 2, 5] {
            let k = NumberField::quadratic(m).unwrap();
            for i in IntegralIdeal::ideals_up_to(k, 40) {
                let f = i.factor();
                let prod = f
                    .iter()
                    .fold(IntegralIdeal::one(k), |acc, (p, e)| acc.mul(&p.pow(*e)));
                assert_eq!(prod, i);
            }
        }
    }

    #[test]
    fn fractional_normalization() {
        let k = gauss();
        let half = FieldElement::new(
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::new(BigInt::one(), BigInt::from(2)),
        );
        // (1+i)/2 generates [2,1+1w]/2.
        let fr = FractionalIdeal::principal(k, &half).unwrap();
        assert_eq!(fr.den, BigInt::from(2));
        assert_eq!(triple(&fr.num), (2, 1, 1));
        let inv = fr.inverse();
        assert!(fr.mul(&inv).is_one());
        assert_eq!(fr.norm(), BigRational::new(BigInt::one(), BigInt::from(2)));
    }

    #[test]
    fn principal_norm_matches_element_norm() {
        let k = NumberField::quadratic(5).unwrap();
        for (a, b) in [(3i64, 1i64), (2, -1), (7, 3), (-4, 9)] {
            let e = FieldElement::from_int(a, b);
            let fr = FractionalIdeal::principal(k, &e).unwrap();
            assert_eq!(fr.norm(), k.norm(&e).abs());
        }
    }
}
