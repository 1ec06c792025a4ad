//! Quadratic number fields and their exact element arithmetic.
//!
//! A field is either the rationals or Q(sqrt(m)) for a squarefree integer
//! m != 0, 1.  Elements are written on the integral basis {1, w} where
//! w = sqrt(m) when m = 2, 3 mod 4 and w = (1 + sqrt(m))/2 when
//! m = 1 mod 4, so the ring of integers is Z[w] in both cases and w
//! satisfies w^2 = t*w - n with t = Tr(w) and n = N(w).
//!
//! Real embeddings are handled exactly: the sign of a + b*sqrt(m) is
//! decided by comparing a^2 with b^2*m, never by floating point.

pub mod ideal;
pub mod residue;
pub mod units;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// The rationals or a quadratic field Q(sqrt(m)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Rational,
    Quadratic { m: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumberField {
    pub kind: FieldKind,
}

fn is_squarefree(mut v: i64) -> bool {
    if v == 0 {
        return false;
    }
    v = v.abs();
    let mut p = 2i64;
    while p * p <= v {
        if v % (p * p) == 0 {
            return false;
        }
        while v % p == 0 {
            v /= p;
        }
        p += 1;
    }
    true
}

impl NumberField {
    pub fn rational() -> Self {
        NumberField { kind: FieldKind::Rational }
    }

    pub fn quadratic(m: i64) -> Result<Self, Error> {
        if m == 0 || m == 1 {
            return Err(Error::BadField(format!("m = {m} is not allowed")));
        }
        if !is_squarefree(m) {
            return Err(Error::BadField(format!("m = {m} is not squarefree")));
        }
        Ok(NumberField { kind: FieldKind::Quadratic { m } })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, FieldKind::Rational)
    }

    pub fn m(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Rational => None,
            FieldKind::Quadratic { m } => Some(m),
        }
    }

    pub fn degree(&self) -> u32 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Quadratic { .. } => 2,
        }
    }

    /// (r1, r2): number of real embeddings and conjugate pairs.
    pub fn signature(&self) -> (usize, usize) {
        match self.kind {
            FieldKind::Rational => (1, 0),
            FieldKind::Quadratic { m } if m > 0 => (2, 0),
            FieldKind::Quadratic { .. } => (0, 1),
        }
    }

    pub fn discriminant(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Quadratic { m } => {
                if m.rem_euclid(4) == 1 {
                    m
                } else {
                    4 * m
                }
            }
        }
    }

    /// Trace of the basis generator w.
    pub fn omega_trace(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Quadratic { m } => {
                if m.rem_euclid(4) == 1 {
                    1
                } else {
                    0
                }
            }
        }
    }

    /// Norm of the basis generator w.
    pub fn omega_norm(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Quadratic { m } => {
                if m.rem_euclid(4) == 1 {
                    (1 - m) / 4
                } else {
                    -m
                }
            }
        }
    }

    pub fn omega(&self) -> FieldElement {
        FieldElement::from_int(0, 1)
    }

    pub fn label(&self) -> String {
        match self.kind {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Quadratic { m } => format!("Q(sqrt({m}))"),
        }
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// a + b*w with rational coordinates.  For the rational field b is 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub a: BigRational,
    pub b: BigRational,
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b }
    }

    pub fn from_int(a: i64, b: i64) -> Self {
        FieldElement {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn from_bigint(a: BigInt, b: BigInt) -> Self {
        FieldElement {
            a: BigRational::from_integer(a),
            b: BigRational::from_integer(b),
        }
    }

    pub fn zero() -> Self {
        FieldElement::from_int(0, 0)
    }

    pub fn one() -> Self {
        FieldElement::from_int(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Integer coordinates, if the element lies in the ring of integers.
    pub fn int_coords(&self) -> Option<(BigInt, BigInt)> {
        if self.is_integral() {
            Some((self.a.to_integer(), self.b.to_integer()))
        } else {
            None
        }
    }
}

impl NumberField {
    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a + &y.a, &x.b + &y.b)
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a - &y.a, &x.b - &y.b)
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement::new(-&x.a, -&x.b)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let t = BigRational::from_integer(BigInt::from(self.omega_trace()));
        let n = BigRational::from_integer(BigInt::from(self.omega_norm()));
        let bd = &x.b * &y.b;
        let a = &x.a * &y.a - &n * &bd;
        let b = &x.a * &y.b + &x.b * &y.a + &t * &bd;
        FieldElement::new(a, b)
    }

    pub fn mul_scalar(&self, x: &FieldElement, s: &BigRational) -> FieldElement {
        FieldElement::new(&x.a * s, &x.b * s)
    }

    /// Galois conjugate; the identity on the rationals.
    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        let t = BigRational::from_integer(BigInt::from(self.omega_trace()));
        FieldElement::new(&x.a + &t * &x.b, -&x.b)
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(self.omega_trace()));
        let n = BigRational::from_integer(BigInt::from(self.omega_norm()));
        &x.a * &x.a + &t * &x.a * &x.b + &n * &x.b * &x.b
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(self.omega_trace()));
        &x.a + &x.a + &t * &x.b
    }

    pub fn inverse(&self, x: &FieldElement) -> Result<FieldElement, Error> {
        if x.is_zero() {
            return Err(Error::BadElement("inverse of zero".into()));
        }
        let n = self.norm(x);
        let c = self.conj(x);
        Ok(FieldElement::new(&c.a / &n, &c.b / &n))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, Error> {
        let inv = self.inverse(y)?;
        Ok(self.mul(x, &inv))
    }

    pub fn pow(&self, x: &FieldElement, k: u64) -> FieldElement {
        let mut acc = FieldElement::one();
        let mut base = x.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Coordinates (x, y) of the element as x + y*sqrt(m).
    fn sqrt_basis(&self, e: &FieldElement) -> (BigRational, BigRational) {
        match self.kind {
            FieldKind::Rational => (e.a.clone(), BigRational::zero()),
            FieldKind::Quadratic { m } => {
                if m.rem_euclid(4) == 1 {
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    (&e.a + &half * &e.b, &half * &e.b)
                } else {
                    (e.a.clone(), e.b.clone())
                }
            }
        }
    }

    /// Exact sign of x + y*sqrt(m) for m > 0.
    fn sign_sqrt_expr(x: &BigRational, y: &BigRational, m: i64) -> i8 {
        if x.is_zero() && y.is_zero() {
            return 0;
        }
        let sx = if x.is_positive() {
            1i8
        } else if x.is_negative() {
            -1
        } else {
            0
        };
        let sy = if y.is_positive() {
            1i8
        } else if y.is_negative() {
            -1
        } else {
            0
        };
        if sy == 0 {
            return sx;
        }
        if sx == 0 || sx == sy {
            return sy;
        }
        // Opposite signs: compare x^2 against y^2 * m.  The expression has
        // the sign of x exactly when x^2 > y^2 m (m squarefree, so equality
        // cannot occur for nonzero y).
        let x2 = x * x;
        let y2m = y * y * BigRational::from_integer(BigInt::from(m));
        if x2 > y2m {
            sx
        } else {
            sy
        }
    }

    /// Signs of the element at each real embedding.  Empty for imaginary
    /// quadratic fields.  The first entry sends w to the positive root.
    pub fn real_signs(&self, e: &FieldElement) -> Vec<i8> {
        match self.kind {
            FieldKind::Rational => {
                let s = if e.a.is_positive() {
                    1
                } else if e.a.is_negative() {
                    -1
                } else {
                    0
                };
                vec![s]
            }
            FieldKind::Quadratic { m } if m > 0 => {
                let (x, y) = self.sqrt_basis(e);
                vec![
                    Self::sign_sqrt_expr(&x, &y, m),
                    Self::sign_sqrt_expr(&x, &(-&y), m),
                ]
            }
            FieldKind::Quadratic { .. } => vec![],
        }
    }

    /// Positive at every real embedding.  Vacuously true for nonzero
    /// elements of an imaginary quadratic field; false for zero.
    pub fn is_totally_positive(&self, e: &FieldElement) -> bool {
        if e.is_zero() {
            return false;
        }
        self.real_signs(e).iter().all(|&s| s > 0)
    }

    /// Compare two elements at the first real embedding.  Panics on
    /// imaginary fields.
    pub fn cmp_real(&self, x: &FieldElement, y: &FieldElement) -> std::cmp::Ordering {
        let d = self.sub(x, y);
        let s = match self.kind {
            FieldKind::Rational => self.real_signs(&d)[0],
            FieldKind::Quadratic { m } if m > 0 => self.real_signs(&d)[0],
            _ => panic!("cmp_real on an imaginary quadratic field"),
        };
        s.cmp(&0)
    }

    pub fn format_element(&self, e: &FieldElement) -> String {
        if self.is_rational() {
            return format!("{}", e.a);
        }
        if e.b.is_zero() {
            return format!("{}", e.a);
        }
        if e.a.is_zero() {
            return format!("{}*w", e.b);
        }
        if e.b.is_negative() {
            format!("{}{}*w", e.a, e.b)
        } else {
            format!("{}+{}*w", e.a, e.b)
        }
    }
}
