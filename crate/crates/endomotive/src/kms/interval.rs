//! Certified rational intervals with directed rounding.
//!
//! Analytic quantities (zeta partial sums, Euler products, tail bounds)
//! are carried as closed intervals with rational endpoints.  After each
//! operation the endpoints are pushed outward onto the grid 2^-BITS * Z,
//! so denominators stay bounded while the enclosure stays correct.
//! Powers n^(p/q) are enclosed through integer q-th roots, so no
//! floating point is involved anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub const BITS: u32 = 96;

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn grid_floor(q: &BigRational) -> BigRational {
    let scaled = (q.numer() << BITS).div_floor(q.denom());
    BigRational::new(scaled, BigInt::one() << BITS)
}

fn grid_ceil(q: &BigRational) -> BigRational {
    let scaled = (q.numer() << BITS).div_ceil(q.denom());
    BigRational::new(scaled, BigInt::one() << BITS)
}

impl Interval {
    pub fn exact(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Interval::exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Interval::exact(BigRational::one())
    }

    pub fn coarsen(&self) -> Self {
        Interval { lo: grid_floor(&self.lo), hi: grid_ceil(&self.hi) }
    }

    pub fn add(&self, o: &Interval) -> Self {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }.coarsen()
    }

    pub fn mul(&self, o: &Interval) -> Self {
        let corners = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = corners.iter().min().unwrap().clone();
        let hi = corners.iter().max().unwrap().clone();
        Interval { lo, hi }.coarsen()
    }

    /// Multiplication by a signed exact rational.
    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_negative() {
            Interval { lo: &self.hi * q, hi: &self.lo * q }.coarsen()
        } else {
            Interval { lo: &self.lo * q, hi: &self.hi * q }.coarsen()
        }
    }

    pub fn one_minus(&self) -> Self {
        let one = BigRational::one();
        Interval { lo: &one - &self.hi, hi: &one - &self.lo }
    }

    /// 1/x for an interval with positive lower endpoint.
    pub fn recip_pos(&self) -> Result<Self, Error> {
        if !self.lo.is_positive() {
            return Err(Error::Inconsistent(
                "interval reciprocal needs a positive lower endpoint".into(),
            ));
        }
        Ok(Interval { lo: self.hi.recip(), hi: self.lo.recip() }.coarsen())
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floor of the integer q-th root.
fn int_nth_root(m: &BigInt, q: u32) -> BigInt {
    if q == 1 || *m <= BigInt::one() {
        return m.clone();
    }
    let bits = m.bits();
    let mut x: BigInt = BigInt::one() << (bits / q as u64 + 1);
    loop {
        let y = (&x * (q - 1) + m / x.pow(q - 1)) / q;
        if y >= x {
            break;
        }
        x = y;
    }
    while x.pow(q) > *m {
        x -= 1;
    }
    while (&x + 1u32).pow(q) <= *m {
        x += 1;
    }
    x
}

/// Enclosure of n^beta for n >= 1 and beta >= 0.
pub fn pow_interval(n: &BigInt, beta: &BigRational) -> Result<Interval, Error> {
    if n < &BigInt::one() || beta.is_negative() {
        return Err(Error::Inconsistent("pow_interval needs n >= 1 and beta >= 0".into()));
    }
    let p = beta
        .numer()
        .to_u32()
        .ok_or_else(|| Error::BoundExceeded("exponent numerator too large".into()))?;
    let q = beta
        .denom()
        .to_u32()
        .ok_or_else(|| Error::BoundExceeded("exponent denominator too large".into()))?;
    let m = n.pow(p);
    if q == 1 {
        return Ok(Interval::exact(BigRational::from_integer(m)));
    }
    let scaled = &m << (q as u64 * BITS as u64);
    let x = int_nth_root(&scaled, q);
    let den = BigInt::one() << BITS;
    Ok(Interval {
        lo: BigRational::new(x.clone(), den.clone()),
        hi: BigRational::new(x + 1u32, den),
    })
}

/// Enclosure of n^(-beta) for n >= 1 and beta > 0.
pub fn pow_neg_interval(n: &BigInt, beta: &BigRational) -> Result<Interval, Error> {
    pow_interval(n, beta)?.recip_pos()
}

/// zeta(2) bracketed through the alternating series
/// eta(2) = sum (-1)^(k-1)/k^2 and zeta(2) = 2 eta(2).
pub fn zeta2() -> Interval {
    let n = 1500u64;
    let mut acc = Interval::zero();
    for k in 1..=n {
        let term = BigRational::new(BigInt::one(), BigInt::from(k * k));
        let signed = if k % 2 == 1 { term } else { -term };
        acc = acc.add(&Interval::exact(signed));
    }
    let next = BigRational::new(BigInt::one(), BigInt::from((n + 1) * (n + 1)));
    let eta = Interval { lo: acc.lo, hi: acc.hi + next };
    eta.scale(&BigRational::from_integer(BigInt::from(2)))
}

/// Catalan's constant bracketed the same way from
/// G = sum (-1)^k/(2k+1)^2.
pub fn catalan() -> Interval {
    let n = 1500u64;
    let mut acc = Interval::zero();
    for k in 0..n {
        let odd = 2 * k + 1;
        let term = BigRational::new(BigInt::one(), BigInt::from(odd * odd));
        let signed = if k % 2 == 0 { term } else { -term };
        acc = acc.add(&Interval::exact(signed));
    }
    let odd = 2 * n + 1;
    let next = BigRational::new(BigInt::one(), BigInt::from(odd * odd));
    Interval { lo: acc.lo, hi: acc.hi + next }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_powers_are_exact() {
        let v = pow_neg_interval(&BigInt::from(2), &rat(50, 1)).unwrap();
        assert_eq!(v.lo, v.hi);
        assert_eq!(v.lo, rat(1, 1 << 50));
    }

    #[test]
    fn square_root_enclosure() {
        let v = pow_interval(&BigInt::from(2), &rat(1, 2)).unwrap();
        assert!(v.lo < v.hi);
        let sq_lo = &v.lo * &v.lo;
        let sq_hi = &v.hi * &v.hi;
        assert!(sq_lo < rat(2, 1) && rat(2, 1) < sq_hi);
        assert!(v.width() < rat(1, 1_000_000_000));
    }

    #[test]
    fn zeta_two_brackets_the_classical_value() {
        let z = zeta2();
        assert!(z.contains(&rat(16449340668, 10_000_000_000)));
        assert!(z.width() < rat(1, 100_000));
    }

    #[test]
    fn catalan_brackets_the_classical_value() {
        let g = catalan();
        assert!(g.contains(&rat(9159655941, 10_000_000_000)));
        assert!(g.width() < rat(1, 100_000));
    }

    #[test]
    fn interval_algebra_rounds_outward() {
        let a = Interval::exact(rat(1, 3)).coarsen();
        assert!(a.lo < rat(1, 3) && rat(1, 3) < a.hi);
        let b = a.add(&a);
        assert!(b.contains(&rat(2, 3)));
        let c = a.mul(&a);
        assert!(c.contains(&rat(1, 9)));
        let r = a.recip_pos().unwrap();
        assert!(r.contains(&rat(3, 1)));
        let s = a.scale(&rat(-3, 1));
        assert!(s.contains(&rat(-1, 1)));
    }
}
