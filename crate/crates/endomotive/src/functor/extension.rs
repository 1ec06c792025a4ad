//! The two sides of a quadratic extension of the rationals.
//!
//! Ideals move in both directions: a base ideal (n) extends to nO_L,
//! and an ideal b of L pushes down to the base ideal generated by its
//! absolute norm. Both assignments are monoid maps and their
//! composition raises an ideal to the degree of the extension. On
//! divisor lattices the extension has a canonical retraction, sending
//! a divisor D of f^L to the largest base divisor whose extension
//! still divides D; this is the map that indexes the component-wise
//! embedding of the base function algebra into the extended one.

use num_bigint::BigInt;
use num_traits::One;

use crate::classgroups::divisors;
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::NumberField;

/// A quadratic field over the rationals with its per-prime splitting
/// shapes and a level cache for each side.
pub struct ExtensionContext {
    pub base: NumberField,
    pub ext: NumberField,
    pub degree: u32,
    pub splitting: Vec<(u64, Vec<(u32, u32)>)>,
    pub base_store: LevelStore,
    pub ext_store: LevelStore,
}

fn small_primes(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for n in 2..=bound {
        if (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            out.push(n);
        }
    }
    out
}

/// The rational prime under a prime ideal, read off its norm.
pub(crate) fn prime_below(p: &IntegralIdeal) -> BigInt {
    let n = p.norm();
    let r = n.sqrt();
    if &r * &r == n {
        r
    } else {
        n
    }
}

impl ExtensionContext {
    /// Record the ramification index and residue degree of every prime
    /// ideal over each rational prime up to the bound.
    pub fn new(ext: NumberField, prime_bound: u64) -> Result<Self, Error> {
        let base = NumberField::rational();
        let degree = ext.degree();
        let mut splitting = Vec::new();
        for p in small_primes(prime_bound) {
            let pb = BigInt::from(p);
            let extended = IntegralIdeal::from_integer(ext, &pb)?;
            let mut shapes = Vec::new();
            let mut total = 0u32;
            for q in IntegralIdeal::primes_above(ext, &pb) {
                let e = extended.valuation(&q);
                let mut f = 0u32;
                let mut n = q.norm();
                while n > BigInt::one() {
                    n /= &pb;
                    f += 1;
                }
                total += e * f;
                shapes.push((e, f));
            }
            if total != degree {
                return Err(Error::Inconsistent(format!(
                    "splitting shape over {} does not sum to the degree",
                    p
                )));
            }
            splitting.push((p, shapes));
        }
        Ok(ExtensionContext {
            base,
            ext,
            degree,
            splitting,
            base_store: LevelStore::new(base),
            ext_store: LevelStore::new(ext),
        })
    }

    /// (n) goes to nO_L.
    pub fn extend(&self, a: &IntegralIdeal) -> Result<IntegralIdeal, Error> {
        if a.field != self.base {
            return Err(Error::BadIdeal("extension starts from a base ideal".into()));
        }
        IntegralIdeal::from_integer(self.ext, &a.norm())
    }

    /// b goes to the base ideal generated by its norm.
    pub fn ideal_norm(&self, b: &IntegralIdeal) -> Result<IntegralIdeal, Error> {
        if b.field != self.ext {
            return Err(Error::BadIdeal("norm starts from an extended ideal".into()));
        }
        IntegralIdeal::from_integer(self.base, &b.norm())
    }

    /// The extension computed prime by prime instead of through a
    /// single generator; used to cross-check `extend`.
    pub fn extend_by_splitting(&self, a: &IntegralIdeal) -> Result<IntegralIdeal, Error> {
        if a.field != self.base {
            return Err(Error::BadIdeal("extension starts from a base ideal".into()));
        }
        let mut out = IntegralIdeal::one(self.ext);
        for (p, v) in a.factor() {
            let pb = p.norm();
            let extended = IntegralIdeal::from_integer(self.ext, &pb)?;
            for q in IntegralIdeal::primes_above(self.ext, &pb) {
                let e = extended.valuation(&q);
                out = out.mul(&q.pow(e * v));
            }
        }
        Ok(out)
    }

    /// The norm accumulated over the prime factorization; used to
    /// cross-check the determinant route taken by `ideal_norm`.
    pub fn norm_by_splitting(&self, b: &IntegralIdeal) -> Result<BigInt, Error> {
        if b.field != self.ext {
            return Err(Error::BadIdeal("norm starts from an extended ideal".into()));
        }
        let mut out = BigInt::one();
        for (q, v) in b.factor() {
            for _ in 0..v {
                out *= q.norm();
            }
        }
        Ok(out)
    }
}

/// Extension or norm, decided by the side the ideal lives on.
pub fn extend_and_norm(ctx: &ExtensionContext, x: &IntegralIdeal) -> Result<IntegralIdeal, Error> {
    if x.field == ctx.base {
        ctx.extend(x)
    } else if x.field == ctx.ext {
        ctx.ideal_norm(x)
    } else {
        Err(Error::BadIdeal("ideal belongs to neither side of the extension".into()))
    }
}

/// The largest rational n with nO_L dividing t.
pub fn extended_content(ctx: &ExtensionContext, t: &IntegralIdeal) -> Result<BigInt, Error> {
    if t.field != ctx.ext {
        return Err(Error::BadIdeal("content is read on the extension side".into()));
    }
    let mut seen: Vec<BigInt> = Vec::new();
    let mut out = BigInt::one();
    for (q, _) in t.factor() {
        let p = prime_below(&q);
        if seen.contains(&p) {
            continue;
        }
        seen.push(p.clone());
        let extended = IntegralIdeal::from_integer(ctx.ext, &p)?;
        let mut j = u32::MAX;
        for q2 in IntegralIdeal::primes_above(ctx.ext, &p) {
            let e = extended.valuation(&q2);
            j = j.min(t.valuation(&q2) / e);
        }
        for _ in 0..j {
            out *= &p;
        }
    }
    Ok(out)
}

/// Whether t is the extension of a base ideal.
pub fn is_extended(ctx: &ExtensionContext, t: &IntegralIdeal) -> Result<bool, Error> {
    let n = extended_content(ctx, t)?;
    let base = IntegralIdeal::from_integer(ctx.base, &n)?;
    Ok(ctx.extend(&base)? == *t)
}

/// The divisor retraction for a base conductor f: a divisor D of f^L
/// goes to the product over p | f of p raised to the largest j with
/// P^{j e(P|p)} dividing D for every P over p.
pub struct OmegaMap {
    pub fine: Vec<IntegralIdeal>,
    pub coarse: Vec<IntegralIdeal>,
    pub map: Vec<usize>,
}

impl OmegaMap {
    pub fn value(&self, d: &IntegralIdeal) -> Result<&IntegralIdeal, Error> {
        let i = self
            .fine
            .iter()
            .position(|x| x == d)
            .ok_or_else(|| Error::BadIdeal("not a divisor of the extended conductor".into()))?;
        Ok(&self.coarse[self.map[i]])
    }
}

/// Build the retraction and verify it is surjective, monotone under
/// divisibility, and a retraction of the divisor extension.
pub fn omega_map(ctx: &ExtensionContext, f: &IntegralIdeal) -> Result<OmegaMap, Error> {
    if f.field != ctx.base {
        return Err(Error::BadIdeal("the conductor lives in the base field".into()));
    }
    let fl = ctx.extend(f)?;
    let fine = divisors(&fl);
    let coarse = divisors(f);
    let base_primes = f.factor();
    let mut map = Vec::with_capacity(fine.len());
    for dd in &fine {
        let mut val = BigInt::one();
        for (p, _) in &base_primes {
            let pb = p.norm();
            let extended = IntegralIdeal::from_integer(ctx.ext, &pb)?;
            let mut j = u32::MAX;
            for q in IntegralIdeal::primes_above(ctx.ext, &pb) {
                let e = extended.valuation(&q);
                j = j.min(dd.valuation(&q) / e);
            }
            for _ in 0..j {
                val *= &pb;
            }
        }
        let idx = coarse
            .iter()
            .position(|d| d.norm() == val)
            .ok_or_else(|| Error::Inconsistent("retraction value is not a divisor".into()))?;
        map.push(idx);
    }
    let mut hit = vec![false; coarse.len()];
    for &v in &map {
        hit[v] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::Inconsistent("divisor retraction is not surjective".into()));
    }
    for (i, di) in fine.iter().enumerate() {
        for (k, dk) in fine.iter().enumerate() {
            if di.divides(dk) && !coarse[map[i]].divides(&coarse[map[k]]) {
                return Err(Error::Inconsistent(format!(
                    "retraction is not monotone at divisors of norms {} and {}",
                    di.norm(),
                    dk.norm()
                )));
            }
        }
    }
    for (k, d) in coarse.iter().enumerate() {
        let dl = ctx.extend(d)?;
        let i = fine
            .iter()
            .position(|x| x == &dl)
            .ok_or_else(|| Error::Inconsistent("extended divisor missing from the lattice".into()))?;
        if map[i] != k {
            return Err(Error::Inconsistent(format!(
                "retraction does not undo extension at the divisor of norm {}",
                d.norm()
            )));
        }
    }
    Ok(OmegaMap { fine, coarse, map })
}
