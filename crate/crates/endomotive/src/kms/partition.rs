//! Truncated Dedekind zeta partition functions and Gibbs weights.
//!
//! Z_B(beta) = sum over ideals of norm at most B of N(a)^-beta is
//! computed twice: once as the literal ideal sum with an integral tail
//! bound, once as the Euler product over prime ideals of norm at most B
//! with the product tail controlled by 1/(1 - sum of the remaining
//! factors' arguments).  Both routes enclose the limit for beta > 1 and
//! the two intervals must intersect.  For beta <= 1 only partial sums
//! are reported, with a divergence flag and no limit claim.  The tail
//! of the quadratic ideal sum uses that the number of ideals of norm n
//! is at most the divisor count of n, which is at most 2 sqrt n, so the
//! bound needs beta > 3/2; below that the sum is reported uncertified.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;
use crate::nfield::NumberField;

use super::interval::{pow_neg_interval, Interval};

pub struct PartitionValue {
    pub beta: BigRational,
    pub bound: u64,
    pub ideal_count: usize,
    pub prime_count: usize,
    /// Enclosure of the finite sum Z_B(beta) itself.
    pub partial: Interval,
    /// Enclosure of the limit when the tail is certified, else partial.
    pub series: Interval,
    /// Euler product enclosure of the limit when certified.
    pub euler: Interval,
    pub divergent: bool,
    pub tail_certified: bool,
    pub euler_certified: bool,
}

fn primes_to(n: u64) -> Vec<u64> {
    let mut is_prime = vec![true; (n + 1) as usize];
    let mut out = Vec::new();
    for p in 2..=n {
        if is_prime[p as usize] {
            out.push(p);
            let mut m = p * p;
            while m <= n {
                is_prime[m as usize] = false;
                m += p;
            }
        }
    }
    out
}

pub fn partition_function(
    field: NumberField,
    beta: &BigRational,
    bound: u64,
) -> Result<PartitionValue, Error> {
    if !beta.is_positive() {
        return Err(Error::Inconsistent("inverse temperature must be positive".into()));
    }
    if bound < 1 {
        return Err(Error::Inconsistent("norm bound must be at least 1".into()));
    }
    let one = BigRational::one();
    let divergent = *beta <= one;
    let degree = field.degree();

    let ideals = IntegralIdeal::ideals_up_to(field, bound);
    let mut partial = Interval::zero();
    for a in &ideals {
        partial = partial.add(&pow_neg_interval(&a.norm(), beta)?);
    }

    let bb = BigInt::from(bound);
    let mut series = partial.clone();
    let mut tail_certified = false;
    if !divergent {
        let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
        if degree == 1 {
            let t = pow_neg_interval(&bb, &(beta - &one))?;
            let tail_hi = t.hi * (beta - &one).recip();
            series = Interval { lo: partial.lo.clone(), hi: &partial.hi + tail_hi }.coarsen();
            tail_certified = true;
        } else if *beta > three_halves {
            let t = pow_neg_interval(&bb, &(beta - &three_halves))?;
            let tail_hi = t.hi
                * BigRational::from_integer(BigInt::from(2))
                * (beta - &three_halves).recip();
            series = Interval { lo: partial.lo.clone(), hi: &partial.hi + tail_hi }.coarsen();
            tail_certified = true;
        }
    }

    let mut euler = Interval::one();
    let mut prime_count = 0usize;
    for p in primes_to(bound) {
        for prime in IntegralIdeal::primes_above(field, &BigInt::from(p)) {
            if prime.norm() > bb {
                continue;
            }
            let x = pow_neg_interval(&prime.norm(), beta)?;
            euler = euler.mul(&x.one_minus().recip_pos()?);
            prime_count += 1;
        }
    }
    let mut euler_certified = false;
    if !divergent {
        let t = pow_neg_interval(&bb, &(beta - &one))?;
        let prime_tail = t.hi
            * BigRational::from_integer(BigInt::from(degree))
            * (beta - &one).recip();
        if prime_tail < one {
            let blow = (&one - &prime_tail).recip();
            euler = Interval { lo: euler.lo.clone(), hi: euler.hi * blow }.coarsen();
            euler_certified = true;
        }
    }

    if tail_certified && euler_certified && !series.overlaps(&euler) {
        return Err(Error::Inconsistent(
            "ideal-sum and Euler-product zeta intervals do not meet".into(),
        ));
    }

    Ok(PartitionValue {
        beta: beta.clone(),
        bound,
        ideal_count: ideals.len(),
        prime_count,
        partial,
        series,
        euler,
        divergent,
        tail_certified,
        euler_certified,
    })
}

/// Diagonal Gibbs weights N(a)^-beta / Z_B(beta) at integer beta, exact.
pub struct TruncatedGibbsState {
    pub beta: u32,
    pub bound: u64,
    pub ideals: Vec<IntegralIdeal>,
    pub weights: Vec<BigRational>,
}

impl TruncatedGibbsState {
    pub fn build(field: NumberField, beta: u32, bound: u64) -> Result<Self, Error> {
        if beta == 0 || bound < 1 {
            return Err(Error::Inconsistent("gibbs state needs beta >= 1 and bound >= 1".into()));
        }
        let ideals = IntegralIdeal::ideals_up_to(field, bound);
        let terms: Vec<BigRational> = ideals
            .iter()
            .map(|a| BigRational::new(BigInt::one(), a.norm().pow(beta)))
            .collect();
        let z: BigRational = terms.iter().sum();
        let weights: Vec<BigRational> = terms.into_iter().map(|t| t / &z).collect();
        let total: BigRational = weights.iter().sum();
        if total != BigRational::one() {
            return Err(Error::Inconsistent("gibbs weights do not sum to one".into()));
        }
        Ok(TruncatedGibbsState { beta, bound, ideals, weights })
    }

    pub fn partition_sum(&self) -> BigRational {
        self.ideals
            .iter()
            .map(|a| BigRational::new(BigInt::one(), a.norm().pow(self.beta)))
            .sum()
    }
}
