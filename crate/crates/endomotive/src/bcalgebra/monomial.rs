//! The crossed-product monomial calculus over the level tower.
//!
//! Elements U*_{s1} a U_{s2}, with a a function on some level, span the
//! crossed product of the function tower by the ideal semigroup. The
//! product of two monomials is again one; the rewriting uses only the
//! sigma, rho and pi operators, whose mutual relations are verified
//! separately, together with the clamp a -> pi_{s1} a pi_{s2} that every
//! monomial absorbs. The displayed generator relations, adjoint rules
//! and associativity are then checked on concrete ideals with random
//! coefficient functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bcalgebra::operators::{pi_vector, rho_op, sigma_op, xi_op};
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

/// U*_{left} coeff U_{right}, with the coefficient read at the stated
/// level of the tower.
#[derive(Clone, Debug)]
pub struct Monomial {
    pub left: IntegralIdeal,
    pub right: IntegralIdeal,
    pub level: IntegralIdeal,
    pub coeff: Vec<BigRational>,
}

fn lift(
    store: &mut LevelStore,
    from: &IntegralIdeal,
    to: &IntegralIdeal,
    v: &[BigRational],
) -> Result<Vec<BigRational>, Error> {
    if from == to {
        return Ok(v.to_vec());
    }
    xi_op(store, from, to)?.apply(v)
}

/// Canonical form: pull the common divisor of the two shift ideals into
/// the coefficient through sigma, then absorb the two image projections.
pub fn normalize(store: &mut LevelStore, m: Monomial) -> Result<Monomial, Error> {
    let mut left = m.left;
    let mut right = m.right;
    let mut level = m.level;
    let mut coeff = m.coeff;

    let g = left.gcd(&right);
    if !g.norm().is_one() {
        let up = level.intersect(&g);
        coeff = lift(store, &level, &up, &coeff)?;
        let down = up.div_exact(&g).expect("gcd divides the lifted level");
        coeff = sigma_op(store, &down, &g)?.apply(&coeff)?;
        level = down;
        left = left.div_exact(&g).expect("gcd divides the left shift");
        right = right.div_exact(&g).expect("gcd divides the right shift");
    }

    let mut target = level.clone();
    for s in [&left, &right] {
        if !s.norm().is_one() {
            target = target.intersect(s);
        }
    }
    if target != level {
        coeff = lift(store, &level, &target, &coeff)?;
        level = target;
    }
    for s in [&left, &right] {
        if s.norm().is_one() {
            continue;
        }
        let base = level.div_exact(s).expect("clamp level is divisible");
        let pi = pi_vector(store, &base, s)?;
        for (c, p) in coeff.iter_mut().zip(&pi) {
            *c = &*c * p;
        }
    }
    Ok(Monomial { left, right, level, coeff })
}

fn one_ideal(store: &LevelStore) -> IntegralIdeal {
    IntegralIdeal::from_integer(store.field, &BigInt::one()).expect("unit ideal")
}

/// The unit of the algebra, held at the given level.
pub fn unit(store: &mut LevelStore, f: &IntegralIdeal) -> Result<Monomial, Error> {
    let size = store.level(f)?.size;
    let e = one_ideal(store);
    Ok(Monomial { left: e.clone(), right: e, level: f.clone(), coeff: vec![BigRational::one(); size] })
}

/// U_s with unit coefficient.
pub fn shift(store: &mut LevelStore, f: &IntegralIdeal, s: &IntegralIdeal) -> Result<Monomial, Error> {
    let mut m = unit(store, f)?;
    m.right = s.clone();
    normalize(store, m)
}

/// U*_s with unit coefficient.
pub fn shift_star(store: &mut LevelStore, f: &IntegralIdeal, s: &IntegralIdeal) -> Result<Monomial, Error> {
    let mut m = unit(store, f)?;
    m.left = s.clone();
    normalize(store, m)
}

/// A plain coefficient, as a monomial with trivial shifts.
pub fn coefficient(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    coeff: Vec<BigRational>,
) -> Result<Monomial, Error> {
    let e = one_ideal(store);
    normalize(store, Monomial { left: e.clone(), right: e, level: f.clone(), coeff })
}

/// Product of two monomials, reduced to normal form.
pub fn mul(store: &mut LevelStore, m: &Monomial, n: &Monomial) -> Result<Monomial, Error> {
    let g = m.right.gcd(&n.left);
    let s2p = m.right.div_exact(&g).expect("gcd divides");
    let t1p = n.left.div_exact(&g).expect("gcd divides");
    let l = m.right.intersect(&n.left);

    let mut a = m.coeff.clone();
    let mut a_level = m.level.clone();
    if !t1p.norm().is_one() {
        a = rho_op(store, &a_level, &t1p)?.apply(&a)?;
        a_level = a_level.mul(&t1p);
    }
    let mut b = n.coeff.clone();
    let mut b_level = n.level.clone();
    if !s2p.norm().is_one() {
        b = rho_op(store, &b_level, &s2p)?.apply(&b)?;
        b_level = b_level.mul(&s2p);
    }

    let mut common = a_level.intersect(&b_level);
    if !l.norm().is_one() {
        common = common.intersect(&l);
    }
    let a = lift(store, &a_level, &common, &a)?;
    let b = lift(store, &b_level, &common, &b)?;
    let mut coeff: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    if !l.norm().is_one() {
        let base = common.div_exact(&l).expect("join level divisible");
        let pi = pi_vector(store, &base, &l)?;
        for (c, p) in coeff.iter_mut().zip(&pi) {
            *c = &*c * p;
        }
    }
    normalize(
        store,
        Monomial { left: m.left.mul(&t1p), right: n.right.mul(&s2p), level: common, coeff },
    )
}

/// Adjoint: swap the shifts; rational coefficients are their own
/// conjugates.
pub fn adjoint(store: &mut LevelStore, m: &Monomial) -> Result<Monomial, Error> {
    normalize(
        store,
        Monomial {
            left: m.right.clone(),
            right: m.left.clone(),
            level: m.level.clone(),
            coeff: m.coeff.clone(),
        },
    )
}

/// Equality in the algebra, through normal forms compared at a common
/// level.
pub fn equal(store: &mut LevelStore, m: &Monomial, n: &Monomial) -> Result<bool, Error> {
    let m = normalize(store, m.clone())?;
    let n = normalize(store, n.clone())?;
    if m.left != n.left || m.right != n.right {
        return Ok(false);
    }
    let join = m.level.intersect(&n.level);
    Ok(lift(store, &m.level, &join, &m.coeff)? == lift(store, &n.level, &join, &n.coeff)?)
}

pub struct CalculusReport {
    pub pool: usize,
    pub relation_checks: usize,
    pub word_trials: usize,
}

fn random_coeff(
    store: &mut LevelStore,
    rng: &mut ChaCha8Rng,
    level: &IntegralIdeal,
) -> Result<Vec<BigRational>, Error> {
    let size = store.level(level)?.size;
    Ok((0..size)
        .map(|_| {
            BigRational::new(
                BigInt::from(rng.gen_range(-3i64..=3)),
                BigInt::from(rng.gen_range(1i64..=3)),
            )
        })
        .collect())
}

/// The generator relations over all ideals of norm at most the bound,
/// plus adjoint anti-multiplicativity and associativity on random
/// monomials. Any failure is fatal.
pub fn crossed_monomial_calculus(
    store: &mut LevelStore,
    f: &IntegralIdeal,
    bound: u64,
    seed: u64,
) -> Result<CalculusReport, Error> {
    let pool = IntegralIdeal::ideals_up_to(store.field, bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relation_checks = 0usize;
    let fail = |what: &str| Error::Inconsistent(format!("monomial relation {what} failed"));

    let id = unit(store, f)?;
    for s in &pool {
        let us = shift(store, f, s)?;
        let uss = shift_star(store, f, s)?;

        let lhs = mul(store, &uss, &us)?;
        if !equal(store, &lhs, &id)? {
            return Err(fail("U*_s U_s = 1"));
        }
        relation_checks += 1;

        let lhs = mul(store, &us, &uss)?;
        let ones = unit(store, f)?.coeff;
        let pi_s = rho_op(store, f, s)?.apply(&ones)?;
        let rhs = coefficient(store, &f.mul(s), pi_s)?;
        if !equal(store, &lhs, &rhs)? {
            return Err(fail("U_s U*_s = pi_s"));
        }
        relation_checks += 1;

        let a = random_coeff(store, &mut rng, f)?;
        let am = coefficient(store, f, a.clone())?;
        let ra = rho_op(store, f, s)?.apply(&a)?;
        let ram = coefficient(store, &f.mul(s), ra)?;

        let lhs = mul(store, &us, &am)?;
        let rhs = mul(store, &ram, &us)?;
        if !equal(store, &lhs, &rhs)? {
            return Err(fail("U_s a = rho_s(a) U_s"));
        }
        relation_checks += 1;

        let lhs = mul(store, &am, &uss)?;
        let rhs = mul(store, &uss, &ram)?;
        if !equal(store, &lhs, &rhs)? {
            return Err(fail("a U*_s = U*_s rho_s(a)"));
        }
        relation_checks += 1;
    }

    for s in &pool {
        for t in &pool {
            let us = shift(store, f, s)?;
            let ut = shift(store, f, t)?;
            let ust = shift(store, f, &s.mul(t))?;
            let prod = mul(store, &us, &ut)?;
            if !equal(store, &prod, &ust)? {
                return Err(fail("U_s U_t = U_{st}"));
            }
            relation_checks += 1;

            let uss = shift_star(store, f, s)?;
            let uts = shift_star(store, f, t)?;
            let usts = shift_star(store, f, &s.mul(t))?;
            let prod = mul(store, &uss, &uts)?;
            if !equal(store, &prod, &usts)? {
                return Err(fail("U*_s U*_t = U*_{st}"));
            }
            relation_checks += 1;

            // U*_t U_s depends only on the ratio s/t.
            let d = &pool[1 % pool.len()];
            let plain = mul(store, &uts, &us)?;
            let deep_star = shift_star(store, f, &t.mul(d))?;
            let deep_shift = shift(store, f, &s.mul(d))?;
            let deep = mul(store, &deep_star, &deep_shift)?;
            if !equal(store, &plain, &deep)? {
                return Err(fail("U*_t U_s depends only on s/t"));
            }
            relation_checks += 1;

            if s.is_coprime(t) {
                let lhs = mul(store, &us, &uts)?;
                let rhs = mul(store, &uts, &us)?;
                if !equal(store, &lhs, &rhs)? {
                    return Err(fail("coprime shifts commute past the adjoint"));
                }
                relation_checks += 1;
            }
        }
    }

    let word_trials = 8usize;
    for _ in 0..word_trials {
        let mut words = Vec::with_capacity(3);
        for _ in 0..3 {
            let left = pool[rng.gen_range(0..pool.len())].clone();
            let right = pool[rng.gen_range(0..pool.len())].clone();
            let coeff = random_coeff(store, &mut rng, f)?;
            words.push(normalize(store, Monomial { left, right, level: f.clone(), coeff })?);
        }
        let (m, n, p) = (&words[0], &words[1], &words[2]);

        let mn = mul(store, m, n)?;
        let np = mul(store, n, p)?;
        let lhs = mul(store, &mn, p)?;
        let rhs = mul(store, m, &np)?;
        if !equal(store, &lhs, &rhs)? {
            return Err(fail("associativity"));
        }

        let lhs = adjoint(store, &mn)?;
        let nstar = adjoint(store, n)?;
        let mstar = adjoint(store, m)?;
        let rhs = mul(store, &nstar, &mstar)?;
        if !equal(store, &lhs, &rhs)? {
            return Err(fail("adjoint reverses products"));
        }
    }

    Ok(CalculusReport { pool: pool.len(), relation_checks, word_trials })
}
