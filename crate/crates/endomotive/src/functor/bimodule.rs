//! The truncated bimodule between the crossed products of the two
//! fields.
//!
//! Tensors U_t ⊗ x, with t an ideal of the extension and x a monomial
//! of the base algebra, modulo the balancing relation that moves any
//! extended factor of t across the tensor sign as a base shift. The
//! extension algebra acts on the left: a coefficient times a forward
//! shift first slides past the full shift by the sigma twist, then
//! descends to a base coefficient along the class extension map. The
//! base-valued inner product applies the conditional expectation that
//! keeps a reduced shift pair only when both sides are extended from
//! the base, and evaluates the rest inside the base algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bcalgebra::monomial::{
    adjoint, coefficient, equal, mul, shift, shift_star, unit, Monomial,
};
use crate::drmonoid::maps::project;
use crate::drmonoid::LevelStore;
use crate::error::Error;
use crate::nfield::ideal::IntegralIdeal;

use super::extension::{extended_content, prime_below, ExtensionContext};

type IdealKey = (BigInt, BigInt, BigInt, BigInt);

/// A reduced simple tensor: t carries no extended factor.
#[derive(Clone)]
pub struct Tensor {
    pub t: IntegralIdeal,
    pub mon: Monomial,
}

/// Basis tensors of bounded norm with the action and inner-product
/// tables evaluated on them. Action entries are None when the result
/// leaves the truncation; inner entries are None when the expectation
/// kills the pair.
pub struct TruncatedBimodule {
    pub bound: u64,
    pub base_conductor: IntegralIdeal,
    pub ext_conductor: IntegralIdeal,
    pub basis: Vec<Tensor>,
    pub generators: Vec<Monomial>,
    pub left_action: Vec<Vec<Option<Tensor>>>,
    pub inner: Vec<Vec<Option<Monomial>>>,
}

pub struct BimoduleReport {
    pub bimodule: TruncatedBimodule,
    pub balancing_checks: usize,
    pub action_checks: usize,
    pub action_skipped: usize,
    pub symmetry_checks: usize,
    pub positivity_checks: usize,
    pub linearity_checks: usize,
}

fn nonzero(m: Monomial) -> Option<Monomial> {
    if m.coeff.iter().all(Zero::is_zero) {
        None
    } else {
        Some(m)
    }
}

fn monomials_match(
    store: &mut LevelStore,
    a: &Option<Monomial>,
    b: &Option<Monomial>,
) -> Result<bool, Error> {
    match (a, b) {
        (None, None) => Ok(true),
        (Some(x), Some(y)) => equal(store, x, y),
        _ => Ok(false),
    }
}

fn tensors_match(
    store: &mut LevelStore,
    a: &Option<Tensor>,
    b: &Option<Tensor>,
) -> Result<bool, Error> {
    match (a, b) {
        (None, None) => Ok(true),
        (Some(x), Some(y)) => Ok(x.t == y.t && equal(store, &x.mon, &y.mon)?),
        _ => Ok(false),
    }
}

struct Build<'a> {
    ctx: &'a mut ExtensionContext,
    f: IntegralIdeal,
    bound: u64,
    ver: BTreeMap<IdealKey, Vec<usize>>,
}

impl<'a> Build<'a> {
    /// Class extension indices at a base conductor, cached.
    fn ver_indices(&mut self, g: &IntegralIdeal) -> Result<Vec<usize>, Error> {
        if let Some(v) = self.ver.get(&g.key()) {
            return Ok(v.clone());
        }
        let gl = self.ctx.extend(g)?;
        let base = self.ctx.base_store.level(g)?;
        let ext = self.ctx.ext_store.level(&gl)?;
        let mut map = Vec::with_capacity(base.size);
        for idx in 0..base.size {
            map.push(ext.classify_ideal(&self.ctx.extend(&base.rep_ideal(idx))?)?);
        }
        self.ver.insert(g.key(), map.clone());
        Ok(map)
    }

    /// The smallest base ideal whose extension is divisible by g.
    fn closure(&self, g: &IntegralIdeal) -> Result<IntegralIdeal, Error> {
        let mut seen: Vec<BigInt> = Vec::new();
        let mut n = BigInt::one();
        for (q, _) in g.factor() {
            let p = prime_below(&q);
            if seen.contains(&p) {
                continue;
            }
            seen.push(p.clone());
            let extended = IntegralIdeal::from_integer(self.ctx.ext, &p)?;
            let mut j = 0u32;
            for q2 in IntegralIdeal::primes_above(self.ctx.ext, &p) {
                let e = extended.valuation(&q2);
                let v = g.valuation(&q2);
                j = j.max(v.div_ceil(e));
            }
            for _ in 0..j {
                n *= &p;
            }
        }
        IntegralIdeal::from_integer(self.ctx.base, &n)
    }

    /// Pull the extended content of t across the tensor sign.
    fn reduce(&mut self, t: IntegralIdeal, mon: Monomial) -> Result<Tensor, Error> {
        let c = extended_content(self.ctx, &t)?;
        if c.is_one() {
            return Ok(Tensor { t, mon });
        }
        let cb = IntegralIdeal::from_integer(self.ctx.base, &c)?;
        let t0 = t
            .div_exact(&self.ctx.extend(&cb)?)
            .expect("content divides");
        let un = shift(&mut self.ctx.base_store, &self.f, &cb)?;
        let m = mul(&mut self.ctx.base_store, &un, &mon)?;
        Ok(Tensor { t: t0, mon: m })
    }

    /// Left action of a coefficient times a forward shift; None when
    /// the reduced tensor leaves the truncation.
    fn act(&mut self, gen: &Monomial, x: &Tensor) -> Result<Option<Tensor>, Error> {
        if !gen.left.norm().is_one() {
            return Err(Error::BadElement(
                "left action is evaluated on forward monomials".into(),
            ));
        }
        let new_t = gen.right.mul(&x.t);
        let c = extended_content(self.ctx, &new_t)?;
        let mut cpow = BigInt::one();
        for _ in 0..self.ctx.degree {
            cpow *= &c;
        }
        if new_t.norm() / cpow > BigInt::from(self.bound) {
            return Ok(None);
        }
        let phi = if gen.coeff.iter().all(|v| *v == gen.coeff[0]) {
            let size = self.ctx.base_store.level(&self.f)?.size;
            coefficient(
                &mut self.ctx.base_store,
                &self.f,
                vec![gen.coeff[0].clone(); size],
            )?
        } else {
            // Sliding the coefficient past the shift and descending is
            // evaluation at [new_t] times the extended class.
            let g0 = self.closure(&gen.level)?;
            let gl0 = self.ctx.extend(&g0)?;
            let lev = self.ctx.ext_store.level(&gen.level)?;
            let cls = lev.classify_ideal(&new_t)?;
            let down = if gl0 == gen.level {
                None
            } else {
                Some(project(&mut self.ctx.ext_store, &gl0, &gen.level)?)
            };
            let vm = self.ver_indices(&g0)?;
            let mut pulled = Vec::with_capacity(vm.len());
            for &i in &vm {
                let at = match &down {
                    Some(p) => p.map[i],
                    None => i,
                };
                pulled.push(gen.coeff[lev.mul(cls, at)?].clone());
            }
            coefficient(&mut self.ctx.base_store, &g0, pulled)?
        };
        let m = mul(&mut self.ctx.base_store, &phi, &x.mon)?;
        let out = self.reduce(new_t, m)?;
        Ok(Some(out))
    }

    /// The expectation-valued pairing of two tensors.
    fn inner(&mut self, a: &Tensor, b: &Tensor) -> Result<Option<Monomial>, Error> {
        let d = a.t.gcd(&b.t);
        let tp = a.t.div_exact(&d).expect("gcd divides");
        let rp = b.t.div_exact(&d).expect("gcd divides");
        let n1 = extended_content(self.ctx, &tp)?;
        let n1b = IntegralIdeal::from_integer(self.ctx.base, &n1)?;
        if self.ctx.extend(&n1b)? != tp {
            return Ok(None);
        }
        let n2 = extended_content(self.ctx, &rp)?;
        let n2b = IntegralIdeal::from_integer(self.ctx.base, &n2)?;
        if self.ctx.extend(&n2b)? != rp {
            return Ok(None);
        }
        let star = shift_star(&mut self.ctx.base_store, &self.f, &n1b)?;
        let fwd = shift(&mut self.ctx.base_store, &self.f, &n2b)?;
        let mid = mul(&mut self.ctx.base_store, &star, &fwd)?;
        let left = adjoint(&mut self.ctx.base_store, &a.mon)?;
        let lm = mul(&mut self.ctx.base_store, &left, &mid)?;
        let out = mul(&mut self.ctx.base_store, &lm, &b.mon)?;
        Ok(nonzero(out))
    }
}

/// Build the truncated bimodule at a base conductor and verify the
/// balancing relation, that the left action respects products, and the
/// inner-product axioms. Any failed identity is fatal; skipped action
/// triples are truncation artifacts and are counted.
pub fn bimodule_build(
    ctx: &mut ExtensionContext,
    f: &IntegralIdeal,
    bound: u64,
    seed: u64,
) -> Result<BimoduleReport, Error> {
    if f.field != ctx.base {
        return Err(Error::BadIdeal("the conductor lives in the base field".into()));
    }
    if bound < 1 {
        return Err(Error::BoundExceeded("the truncation bound must be positive".into()));
    }
    let fl = ctx.extend(f)?;
    let base_size = ctx.base_store.level(f)?.size;
    let ext_size = ctx.ext_store.level(&fl)?.size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut prims = Vec::new();
    for t in IntegralIdeal::ideals_up_to(ctx.ext, bound) {
        if extended_content(ctx, &t)?.is_one() {
            prims.push(t);
        }
    }

    let two = IntegralIdeal::from_integer(ctx.base, &BigInt::from(2))?;
    let three = IntegralIdeal::from_integer(ctx.base, &BigInt::from(3))?;
    let cycle = [1i64, -1, 2];
    let pool = vec![
        unit(&mut ctx.base_store, f)?,
        shift(&mut ctx.base_store, f, &two)?,
        shift_star(&mut ctx.base_store, f, &three)?,
        coefficient(
            &mut ctx.base_store,
            f,
            (0..base_size)
                .map(|i| BigRational::from_integer(BigInt::from(cycle[i % 3])))
                .collect(),
        )?,
    ];
    let mut basis = Vec::with_capacity(prims.len() * pool.len());
    for t in &prims {
        for m in &pool {
            basis.push(Tensor { t: t.clone(), mon: m.clone() });
        }
    }

    let small = IntegralIdeal::ideals_up_to(ctx.ext, 5);
    let s1 = small
        .iter()
        .find(|q| !q.norm().is_one())
        .ok_or_else(|| Error::Inconsistent("no small ideal to shift by".into()))?
        .clone();
    let s2 = small
        .iter()
        .rev()
        .find(|q| !q.norm().is_one() && **q != s1)
        .unwrap_or(&s1)
        .clone();
    let rand_coeff: Vec<BigRational> = (0..ext_size)
        .map(|_| BigRational::new(rng.gen_range(-2i64..=2).into(), rng.gen_range(1i64..=2).into()))
        .collect();
    let generators = vec![
        unit(&mut ctx.ext_store, &fl)?,
        shift(&mut ctx.ext_store, &fl, &s1)?,
        shift(&mut ctx.ext_store, &fl, &s2)?,
        coefficient(&mut ctx.ext_store, &fl, rand_coeff)?,
    ];

    let mut bld = Build { ctx, f: f.clone(), bound, ver: BTreeMap::new() };

    let mut left_action = Vec::with_capacity(generators.len());
    for g in &generators {
        let mut row = Vec::with_capacity(basis.len());
        for x in &basis {
            row.push(bld.act(g, x)?);
        }
        left_action.push(row);
    }
    let mut inner = Vec::with_capacity(basis.len());
    for a in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for b in &basis {
            row.push(bld.inner(a, b)?);
        }
        inner.push(row);
    }

    let mut balancing_checks = 0usize;
    for (k, x) in basis.iter().enumerate().step_by(5) {
        for n in [2i64, 3] {
            let nb = IntegralIdeal::from_integer(bld.ctx.base, &BigInt::from(n))?;
            let t_big = x.t.mul(&bld.ctx.extend(&nb)?);
            let raw = Tensor { t: t_big.clone(), mon: x.mon.clone() };
            let red = bld.reduce(t_big, x.mon.clone())?;
            if red.t != x.t {
                return Err(Error::Inconsistent("balancing does not recover the primitive part".into()));
            }
            let sh = shift(&mut bld.ctx.base_store, f, &nb)?;
            let folded = mul(&mut bld.ctx.base_store, &sh, &x.mon)?;
            if !equal(&mut bld.ctx.base_store, &red.mon, &folded)? {
                return Err(Error::Inconsistent("balancing does not fold into the base shift".into()));
            }
            for j in [k, (k + 7) % basis.len()] {
                let lhs = bld.inner(&raw, &basis[j])?;
                let rhs = bld.inner(&red, &basis[j])?;
                if !monomials_match(&mut bld.ctx.base_store, &lhs, &rhs)? {
                    return Err(Error::Inconsistent("inner product sees the balancing relation".into()));
                }
            }
            let a1 = bld.act(&generators[1], &raw)?;
            let a2 = bld.act(&generators[1], &red)?;
            if !tensors_match(&mut bld.ctx.base_store, &a1, &a2)? {
                return Err(Error::Inconsistent("left action sees the balancing relation".into()));
            }
            balancing_checks += 1;
        }
    }

    let mut action_checks = 0usize;
    let mut action_skipped = 0usize;
    for gi in &generators {
        for gj in &generators {
            let prod = mul(&mut bld.ctx.ext_store, gi, gj)?;
            for x in basis.iter().step_by(6) {
                let staged_mid = bld.act(gj, x)?;
                let staged = match staged_mid {
                    Some(ref y) => bld.act(gi, y)?,
                    None => {
                        action_skipped += 1;
                        continue;
                    }
                };
                let direct = bld.act(&prod, x)?;
                if !tensors_match(&mut bld.ctx.base_store, &direct, &staged)? {
                    return Err(Error::Inconsistent(
                        "left action does not respect the generator product".into(),
                    ));
                }
                action_checks += 1;
            }
        }
    }

    let mut symmetry_checks = 0usize;
    let mut positivity_checks = 0usize;
    for i in 0..basis.len() {
        for j in (i..basis.len()).step_by(3) {
            let flipped = match &inner[j][i] {
                Some(m) => Some(adjoint(&mut bld.ctx.base_store, m)?),
                None => None,
            };
            if !monomials_match(&mut bld.ctx.base_store, &inner[i][j], &flipped)? {
                return Err(Error::Inconsistent("inner product is not conjugate symmetric".into()));
            }
            symmetry_checks += 1;
        }
        match &inner[i][i] {
            None => {
                return Err(Error::Inconsistent("diagonal inner product vanished".into()));
            }
            Some(m) => {
                if m.left != m.right || m.coeff.iter().any(|c| c.is_negative()) {
                    return Err(Error::Inconsistent("diagonal inner product is not positive".into()));
                }
                positivity_checks += 1;
            }
        }
    }

    let mut linearity_checks = 0usize;
    for i in (0..basis.len()).step_by(4) {
        for j in (0..basis.len()).step_by(5) {
            for a in [&pool[1], &pool[3]] {
                let scaled = Tensor {
                    t: basis[j].t.clone(),
                    mon: mul(&mut bld.ctx.base_store, &basis[j].mon, a)?,
                };
                let lhs = bld.inner(&basis[i], &scaled)?;
                let rhs = match &inner[i][j] {
                    Some(m) => nonzero(mul(&mut bld.ctx.base_store, m, a)?),
                    None => None,
                };
                if !monomials_match(&mut bld.ctx.base_store, &lhs, &rhs)? {
                    return Err(Error::Inconsistent("inner product is not right linear".into()));
                }
                let scaled_left = Tensor {
                    t: basis[i].t.clone(),
                    mon: mul(&mut bld.ctx.base_store, &basis[i].mon, a)?,
                };
                let lhs2 = bld.inner(&scaled_left, &basis[j])?;
                let astar = adjoint(&mut bld.ctx.base_store, a)?;
                let rhs2 = match &inner[i][j] {
                    Some(m) => nonzero(mul(&mut bld.ctx.base_store, &astar, m)?),
                    None => None,
                };
                if !monomials_match(&mut bld.ctx.base_store, &lhs2, &rhs2)? {
                    return Err(Error::Inconsistent(
                        "adjoint does not move across the inner product".into(),
                    ));
                }
                linearity_checks += 1;
            }
        }
    }

    Ok(BimoduleReport {
        bimodule: TruncatedBimodule {
            bound,
            base_conductor: f.clone(),
            ext_conductor: fl,
            basis,
            generators,
            left_action,
            inner,
        },
        balancing_checks,
        action_checks,
        action_skipped,
        symmetry_checks,
        positivity_checks,
        linearity_checks,
    })
}
