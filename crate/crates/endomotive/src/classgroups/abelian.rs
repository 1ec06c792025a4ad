//! Structure computation for finite abelian groups given by tables.
//!
//! The basis is found by peeling: an element of maximal order generates a
//! direct factor, and a basis of the quotient lifts after a correction by
//! a power of the first generator.  The resulting generator orders are
//! the invariant factors in descending order, and every element gets an
//! exponent vector over the basis.

use num_integer::Integer;
use std::collections::BTreeMap;

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
    pub orders: Vec<u64>,
    /// Basis element indices; orders form a divisibility chain,
    /// largest first.
    pub generators: Vec<usize>,
    pub generator_orders: Vec<u64>,
    /// Exponent vector of each element over the generators.
    pub dlog: Vec<Vec<u64>>,
}

fn element_orders(table: &[Vec<usize>], identity: usize) -> Vec<u64> {
    let n = table.len();
    let mut orders = vec![0u64; n];
    for x in 0..n {
        let mut acc = x;
        let mut k = 1u64;
        while acc != identity {
            acc = table[acc][x];
            k += 1;
            assert!(k <= n as u64 + 1, "order exceeded group size");
        }
        orders[x] = k;
    }
    orders
}

fn table_pow(table: &[Vec<usize>], identity: usize, x: usize, k: u64) -> usize {
    let mut acc = identity;
    let mut base = x;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = table[acc][base];
        }
        base = table[base][base];
        e >>= 1;
    }
    acc
}

/// Basis of (element, order) pairs for an abelian group table.
fn peel(table: &[Vec<usize>], identity: usize, inverse: &[usize]) -> Vec<(usize, u64)> {
    let n = table.len();
    if n == 1 {
        return vec![];
    }
    let orders = element_orders(table, identity);
    let mut g1 = 0usize;
    for x in 0..n {
        if orders[x] > orders[g1] {
            g1 = x;
        }
    }
    let m1 = orders[g1];
    if m1 == n as u64 {
        return vec![(g1, m1)];
    }
    // Cyclic subgroup generated by g1, with discrete logs inside it.
    let mut cyc = Vec::with_capacity(m1 as usize);
    let mut cyc_log = BTreeMap::new();
    let mut acc = identity;
    for k in 0..m1 {
        cyc.push(acc);
        cyc_log.insert(acc, k);
        acc = table[acc][g1];
    }
    // Quotient by the cyclic subgroup: canonical coset representative is
    // the smallest member.
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = cyc.iter().map(|&s| table[x][s]).collect();
        let idx = reps.len();
        for &m in &members {
            coset_of[m] = idx;
        }
        reps.push(*members.iter().min().unwrap());
    }
    let qn = reps.len();
    let mut qtable = vec![vec![0usize; qn]; qn];
    for i in 0..qn {
        for j in 0..qn {
            qtable[i][j] = coset_of[table[reps[i]][reps[j]]];
        }
    }
    let qid = coset_of[identity];
    let qinv: Vec<usize> = (0..qn).map(|i| coset_of[inverse[reps[i]]]).collect();
    let qbasis = peel(&qtable, qid, &qinv);
    let mut out = vec![(g1, m1)];
    for (cb, mi) in qbasis {
        let h = reps[cb];
        let hm = table_pow(table, identity, h, mi);
        let c = *cyc_log.get(&hm).expect("power must fall in the cyclic factor");
        assert!(c % mi == 0, "lifting correction must divide");
        let corr = table_pow(table, identity, g1, (m1 - c / mi) % m1);
        let lifted = table[h][corr];
        out.push((lifted, mi));
    }
    out
}

impl FiniteAbelianGroup {
    /// Build from a multiplication table.  Checks identity, inverses and
    /// commutativity; the caller guarantees associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::Inconsistent("malformed multiplication table".into()));
        }
        let mut identity = None;
        'outer: for e in 0..n {
            for x in 0..n {
                if table[e][x] != x || table[x][e] != x {
                    continue 'outer;
                }
            }
            identity = Some(e);
            break;
        }
        let identity = identity.ok_or_else(|| Error::Inconsistent("no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            for y in 0..n {
                if table[x][y] == identity {
                    inverse[x] = y;
                    break;
                }
            }
            if inverse[x] == usize::MAX {
                return Err(Error::Inconsistent(format!("element {x} has no inverse")));
            }
        }
        for x in 0..n {
            for y in 0..x {
                if table[x][y] != table[y][x] {
                    return Err(Error::Inconsistent("table is not commutative".into()));
                }
            }
        }
        let orders = element_orders(&table, identity);
        let basis = peel(&table, identity, &inverse);
        let generators: Vec<usize> = basis.iter().map(|&(g, _)| g).collect();
        let generator_orders: Vec<u64> = basis.iter().map(|&(_, m)| m).collect();
        for w in generator_orders.windows(2) {
            assert!(w[0] % w[1] == 0, "generator orders must form a chain");
        }
        // Exponent vectors: enumerate the direct sum and check it fills
        // the group exactly once.
        let mut dlog = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let k = generators.len();
        let mut exps = vec![0u64; k];
        loop {
            let mut elem = identity;
            for (i, &g) in generators.iter().enumerate() {
                elem = table[elem][table_pow(&table, identity, g, exps[i])];
            }
            if seen[elem] {
                return Err(Error::Inconsistent("basis does not span freely".into()));
            }
            seen[elem] = true;
            dlog[elem] = exps.clone();
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                exps[i] += 1;
                if exps[i] < generator_orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Inconsistent("basis does not span".into()));
        }
        Ok(FiniteAbelianGroup {
            size: n,
            table,
            identity,
            inverse,
            orders,
            generators,
            generator_orders,
            dlog,
        })
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse[x] } else { x };
        table_pow(&self.table, self.identity, base, k.unsigned_abs())
    }

    /// Invariant factors d1 | d2 | ... in ascending order, excluding 1.
    pub fn invariants(&self) -> Vec<u64> {
        let mut v = self.generator_orders.clone();
        v.reverse();
        v.retain(|&d| d > 1);
        v
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariants().len() <= 1
    }

    pub fn exponent(&self) -> u64 {
        self.generator_orders.first().copied().unwrap_or(1)
    }

    /// Element with the given exponent vector.
    pub fn from_dlog(&self, exps: &[u64]) -> usize {
        let mut elem = self.identity;
        for (i, &g) in self.generators.iter().enumerate() {
            elem = self.table[elem][table_pow(&self.table, self.identity, g, exps[i])];
        }
        elem
    }

    /// Smallest subgroup containing the given elements, sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_sub = vec![false; self.size];
        in_sub[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.table[x][g];
                if !in_sub[y] {
                    in_sub[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.size).filter(|&i| in_sub[i]).collect()
    }

    /// All subgroups, each as a sorted element list.  Exponential in the
    /// number of generators; intended for small groups.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut stack = vec![vec![self.identity]];
        let mut seen = std::collections::BTreeSet::new();
        while let Some(sub) = stack.pop() {
            if !seen.insert(sub.clone()) {
                continue;
            }
            out.push(sub.clone());
            for g in 0..self.size {
                if sub.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens: Vec<usize> = sub.clone();
                gens.push(g);
                let bigger = self.subgroup_closure(&gens);
                stack.push(bigger);
            }
        }
        out.sort();
        out.dedup();
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    /// Quotient by a subgroup: the new group and the projection map.
    pub fn quotient(&self, subgroup: &[usize]) -> Result<(FiniteAbelianGroup, Vec<usize>), Error> {
        let mut coset_of = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for x in 0..self.size {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = subgroup.iter().map(|&s| self.table[x][s]).collect();
            let idx = reps.len();
            for &m in &members {
                if coset_of[m] != usize::MAX && coset_of[m] != idx {
                    return Err(Error::Inconsistent("not a subgroup".into()));
                }
                coset_of[m] = idx;
            }
            reps.push(*members.iter().min().unwrap());
        }
        let qn = reps.len();
        let mut qtable = vec![vec![0usize; qn]; qn];
        for i in 0..qn {
            for j in 0..qn {
                qtable[i][j] = coset_of[self.table[reps[i]][reps[j]]];
            }
        }
        let q = FiniteAbelianGroup::from_table(qtable)?;
        Ok((q, coset_of))
    }

    /// Verify that a map into another group respects multiplication.
    pub fn is_homomorphism(&self, other: &FiniteAbelianGroup, map: &[usize]) -> bool {
        if map.len() != self.size {
            return false;
        }
        for x in 0..self.size {
            for y in 0..self.size {
                if map[self.table[x][y]] != other.table[map[x]][map[y]] {
                    return false;
                }
            }
        }
        map[self.identity] == other.identity
    }

    pub fn kernel(&self, other: &FiniteAbelianGroup, map: &[usize]) -> Vec<usize> {
        (0..self.size).filter(|&x| map[x] == other.identity).collect()
    }

    pub fn image(&self, map: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = map.to_vec();
        img.sort();
        img.dedup();
        img
    }

    /// Structure description like "Z/2 x Z/4".
    pub fn describe(&self) -> String {
        let inv = self.invariants();
        if inv.is_empty() {
            return "trivial".to_string();
        }
        inv.iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }

    /// Order of an element through its exponent vector.
    pub fn order_via_dlog(&self, x: usize) -> u64 {
        let mut o = 1u64;
        for (i, &e) in self.dlog[x].iter().enumerate() {
            if e == 0 {
                continue;
            }
            let m = self.generator_orders[i];
            let g = m / m.gcd(&e);
            o = o.lcm(&g);
        }
        o
    }
}

/// Build the group Z/n1 x ... x Z/nk as an explicit table, for tests and
/// cross-checks.
pub fn product_of_cyclics(ns: &[u64]) -> FiniteAbelianGroup {
    let size: u64 = ns.iter().product::<u64>().max(1);
    let size = size as usize;
    let k = ns.len();
    let unrank = |mut i: usize| -> Vec<u64> {
        let mut v = vec![0u64; k];
        for (j, &n) in ns.iter().enumerate() {
            v[j] = (i as u64) % n;
            i /= n as usize;
        }
        v
    };
    let rank = |v: &[u64]| -> usize {
        let mut i = 0usize;
        for j in (0..k).rev() {
            i = i * ns[j] as usize + v[j] as usize;
        }
        i
    };
    let mut table = vec![vec![0usize; size]; size];
    for x in 0..size {
        for y in 0..size {
            let vx = unrank(x);
            let vy = unrank(y);
            let vs: Vec<u64> = (0..k).map(|j| (vx[j] + vy[j]) % ns[j]).collect();
            table[x][y] = rank(&vs);
        }
    }
    FiniteAbelianGroup::from_table(table).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_structures() {
        for n in [1u64, 2, 3, 4, 6, 12, 30] {
            let g = product_of_cyclics(&[n]);
            if n == 1 {
                assert!(g.invariants().is_empty());
            } else {
                assert_eq!(g.invariants(), vec![n]);
            }
            assert!(g.is_cyclic());
        }
    }

    #[test]
    fn klein_four() {
        let g = product_of_cyclics(&[2, 2]);
        assert_eq!(g.invariants(), vec![2, 2]);
        assert!(!g.is_cyclic());
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn mixed_products_normalize() {
        // Z/2 x Z/4 has invariants (2, 4); Z/2 x Z/3 is cyclic of order 6.
        let g = product_of_cyclics(&[2, 4]);
        assert_eq!(g.invariants(), vec![2, 4]);
        let h = product_of_cyclics(&[2, 3]);
        assert_eq!(h.invariants(), vec![6]);
        let k = product_of_cyclics(&[4, 6]);
        assert_eq!(k.invariants(), vec![2, 12]);
        let l = product_of_cyclics(&[2, 2, 2]);
        assert_eq!(l.invariants(), vec![2, 2, 2]);
        let m = product_of_cyclics(&[8, 12, 18]);
        assert_eq!(m.invariants(), vec![2, 12, 72]);
    }

    #[test]
    fn dlog_roundtrip() {
        let g = product_of_cyclics(&[4, 6]);
        for x in 0..g.size {
            assert_eq!(g.from_dlog(&g.dlog[x]), x);
            assert_eq!(g.order_via_dlog(x), g.orders[x]);
        }
    }

    #[test]
    fn quotient_of_product() {
        let g = product_of_cyclics(&[2, 4]);
        // Quotient by the order-2 subgroup inside the order-4 factor.
        let g1 = g.generators[0];
        assert_eq!(g.orders[g1], 4);
        let sq = g.pow(g1, 2);
        let sub = g.subgroup_closure(&[sq]);
        assert_eq!(sub.len(), 2);
        let (q, proj) = g.quotient(&sub).unwrap();
        assert_eq!(q.size, 4);
        assert_eq!(q.invariants(), vec![2, 2]);
        assert!(g.is_homomorphism(&q, &proj));
    }

    #[test]
    fn subgroup_enumeration_counts() {
        // Z/12 has one subgroup per divisor; Klein four has 5.
        let g = product_of_cyclics(&[12]);
        assert_eq!(g.all_subgroups().len(), 6);
        let v = product_of_cyclics(&[2, 2]);
        assert_eq!(v.all_subgroups().len(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_products_recover_structure(parts in proptest::collection::vec(1u64..=9, 1..4)) {
            let g = product_of_cyclics(&parts);
            let n: u64 = parts.iter().product();
            prop_assert_eq!(g.size as u64, n.max(1));
            let inv = g.invariants();
            let prod: u64 = inv.iter().product::<u64>().max(1);
            prop_assert_eq!(prod, n.max(1));
            for w in inv.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }

        #[test]
        fn pow_matches_repeated_mul(parts in proptest::collection::vec(1u64..=6, 1..3), k in 0i64..20) {
            let g = product_of_cyclics(&parts);
            for x in 0..g.size {
                let mut acc = g.identity;
                for _ in 0..k {
                    acc = g.mul(acc, x);
                }
                prop_assert_eq!(acc, g.pow(x, k));
            }
        }
    }
}
