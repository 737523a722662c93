//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..order`; the table is row-major, so
//! `product[x * order + y]` is `x·y`. Every structural computation in the
//! crate (subgroups, cores, quotients, the classifier) runs on this type.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// Element index into a [`GroupTable`].
pub type Elem = usize;

/// Orders up to this bound get an exhaustive associativity check on construction.
pub const EXHAUSTIVE_ASSOC_BOUND: usize = 512;

const SAMPLED_ASSOC_TRIPLES: usize = 1_000_000;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    order: usize,
    product: Vec<u32>,
    identity: Elem,
    inverse: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// How thoroughly [`GroupTable::new`] checks associativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssocCheck {
    /// Exhaustive up to [`EXHAUSTIVE_ASSOC_BOUND`], sampled above.
    Default,
    /// Always exhaustive, whatever the order.
    Exhaustive,
}

impl GroupTable {
    /// Builds a table, checking closure, identity, inverses and associativity.
    pub fn new(order: usize, product: Vec<usize>) -> Result<Self, GroupError> {
        Self::with_check(order, product, AssocCheck::Default)
    }

    pub fn with_check(
        order: usize,
        product: Vec<usize>,
        check: AssocCheck,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if product.len() != order * order {
            return Err(GroupError::BadShape {
                expected: order * order,
                found: product.len(),
            });
        }
        if let Some(&bad) = product.iter().find(|&&p| p >= order) {
            return Err(GroupError::OutOfRange(bad));
        }
        let product: Vec<u32> = product.into_iter().map(|p| p as u32).collect();

        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|x| {
                    product[e * order + x] as usize == x && product[x * order + e] as usize == x
                })
            })
            .ok_or(GroupError::NoIdentity)?;

        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let row = &product[x * order..(x + 1) * order];
            let y = row
                .iter()
                .position(|&p| p as usize == identity)
                .ok_or(GroupError::NoInverse(x))?;
            if product[y * order + x] as usize != identity {
                return Err(GroupError::NoInverse(x));
            }
            inverse[x] = y as u32;
        }

        let g = GroupTable {
            order,
            product,
            identity,
            inverse,
            labels: None,
        };
        g.check_associative(check)?;
        Ok(g)
    }

    fn check_associative(&self, check: AssocCheck) -> Result<(), GroupError> {
        let n = self.order;
        if check == AssocCheck::Exhaustive || n <= EXHAUSTIVE_ASSOC_BOUND {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    let row_xy = &self.product[xy * n..(xy + 1) * n];
                    for z in 0..n {
                        if row_xy[z] as usize != self.mul(x, self.mul(y, z)) {
                            return Err(GroupError::NotAssociative(x, y, z));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0fa5);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (x, y, z) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return Err(GroupError::NotAssociative(x, y, z));
                }
            }
        }
        Ok(())
    }

    /// Builds a table from a closure `mul(x, y)`.
    pub fn from_fn(order: usize, mul: impl Fn(Elem, Elem) -> Elem) -> Result<Self, GroupError> {
        let mut product = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                product.push(mul(x, y));
            }
        }
        Self::new(order, product)
    }

    /// Cyclic group of order `k` (element `i` is the generator to the `i`).
    pub fn cyclic(k: usize) -> Self {
        Self::from_fn(k, |x, y| (x + y) % k).expect("cyclic group table")
    }

    /// Symmetric group on `k` points, elements in lexicographic order of images.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index: BTreeMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        // (p·q)(i) = q(p(i)): apply p first.
        Self::from_fn(perms.len(), |x, y| {
            let comp: Vec<usize> = (0..k).map(|i| perms[y][perms[x][i]]).collect();
            index[&comp]
        })
        .expect("symmetric group table")
    }

    /// Alternating group on `k` points.
    pub fn alternating(k: usize) -> Self {
        let s = Self::symmetric(k);
        let perms = permutations(k);
        let even: Vec<Elem> = (0..perms.len())
            .filter(|&i| parity(&perms[i]) == 0)
            .collect();
        s.subgroup_table(&even)
            .expect("alternating group is a subgroup")
    }

    /// Direct product; element `(x, y)` has index `x * |other| + y`.
    pub fn direct_product(&self, other: &GroupTable) -> GroupTable {
        let m = other.order;
        Self::from_fn(self.order * m, |p, q| {
            self.mul(p / m, q / m) * m + other.mul(p % m, q % m)
        })
        .expect("direct product of groups")
    }

    /// Restricts the table to a subset closed under the product, relabelling densely.
    pub fn subgroup_table(&self, members: &[Elem]) -> Result<GroupTable, GroupError> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos: BTreeMap<Elem, usize> = sorted.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = sorted.len();
        let mut product = Vec::with_capacity(k * k);
        for &x in &sorted {
            for &y in &sorted {
                let p = self.mul(x, y);
                product.push(*pos.get(&p).ok_or(GroupError::NotClosed)?);
            }
        }
        GroupTable::new(k, product)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.product[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inverse[x] as usize
    }

    /// Raw row-major product table.
    pub fn raw_product(&self) -> &[u32] {
        &self.product
    }

    /// `x^k` for any integer `k`.
    pub fn pow(&self, x: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut e = k.unsigned_abs();
        let (mut acc, mut sq) = (self.identity, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `y⁻¹·x·y`.
    #[inline]
    pub fn conj(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(y), x), y)
    }

    /// `x⁻¹y⁻¹xy`.
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// Smallest `k ≥ 1` with `x^k = 1`.
    pub fn element_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        self.elements().map(|x| self.element_order(x)).collect()
    }

    /// Multiset of element orders as `order -> count`.
    pub fn order_multiset(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for o in self.element_orders() {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Subgroup generated by `gens` (the trivial subgroup for an empty list).
    pub fn generate(&self, gens: &[Elem]) -> SubgroupSet {
        let mut seen = vec![false; self.order];
        let mut members = vec![self.identity];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        SubgroupSet::from_mask(seen)
    }

    /// Cyclic subgroup `⟨x⟩`.
    pub fn cyclic_subgroup(&self, x: Elem) -> SubgroupSet {
        self.generate(&[x])
    }

    /// Subset product `{xy : x ∈ a, y ∈ b}`, sorted.
    pub fn set_product(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        for &x in a {
            for &y in b {
                seen[self.mul(x, y)] = true;
            }
        }
        mask_to_vec(&seen)
    }

    /// True iff `s` contains the identity and is closed under the product.
    pub fn is_subgroup(&self, s: &[Elem]) -> bool {
        let mut mask = vec![false; self.order];
        for &x in s {
            mask[x] = true;
        }
        mask[self.identity] && s.iter().all(|&x| s.iter().all(|&y| mask[self.mul(x, y)]))
    }

    /// Tries to view `s` as a subgroup.
    pub fn as_subgroup(&self, s: &[Elem]) -> Option<SubgroupSet> {
        self.is_subgroup(s)
            .then(|| SubgroupSet::from_slice(self.order, s))
    }

    pub fn is_normal(&self, h: &SubgroupSet) -> bool {
        self.elements()
            .all(|g| h.members().iter().all(|&x| h.contains(self.conj(x, g))))
    }

    /// Largest normal subgroup contained in `h`: the intersection of its conjugates.
    pub fn core(&self, h: &SubgroupSet) -> SubgroupSet {
        let mut mask: Vec<bool> = (0..self.order).map(|x| h.contains(x)).collect();
        for g in self.elements() {
            // x ∈ h^g  ⇔  g x g⁻¹ ∈ h
            let ginv = self.inv(g);
            for x in 0..self.order {
                if mask[x] && !h.contains(self.mul(self.mul(g, x), ginv)) {
                    mask[x] = false;
                }
            }
        }
        SubgroupSet::from_mask(mask)
    }

    /// Elements commuting with every element of `s`.
    pub fn centralizer(&self, s: &[Elem]) -> SubgroupSet {
        let mask = (0..self.order)
            .map(|g| s.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        SubgroupSet::from_mask(mask)
    }

    /// Elements `g` with `s^g = s` (as sets).
    pub fn normalizer(&self, s: &[Elem]) -> SubgroupSet {
        let mut inset = vec![false; self.order];
        for &x in s {
            inset[x] = true;
        }
        let mask = (0..self.order)
            .map(|g| s.iter().all(|&x| inset[self.conj(x, g)]))
            .collect();
        SubgroupSet::from_mask(mask)
    }

    pub fn center(&self) -> SubgroupSet {
        let all: Vec<Elem> = self.elements().collect();
        self.centralizer(&all)
    }

    /// Subgroup generated by all commutators `[x, y]` with `x, y ∈ h`.
    pub fn commutator_subgroup_of(&self, h: &SubgroupSet) -> SubgroupSet {
        let mut comms = BTreeSet::new();
        for &x in h.members() {
            for &y in h.members() {
                comms.insert(self.commutator(x, y));
            }
        }
        let gens: Vec<Elem> = comms.into_iter().collect();
        self.generate(&gens)
    }

    pub fn derived_subgroup(&self) -> SubgroupSet {
        self.commutator_subgroup_of(&self.whole())
    }

    /// Orders of the derived series `G ≥ G' ≥ G'' ≥ …` down to the point it stabilises.
    pub fn derived_series(&self) -> Vec<SubgroupSet> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().expect("nonempty series");
            let next = self.commutator_subgroup_of(last);
            if next.len() == last.len() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().map(|s| s.len()) == Some(1)
    }

    pub fn whole(&self) -> SubgroupSet {
        SubgroupSet::from_mask(vec![true; self.order])
    }

    pub fn trivial(&self) -> SubgroupSet {
        SubgroupSet::from_slice(self.order, &[self.identity])
    }

    /// Size of each element's conjugacy class.
    pub fn class_sizes(&self) -> Vec<usize> {
        self.elements()
            .map(|x| self.order / self.centralizer(&[x]).len())
            .collect()
    }

    /// Quotient by a normal subgroup; returns the table and the projection.
    ///
    /// Cosets are numbered in order of their least element, so the identity
    /// coset is 0.
    pub fn quotient(&self, n: &SubgroupSet) -> Result<(GroupTable, Vec<Elem>), GroupError> {
        if !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        let mut proj = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in self.elements() {
            if proj[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &k in n.members() {
                proj[self.mul(x, k)] = id;
            }
        }
        let q = reps.len();
        let mut product = Vec::with_capacity(q * q);
        for &x in &reps {
            for &y in &reps {
                product.push(proj[self.mul(x, y)]);
            }
        }
        let table = GroupTable::new(q, product)?;
        debug_assert!(self.elements().all(|x| self
            .elements()
            .all(|y| proj[self.mul(x, y)] == table.mul(proj[x], proj[y]))));
        Ok((table, proj))
    }

    /// Recognises the quotient shapes that occur in the factorization table.
    pub fn identify_small(&self) -> SmallTag {
        let orders = self.order_multiset();
        let count = |k: usize| orders.get(&k).copied().unwrap_or(0);
        match self.order {
            2 => SmallTag::Z2,
            8 if !self.is_abelian() && count(4) == 2 => SmallTag::D8,
            12 if count(6) == 0 && count(2) == 3 && count(3) == 8 => SmallTag::A4,
            24 if count(2) == 9 && count(3) == 8 && count(4) == 6 => SmallTag::S4,
            _ => SmallTag::Other,
        }
    }

    /// Relabels elements by breadth-first search from the identity over `gens`.
    ///
    /// Returns `None` if `gens` do not generate. Two tables with the same
    /// canonical form under corresponding generator lists are isomorphic via
    /// the generator correspondence.
    pub fn canonical_relabel(&self, gens: &[Elem]) -> Option<(GroupTable, Vec<Elem>)> {
        let mut new_of = vec![usize::MAX; self.order];
        let mut old_of = Vec::with_capacity(self.order);
        new_of[self.identity] = 0;
        old_of.push(self.identity);
        let mut head = 0;
        while head < old_of.len() {
            let x = old_of[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if new_of[y] == usize::MAX {
                    new_of[y] = old_of.len();
                    old_of.push(y);
                }
            }
        }
        if old_of.len() != self.order {
            return None;
        }
        let n = self.order;
        let mut product = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                product[i * n + j] = new_of[self.mul(old_of[i], old_of[j])] as u32;
            }
        }
        let inverse = (0..n).map(|i| new_of[self.inv(old_of[i])] as u32).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| old_of.iter().map(|&o| l[o].clone()).collect());
        Some((
            GroupTable {
                order: n,
                product,
                identity: 0,
                inverse,
                labels,
            },
            new_of,
        ))
    }

    /// All subgroups, found as cyclic seeds closed under pairwise joins.
    ///
    /// Meant for small orders; the number of joins grows quadratically in the
    /// number of subgroups.
    pub fn all_subgroups(&self) -> Vec<SubgroupSet> {
        let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
        let mut list: Vec<SubgroupSet> = Vec::new();
        for x in self.elements() {
            let s = self.cyclic_subgroup(x);
            if found.insert(s.members().to_vec()) {
                list.push(s);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..i {
                if list[i].is_subset(&list[j]) || list[j].is_subset(&list[i]) {
                    continue;
                }
                let mut gens = list[i].members().to_vec();
                gens.extend_from_slice(list[j].members());
                let s = self.generate(&gens);
                if found.insert(s.members().to_vec()) {
                    list.push(s);
                }
            }
            i += 1;
        }
        list.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.members().cmp(b.members()))
        });
        list
    }
}

/// Quotient shapes appearing in the `X/M_X` column of the factorization table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SmallTag {
    Z2,
    D8,
    A4,
    S4,
    Other,
}

impl std::fmt::Display for SmallTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SmallTag::Z2 => "Z2",
            SmallTag::D8 => "D8",
            SmallTag::A4 => "A4",
            SmallTag::S4 => "S4",
            SmallTag::Other => "other",
        };
        f.write_str(s)
    }
}

/// A subset of a group's elements, normally a subgroup.
///
/// Stores a sorted member list and a membership mask over the parent's
/// elements; it does not borrow the parent table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupSet {
    members: Vec<Elem>,
    mask: Vec<bool>,
}

impl SubgroupSet {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        SubgroupSet {
            members: mask_to_vec(&mask),
            mask,
        }
    }

    pub fn from_slice(parent_order: usize, members: &[Elem]) -> Self {
        let mut mask = vec![false; parent_order];
        for &x in members {
            mask[x] = true;
        }
        Self::from_mask(mask)
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x]
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset(&self, other: &SubgroupSet) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &SubgroupSet) -> SubgroupSet {
        SubgroupSet::from_mask(
            self.mask
                .iter()
                .zip(&other.mask)
                .map(|(&a, &b)| a && b)
                .collect(),
        )
    }
}

fn mask_to_vec(mask: &[bool]) -> Vec<Elem> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Dihedral group of order `2n` with `a` of order `n`, `b` an involution.
///
/// Element `a^i b^j` has index `i + n*j`.
pub fn dihedral(n: usize) -> GroupTable {
    let n2 = 2 * n;
    GroupTable::from_fn(n2, |x, y| {
        let (i, j) = (x % n, x / n);
        let (k, l) = (y % n, y / n);
        // a^i b^j a^k b^l = a^{i ± k} b^{j+l}
        let e = if j == 0 { i + k } else { i + n - k };
        (e % n) + n * ((j + l) % 2)
    })
    .expect("dihedral group table")
}

/// Generalized quaternion group of order `4n`: `a` of order `2n`, `b² = aⁿ`, `a^b = a⁻¹`.
///
/// Element `a^i b^j` has index `i + 2n*j`.
pub fn quaternion(n: usize) -> GroupTable {
    let m = 2 * n;
    GroupTable::from_fn(2 * m, |x, y| {
        let (i, j) = (x % m, x / m);
        let (k, l) = (y % m, y / m);
        let mut e = if j == 0 { i + k } else { i + m - k };
        let mut t = j + l;
        if t == 2 {
            // b² = aⁿ
            e += n;
            t = 0;
        }
        (e % m) + m * t
    })
    .expect("quaternion group table")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> (GroupTable, Elem, Elem) {
        (dihedral(n), 1, n)
    }

    #[test]
    fn element_orders_basic() {
        let q8 = quaternion(2);
        assert_eq!(q8.element_order(q8.identity()), 1);
        assert_eq!(q8.element_order(4), 4); // b
        let (d12, a, _) = d(6);
        assert_eq!(d12.element_order(a), 6);
    }

    #[test]
    fn generate_and_products() {
        let (g, a, b) = d(5);
        assert_eq!(g.generate(&[g.identity()]).len(), 1);
        assert_eq!(g.generate(&[a]).len(), 5);
        assert_eq!(g.generate(&[a, b]).len(), 10);
        let s = g.generate(&[b]);
        assert_eq!(g.set_product(&[g.identity()], s.members()), s.members());
    }

    #[test]
    fn center_and_derived() {
        let q8 = quaternion(2);
        assert_eq!(q8.center().len(), 2);
        for n in 3..9 {
            let (g, a, _) = d(n);
            let a2 = g.cyclic_subgroup(g.pow(a, 2));
            assert_eq!(g.derived_subgroup(), a2, "D_{}", 2 * n);
        }
        let g = dihedral(4);
        assert_eq!(g.centralizer(&[g.identity()]).len(), 8);
    }

    #[test]
    fn core_of_four_cycle_in_s4_is_trivial() {
        let s4 = GroupTable::symmetric(4);
        let x = (0..24).find(|&x| s4.element_order(x) == 4).unwrap();
        let h = s4.cyclic_subgroup(x);
        assert!(s4.core(&h).is_trivial());
        let a4 = GroupTable::alternating(4);
        assert_eq!(a4.order(), 12);
        let v4 = s4.derived_subgroup().intersection(&s4.derived_subgroup());
        assert_eq!(s4.core(&v4), v4);
    }

    #[test]
    fn quotient_orders() {
        let g = dihedral(4);
        let (q, proj) = g.quotient(&g.center()).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(proj[g.identity()], q.identity());
        let (q1, _) = g.quotient(&g.trivial()).unwrap();
        assert_eq!(q1.order(), 8);
        let h = g.cyclic_subgroup(4);
        assert!(matches!(g.quotient(&h), Err(GroupError::NotNormal)));
    }

    #[test]
    fn identify_small_tags() {
        assert_eq!(GroupTable::cyclic(2).identify_small(), SmallTag::Z2);
        assert_eq!(dihedral(4).identify_small(), SmallTag::D8);
        assert_eq!(quaternion(2).identify_small(), SmallTag::Other);
        assert_eq!(GroupTable::alternating(4).identify_small(), SmallTag::A4);
        assert_eq!(GroupTable::symmetric(4).identify_small(), SmallTag::S4);
        assert_eq!(dihedral(6).identify_small(), SmallTag::Other);
        assert_eq!(quaternion(3).identify_small(), SmallTag::Other);
    }

    #[test]
    fn solvability() {
        assert!(GroupTable::alternating(4).is_solvable());
        assert!(GroupTable::symmetric(4).is_solvable());
        assert!(!GroupTable::alternating(5).is_solvable());
    }

    #[test]
    fn rejects_non_group() {
        // x·y = x - y mod 3 has no two-sided identity
        let r = GroupTable::from_fn(3, |x, y| (x + 3 - y) % 3);
        assert!(r.is_err());
    }

    #[test]
    fn subgroup_predicates_in_a4() {
        let a4 = GroupTable::alternating(4);
        let x2 = (0..12).find(|&x| a4.element_order(x) == 2).unwrap();
        let x3 = (0..12).find(|&x| a4.element_order(x) == 3).unwrap();
        let prod = a4.set_product(
            a4.cyclic_subgroup(x2).members(),
            a4.cyclic_subgroup(x3).members(),
        );
        assert_eq!(prod.len(), 6);
        assert!(!a4.is_subgroup(&prod));
        assert!(a4.is_subgroup(&[a4.identity()]));
        let all: Vec<Elem> = a4.elements().collect();
        assert!(a4.is_subgroup(&all));
        assert!(a4.core(&a4.cyclic_subgroup(x3)).is_trivial());
    }

    #[test]
    fn all_subgroups_of_s4() {
        // S4 has 30 subgroups
        assert_eq!(GroupTable::symmetric(4).all_subgroups().len(), 30);
        assert_eq!(quaternion(2).all_subgroups().len(), 6);
    }
}
