//! Independent checks for integration tests. Nothing here calls the
//! library's subgroup, quotient or isomorphism code; only `GroupTable::mul`,
//! `identity` and `order` are trusted.

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use skewprod::GroupTable;

/// Multiplication table of the permutation group generated by `gens`
/// (images of `0..deg`), composing left to right.
pub fn perm_group(deg: usize, gens: &[Vec<usize>]) -> GroupTable {
    let id: Vec<usize> = (0..deg).collect();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut elems = vec![id.clone()];
    index.insert(id, 0);
    let mut queue = VecDeque::from([0]);
    while let Some(k) = queue.pop_front() {
        for g in gens {
            let p: Vec<usize> = elems[k].iter().map(|&x| g[x]).collect();
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(p);
            }
        }
    }
    let n = elems.len();
    let mut product = vec![0; n * n];
    for (i, p) in elems.iter().enumerate() {
        for (j, q) in elems.iter().enumerate() {
            let pq: Vec<usize> = p.iter().map(|&x| q[x]).collect();
            product[i * n + j] = index[&pq];
        }
    }
    GroupTable::new(n, product).expect("permutation group")
}

pub fn d8() -> GroupTable {
    perm_group(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
}

pub fn a4() -> GroupTable {
    perm_group(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

pub fn s4() -> GroupTable {
    perm_group(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]])
}

pub fn order_of(g: &GroupTable, x: usize) -> usize {
    let (mut y, mut k) = (x, 1);
    while y != g.identity() {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// Subgroup generated by `gens`, as a sorted member list.
pub fn closure(g: &GroupTable, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    seen[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    (0..g.order()).filter(|&x| seen[x]).collect()
}

fn inverse(g: &GroupTable, x: usize) -> usize {
    (0..g.order())
        .find(|&y| g.mul(x, y) == g.identity())
        .unwrap()
}

/// Intersection of all conjugates `x⁻¹Hx`.
pub fn core(g: &GroupTable, h: &[usize]) -> Vec<usize> {
    let mut keep = vec![true; g.order()];
    let in_h = mask(g, h);
    for x in 0..g.order() {
        let xi = inverse(g, x);
        for y in 0..g.order() {
            // y ∈ x⁻¹Hx iff x y x⁻¹ ∈ H.
            if keep[y] && !in_h[g.mul(g.mul(x, y), xi)] {
                keep[y] = false;
            }
        }
    }
    (0..g.order()).filter(|&y| keep[y]).collect()
}

fn mask(g: &GroupTable, s: &[usize]) -> Vec<bool> {
    let mut m = vec![false; g.order()];
    for &x in s {
        m[x] = true;
    }
    m
}

/// Table of `G/N` for a normal subgroup `N`.
pub fn quotient(g: &GroupTable, n: &[usize]) -> GroupTable {
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset[x] == usize::MAX {
            for &k in n {
                coset[g.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
    }
    let q = reps.len();
    let mut product = vec![0; q * q];
    for i in 0..q {
        for j in 0..q {
            product[i * q + j] = coset[g.mul(reps[i], reps[j])];
        }
    }
    GroupTable::new(q, product).expect("quotient by a normal subgroup")
}

/// Greedy generating set: add any element outside the current span.
fn generators(g: &GroupTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = closure(g, &gens);
    // Prefer high-order elements so few generators are needed.
    let mut by_order: Vec<usize> = (0..g.order()).collect();
    by_order.sort_by_key(|&x| std::cmp::Reverse(order_of(g, x)));
    for x in by_order {
        if span.len() == g.order() {
            break;
        }
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = closure(g, &gens);
        }
    }
    gens
}

/// Exhaustive isomorphism test by trying every image of a generating set.
/// Only meant for small groups.
pub fn brute_isomorphic(g: &GroupTable, h: &GroupTable) -> bool {
    if g.order() != h.order() {
        return false;
    }
    let gens = generators(g);
    let orders: Vec<usize> = gens.iter().map(|&x| order_of(g, x)).collect();
    let candidates: Vec<Vec<usize>> = orders
        .iter()
        .map(|&o| (0..h.order()).filter(|&y| order_of(h, y) == o).collect())
        .collect();
    let mut pick = vec![0; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return false;
    }
    loop {
        let images: Vec<usize> = pick.iter().zip(&candidates).map(|(&k, c)| c[k]).collect();
        if extends(g, h, &gens, &images) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return false;
            }
            pick[k] += 1;
            if pick[k] < candidates[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

fn extends(g: &GroupTable, h: &GroupTable, gens: &[usize], images: &[usize]) -> bool {
    let mut map = vec![usize::MAX; g.order()];
    map[g.identity()] = h.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return false;
            }
        }
    }
    let mut hit = vec![false; h.order()];
    for &y in &map {
        if hit[y] {
            return false;
        }
        hit[y] = true;
    }
    (0..g.order()).all(|x| (0..g.order()).all(|y| map[g.mul(x, y)] == h.mul(map[x], map[y])))
}

pub fn associative(g: &GroupTable) -> bool {
    let n = g.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z)))))
}

/// Derived series by repeated commutator closure.
pub fn solvable(g: &GroupTable) -> bool {
    let inv: Vec<usize> = (0..g.order()).map(|x| inverse(g, x)).collect();
    let mut h: Vec<usize> = (0..g.order()).collect();
    loop {
        if h.len() == 1 {
            return true;
        }
        let mut comms = Vec::new();
        let mut seen = vec![false; g.order()];
        for &x in &h {
            for &y in &h {
                let c = g.mul(g.mul(inv[x], inv[y]), g.mul(x, y));
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        let next = closure(g, &comms);
        if next.len() == h.len() {
            return false;
        }
        h = next;
    }
}
