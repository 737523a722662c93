//! Abstract isomorphism of group tables by backtracking over generator images.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::group::{Elem, GroupTable};

/// Default cap on search nodes for [`is_isomorphic`].
pub const DEFAULT_NODE_LIMIT: usize = 5_000_000;

/// Isomorphism invariants; equal fingerprints are necessary for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub center: usize,
    pub derived: Vec<usize>,
    pub order_multiset: BTreeMap<usize, usize>,
    /// Multiset of (element order, class size) pairs.
    pub classes: BTreeMap<(usize, usize), usize>,
}

impl Fingerprint {
    pub fn of(g: &GroupTable) -> Self {
        let orders = g.element_orders();
        let class_sizes = g.class_sizes();
        let mut classes = BTreeMap::new();
        for x in g.elements() {
            *classes.entry((orders[x], class_sizes[x])).or_insert(0) += 1;
        }
        Fingerprint {
            order: g.order(),
            center: g.center().len(),
            derived: g.derived_series().iter().map(|s| s.len()).collect(),
            order_multiset: g.order_multiset(),
            classes,
        }
    }
}

/// Greedy small generating set: repeatedly add the highest-order element
/// outside the current subgroup.
pub fn generating_set(g: &GroupTable) -> Vec<Elem> {
    let orders = g.element_orders();
    let mut by_order: Vec<Elem> = g.elements().collect();
    by_order.sort_by(|&x, &y| orders[y].cmp(&orders[x]).then(x.cmp(&y)));
    let mut gens = Vec::new();
    let mut sub = g.trivial();
    for x in by_order {
        if sub.len() == g.order() {
            break;
        }
        if !sub.contains(x) {
            gens.push(x);
            sub = g.generate(&gens);
        }
    }
    gens
}

/// Tests `g1 ≅ g2`; on success returns the map `g1 → g2` as a vector.
pub fn is_isomorphic(
    g1: &GroupTable,
    g2: &GroupTable,
    node_limit: usize,
) -> Result<Option<Vec<Elem>>, GroupError> {
    if g1.order() != g2.order() {
        return Ok(None);
    }
    if Fingerprint::of(g1) != Fingerprint::of(g2) {
        return Ok(None);
    }
    find_isomorphism(g1, g2, &generating_set(g1), node_limit)
}

/// Isomorphism search with fingerprints already known to agree.
pub fn find_isomorphism(
    g1: &GroupTable,
    g2: &GroupTable,
    gens: &[Elem],
    node_limit: usize,
) -> Result<Option<Vec<Elem>>, GroupError> {
    let k1 = element_keys(g1);
    let k2 = element_keys(g2);
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&x| g2.elements().filter(|&y| k2[y] == k1[x]).collect())
        .collect();
    find_isomorphism_among(g1, g2, gens, &candidates, node_limit)
}

/// (element order, centralizer order) for every element.
pub fn element_keys(g: &GroupTable) -> Vec<(usize, usize)> {
    let cs = g.class_sizes();
    g.elements()
        .map(|x| (g.element_order(x), g.order() / cs[x]))
        .collect()
}

/// Backtracking over images of `gens`, each drawn from its candidate list.
///
/// Candidates are tried in order of ascending centralizer size.
pub fn find_isomorphism_among(
    g1: &GroupTable,
    g2: &GroupTable,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    node_limit: usize,
) -> Result<Option<Vec<Elem>>, GroupError> {
    if g1.order() != g2.order() {
        return Ok(None);
    }
    let k2 = element_keys(g2);
    let candidates: Vec<Vec<Elem>> = candidates
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_by_key(|&y| (k2[y].1, y));
            c
        })
        .collect();
    let mut search = Search {
        g1,
        g2,
        gens,
        candidates: &candidates,
        images: Vec::with_capacity(gens.len()),
        nodes: 0,
        node_limit,
    };
    search.run()
}

struct Search<'a> {
    g1: &'a GroupTable,
    g2: &'a GroupTable,
    gens: &'a [Elem],
    candidates: &'a [Vec<Elem>],
    images: Vec<Elem>,
    nodes: usize,
    node_limit: usize,
}

impl Search<'_> {
    fn run(&mut self) -> Result<Option<Vec<Elem>>, GroupError> {
        let depth = self.images.len();
        if depth == self.gens.len() {
            return Ok(self.extend());
        }
        for idx in 0..self.candidates[depth].len() {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return Err(GroupError::BoundExceeded(self.node_limit));
            }
            self.images.push(self.candidates[depth][idx]);
            if let Some(map) = self.partial_ok() {
                if depth + 1 == self.gens.len() {
                    return Ok(Some(map));
                }
                if let Some(found) = self.run()? {
                    return Ok(Some(found));
                }
            }
            self.images.pop();
        }
        Ok(None)
    }

    fn extend(&self) -> Option<Vec<Elem>> {
        self.partial_ok()
    }

    /// Extends the assigned images over the subgroup they generate,
    /// checking the result is a well-defined injective homomorphism.
    /// Returns the full map once every generator is assigned.
    fn partial_ok(&self) -> Option<Vec<Elem>> {
        let (g1, g2) = (self.g1, self.g2);
        let k = self.images.len();
        let mut map = vec![usize::MAX; g1.order()];
        let mut used = vec![false; g2.order()];
        map[g1.identity()] = g2.identity();
        used[g2.identity()] = true;
        let mut queue = vec![g1.identity()];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for j in 0..k {
                let y = g1.mul(x, self.gens[j]);
                let fy = g2.mul(map[x], self.images[j]);
                if map[y] == usize::MAX {
                    if used[fy] {
                        return None;
                    }
                    used[fy] = true;
                    map[y] = fy;
                    queue.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        if k == self.gens.len() && queue.len() != g1.order() {
            return None;
        }
        Some(map)
    }
}

/// Checks that `map` is an isomorphism `g1 → g2`.
pub fn is_isomorphism(g1: &GroupTable, g2: &GroupTable, map: &[Elem]) -> bool {
    if g1.order() != g2.order() || map.len() != g1.order() {
        return false;
    }
    let mut seen = vec![false; g2.order()];
    for &y in map {
        if y >= g2.order() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    g1.elements().all(|x| {
        g1.elements()
            .all(|y| map[g1.mul(x, y)] == g2.mul(map[x], map[y]))
    })
}
