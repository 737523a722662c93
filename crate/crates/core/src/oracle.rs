//! Brute-force enumeration of every `X = G⟨c⟩` with `G ∩ ⟨c⟩ = 1`, `o(c) = m`.
//!
//! Such an `X` is determined by the commutation rule `c·g = φ(g)·c^{π(g)}`.
//! The search assigns `φ` and `π` element by element, propagating
//! `φ(gh) = φ(g)·φ^k(h)` and `π(gh) = ∑_{l<k} π(φ^l(h))` with `k = π(g)`,
//! and admits a complete assignment only if the assembled table is an
//! associative group. Nothing here consults the parametric families.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::error::GroupError;
use crate::group::{AssocCheck, Elem, GroupTable};
use crate::iso::{find_isomorphism, find_isomorphism_among, Fingerprint, DEFAULT_NODE_LIMIT};
use crate::marked::{base_group, Flavor, MarkedFactorization, Provenance};

/// Default bound on `|G|·m` for oracle runs.
pub const DEFAULT_ORACLE_BOUND: usize = 96;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("assembled table is not a group: {0}")]
    NotAGroup(GroupError),
    #[error("|G|·m = {size} exceeds the oracle bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Commutation data `c·g = φ(g)·c^{π(g)}` over a base group.
#[derive(Clone, Debug)]
pub struct CommutationData {
    pub base: GroupTable,
    pub m: usize,
    pub phi: Vec<Elem>,
    pub pi: Vec<usize>,
}

/// Table over pairs `(g, k)` with index `g·m + k`:
/// `(g, i)(h, j) = (g·φ^i(h), σ(i, h) + j)`, `σ(i, h) = ∑_{l<i} π(φ^l(h))`.
pub fn assemble_table(cd: &CommutationData) -> Result<GroupTable, OracleError> {
    let g = &cd.base;
    let (n, m) = (g.order(), cd.m);
    let mut phi_pow = vec![0usize; m * n];
    let mut sigma = vec![0usize; m * n];
    for h in 0..n {
        let (mut x, mut s) = (h, 0);
        for i in 0..m {
            phi_pow[i * n + h] = x;
            sigma[i * n + h] = s;
            s = (s + cd.pi[x]) % m;
            x = cd.phi[x];
        }
    }
    let size = n * m;
    let mut product = Vec::with_capacity(size * size);
    for p in 0..size {
        let (gp, i) = (p / m, p % m);
        for q in 0..size {
            let (h, j) = (q / m, q % m);
            let left = g.mul(gp, phi_pow[i * n + h]);
            product.push(left * m + (sigma[i * n + h] + j) % m);
        }
    }
    GroupTable::with_check(size, product, AssocCheck::Exhaustive).map_err(OracleError::NotAGroup)
}

/// Marks `a = (a, 0)`, `b = (b, 0)`, `c = (1, 1)` in an assembled table.
pub fn marked_from_data(
    cd: &CommutationData,
    table: GroupTable,
    flavor: Flavor,
    n: usize,
    a: Elem,
    b: Elem,
    id: String,
) -> MarkedFactorization {
    let m = cd.m;
    MarkedFactorization {
        table,
        a: a * m,
        b: b * m,
        c: cd.base.identity() * m + 1 % m,
        n,
        m,
        flavor,
        provenance: Provenance::Oracle { id },
    }
}

const UNSET: u32 = u32::MAX;

#[derive(Clone)]
struct State {
    phi: Vec<u32>,
    pi: Vec<u32>,
    phi_inv: Vec<u32>,
}

struct Search<'a> {
    g: &'a GroupTable,
    m: usize,
    gens: [Elem; 2],
    bfs: Vec<Elem>,
    leaves: Vec<(Vec<Elem>, Vec<usize>)>,
    /// Longest possible φ-orbit: the largest divisor of `m` below `|G|`.
    max_orbit: usize,
}

impl Search<'_> {
    fn assign(&self, st: &mut State, x: Elem, y: Elem, p: usize) -> bool {
        if st.phi[x] != UNSET {
            return st.phi[x] as usize == y && st.pi[x] as usize == p;
        }
        if st.phi_inv[y] != UNSET || p.is_multiple_of(self.m) {
            return false;
        }
        st.phi[x] = y as u32;
        st.pi[x] = p as u32;
        st.phi_inv[y] = x as u32;
        true
    }

    /// Applies the product rule to a fixed point; false on contradiction.
    fn propagate(&self, st: &mut State) -> bool {
        let (g, m) = (self.g, self.m);
        let n = g.order();
        loop {
            let mut changed = false;
            for x in 0..n {
                if st.phi[x] == UNSET {
                    continue;
                }
                let (fx, k) = (st.phi[x] as usize, st.pi[x] as usize);
                'h: for h in 0..n {
                    let xh = g.mul(x, h);
                    let (mut y, mut s) = (h, 0usize);
                    for step in 0..k {
                        if st.phi[y] == UNSET {
                            // φ(xh) known and only the last link missing: it is forced.
                            if step + 1 == k && st.phi[xh] != UNSET {
                                let target = g.mul(g.inv(fx), st.phi[xh] as usize);
                                let p = (st.pi[xh] as usize + m - s % m) % m;
                                if !self.assign(st, y, target, p) {
                                    return false;
                                }
                                changed = true;
                            }
                            continue 'h;
                        }
                        s += st.pi[y] as usize;
                        y = st.phi[y] as usize;
                    }
                    let before = st.phi[xh];
                    if !self.assign(st, xh, g.mul(fx, y), s % m) {
                        return false;
                    }
                    changed |= before == UNSET;
                }
            }
            if !changed {
                break;
            }
        }
        self.cycles_ok(st)
    }

    /// Closed φ-cycles must have length dividing `m` and `π`-sum compatible
    /// with `c^m = 1`; open chains must still be able to close.
    fn cycles_ok(&self, st: &State) -> bool {
        let m = self.m;
        for h in 0..self.g.order() {
            let (mut y, mut s, mut len) = (h, 0usize, 0usize);
            loop {
                if st.phi[y] == UNSET {
                    break;
                }
                s += st.pi[y] as usize;
                y = st.phi[y] as usize;
                len += 1;
                if y == h {
                    if !m.is_multiple_of(len) || !((m / len) * s).is_multiple_of(m) {
                        return false;
                    }
                    break;
                }
                if len >= self.max_orbit {
                    return false;
                }
            }
        }
        true
    }

    fn next_var(&self, st: &State) -> Option<Elem> {
        for &seed in &self.gens {
            if st.phi[seed] == UNSET {
                return Some(seed);
            }
        }
        for &seed in &self.gens {
            let mut y = seed;
            loop {
                if st.phi[y] == UNSET {
                    return Some(y);
                }
                y = st.phi[y] as usize;
                if y == seed {
                    break;
                }
            }
        }
        self.bfs.iter().copied().find(|&x| st.phi[x] == UNSET)
    }

    fn run(&mut self, st: State) {
        let Some(x) = self.next_var(&st) else {
            let phi = st.phi.iter().map(|&v| v as usize).collect();
            let pi = st.pi.iter().map(|&v| v as usize).collect();
            self.leaves.push((phi, pi));
            return;
        };
        let n = self.g.order();
        for y in 0..n {
            if st.phi_inv[y] != UNSET {
                continue;
            }
            for p in 1..self.m {
                let mut next = st.clone();
                if self.assign(&mut next, x, y, p) && self.propagate(&mut next) {
                    self.run(next);
                }
            }
        }
    }
}

/// All commutation data surviving propagation, in search order.
///
/// Each result still has to pass [`assemble_table`].
pub fn candidate_data(g: &GroupTable, a: Elem, b: Elem, m: usize) -> Vec<(Vec<Elem>, Vec<usize>)> {
    let n = g.order();
    let mut st = State {
        phi: vec![UNSET; n],
        pi: vec![UNSET; n],
        phi_inv: vec![UNSET; n],
    };
    let e = g.identity();
    let bfs = {
        let mut order = vec![e];
        let mut seen = vec![false; n];
        seen[e] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for s in [a, b] {
                let y = g.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    };
    let mut search = Search {
        g,
        m,
        gens: [a, b],
        bfs,
        leaves: Vec::new(),
        max_orbit: (1..n.max(2))
            .rev()
            .find(|d| m.is_multiple_of(*d))
            .unwrap_or(1),
    };
    // c·1 = c forces φ(1) = 1, π(1) = 1.
    if m >= 2 && search.assign(&mut st, e, e, 1) && search.propagate(&mut st) {
        search.run(st);
    }
    search.leaves
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub bound: usize,
    pub node_limit: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            bound: DEFAULT_ORACLE_BOUND,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// One abstract isomorphism class found by the oracle.
#[derive(Clone, Debug)]
pub struct OracleClass {
    pub rep: MarkedFactorization,
    pub fingerprint: Fingerprint,
    /// Number of admitted commutation data in the class.
    pub members: usize,
    /// One representative per class under isomorphisms preserving `G` and
    /// `⟨c⟩`, in admission order.
    pub marked: Vec<MarkedFactorization>,
}

impl OracleClass {
    pub fn marked_classes(&self) -> usize {
        self.marked.len()
    }
}

#[derive(Clone, Debug)]
pub struct OracleCensus {
    pub flavor: Flavor,
    pub n: usize,
    pub m: usize,
    /// Commutation data that assembled to a group.
    pub admitted: usize,
    /// Classes with `⟨c⟩` core-free.
    pub core_free: Vec<OracleClass>,
    /// Classes with `⟨c⟩_X ≠ 1`, kept for the centralizer checks.
    pub flagged: Vec<OracleClass>,
}

/// Enumerates every skew product of the base group of `flavor` and `n` by `Z_m`.
pub fn enumerate_skew_products(
    flavor: Flavor,
    n: usize,
    m: usize,
    opts: &OracleOptions,
) -> Result<OracleCensus, OracleError> {
    let mut admitted = 0;
    let mut free = ClassSet::default();
    let mut flagged = ClassSet::default();
    for_each_admitted(flavor, n, m, opts, |mf| {
        admitted += 1;
        if mf.is_core_free() {
            free.insert(mf, opts.node_limit)
        } else {
            flagged.insert(mf, opts.node_limit)
        }
    })?;
    let finish = |set: ClassSet, tag: &str| -> Vec<OracleClass> {
        let mut classes = set.classes;
        classes.sort_by(|x, y| {
            (x.rep.order(), &x.fingerprint, x.rep.table.raw_product()).cmp(&(
                y.rep.order(),
                &y.fingerprint,
                y.rep.table.raw_product(),
            ))
        });
        for (k, class) in classes.iter_mut().enumerate() {
            class.rep.provenance = Provenance::Oracle {
                id: format!("{}{}-{}-{}{}", flavor.letter(), n, m, tag, k),
            };
        }
        classes
    };
    Ok(OracleCensus {
        flavor,
        n,
        m,
        admitted,
        core_free: finish(free, ""),
        flagged: finish(flagged, "f"),
    })
}

/// Every admitted commutation datum as a marked factorization, in search
/// order and without deduplication. Needed where the marking matters, since
/// isomorphic groups can sit in different table rows under different
/// markings.
pub fn admitted_factorizations(
    flavor: Flavor,
    n: usize,
    m: usize,
    opts: &OracleOptions,
) -> Result<Vec<MarkedFactorization>, OracleError> {
    let mut out = Vec::new();
    for_each_admitted(flavor, n, m, opts, |mf| {
        out.push(mf);
        Ok(())
    })?;
    Ok(out)
}

fn for_each_admitted(
    flavor: Flavor,
    n: usize,
    m: usize,
    opts: &OracleOptions,
    mut visit: impl FnMut(MarkedFactorization) -> Result<(), GroupError>,
) -> Result<(), OracleError> {
    let size = flavor.base_order(n) * m;
    if size > opts.bound {
        return Err(OracleError::BoundExceeded {
            size,
            bound: opts.bound,
        });
    }
    let (g, a, b) = base_group(flavor, n);
    for (k, (phi, pi)) in candidate_data(&g, a, b, m).into_iter().enumerate() {
        let cd = CommutationData {
            base: g.clone(),
            m,
            phi,
            pi,
        };
        let Ok(table) = assemble_table(&cd) else {
            continue;
        };
        let id = format!("{}{}-{}-d{}", flavor.letter(), n, m, k);
        let mf = marked_from_data(&cd, table, flavor, n, a, b, id).canonical();
        debug_assert!(mf.validate().is_ok());
        visit(mf)?;
    }
    Ok(())
}

#[derive(Default)]
struct ClassSet {
    classes: Vec<OracleClass>,
    by_print: BTreeMap<Fingerprint, Vec<usize>>,
}

impl ClassSet {
    fn insert(&mut self, mf: MarkedFactorization, limit: usize) -> Result<(), GroupError> {
        let fp = Fingerprint::of(&mf.table);
        let gens = crate::iso::generating_set(&mf.table);
        if let Some(idxs) = self.by_print.get(&fp) {
            for &k in idxs {
                if find_isomorphism(&mf.table, &self.classes[k].rep.table, &gens, limit)?.is_some()
                {
                    let class = &mut self.classes[k];
                    class.members += 1;
                    let mut fresh = true;
                    for other in &class.marked {
                        if marked_isomorphic(&mf, other, limit)? {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        class.marked.push(mf.clone());
                    }
                    if mf.table.raw_product() < class.rep.table.raw_product() {
                        class.rep = mf;
                    }
                    return Ok(());
                }
            }
        }
        self.by_print
            .entry(fp.clone())
            .or_default()
            .push(self.classes.len());
        self.classes.push(OracleClass {
            rep: mf.clone(),
            fingerprint: fp,
            members: 1,
            marked: vec![mf],
        });
        Ok(())
    }
}

/// Isomorphism carrying `⟨a,b⟩` onto `⟨a,b⟩` and `⟨c⟩` onto `⟨c⟩`.
pub fn marked_isomorphic(
    x1: &MarkedFactorization,
    x2: &MarkedFactorization,
    limit: usize,
) -> Result<bool, GroupError> {
    if x1.order() != x2.order() || x1.m != x2.m {
        return Ok(false);
    }
    let (t1, t2) = (&x1.table, &x2.table);
    let g2 = x2.base();
    let c2 = x2.c_subgroup();
    let keys1 = crate::iso::element_keys(t1);
    let keys2 = crate::iso::element_keys(t2);
    let pick = |x: Elem, within: &[Elem]| -> Vec<Elem> {
        within
            .iter()
            .copied()
            .filter(|&y| keys2[y] == keys1[x])
            .collect()
    };
    let candidates = vec![
        pick(x1.a, g2.members()),
        pick(x1.b, g2.members()),
        pick(x1.c, c2.members()),
    ];
    Ok(find_isomorphism_among(t1, t2, &[x1.a, x1.b, x1.c], &candidates, limit)?.is_some())
}
