//! The structural classifier: `M`, its core `M_X`, the quotient `X/M_X` and
//! the matching row of the factorization table, plus the invariants every
//! factorization is expected to satisfy.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{build_group, enumerate_params, Family, FamilyError, FamilyParams};
use crate::group::{Elem, GroupTable, SmallTag, SubgroupSet};
use crate::iso::is_isomorphic;
use crate::marked::{Flavor, MarkedFactorization};
use crate::modarith::divisors;

/// Above this order `compute_M` skips the all-subgroups cross-check.
pub const EXHAUSTIVE_M_BOUND: usize = 48;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("two incomparable subgroups of maximal order {0} lie between <c> and <a><c>")]
    AmbiguousMaximum(usize),
    #[error("divisor scan found M of order {scan}, exhaustive search found {exhaustive}")]
    ScanMismatch { scan: usize, exhaustive: usize },
    #[error("no table row matches: M = <a^{witness}><c>, |M_X| = {core}, X/M_X is {quotient}")]
    NoTableRow {
        witness: usize,
        core: usize,
        quotient: SmallTag,
    },
}

/// One row of the table: `M = ⟨a^i⟩⟨c⟩`, `M_X = ⟨a^i⟩⟨c^j⟩`, quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub case: u8,
    pub i: usize,
    pub j: usize,
    pub quotient: SmallTag,
}

pub const TABLE: [TableRow; 5] = [
    TableRow {
        case: 1,
        i: 1,
        j: 1,
        quotient: SmallTag::Z2,
    },
    TableRow {
        case: 2,
        i: 2,
        j: 2,
        quotient: SmallTag::D8,
    },
    TableRow {
        case: 3,
        i: 2,
        j: 3,
        quotient: SmallTag::A4,
    },
    TableRow {
        case: 4,
        i: 4,
        j: 3,
        quotient: SmallTag::S4,
    },
    TableRow {
        case: 5,
        i: 3,
        j: 4,
        quotient: SmallTag::S4,
    },
];

/// The four claims about `⟨c⟩_X`, `M_X` and `⟨a²⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimFlags {
    /// `⟨a², c⟩` centralizes `⟨c⟩_X`.
    pub centralizes_core: bool,
    /// `|X : C_X(⟨c⟩_X)| ≤ 4`.
    pub small_index: bool,
    /// If `⟨c⟩_X = 1`: `M_X ∩ ⟨a²⟩ ◁ M_X`.
    pub core_meet_normal: bool,
    /// If `⟨c⟩_X = 1` and `M = ⟨a⟩⟨c⟩`: `⟨a²⟩ ◁ X`.
    pub a2_normal: bool,
}

impl ClaimFlags {
    pub fn all(&self) -> bool {
        self.centralizes_core && self.small_index && self.core_meet_normal && self.a2_normal
    }
}

/// Normality claims tied to the family a group was built from. `None` means
/// the claim does not apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityFlags {
    pub a4_normal: Option<bool>,
    pub a3_normal: Option<bool>,
    pub an_normal: Option<bool>,
}

impl NormalityFlags {
    pub fn all(&self) -> bool {
        [self.a4_normal, self.a3_normal, self.an_normal]
            .iter()
            .all(|f| f.unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// Least positive `i` with `M = ⟨a^i⟩⟨c⟩`; a divisor of `o(a)`.
    pub witness: usize,
    pub m_order: usize,
    pub m_core_order: usize,
    #[serde(skip)]
    pub m: Option<SubgroupSet>,
    #[serde(skip)]
    pub m_core: Option<SubgroupSet>,
    pub quotient: SmallTag,
    pub case: u8,
    pub claims: ClaimFlags,
    pub c_core_trivial: bool,
    /// Filled by [`match_family`] on request; `classify` leaves it empty.
    pub family_match: Option<FamilyParams>,
}

fn power_subgroup(x: &GroupTable, g: Elem, i: usize) -> SubgroupSet {
    x.cyclic_subgroup(x.pow(g, i as i64))
}

/// The set `⟨a^i⟩⟨c^j⟩`.
fn product_set(xf: &MarkedFactorization, i: usize, j: usize) -> Vec<Elem> {
    let x = &xf.table;
    let ai = power_subgroup(x, xf.a, i);
    let cj = power_subgroup(x, xf.c, j);
    x.set_product(ai.members(), cj.members())
}

/// The largest subgroup `M` with `⟨c⟩ ≤ M ⊆ ⟨a⟩⟨c⟩`, with its witness exponent.
///
/// Every such subgroup is `⟨a^i⟩⟨c⟩` for a divisor `i` of `o(a)`, so the scan
/// over divisors is complete; at small orders it is cross-checked against all
/// subgroups anyway.
pub fn compute_m(xf: &MarkedFactorization) -> Result<(SubgroupSet, usize), ClassifyError> {
    let x = &xf.table;
    let oa = x.element_order(xf.a);
    let mut found: Vec<(SubgroupSet, usize)> = Vec::new();
    for i in divisors(oa as u64) {
        let i = i as usize;
        if let Some(s) = x.as_subgroup(&product_set(xf, i, 1)) {
            found.push((s, i));
        }
    }
    // i = o(a) always qualifies, so `found` is nonempty.
    let best = found.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
    let tops: Vec<&(SubgroupSet, usize)> = found.iter().filter(|(s, _)| s.len() == best).collect();
    if tops.len() > 1 {
        return Err(ClassifyError::AmbiguousMaximum(best));
    }
    let (m, i) = tops[0].clone();
    if let Some((other, _)) = found.iter().find(|(s, _)| !s.is_subset(&m)) {
        // A subgroup of the family not inside the largest one: no maximum.
        return Err(ClassifyError::AmbiguousMaximum(other.len()));
    }
    if x.order() <= EXHAUSTIVE_M_BOUND {
        let ac = SubgroupSet::from_slice(x.order(), &product_set(xf, 1, 1));
        let c = xf.c_subgroup();
        let exhaustive = x
            .all_subgroups()
            .into_iter()
            .filter(|h| c.is_subset(h) && h.is_subset(&ac))
            .map(|h| h.len())
            .max()
            .unwrap_or(0);
        if exhaustive != m.len() {
            return Err(ClassifyError::ScanMismatch {
                scan: m.len(),
                exhaustive,
            });
        }
    }
    Ok((m, i))
}

/// Evaluates the four claims literally; conditionals are vacuously true when
/// their hypothesis fails.
pub fn verify_claims(xf: &MarkedFactorization, m: &SubgroupSet) -> ClaimFlags {
    let x = &xf.table;
    let core = xf.c_core();
    let cent = x.centralizer(core.members());
    let a2 = x.pow(xf.a, 2);
    let centralizes_core = cent.contains(a2) && cent.contains(xf.c);
    let small_index = x.order() <= 4 * cent.len();
    let a2_sub = x.cyclic_subgroup(a2);
    let (mut core_meet_normal, mut a2_normal) = (true, true);
    if core.is_trivial() {
        let m_core = x.core(m);
        let meet = m_core.intersection(&a2_sub);
        core_meet_normal = m_core
            .members()
            .iter()
            .all(|&g| meet.members().iter().all(|&h| meet.contains(x.conj(h, g))));
        let full = SubgroupSet::from_slice(x.order(), &product_set(xf, 1, 1));
        if *m == full {
            a2_normal = x.is_normal(&a2_sub);
        }
    }
    ClaimFlags {
        centralizes_core,
        small_index,
        core_meet_normal,
        a2_normal,
    }
}

/// Normality claims by family number (1 to 5) and flavor.
pub fn verify_normality(xf: &MarkedFactorization, family: u8) -> NormalityFlags {
    let x = &xf.table;
    let normal = |e: usize| x.is_normal(&power_subgroup(x, xf.a, e));
    NormalityFlags {
        a4_normal: matches!(family, 3 | 4).then(|| normal(4)),
        a3_normal: (family == 5).then(|| normal(3)),
        an_normal: (xf.flavor == Flavor::Quaternion && matches!(family, 2 | 3))
            .then(|| normal(xf.n)),
    }
}

/// Computes `M`, `M_X`, `X/M_X` and the table row.
///
/// The row is chosen from the computed data alone: `M` must equal
/// `⟨a^i⟩⟨c⟩` and `M_X` must equal `⟨a^i⟩⟨c^j⟩` as sets for the row's
/// `(i, j)`, and the quotient must have the row's shape.
pub fn classify(xf: &MarkedFactorization) -> Result<ClassificationReport, ClassifyError> {
    let x = &xf.table;
    let (m, witness) = compute_m(xf)?;
    let m_core = x.core(&m);
    let quotient = x
        .quotient(&m_core)
        .map(|(q, _)| q.identify_small())
        .unwrap_or(SmallTag::Other);
    let no_row = ClassifyError::NoTableRow {
        witness,
        core: m_core.len(),
        quotient,
    };
    let row = TABLE
        .iter()
        .find(|row| {
            row.quotient == quotient
                && SubgroupSet::from_slice(x.order(), &product_set(xf, row.i, 1)) == m
                && SubgroupSet::from_slice(x.order(), &product_set(xf, row.i, row.j)) == m_core
        })
        .ok_or(no_row)?;
    let claims = verify_claims(xf, &m);
    Ok(ClassificationReport {
        witness,
        m_order: m.len(),
        m_core_order: m_core.len(),
        m: Some(m),
        m_core: Some(m_core),
        quotient,
        case: row.case,
        claims,
        c_core_trivial: xf.is_core_free(),
        family_match: None,
    })
}

/// The first tuple, in family and scan order, whose group is isomorphic to
/// `X`. Groups with `⟨c⟩_X ≠ 1` are outside the families and give `None`.
pub fn match_family(
    xf: &MarkedFactorization,
    box_limit: u128,
    node_limit: usize,
) -> Result<Option<FamilyParams>, FamilyError> {
    if !xf.is_core_free() {
        return Ok(None);
    }
    for family in Family::of_flavor(xf.flavor) {
        for p in enumerate_params(family, xf.n, xf.m, box_limit)? {
            let Ok(built) = build_group(&p, None) else {
                continue;
            };
            if is_isomorphic(&xf.table, &built.table, node_limit)?.is_some() {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}
