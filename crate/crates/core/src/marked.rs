//! A group `X = G⟨c⟩` together with the distinguished elements `a, b, c`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{dihedral, quaternion, Elem, GroupTable, SubgroupSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Dihedral,
    Quaternion,
}

impl Flavor {
    /// Order of `G`: `2n` for dihedral, `4n` for quaternion.
    pub fn base_order(self, n: usize) -> usize {
        match self {
            Flavor::Dihedral => 2 * n,
            Flavor::Quaternion => 4 * n,
        }
    }

    /// Order of `a`: `n` for dihedral, `2n` for quaternion.
    pub fn a_order(self, n: usize) -> usize {
        match self {
            Flavor::Dihedral => n,
            Flavor::Quaternion => 2 * n,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Flavor::Dihedral => 'D',
            Flavor::Quaternion => 'Q',
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Dihedral => "dihedral",
            Flavor::Quaternion => "quaternion",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dihedral" | "d" => Ok(Flavor::Dihedral),
            "quaternion" | "q" => Ok(Flavor::Quaternion),
            _ => Err(format!("unknown flavor {s:?}")),
        }
    }
}

/// The base group as a table with `a` and `b` marked.
///
/// Element `a^i b^j` has index `i + o(a)·j`, so `a = 1` and `b = o(a)`.
pub fn base_group(flavor: Flavor, n: usize) -> (GroupTable, Elem, Elem) {
    match flavor {
        Flavor::Dihedral => (dihedral(n), 1 % n, n),
        Flavor::Quaternion => (quaternion(n), 1, 2 * n),
    }
}

/// Where a marked factorization came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Oracle {
        id: String,
    },
    Family {
        family: String,
        params: std::collections::BTreeMap<String, i64>,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Oracle { id } => write!(f, "oracle:{id}"),
            Provenance::Family { family, params } => {
                write!(f, "{family}(")?;
                for (k, (name, v)) in params.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{name}={v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MarkedError {
    #[error("o(a) = {found}, expected {expected}")]
    OrderA { expected: usize, found: usize },
    #[error("b does not satisfy the base relations")]
    BadB,
    #[error("|<a,b>| = {found}, expected {expected}")]
    BaseOrder { expected: usize, found: usize },
    #[error("o(c) = {found}, expected {expected}")]
    OrderC { expected: usize, found: usize },
    #[error("<a,b> meets <c> nontrivially")]
    NotExact,
    #[error("|X| = {found}, expected {expected}")]
    Order { expected: usize, found: usize },
}

#[derive(Clone, Debug)]
pub struct MarkedFactorization {
    pub table: GroupTable,
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub n: usize,
    pub m: usize,
    pub flavor: Flavor,
    pub provenance: Provenance,
}

impl MarkedFactorization {
    /// Checks the base relations, `o(c) = m`, `G ∩ ⟨c⟩ = 1` and `|X| = |G|·m`.
    pub fn validate(&self) -> Result<(), MarkedError> {
        let x = &self.table;
        let (n, m) = (self.n, self.m);
        let oa = self.flavor.a_order(n);
        let found = x.element_order(self.a);
        if found != oa {
            return Err(MarkedError::OrderA {
                expected: oa,
                found,
            });
        }
        let b2 = x.mul(self.b, self.b);
        let b2_ok = match self.flavor {
            Flavor::Dihedral => b2 == x.identity(),
            Flavor::Quaternion => b2 == x.pow(self.a, n as i64),
        };
        if !b2_ok || x.conj(self.a, self.b) != x.inv(self.a) {
            return Err(MarkedError::BadB);
        }
        let g = self.base();
        let expected = self.flavor.base_order(n);
        if g.len() != expected {
            return Err(MarkedError::BaseOrder {
                expected,
                found: g.len(),
            });
        }
        let oc = x.element_order(self.c);
        if oc != m {
            return Err(MarkedError::OrderC {
                expected: m,
                found: oc,
            });
        }
        if !g.intersection(&self.c_subgroup()).is_trivial() {
            return Err(MarkedError::NotExact);
        }
        if x.order() != expected * m {
            return Err(MarkedError::Order {
                expected: expected * m,
                found: x.order(),
            });
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    /// `G = ⟨a, b⟩`.
    pub fn base(&self) -> SubgroupSet {
        self.table.generate(&[self.a, self.b])
    }

    pub fn c_subgroup(&self) -> SubgroupSet {
        self.table.cyclic_subgroup(self.c)
    }

    /// `⟨c⟩_X`.
    pub fn c_core(&self) -> SubgroupSet {
        self.table.core(&self.c_subgroup())
    }

    pub fn is_core_free(&self) -> bool {
        self.c_core().is_trivial()
    }

    /// Relabels the table by BFS over `a, b, c`, remapping the marks.
    pub fn canonical(&self) -> MarkedFactorization {
        let (table, new_of) = self
            .table
            .canonical_relabel(&[self.a, self.b, self.c])
            .expect("a, b, c generate X");
        MarkedFactorization {
            table,
            a: new_of[self.a],
            b: new_of[self.b],
            c: new_of[self.c],
            ..self.clone()
        }
    }
}
