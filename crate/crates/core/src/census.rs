//! Census records and the family/oracle cross-check.
//!
//! A record stores the commutation data `(φ, π)` of a marked factorization
//! rather than its table, so it stays small and rebuilds to the identical
//! canonical table.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, verify_normality, ClassifyError};
use crate::error::GroupError;
use crate::families::{build_group, enumerate_params, Family, FamilyError, FamilyParams};
use crate::group::{Elem, GroupTable, SmallTag};
use crate::iso::is_isomorphic;
use crate::marked::{base_group, Flavor, MarkedFactorization, Provenance};
use crate::oracle::{
    assemble_table, enumerate_skew_products, marked_from_data, marked_isomorphic, CommutationData,
    OracleClass, OracleError, OracleOptions,
};

#[derive(Error, Debug)]
pub enum CensusError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("record {id}: {reason}")]
    BadRecord { id: String, reason: String },
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub center: usize,
    pub derived: usize,
    pub order_multiset: BTreeMap<usize, usize>,
}

impl Invariants {
    pub fn of(g: &GroupTable) -> Self {
        Invariants {
            center: g.center().len(),
            derived: g.derived_subgroup().len(),
            order_multiset: g.order_multiset(),
        }
    }
}

/// One line of a census file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub flavor: Flavor,
    pub n: usize,
    pub m: usize,
    pub class_id: String,
    pub order: usize,
    pub provenance: Provenance,
    pub core_free: bool,
    pub invariants: Invariants,
    /// `c·g = φ(g)·c^{π(g)}` over the base group, `a^i b^j` at `i + o(a)·j`.
    pub phi: Vec<Elem>,
    pub pi: Vec<usize>,
}

/// Reads off `(φ, π)` from the exact factorization `X = G⟨c⟩`.
pub fn commutation_data(xf: &MarkedFactorization) -> CommutationData {
    let x = &xf.table;
    let (base, _, _) = base_group(xf.flavor, xf.n);
    let oa = xf.flavor.a_order(xf.n);
    let m = xf.m;
    // g_in_x[i + oa·j] = a^i b^j in X.
    let g_in_x: Vec<Elem> = (0..2)
        .flat_map(|j| (0..oa).map(move |i| (i, j)))
        .map(|(i, j)| x.mul(x.pow(xf.a, i as i64), x.pow(xf.b, j as i64)))
        .collect();
    let mut split = vec![(0, 0); x.order()];
    let mut ck = x.identity();
    for k in 0..m {
        for (g, &gx) in g_in_x.iter().enumerate() {
            split[x.mul(gx, ck)] = (g, k);
        }
        ck = x.mul(ck, xf.c);
    }
    let (phi, pi) = g_in_x.iter().map(|&gx| split[x.mul(xf.c, gx)]).unzip();
    CommutationData { base, m, phi, pi }
}

impl CensusRecord {
    pub fn new(xf: &MarkedFactorization, class_id: String) -> Self {
        let cd = commutation_data(xf);
        CensusRecord {
            flavor: xf.flavor,
            n: xf.n,
            m: xf.m,
            class_id,
            order: xf.order(),
            provenance: xf.provenance.clone(),
            core_free: xf.is_core_free(),
            invariants: Invariants::of(&xf.table),
            phi: cd.phi,
            pi: cd.pi,
        }
    }

    /// Reassembles the marked factorization in canonical labelling.
    pub fn rebuild(&self) -> Result<MarkedFactorization, CensusError> {
        let bad = |reason: String| CensusError::BadRecord {
            id: self.class_id.clone(),
            reason,
        };
        let (base, a, b) = base_group(self.flavor, self.n);
        if self.phi.len() != base.order() || self.pi.len() != base.order() || self.m == 0 {
            return Err(bad("φ and π must have one entry per base element".into()));
        }
        if self.phi.iter().any(|&g| g >= base.order()) || self.pi.iter().any(|&k| k >= self.m) {
            return Err(bad("φ or π out of range".into()));
        }
        let cd = CommutationData {
            base,
            m: self.m,
            phi: self.phi.clone(),
            pi: self.pi.clone(),
        };
        let table = assemble_table(&cd).map_err(|e| bad(e.to_string()))?;
        let mut xf = marked_from_data(&cd, table, self.flavor, self.n, a, b, String::new());
        xf.provenance = self.provenance.clone();
        xf.validate().map_err(|e| bad(e.to_string()))?;
        let xf = xf.canonical();
        if Invariants::of(&xf.table) != self.invariants {
            return Err(bad("invariants do not match the rebuilt group".into()));
        }
        Ok(xf)
    }
}

pub fn write_jsonl<W: Write>(out: &mut W, records: &[CensusRecord]) -> Result<(), CensusError> {
    for r in records {
        serde_json::to_writer(&mut *out, r)
            .map_err(|e| CensusError::Json { line: 0, source: e })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<CensusRecord>, CensusError> {
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| CensusError::Json {
            line: k + 1,
            source: e,
        })?);
    }
    Ok(out)
}

/// Census records for an oracle run: core-free classes first, then flagged.
pub fn oracle_records(classes: &[OracleClass], flagged: &[OracleClass]) -> Vec<CensusRecord> {
    classes
        .iter()
        .chain(flagged)
        .map(|c| {
            let id = match &c.rep.provenance {
                Provenance::Oracle { id } => id.clone(),
                other => other.to_string(),
            };
            CensusRecord::new(&c.rep, id)
        })
        .collect()
}

/// One row of the CSV summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub flavor: Flavor,
    pub n: usize,
    pub m: usize,
    pub order: usize,
    pub class_id: String,
    pub core_free: bool,
    pub case: Option<u8>,
    pub quotient: Option<SmallTag>,
    pub claims: bool,
    pub normality: Option<bool>,
    pub family: String,
    pub finding: String,
}

/// Classifies one group and collects its flags into a summary row.
///
/// Claims (c) and (d) are only required when `⟨c⟩` is core-free.
pub fn summarize(xf: &MarkedFactorization, class_id: &str) -> SummaryRow {
    let core_free = xf.is_core_free();
    let (family, normality) = match &xf.provenance {
        Provenance::Family { family, .. } => {
            let fam: Option<Family> = family.parse().ok();
            (
                xf.provenance.to_string(),
                fam.map(|f| verify_normality(xf, f.number()).all()),
            )
        }
        Provenance::Oracle { .. } => (String::new(), None),
    };
    let mut row = SummaryRow {
        flavor: xf.flavor,
        n: xf.n,
        m: xf.m,
        order: xf.order(),
        class_id: class_id.to_string(),
        core_free,
        case: None,
        quotient: None,
        claims: false,
        normality,
        family,
        finding: String::new(),
    };
    match classify(xf) {
        Ok(rep) => {
            row.case = Some(rep.case);
            row.quotient = Some(rep.quotient);
            let t = rep.claims;
            row.claims = if core_free {
                t.all()
            } else {
                t.centralizes_core && t.small_index
            };
        }
        Err(e) => row.finding = e.to_string(),
    }
    if row.finding.is_empty() && !row.claims {
        row.finding = "centralizer or normality claim fails".into();
    }
    if row.finding.is_empty() && row.normality == Some(false) {
        row.finding = "family normality claim fails".into();
    }
    row
}

#[derive(Clone, Copy, Debug)]
pub struct CrosscheckOptions {
    pub oracle: OracleOptions,
    pub box_limit: u128,
    pub max_cosets: Option<usize>,
}

impl Default for CrosscheckOptions {
    fn default() -> Self {
        CrosscheckOptions {
            oracle: OracleOptions::default(),
            box_limit: crate::families::DEFAULT_BOX_LIMIT,
            max_cosets: None,
        }
    }
}

/// An abstract isomorphism class among the family constructions at one
/// `(n, m)`.
#[derive(Clone, Debug)]
pub struct FamilyClass {
    pub class_id: String,
    /// First tuple in family and scan order.
    pub params: FamilyParams,
    pub rep: MarkedFactorization,
    /// Valid tuples whose group lies in the class.
    pub tuples: usize,
    /// One representative per marked class.
    pub marked: Vec<MarkedFactorization>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildFailure {
    pub params: FamilyParams,
    pub error: String,
}

#[derive(Clone, Debug, Default)]
pub struct FamilyCensus {
    pub classes: Vec<FamilyClass>,
    pub failures: Vec<BuildFailure>,
    /// Every valid tuple, in family and scan order.
    pub tuples: usize,
}

/// Builds every valid tuple of every family of `flavor` at `(n, m)` and
/// groups the results by abstract isomorphism.
pub fn family_census(
    flavor: Flavor,
    n: usize,
    m: usize,
    opts: &CrosscheckOptions,
) -> Result<FamilyCensus, CensusError> {
    let limit = opts.oracle.node_limit;
    let mut census = FamilyCensus::default();
    for family in Family::of_flavor(flavor) {
        for p in enumerate_params(family, n, m, opts.box_limit)? {
            census.tuples += 1;
            let xf = match build_group(&p, opts.max_cosets) {
                Ok(xf) => xf,
                Err(FamilyError::Coset(e)) => return Err(FamilyError::Coset(e).into()),
                Err(e) => {
                    census.failures.push(BuildFailure {
                        params: p,
                        error: e.to_string(),
                    });
                    continue;
                }
            };
            let mut home = None;
            for (k, class) in census.classes.iter().enumerate() {
                if is_isomorphic(&xf.table, &class.rep.table, limit)?.is_some() {
                    home = Some(k);
                    break;
                }
            }
            match home {
                Some(k) => {
                    let class = &mut census.classes[k];
                    class.tuples += 1;
                    let mut fresh = true;
                    for other in &class.marked {
                        if marked_isomorphic(&xf, other, limit)? {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        class.marked.push(xf);
                    }
                }
                None => {
                    let class_id =
                        format!("{}{}-{}-fam{}", flavor.letter(), n, m, census.classes.len());
                    census.classes.push(FamilyClass {
                        class_id,
                        params: p,
                        rep: xf.clone(),
                        tuples: 1,
                        marked: vec![xf],
                    });
                }
            }
        }
    }
    Ok(census)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedMatching {
    /// Marked classes on each side.
    pub oracle: usize,
    pub family: usize,
    /// Marked oracle classes with no marked-isomorphic family group.
    pub oracle_only: usize,
    /// Marked family classes with no marked-isomorphic oracle output.
    pub family_only: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub flavor: Flavor,
    pub n: usize,
    pub m: usize,
    pub oracle_classes: Vec<String>,
    pub family_classes: Vec<String>,
    /// `(oracle class, family class, first family tuple)`.
    pub matching: Vec<(String, String, FamilyParams)>,
    /// Realized by the oracle but by no family: missed by the classification.
    pub oracle_only: Vec<String>,
    /// Constructed but not realized by the oracle.
    pub family_only: Vec<String>,
    pub build_failures: Vec<BuildFailure>,
    pub marked: MarkedMatching,
}

impl CrosscheckReport {
    /// Empty diffs and no construction failures.
    pub fn is_clean(&self) -> bool {
        self.oracle_only.is_empty() && self.family_only.is_empty() && self.build_failures.is_empty()
    }

    /// Whether the finer matching up to marked isomorphism also agrees.
    pub fn marked_agrees(&self) -> bool {
        self.marked.oracle_only == 0 && self.marked.family_only == 0
    }
}

/// Compares oracle and family classes at one `(flavor, n, m)` up to abstract
/// isomorphism, and reports the marked matching alongside.
pub fn crosscheck(
    flavor: Flavor,
    n: usize,
    m: usize,
    opts: &CrosscheckOptions,
) -> Result<CrosscheckReport, CensusError> {
    let oracle = enumerate_skew_products(flavor, n, m, &opts.oracle)?;
    let fam = family_census(flavor, n, m, opts)?;
    let limit = opts.oracle.node_limit;
    let oracle_id = |c: &OracleClass| c.rep.provenance.to_string();
    let mut report = CrosscheckReport {
        flavor,
        n,
        m,
        oracle_classes: oracle.core_free.iter().map(oracle_id).collect(),
        family_classes: fam.classes.iter().map(|c| c.class_id.clone()).collect(),
        matching: Vec::new(),
        oracle_only: Vec::new(),
        family_only: Vec::new(),
        build_failures: fam.failures.clone(),
        marked: MarkedMatching {
            oracle: oracle.core_free.iter().map(|c| c.marked.len()).sum(),
            family: fam.classes.iter().map(|c| c.marked.len()).sum(),
            ..MarkedMatching::default()
        },
    };
    let mut family_hit = vec![false; fam.classes.len()];
    for oc in &oracle.core_free {
        let mut partner = None;
        for (k, fc) in fam.classes.iter().enumerate() {
            if is_isomorphic(&oc.rep.table, &fc.rep.table, limit)?.is_some() {
                partner = Some(k);
                break;
            }
        }
        let Some(k) = partner else {
            report.oracle_only.push(oracle_id(oc));
            report.marked.oracle_only += oc.marked.len();
            continue;
        };
        family_hit[k] = true;
        let fc = &fam.classes[k];
        report
            .matching
            .push((oracle_id(oc), fc.class_id.clone(), fc.params.clone()));
        report.marked.oracle_only += count_unmatched(&oc.marked, &fc.marked, limit)?;
        report.marked.family_only += count_unmatched(&fc.marked, &oc.marked, limit)?;
    }
    for (fc, hit) in fam.classes.iter().zip(family_hit) {
        if !hit {
            report.family_only.push(fc.class_id.clone());
            report.marked.family_only += fc.marked.len();
        }
    }
    Ok(report)
}

fn count_unmatched(
    from: &[MarkedFactorization],
    to: &[MarkedFactorization],
    limit: usize,
) -> Result<usize, GroupError> {
    let mut count = 0;
    for x in from {
        let mut found = false;
        for y in to {
            if marked_isomorphic(x, y, limit)? {
                found = true;
                break;
            }
        }
        if !found {
            count += 1;
        }
    }
    Ok(count)
}

/// Classification errors raised while summarizing count as findings, not
/// failures of the run.
pub fn is_finding(e: &ClassifyError) -> bool {
    matches!(
        e,
        ClassifyError::NoTableRow { .. }
            | ClassifyError::AmbiguousMaximum(_)
            | ClassifyError::ScanMismatch { .. }
    )
}
