//! Acceptance run: one PASS/FAIL line per criterion A1 to A7.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Group identification, cores and quotients are recomputed with the
//! independent helpers in `common`; the skew-product oracle is the
//! independent side of the family cross-check.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use skewprod::census::{family_census, CrosscheckOptions};
use skewprod::classify::{classify, verify_normality};
use skewprod::coset::{todd_coxeter, Presentation};
use skewprod::families::{build_group, enumerate_params, Family, FamilyError, DEFAULT_BOX_LIMIT};
use skewprod::iso::{is_isomorphic, DEFAULT_NODE_LIMIT};
use skewprod::marked::{Flavor, MarkedFactorization};
use skewprod::oracle::{admitted_factorizations, enumerate_skew_products, OracleOptions};
use skewprod::GroupTable;

const A3_BOUND: usize = 192;
const A4_BOUND: usize = 96;
/// Orders at which the library's isomorphism verdicts are re-derived by
/// brute force.
const BRUTE_ISO_BOUND: usize = 24;

struct Line {
    id: &'static str,
    pass: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

impl Line {
    fn print(&self) -> bool {
        let ok = self.pass && self.elapsed < self.limit;
        println!(
            "{} {} ({:.2} s, limit {} s): {}",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        );
        ok
    }
}

/// Flags gathered during the A3 and A4 sweeps for A5 to A7.
#[derive(Default)]
struct Tally {
    groups: usize,
    claims_false: Vec<String>,
    normality_checked: usize,
    normality_false: Vec<String>,
    unsolvable: Vec<String>,
}

fn triples(bound: usize) -> Vec<(Flavor, usize, usize)> {
    let mut out = Vec::new();
    for flavor in [Flavor::Dihedral, Flavor::Quaternion] {
        for n in 2.. {
            let base = flavor.base_order(n);
            if 2 * base > bound {
                break;
            }
            for m in 2..=bound / base {
                out.push((flavor, n, m));
            }
        }
    }
    out
}

fn c_subgroup(xf: &MarkedFactorization) -> Vec<usize> {
    common::closure(&xf.table, &[xf.c])
}

fn a1() -> Line {
    let start = Instant::now();
    let a4 = common::a4();
    let run = || -> Result<String, String> {
        let census = enumerate_skew_products(Flavor::Dihedral, 2, 3, &OracleOptions::default())
            .map_err(|e| e.to_string())?;
        if census.core_free.len() != 1 {
            return Err(format!("{} core-free classes", census.core_free.len()));
        }
        let rep = &census.core_free[0].rep;
        if !common::brute_isomorphic(&rep.table, &a4) {
            return Err("class is not A4".into());
        }
        let r = classify(rep).map_err(|e| e.to_string())?;
        let m_x = common::core(&rep.table, &m_independent(rep));
        if r.case != 3 || r.m_core_order != 1 || m_x.len() != 1 {
            return Err(format!("case {} with |M_X| = {}", r.case, r.m_core_order));
        }
        Ok("one class, isomorphic to A4; case 3 with M_X = 1".into())
    };
    finish("A1", start, 5, run())
}

fn finish(id: &'static str, start: Instant, limit: u64, r: Result<String, String>) -> Line {
    let (pass, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Line {
        id,
        pass,
        elapsed: start.elapsed(),
        limit: Duration::from_secs(limit),
        detail,
    }
}

/// Largest subgroup containing `c` inside the set `⟨a⟩⟨c⟩`, found by
/// closing `⟨c, y⟩` for each `y` in the set.
fn m_independent(xf: &MarkedFactorization) -> Vec<usize> {
    let x = &xf.table;
    let set = power_product(xf, 1, 1);
    let mut best = c_subgroup(xf);
    for &y in &set {
        let h = common::closure(x, &[xf.c, y]);
        if h.len() > best.len() && h.iter().all(|z| set.binary_search(z).is_ok()) {
            best = h;
        }
    }
    best
}

/// The set `⟨a^i⟩⟨c^j⟩`, sorted.
fn power_product(xf: &MarkedFactorization, i: usize, j: usize) -> Vec<usize> {
    let x = &xf.table;
    let pow = |g: usize, k: usize| (0..k).fold(x.identity(), |acc, _| x.mul(acc, g));
    let ai = common::closure(x, &[pow(xf.a, i)]);
    let cj = common::closure(x, &[pow(xf.c, j)]);
    let mut out: Vec<usize> = ai
        .iter()
        .flat_map(|&u| cj.iter().map(move |&v| x.mul(u, v)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

struct Fixture {
    n: usize,
    m: usize,
    case: u8,
    i: usize,
    j: usize,
    quotient: fn() -> GroupTable,
}

/// Checks one admitted output against a fixture with independent `M`, `M_X`
/// and quotient.
fn matches_fixture(xf: &MarkedFactorization, f: &Fixture) -> bool {
    let Ok(r) = classify(xf) else {
        return false;
    };
    if r.case != f.case {
        return false;
    }
    let m = m_independent(xf);
    let m_x = common::core(&xf.table, &m);
    m == power_product(xf, f.i, 1)
        && m_x == power_product(xf, f.i, f.j)
        && r.m_order == m.len()
        && r.m_core_order == m_x.len()
        && common::brute_isomorphic(&common::quotient(&xf.table, &m_x), &(f.quotient)())
}

fn a2() -> Line {
    let start = Instant::now();
    let d8 = Fixture {
        n: 2,
        m: 0,
        case: 2,
        i: 2,
        j: 2,
        quotient: common::d8,
    };
    let a4 = Fixture {
        n: 2,
        m: 0,
        case: 3,
        i: 2,
        j: 3,
        quotient: common::a4,
    };
    let fixtures = [
        Fixture { m: 2, ..d8 },
        Fixture { m: 4, ..d8 },
        Fixture { m: 6, ..d8 },
        Fixture { m: 3, ..a4 },
        Fixture { m: 6, ..a4 },
        Fixture {
            n: 3,
            m: 4,
            case: 5,
            i: 3,
            j: 4,
            quotient: common::s4,
        },
        Fixture {
            n: 4,
            m: 3,
            case: 4,
            i: 4,
            j: 3,
            quotient: common::s4,
        },
    ];
    let mut missing = Vec::new();
    for f in &fixtures {
        let outputs =
            match admitted_factorizations(Flavor::Dihedral, f.n, f.m, &OracleOptions::default()) {
                Ok(o) => o,
                Err(e) => return finish("A2", start, 30, Err(e.to_string())),
            };
        if !outputs.iter().any(|xf| matches_fixture(xf, f)) {
            missing.push(format!("D n={} m={} case {}", f.n, f.m, f.case));
        }
    }
    let r = if missing.is_empty() {
        Ok(format!("{} fixtures reproduced", fixtures.len()))
    } else {
        Err(format!("not reproduced: {}", missing.join(", ")))
    };
    finish("A2", start, 30, r)
}

fn record_flags(xf: &MarkedFactorization, label: &str, family: Option<Family>, tally: &mut Tally) {
    tally.groups += 1;
    let core_free = xf.is_core_free();
    // Unclassified groups are reported by A3 itself.
    if let Ok(r) = classify(xf) {
        let t = r.claims;
        let ok = if core_free {
            t.all()
        } else {
            t.centralizes_core && t.small_index
        };
        if !ok {
            tally.claims_false.push(label.to_string());
        }
    }
    if let Some(f) = family {
        tally.normality_checked += 1;
        if !verify_normality(xf, f.number()).all() {
            tally.normality_false.push(label.to_string());
        }
    }
    if !common::solvable(&xf.table) {
        tally.unsolvable.push(label.to_string());
    }
}

fn a3(tally: &mut Tally) -> Line {
    let start = Instant::now();
    let mut tuples = 0;
    let mut collapse = Vec::new();
    let mut not_core_free = Vec::new();
    let mut no_row = Vec::new();
    let mut other = Vec::new();
    for (flavor, n, m) in triples(A3_BOUND) {
        for family in Family::of_flavor(flavor) {
            let params = match enumerate_params(family, n, m, DEFAULT_BOX_LIMIT) {
                Ok(p) => p,
                Err(e) => {
                    other.push(format!("{family} n={n} m={m}: {e}"));
                    continue;
                }
            };
            for p in params {
                tuples += 1;
                let label = p.to_string();
                let xf = match build_group(&p, None) {
                    Ok(xf) => xf,
                    Err(FamilyError::Collapse { .. } | FamilyError::OrderMismatch { .. }) => {
                        collapse.push(label);
                        continue;
                    }
                    Err(FamilyError::NotCoreFree) => {
                        not_core_free.push(label);
                        continue;
                    }
                    Err(e) => {
                        other.push(format!("{label}: {e}"));
                        continue;
                    }
                };
                if xf.table.order() != p.expected_order() {
                    collapse.push(label);
                    continue;
                }
                if common::core(&xf.table, &c_subgroup(&xf)).len() != 1 {
                    not_core_free.push(label);
                    continue;
                }
                if classify(&xf).is_err() {
                    no_row.push(label.clone());
                }
                record_flags(&xf, &label, Some(family), tally);
            }
        }
    }
    let bad = collapse.len() + not_core_free.len() + no_row.len() + other.len();
    let r = if bad == 0 {
        Ok(format!(
            "{tuples} tuples built at the expected order, all core-free and classified"
        ))
    } else {
        let first: Vec<&String> = collapse
            .iter()
            .chain(&not_core_free)
            .chain(&no_row)
            .chain(&other)
            .take(3)
            .collect();
        Err(format!(
            "{tuples} tuples: {} collapse, {} not core-free, {} no table row, {} other; first {first:?}",
            collapse.len(),
            not_core_free.len(),
            no_row.len(),
            other.len()
        ))
    };
    finish("A3", start, 600, r)
}

fn a4(tally: &mut Tally) -> Line {
    let start = Instant::now();
    let opts = CrosscheckOptions::default();
    let mut diffs = Vec::new();
    let mut classes = 0;
    let mut brute_checked = 0;
    let run = |tally: &mut Tally,
               diffs: &mut Vec<String>,
               classes: &mut usize,
               brute: &mut usize|
     -> Result<(), String> {
        for (flavor, n, m) in triples(A4_BOUND) {
            let oracle =
                enumerate_skew_products(flavor, n, m, &opts.oracle).map_err(|e| e.to_string())?;
            let fam = family_census(flavor, n, m, &opts).map_err(|e| e.to_string())?;
            if !fam.failures.is_empty() {
                diffs.push(format!(
                    "{flavor} n={n} m={m}: {} build failures",
                    fam.failures.len()
                ));
            }
            let iso = |g: &GroupTable, h: &GroupTable| -> Result<bool, String> {
                let lib = is_isomorphic(g, h, DEFAULT_NODE_LIMIT)
                    .map_err(|e| e.to_string())?
                    .is_some();
                if g.order() <= BRUTE_ISO_BOUND && lib != common::brute_isomorphic(g, h) {
                    return Err(format!(
                        "isomorphism verdicts disagree at order {}",
                        g.order()
                    ));
                }
                Ok(lib)
            };
            let mut fam_hit = vec![false; fam.classes.len()];
            for oc in &oracle.core_free {
                *classes += 1;
                let mut hit = false;
                for (k, fc) in fam.classes.iter().enumerate() {
                    if oc.rep.order() <= BRUTE_ISO_BOUND {
                        *brute += 1;
                    }
                    if iso(&oc.rep.table, &fc.rep.table)? {
                        fam_hit[k] = true;
                        hit = true;
                    }
                }
                if !hit {
                    diffs.push(format!("oracle only: {}", oc.rep.provenance));
                }
            }
            for (fc, hit) in fam.classes.iter().zip(fam_hit) {
                if !hit {
                    diffs.push(format!("family only: {}", fc.params));
                }
            }
            for class in oracle.core_free.iter().chain(&oracle.flagged) {
                for (k, xf) in class.marked.iter().enumerate() {
                    let label = format!("{}#{k}", xf.provenance);
                    record_flags(xf, &label, None, tally);
                }
            }
        }
        Ok(())
    };
    let r = match run(tally, &mut diffs, &mut classes, &mut brute_checked) {
        Err(e) => Err(e),
        Ok(()) if diffs.is_empty() => Ok(format!(
            "{classes} oracle classes over {} (flavor, n, m), set equality holds; {brute_checked} pairs re-checked by brute force",
            triples(A4_BOUND).len()
        )),
        Ok(()) => Err(format!("{} differences, first {:?}", diffs.len(), &diffs[..diffs.len().min(3)])),
    };
    finish("A4", start, 900, r)
}

fn a7(tally: &Tally) -> Line {
    let start = Instant::now();
    let mut wrong = Vec::new();
    let mut tables = 0;
    for k in 1..=12usize {
        let pres = [
            ("Z", k, Presentation::parse(&["a"], &[&format!("a^{k}")])),
            (
                "D",
                2 * k,
                Presentation::parse(&["a", "b"], &[&format!("a^{k}"), "b^2", "(a b)^2"]),
            ),
            (
                "Q",
                4 * k,
                Presentation::parse(
                    &["a", "b"],
                    &[
                        &format!("a^{}", 2 * k),
                        &format!("b^2 = a^{k}"),
                        "b^-1 a b a",
                    ],
                ),
            ),
        ];
        for (name, expected, p) in pres {
            let table = p
                .map_err(|e| e.to_string())
                .and_then(|p| todd_coxeter(&p, 10_000).map_err(|e| e.to_string()))
                .map(|e| e.table);
            match table {
                Ok(t) if t.order() == expected && common::associative(&t) => tables += 1,
                Ok(t) => wrong.push(format!("{name}{expected}: order {}", t.order())),
                Err(e) => wrong.push(format!("{name}{expected}: {e}")),
            }
        }
    }
    let r = if !wrong.is_empty() {
        Err(format!("enumeration: {wrong:?}"))
    } else if !tally.unsolvable.is_empty() {
        Err(format!(
            "unsolvable: {:?}",
            &tally.unsolvable[..tally.unsolvable.len().min(3)]
        ))
    } else {
        Ok(format!(
            "{tables} presentations close at the right order and are associative; {} groups from A3 and A4 solvable",
            tally.groups
        ))
    };
    finish("A7", start, 60, r)
}

fn main() -> ExitCode {
    let mut tally = Tally::default();
    let mut lines = vec![a1(), a2()];
    lines.push(a3(&mut tally));
    let a3_groups = tally.groups;
    lines.push(a4(&mut tally));

    // A5 and A6 read flags gathered in the A3 and A4 sweeps; their time is
    // counted there.
    let start = Instant::now();
    let a5 = if tally.claims_false.is_empty() {
        Ok(format!(
            "{} groups ({a3_groups} family, {} oracle), zero false flags",
            tally.groups,
            tally.groups - a3_groups
        ))
    } else {
        Err(format!(
            "{} false: {:?}",
            tally.claims_false.len(),
            &tally.claims_false[..tally.claims_false.len().min(3)]
        ))
    };
    lines.push(finish("A5", start, 1, a5));
    let a6 = if tally.normality_false.is_empty() && tally.normality_checked == a3_groups {
        Ok(format!(
            "{} constructed instances, zero false flags",
            tally.normality_checked
        ))
    } else {
        Err(format!(
            "{} of {} false: {:?}",
            tally.normality_false.len(),
            tally.normality_checked,
            &tally.normality_false[..tally.normality_false.len().min(3)]
        ))
    };
    lines.push(finish("A6", start, 1, a6));
    lines.push(a7(&tally));

    let mut all = true;
    for line in &lines {
        all &= line.print();
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
