use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, Write};

use rayon::prelude::*;
use serde::Serialize;
use skewprod::census::{
    crosscheck as crosscheck_one, oracle_records, read_jsonl, summarize, write_jsonl, CensusError,
    CensusRecord, CrosscheckOptions, CrosscheckReport, SummaryRow,
};
use skewprod::classify::{
    classify as classify_one, match_family, verify_normality, ClassificationReport, NormalityFlags,
    ClaimFlags,
};
use skewprod::families::{
    build_group, enumerate_params, Family, FamilyError, FamilyParams, DEFAULT_BOX_LIMIT,
};
use skewprod::iso::DEFAULT_NODE_LIMIT;
use skewprod::marked::{MarkedFactorization, Provenance};
use skewprod::oracle::{enumerate_skew_products, OracleError, OracleOptions};
use skewprod::CosetError;

use crate::config::RunConfig;
use crate::CliError;

/// Worst outcome seen so far. A resource bound outranks a finding, since an
/// incomplete sweep cannot vouch for its own findings.
#[derive(Default)]
struct Verdict {
    resource: Option<String>,
    findings: usize,
}

impl Verdict {
    fn finish(self, what: &str) -> Result<(), CliError> {
        if let Some(msg) = self.resource {
            return Err(CliError::Resource(msg));
        }
        if self.findings > 0 {
            return Err(CliError::Finding(format!("{} {what}", self.findings)));
        }
        Ok(())
    }

    fn absorb(&mut self, e: CliError) -> Result<(), CliError> {
        match e {
            CliError::Resource(msg) => {
                self.resource.get_or_insert(msg);
            }
            CliError::Finding(_) => self.findings += 1,
            other => return Err(other),
        }
        Ok(())
    }
}

/// One JSON object per line on stderr.
fn anomaly(kind: &str, detail: impl Serialize) {
    let line = serde_json::json!({ "anomaly": kind, "detail": detail });
    eprintln!("{line}");
}

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(cfg: &RunConfig, value: &impl Serialize) -> Result<(), CliError> {
    let mut out = sink(cfg)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn write_census(cfg: &RunConfig, records: &[CensusRecord]) -> Result<(), CliError> {
    let mut out = sink(cfg)?;
    write_jsonl(&mut out, records).map_err(census_error)?;
    out.flush()?;
    Ok(())
}

fn write_csv(cfg: &RunConfig, rows: &[SummaryRow]) -> Result<(), CliError> {
    let Some(path) = &cfg.csv else {
        return Ok(());
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Usage(e.to_string()))?;
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn family_error(e: FamilyError) -> CliError {
    match e {
        FamilyError::BoxTooLarge { .. } | FamilyError::Coset(CosetError::CapacityExceeded(_)) => {
            CliError::Resource(e.to_string())
        }
        FamilyError::InvalidParams(_)
        | FamilyError::StructuralMismatch { .. }
        | FamilyError::Coset(_) => CliError::Usage(e.to_string()),
        _ => CliError::Finding(e.to_string()),
    }
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::BoundExceeded { .. } => CliError::Resource(e.to_string()),
        _ => CliError::Finding(e.to_string()),
    }
}

fn census_error(e: CensusError) -> CliError {
    match e {
        CensusError::Oracle(e) => oracle_error(e),
        CensusError::Family(e) => family_error(e),
        CensusError::Io(e) => CliError::Io(e),
        CensusError::BadRecord { .. } | CensusError::Json { .. } => CliError::Usage(e.to_string()),
        CensusError::Group(_) => CliError::Resource(e.to_string()),
    }
}

fn families(cfg: &RunConfig) -> Vec<Family> {
    match cfg.family {
        Some(f) => vec![f],
        None => cfg
            .flavors()
            .into_iter()
            .flat_map(Family::of_flavor)
            .collect(),
    }
}

/// Valid tuples for the configured families and ranges, in family, `n`, `m`
/// and scan order.
fn enumerate_tuples(cfg: &RunConfig) -> Result<Vec<FamilyParams>, CliError> {
    let bound = cfg.construct_bound();
    let jobs: Vec<(Family, usize, usize)> = families(cfg)
        .into_iter()
        .flat_map(|f| {
            let narrowed = RunConfig {
                family: Some(f),
                flavor: Some(f.flavor()),
                ..cfg.clone()
            };
            narrowed
                .triples(bound)
                .into_iter()
                .map(move |(_, n, m)| (f, n, m))
        })
        .collect();
    for &(f, n, m) in &jobs {
        let order = f.flavor().base_order(n) * m;
        if order > bound {
            return Err(CliError::Resource(format!(
                "{f} n={n} m={m} has |X| = {order} above the construct bound {bound}"
            )));
        }
    }
    let lists: Vec<Result<Vec<FamilyParams>, FamilyError>> = jobs
        .par_iter()
        .map(|&(f, n, m)| enumerate_params(f, n, m, DEFAULT_BOX_LIMIT))
        .collect();
    let mut out = Vec::new();
    for list in lists {
        out.extend(list.map_err(family_error)?);
    }
    Ok(out)
}

pub fn params(cfg: &RunConfig) -> Result<(), CliError> {
    let tuples = enumerate_tuples(cfg)?;
    write_json(cfg, &tuples)
}

/// Tuple files hold a JSON array or one tuple per line.
fn read_tuples(cfg: &RunConfig) -> Result<Vec<FamilyParams>, CliError> {
    let Some(path) = &cfg.input else {
        return enumerate_tuples(cfg);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())));
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            serde_json::from_str(l)
                .map_err(|e| CliError::Usage(format!("{}:{}: {e}", path.display(), k + 1)))
        })
        .collect()
}

pub fn build(cfg: &RunConfig) -> Result<(), CliError> {
    let tuples = read_tuples(cfg)?;
    let bound = cfg.construct_bound();
    let built: Vec<Option<Result<CensusRecord, FamilyError>>> = tuples
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            // Oversize tuples are refused before any enumeration work.
            (p.expected_order() <= bound).then(|| {
                let xf = build_group(p, None)?;
                let id = format!("{}-{}-{}-t{}", p.family, p.n, p.m, k);
                Ok(CensusRecord::new(&xf, id))
            })
        })
        .collect();
    let mut records = Vec::new();
    let mut verdict = Verdict::default();
    let mut invalid = 0;
    for (p, r) in tuples.iter().zip(built) {
        let Some(r) = r else {
            let msg = format!(
                "{p}: |X| = {} above the construct bound {bound}",
                p.expected_order()
            );
            anomaly("bound", &msg);
            verdict.absorb(CliError::Resource(msg))?;
            continue;
        };
        match r {
            Ok(rec) => records.push(rec),
            Err(FamilyError::InvalidParams(v)) => {
                invalid += 1;
                let clauses: Vec<&str> = v.iter().map(|v| v.clause.as_str()).collect();
                anomaly(
                    "invalid",
                    serde_json::json!({ "params": p, "clauses": clauses }),
                );
            }
            Err(e) => {
                anomaly(
                    "build",
                    serde_json::json!({ "params": p, "error": e.to_string() }),
                );
                verdict.absorb(family_error(e))?;
            }
        }
    }
    write_census(cfg, &records)?;
    if invalid > 0 {
        return Err(CliError::Usage(format!("{invalid} invalid tuples")));
    }
    verdict.finish("construction anomalies")
}

pub fn oracle(cfg: &RunConfig) -> Result<(), CliError> {
    let opts = OracleOptions {
        bound: cfg.oracle_bound(),
        node_limit: DEFAULT_NODE_LIMIT,
    };
    let triples = cfg.triples(opts.bound);
    let runs: Vec<_> = triples
        .par_iter()
        .map(|&(flavor, n, m)| enumerate_skew_products(flavor, n, m, &opts))
        .collect();
    let mut records = Vec::new();
    let mut verdict = Verdict::default();
    for (&(flavor, n, m), run) in triples.iter().zip(runs) {
        match run {
            Ok(c) => records.extend(oracle_records(&c.core_free, &c.flagged)),
            Err(e) => {
                anomaly(
                    "oracle",
                    serde_json::json!({ "flavor": flavor, "n": n, "m": m, "error": e.to_string() }),
                );
                verdict.absorb(oracle_error(e))?;
            }
        }
    }
    write_census(cfg, &records)?;
    verdict.finish("oracle failures")
}

fn read_census(cfg: &RunConfig) -> Result<Vec<CensusRecord>, CliError> {
    let Some(path) = &cfg.input else {
        return Err(CliError::Usage("--input census file required".into()));
    };
    let file = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    read_jsonl(BufReader::new(file)).map_err(census_error)
}

fn rebuild_all(records: &[CensusRecord]) -> Result<Vec<MarkedFactorization>, CliError> {
    records
        .par_iter()
        .map(|r| r.rebuild().map_err(census_error))
        .collect()
}

#[derive(Serialize)]
struct Classified {
    summary: SummaryRow,
    classification: Option<ClassificationReport>,
}

pub fn classify(cfg: &RunConfig, with_family: bool) -> Result<(), CliError> {
    let records = read_census(cfg)?;
    let groups = rebuild_all(&records)?;
    let rows: Vec<Result<Classified, CliError>> = records
        .par_iter()
        .zip(&groups)
        .map(|(rec, xf)| {
            let mut summary = summarize(xf, &rec.class_id);
            let mut classification = classify_one(xf).ok();
            if with_family {
                let hit = match_family(xf, DEFAULT_BOX_LIMIT, DEFAULT_NODE_LIMIT)
                    .map_err(family_error)?;
                if let (Some(p), true) = (&hit, summary.family.is_empty()) {
                    summary.family = p.to_string();
                }
                if let Some(c) = classification.as_mut() {
                    c.family_match = hit;
                }
            }
            Ok(Classified {
                summary,
                classification,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let summaries: Vec<SummaryRow> = rows.iter().map(|r| r.summary.clone()).collect();
    write_json(cfg, &rows)?;
    write_csv(cfg, &summaries)?;
    let unclassified = rows.iter().filter(|r| r.summary.case.is_none()).count();
    for r in rows.iter().filter(|r| r.summary.case.is_none()) {
        anomaly("classify", &r.summary);
    }
    Verdict {
        resource: None,
        findings: unclassified,
    }
    .finish("groups without a table row")
}

#[derive(Serialize)]
struct Verified {
    class_id: String,
    core_free: bool,
    claims: Option<ClaimFlags>,
    normality: Option<NormalityFlags>,
    ok: bool,
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let records = read_census(cfg)?;
    let groups = rebuild_all(&records)?;
    let rows: Vec<(SummaryRow, Verified)> = records
        .par_iter()
        .zip(&groups)
        .map(|(rec, xf)| {
            let summary = summarize(xf, &rec.class_id);
            let normality = match &xf.provenance {
                Provenance::Family { family, .. } => family
                    .parse::<Family>()
                    .ok()
                    .map(|f| verify_normality(xf, f.number())),
                Provenance::Oracle { .. } => None,
            };
            let v = Verified {
                class_id: rec.class_id.clone(),
                core_free: summary.core_free,
                claims: classify_one(xf).ok().map(|r| r.claims),
                normality,
                ok: summary.finding.is_empty(),
            };
            (summary, v)
        })
        .collect();
    let (summaries, verified): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    write_json(cfg, &verified)?;
    write_csv(cfg, &summaries)?;
    for s in summaries.iter().filter(|s| !s.finding.is_empty()) {
        anomaly("verify", s);
    }
    Verdict {
        resource: None,
        findings: verified.iter().filter(|v| !v.ok).count(),
    }
    .finish("groups with a false flag")
}

pub fn crosscheck(cfg: &RunConfig) -> Result<(), CliError> {
    let opts = CrosscheckOptions {
        oracle: OracleOptions {
            bound: cfg.oracle_bound(),
            node_limit: DEFAULT_NODE_LIMIT,
        },
        ..CrosscheckOptions::default()
    };
    let triples = cfg.triples(opts.oracle.bound);
    let runs: Vec<Result<CrosscheckReport, CensusError>> = triples
        .par_iter()
        .map(|&(flavor, n, m)| crosscheck_one(flavor, n, m, &opts))
        .collect();
    let mut reports = Vec::new();
    let mut verdict = Verdict::default();
    for run in runs {
        match run {
            Ok(r) => {
                if !r.is_clean() {
                    anomaly("crosscheck", &r);
                    verdict.findings += 1;
                }
                reports.push(r);
            }
            Err(e) => verdict.absorb(census_error(e))?,
        }
    }
    write_json(cfg, &reports)?;
    verdict.finish("(flavor, n, m) with a nonempty difference")
}

pub fn report(cfg: &RunConfig) -> Result<(), CliError> {
    let records = read_census(cfg)?;
    let groups = rebuild_all(&records)?;
    let rows: Vec<SummaryRow> = records
        .par_iter()
        .zip(&groups)
        .map(|(rec, xf)| summarize(xf, &rec.class_id))
        .collect();
    let mut by_triple: BTreeMap<(String, usize, usize), Vec<&SummaryRow>> = BTreeMap::new();
    for r in &rows {
        by_triple
            .entry((r.flavor.to_string(), r.n, r.m))
            .or_default()
            .push(r);
    }
    let mut out = sink(cfg)?;
    let mut findings = 0;
    for ((flavor, n, m), rs) in &by_triple {
        let free = rs.iter().filter(|r| r.core_free).count();
        let mut cases: BTreeMap<String, usize> = BTreeMap::new();
        for r in rs {
            let key = match (r.case, r.quotient) {
                (Some(c), Some(q)) => format!("case {c} ({q})"),
                _ => "unclassified".to_string(),
            };
            *cases.entry(key).or_default() += 1;
        }
        let bad = rs.iter().filter(|r| !r.finding.is_empty()).count();
        findings += bad;
        let cases: Vec<String> = cases.iter().map(|(k, v)| format!("{k} x{v}")).collect();
        writeln!(
            out,
            "{flavor} n={n} m={m} |X|={}: {} groups, {free} core-free; {}; {bad} findings",
            rs[0].order,
            rs.len(),
            cases.join(", ")
        )?;
        for r in rs.iter().filter(|r| !r.finding.is_empty()) {
            writeln!(out, "  {}: {}", r.class_id, r.finding)?;
        }
    }
    writeln!(
        out,
        "total: {} groups over {} (flavor, n, m), {findings} findings",
        rows.len(),
        by_triple.len()
    )?;
    out.flush()?;
    Verdict {
        resource: None,
        findings,
    }
    .finish("findings")
}
