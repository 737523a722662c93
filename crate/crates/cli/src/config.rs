use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use skewprod::families::Family;
use skewprod::marked::Flavor;

use crate::CliError;

/// An inclusive range written `7` or `2-12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RangeRepr", into = "RangeRepr")]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn single(v: usize) -> Self {
        Span { lo: v, hi: v }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad range bound {t:?}"))
        };
        let span = match s.split_once('-') {
            Some((a, b)) => Span {
                lo: parse(a)?,
                hi: parse(b)?,
            },
            None => Span::single(parse(s)?),
        };
        if span.lo == 0 || span.lo > span.hi {
            return Err(format!("empty or zero range {s:?}"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}-{}", self.lo, self.hi)
        }
    }
}

/// Config files may give a range as a number or a string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RangeRepr {
    One(usize),
    Text(String),
}

impl TryFrom<RangeRepr> for Span {
    type Error = String;

    fn try_from(r: RangeRepr) -> Result<Self, String> {
        match r {
            RangeRepr::One(v) => format!("{v}").parse(),
            RangeRepr::Text(s) => s.parse(),
        }
    }
}

impl From<Span> for RangeRepr {
    fn from(s: Span) -> Self {
        RangeRepr::Text(s.to_string())
    }
}

/// Every run setting. Fields left out of both the config file and the
/// command line take the defaults below.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub flavor: Option<Flavor>,
    pub family: Option<Family>,
    pub n: Option<Span>,
    pub m: Option<Span>,
    /// Largest |X| for family construction.
    pub construct_bound: Option<usize>,
    /// Largest |X| for the oracle; must not exceed `construct_bound`.
    pub oracle_bound: Option<usize>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub workers: Option<usize>,
    /// Output never depends on scheduling; `false` is rejected.
    pub deterministic: Option<bool>,
}

pub const DEFAULT_CONSTRUCT_BOUND: usize = 192;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let cfg: RunConfig = if is_json {
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        };
        Ok(cfg)
    }

    /// Fields set in `over` win.
    pub fn merged(self, over: RunConfig) -> RunConfig {
        RunConfig {
            command: over.command.or(self.command),
            flavor: over.flavor.or(self.flavor),
            family: over.family.or(self.family),
            n: over.n.or(self.n),
            m: over.m.or(self.m),
            construct_bound: over.construct_bound.or(self.construct_bound),
            oracle_bound: over.oracle_bound.or(self.oracle_bound),
            input: over.input.or(self.input),
            out: over.out.or(self.out),
            csv: over.csv.or(self.csv),
            workers: over.workers.or(self.workers),
            deterministic: over.deterministic.or(self.deterministic),
        }
    }

    pub fn construct_bound(&self) -> usize {
        self.construct_bound.unwrap_or(DEFAULT_CONSTRUCT_BOUND)
    }

    pub fn oracle_bound(&self) -> usize {
        self.oracle_bound
            .unwrap_or(skewprod::oracle::DEFAULT_ORACLE_BOUND)
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.construct_bound() == 0 || self.oracle_bound() == 0 {
            return Err(CliError::Usage("bounds must be positive".into()));
        }
        if self.oracle_bound() > self.construct_bound() {
            return Err(CliError::Usage(format!(
                "oracle bound {} exceeds construct bound {}",
                self.oracle_bound(),
                self.construct_bound()
            )));
        }
        if self.deterministic == Some(false) {
            return Err(CliError::Usage(
                "nondeterministic runs are not supported".into(),
            ));
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("workers must be positive".into()));
        }
        if let (Some(flavor), Some(family)) = (self.flavor, self.family) {
            if family.flavor() != flavor {
                return Err(CliError::Usage(format!(
                    "family {family} does not belong to flavor {flavor}"
                )));
            }
        }
        Ok(())
    }

    pub fn flavors(&self) -> Vec<Flavor> {
        match (self.flavor, self.family) {
            (Some(f), _) => vec![f],
            (None, Some(fam)) => vec![fam.flavor()],
            (None, None) => vec![Flavor::Dihedral, Flavor::Quaternion],
        }
    }

    /// All `(flavor, n, m)` with `n, m ≥ 2` in the configured ranges, in
    /// lexicographic order. Ranges left open are clipped to `|X| ≤ bound`;
    /// explicit ranges are kept whole so oversize requests are reported
    /// rather than dropped.
    pub fn triples(&self, bound: usize) -> Vec<(Flavor, usize, usize)> {
        let mut out = Vec::new();
        for flavor in self.flavors() {
            let n_span = self.n.unwrap_or(Span {
                lo: 2,
                hi: bound / 4 + 1,
            });
            for n in n_span.iter().filter(|&n| n >= 2) {
                let base = flavor.base_order(n);
                let m_span = self.m.unwrap_or(Span {
                    lo: 2,
                    hi: (bound / base).max(2),
                });
                for m in m_span.iter().filter(|&m| m >= 2) {
                    let clipped = self.n.is_none() || self.m.is_none();
                    if clipped && base * m > bound {
                        break;
                    }
                    out.push((flavor, n, m));
                }
            }
        }
        out
    }
}
