//! The ten parametric families of factorizations with core-free `⟨c⟩`:
//! parameter manifests, congruence validation, exhaustive parameter scans
//! and construction by coset enumeration.
//!
//! Every parameter is a residue with a fixed modulus recorded in the
//! manifest. Equalities between a parameter and an expression are tested
//! modulo that parameter's modulus. Clauses of the form `x ≡ p/q (mod k)`
//! are tested as `q·x ≡ p (mod k)`, so no division is ever performed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coset::{conjugation_relator, default_max_cosets, todd_coxeter, Presentation, Word};
use crate::error::{CosetError, GroupError};
use crate::group::{Elem, GroupTable};
use crate::marked::{Flavor, MarkedError, MarkedFactorization, Provenance};
use crate::modarith::{
    gcd, geom_sum, geom_sum0, inv_mod, md, mult_order, pow_mod, vanishes_exactly_at,
};

/// Default cap on the number of candidate tuples in one parameter box.
pub const DEFAULT_BOX_LIMIT: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    D1,
    D2,
    D3,
    D4,
    D5,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Q1,
        Family::Q2,
        Family::Q3,
        Family::Q4,
        Family::Q5,
        Family::D1,
        Family::D2,
        Family::D3,
        Family::D4,
        Family::D5,
    ];

    pub fn flavor(self) -> Flavor {
        match self {
            Family::Q1 | Family::Q2 | Family::Q3 | Family::Q4 | Family::Q5 => Flavor::Quaternion,
            _ => Flavor::Dihedral,
        }
    }

    /// The family number, 1 to 5.
    pub fn number(self) -> u8 {
        match self {
            Family::Q1 | Family::D1 => 1,
            Family::Q2 | Family::D2 => 2,
            Family::Q3 | Family::D3 => 3,
            Family::Q4 | Family::D4 => 4,
            Family::Q5 | Family::D5 => 5,
        }
    }

    pub fn of_flavor(flavor: Flavor) -> impl Iterator<Item = Family> {
        Family::ALL
            .into_iter()
            .filter(move |f| f.flavor() == flavor)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.flavor().letter(), self.number())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

/// One parameter tuple. Serializes as `{family, n, m, params: {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub params: BTreeMap<String, i64>,
}

impl FamilyParams {
    pub fn new(family: Family, n: usize, m: usize, params: &[(&str, i64)]) -> Self {
        FamilyParams {
            family,
            n,
            m,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.params.get(name).copied()
    }

    pub fn expected_order(&self) -> usize {
        self.family.flavor().base_order(self.n) * self.m
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::Family {
            family: self.family.to_string(),
            params: self.params.clone(),
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} m={}", self.family, self.n, self.m)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// The modulus a parameter is reduced by, as a function of `n` and `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulus {
    N,
    TwoN,
    HalfN,
    QuarterN,
    M,
    HalfM,
    ThirdM,
    /// A branch flag taking the listed values.
    Flag(i64, i64),
}

impl Modulus {
    /// The scan range `[lo, hi)` of the parameter.
    pub fn range(self, n: usize, m: usize) -> (i64, i64) {
        let (n, m) = (n as i64, m as i64);
        match self {
            Modulus::N => (0, n),
            Modulus::TwoN => (0, 2 * n),
            Modulus::HalfN => (0, (n / 2).max(1)),
            Modulus::QuarterN => (0, (n / 4).max(1)),
            Modulus::M => (0, m),
            Modulus::HalfM => (0, (m / 2).max(1)),
            Modulus::ThirdM => (0, (m / 3).max(1)),
            Modulus::Flag(a, b) => (a, b + 1),
        }
    }

    /// The modulus used when comparing the parameter to an expression.
    pub fn modulus(self, n: usize, m: usize) -> i64 {
        match self {
            Modulus::Flag(..) => i64::MAX,
            _ => self.range(n, m).1,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::N => f.write_str("n"),
            Modulus::TwoN => f.write_str("2n"),
            Modulus::HalfN => f.write_str("n/2"),
            Modulus::QuarterN => f.write_str("n/4"),
            Modulus::M => f.write_str("m"),
            Modulus::HalfM => f.write_str("m/2"),
            Modulus::ThirdM => f.write_str("m/3"),
            Modulus::Flag(a, b) => write!(f, "{{{a},{b}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub modulus: Modulus,
}

macro_rules! param {
    ($name:literal, $modulus:expr) => {
        ParamSpec {
            name: $name,
            modulus: $modulus,
        }
    };
}

/// Parameters of each family in scan order.
pub fn manifest(family: Family) -> &'static [ParamSpec] {
    use Modulus::*;
    match family {
        Family::Q1 => &[
            param!("r", N),
            param!("s", N),
            param!("t", M),
            param!("u", TwoN),
            param!("v", M),
        ],
        Family::D1 => &[
            param!("r", N),
            param!("s", N),
            param!("t", M),
            param!("u", N),
            param!("v", M),
        ],
        Family::Q2 => &[
            param!("r", N),
            param!("s", N),
            param!("t", HalfM),
            param!("u", N),
            param!("w", HalfM),
        ],
        Family::D2 => &[
            param!("r", HalfN),
            param!("s", HalfN),
            param!("t", HalfM),
            param!("u", HalfN),
            param!("w", HalfM),
        ],
        Family::Q3 => &[
            param!("i", Flag(0, 1)),
            param!("r", N),
            param!("s", N),
            param!("u", N),
            param!("x", TwoN),
        ],
        Family::D3 => &[
            param!("i", Flag(0, 1)),
            param!("l", N),
            param!("r", N),
            param!("u", HalfN),
            param!("x", N),
        ],
        Family::Q4 => &[
            param!("i", Flag(0, 1)),
            param!("j", Flag(1, 2)),
            param!("d", ThirdM),
            param!("r", HalfN),
            param!("s", HalfN),
            param!("u", HalfN),
            param!("x", N),
            param!("z", HalfN),
        ],
        Family::D4 => &[
            param!("i", Flag(0, 1)),
            param!("k", Flag(1, 2)),
            param!("d", ThirdM),
            param!("l", N),
            param!("r", HalfN),
            param!("z", QuarterN),
        ],
        Family::Q5 => &[param!("r", TwoN)],
        Family::D5 => &[param!("r", N)],
    }
}

/// One failed clause of a family's condition block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.clause)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("parameter box has {size} tuples, limit is {limit}")]
    BoxTooLarge { size: u128, limit: u128 },
    #[error("{family} needs {what}")]
    StructuralMismatch { family: Family, what: String },
    #[error("invalid parameters: {}", .0.iter().map(|v| v.clause.as_str()).collect::<Vec<_>>().join("; "))]
    InvalidParams(Vec<Violation>),
    #[error("enumeration closed at order {found}, expected {expected}")]
    Collapse { expected: usize, found: usize },
    #[error("enumeration closed at order {found}, above the expected {expected}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("<c> has a nontrivial core")]
    NotCoreFree,
    #[error(transparent)]
    Marked(#[from] MarkedError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error("map is not an automorphism")]
    NotAutomorphism,
}

/// Collects violated clauses; in fail-fast mode evaluation stops at the
/// first violation.
struct Checker {
    violations: Vec<Violation>,
    fail_fast: bool,
}

impl Checker {
    fn check(&mut self, clause: &str, ok: impl FnOnce() -> bool) {
        if self.fail_fast && !self.violations.is_empty() {
            return;
        }
        if !ok() {
            self.violations.push(Violation {
                clause: clause.to_string(),
            });
        }
    }

    fn done(&self) -> bool {
        self.fail_fast && !self.violations.is_empty()
    }
}

/// Read access to a tuple with `n`, `m` as `i64`.
struct Ctx<'a> {
    p: &'a FamilyParams,
    n: i64,
    m: i64,
}

impl Ctx<'_> {
    fn v(&self, name: &str) -> i64 {
        self.p.params[name]
    }

    /// `x ≡ y` modulo the manifest modulus of parameter `name`.
    fn eq_param(&self, name: &str, y: i64) -> bool {
        let spec = manifest(self.p.family)
            .iter()
            .find(|s| s.name == name)
            .expect("parameter in manifest");
        let k = spec.modulus.modulus(self.p.n, self.p.m);
        if k == i64::MAX {
            self.v(name) == y
        } else {
            md(self.v(name) - y, k) == 0
        }
    }
}

fn even(x: i64) -> bool {
    x.rem_euclid(2) == 0
}

/// Structural divisibility needed to write a family's relators at all.
fn structural(family: Family, n: usize, m: usize) -> Result<(), FamilyError> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(FamilyError::StructuralMismatch {
                family,
                what: what.to_string(),
            })
        }
    };
    need(n >= 2 && m >= 2, "n, m >= 2")?;
    match family.number() {
        1 => Ok(()),
        2 => need(m.is_multiple_of(2), "2 | m"),
        3 => need(m.is_multiple_of(3), "3 | m"),
        4 => {
            need(m.is_multiple_of(3), "3 | m")?;
            if family == Family::D4 {
                need(n.is_multiple_of(4), "4 | n")
            } else {
                Ok(())
            }
        }
        _ => need(m.is_multiple_of(4), "4 | m"),
    }
}

/// Checks every congruence of the family's condition block.
///
/// Returns the violated clauses by name; an empty list means valid.
pub fn validate_params(p: &FamilyParams) -> Vec<Violation> {
    let mut ck = Checker {
        violations: Vec::new(),
        fail_fast: false,
    };
    run_checks(p, &mut ck);
    ck.violations
}

/// Like [`validate_params`] but stops at the first violation.
pub fn is_valid(p: &FamilyParams) -> bool {
    let mut ck = Checker {
        violations: Vec::new(),
        fail_fast: true,
    };
    run_checks(p, &mut ck);
    ck.violations.is_empty()
}

fn run_checks(p: &FamilyParams, ck: &mut Checker) {
    if let Err(e) = structural(p.family, p.n, p.m) {
        ck.check(&e.to_string(), || false);
        return;
    }
    for s in manifest(p.family) {
        let (lo, hi) = s.modulus.range(p.n, p.m);
        match p.params.get(s.name) {
            Some(&v) if (lo..hi).contains(&v) => {}
            Some(_) => ck.check(&format!("{} in [{lo}, {hi})", s.name), || false),
            None => ck.check(&format!("{} present", s.name), || false),
        }
    }
    if p.params.len() != manifest(p.family).len() {
        ck.check("no unknown parameters", || false);
    }
    if ck.done() || !ck.violations.is_empty() {
        return;
    }
    let c = Ctx {
        p,
        n: p.n as i64,
        m: p.m as i64,
    };
    match p.family {
        Family::Q1 => check_q1(&c, ck),
        Family::D1 => check_d1(&c, ck),
        Family::Q2 => check_q2(&c, ck),
        Family::D2 => check_d2(&c, ck),
        Family::Q3 => check_q3(&c, ck),
        Family::D3 => check_d3(&c, ck),
        Family::Q4 => check_q4(&c, ck),
        Family::D4 => check_d4(&c, ck),
        Family::Q5 | Family::D5 => check_5(&c, ck),
    }
}

/// `r^(k-1) ≡ 1`; false when `k = 0`, where the exponent would be negative
/// and `r` need not be invertible.
fn pow_pred_is_one(r: i64, k: i64, modulus: i64) -> bool {
    k >= 1 && pow_mod(r, (k - 1) as u64, modulus) == md(1, modulus)
}

fn check_q1(c: &Ctx, ck: &mut Checker) {
    let (n, m, nn) = (c.n, c.m, 2 * c.n);
    let (r, s, t, u, v) = (c.v("r"), c.v("s"), c.v("t"), c.v("u"), c.v("v"));
    let sum = |k: i64| geom_sum(r, k as u64, nn);
    ck.check("t^2 ≡ 1 (mod m)", || md(t * t - 1, m) == 0);
    ck.check("r^(t-1) ≡ 1 (mod n)", || pow_pred_is_one(r, t, n));
    ck.check("r^(v-1) ≡ 1 (mod n)", || pow_pred_is_one(r, v, n));
    ck.check("t ≠ 1 ⇒ 2 | u", || t == 1 || even(u));
    // Not in the condition block, but every tuple violating it collapses.
    ck.check("2 ∤ u ⇒ v = 1", || even(u) || v == 1);
    ck.check("2sΣ_{1..t}r^l + 2sr ≡ 2(1-r) (mod 2n)", || {
        md(2 * s * sum(t) + 2 * s * r - 2 * (1 - r), nn) == 0
    });
    ck.check(
        "2sr + 2sΣ_{1..v}r^l - uΣ_{1..t}r^l + ur ≡ 2(1-r) (mod 2n)",
        || {
            md(
                2 * s * r + 2 * s * sum(v) - u * sum(t) + u * r - 2 * (1 - r),
                nn,
            ) == 0
        },
    );
    if n % 2 == 0 {
        ck.check("2 | n ⇒ u(Σ_{0..v-1}r^l - 1) ≡ 0 (mod 2n)", || {
            md(u * (geom_sum0(r, v as u64, nn) - 1), nn) == 0
        });
        ck.check("2 | n ⇒ v^2 ≡ 1 (mod m)", || md(v * v - 1, m) == 0);
    } else {
        ck.check(
            "2 ∤ n ⇒ uΣ_{1..v}r^l - ur ≡ 2sr + (n-1)(1-r) (mod 2n)",
            || md(u * sum(v) - u * r - 2 * s * r - (n - 1) * (1 - r), nn) == 0,
        );
        ck.check("2 ∤ n ⇒ v^2 ≡ t (mod m)", || md(v * v - t, m) == 0);
    }
    ck.check(
        "core-free: 2sΣr^l ≡ uΣq^l ≡ 0 (mod 2n) ⇔ w ≡ 0 (mod m)",
        || {
            let q = md(1 - s * (sum(t) + r), nn);
            vanishes_exactly_at(m as u64, |w| {
                md(2 * s * geom_sum(r, w, nn), nn) == 0 && md(u * geom_sum(q, w, nn), nn) == 0
            })
        },
    );
}

fn check_d1(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let (r, s, t, u, v) = (c.v("r"), c.v("s"), c.v("t"), c.v("u"), c.v("v"));
    let sum = |k: i64| geom_sum(r, k as u64, n);
    ck.check("t^2 ≡ 1 (mod m)", || md(t * t - 1, m) == 0);
    ck.check("v^2 ≡ 1 (mod m)", || md(v * v - 1, m) == 0);
    ck.check("2(r^(t-1) - 1) ≡ 0 (mod n)", || {
        t >= 1 && md(2 * (pow_mod(r, (t - 1) as u64, n) - 1), n) == 0
    });
    ck.check("2(r^(v-1) - 1) ≡ 0 (mod n)", || {
        v >= 1 && md(2 * (pow_mod(r, (v - 1) as u64, n) - 1), n) == 0
    });
    ck.check("u(Σ_{0..v-1}r^l - 1) ≡ 0 (mod n)", || {
        md(u * (geom_sum0(r, v as u64, n) - 1), n) == 0
    });
    ck.check("t ≠ 1 ⇒ 2 | u", || t == 1 || even(u));
    // Not in the condition block, but every tuple violating it collapses.
    ck.check("2 ∤ u ⇒ v = 1", || even(u) || v == 1);
    // For odd n, <a> = <a^2> is normal, and c^a = a^{2s}c^t forces c^t = c
    // modulo <a>.
    ck.check("2 ∤ n ⇒ t = 1", || n % 2 == 0 || t == 1);
    ck.check("2sΣ_{1..t}r^l + 2sr ≡ 2(1-r) (mod n)", || {
        md(2 * s * sum(t) + 2 * s * r - 2 * (1 - r), n) == 0
    });
    ck.check(
        "2sr + 2sΣ_{1..v}r^l - uΣ_{1..t}r^l + ur ≡ 2(1-r) (mod n)",
        || {
            md(
                2 * s * r + 2 * s * sum(v) - u * sum(t) + u * r - 2 * (1 - r),
                n,
            ) == 0
        },
    );
    ck.check(
        "core-free: 2sΣr^l ≡ uΣq^l ≡ 0 (mod n) ⇔ w ≡ 0 (mod m)",
        || {
            let q = md(1 - s * (sum(t) + r), n);
            vanishes_exactly_at(m as u64, |w| {
                md(2 * s * geom_sum(r, w, n), n) == 0 && md(u * geom_sum(q, w, n), n) == 0
            })
        },
    );
}

fn check_q2(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let h = m / 2;
    let (r, s, t, u, w) = (c.v("r"), c.v("s"), c.v("t"), c.v("u"), c.v("w"));
    ck.check("2 | n", || n % 2 == 0);
    if ck.done() {
        return;
    }
    if w == 0 {
        // G ≅ Q_8 on this branch, so n = 2. For m = 4 this is the listed
        // branch r = s = t = u = 1; for m = 2 the relation (c^2)^a = a^{2s}
        // forces s ≡ u ≡ 0 instead.
        ck.check("w = 0 ⇒ n = 2", || n == 2);
        ck.check("w = 0 ⇒ m ∈ {2, 4}", || m == 2 || m == 4);
        ck.check("w = 0 ⇒ r = t = 1", || {
            c.eq_param("r", 1) && c.eq_param("t", 1)
        });
        if m == 2 {
            ck.check("w = 0, m = 2 ⇒ s = u = 0", || s == 0 && u == 0);
        } else {
            ck.check("w = 0 ⇒ s = u = 1", || s == 1 && u == 1);
        }
        return;
    }
    let sum = |k: i64| geom_sum(r, k as u64, n);
    ck.check("t = 2wu + 1", || c.eq_param("t", 2 * w * u + 1));
    ck.check("s = u^2Σ_{0..w-1}r^l + un/2", || {
        c.eq_param("s", u * u * geom_sum0(r, w as u64, n) + u * n / 2)
    });
    ck.check("2w(1+uw) ≡ 0 (mod m/2)", || {
        md(2 * w * (1 + u * w), h) == 0
    });
    ck.check("nw ≡ 0 (mod m/2)", || md(n * w, h) == 0);
    ck.check("2w(r-1) ≡ 0 (mod m/2)", || md(2 * w * (r - 1), h) == 0);
    ck.check("r^(2w) ≡ 1 (mod n)", || {
        pow_mod(r, (2 * w) as u64, n) == md(1, n)
    });
    ck.check("(uΣ_{1..w}r^l + n/2)^2 ≡ r (mod n)", || {
        let y = md(u * sum(w) + n / 2, n);
        md(y * y - r, n) == 0
    });
    ck.check("sΣ_{1..t}r^l + sr ≡ 1-r (mod n)", || {
        md(s * sum(t) + s * r - (1 - r), n) == 0
    });
    ck.check("2sr - uΣ_{1..t}r^l + ur ≡ 1-r (mod n)", || {
        md(2 * s * r - u * sum(t) + u * r - (1 - r), n) == 0
    });
    ck.check(
        "2^((1+(-1)^u)/2)Σ_{1..i}r^l ≡ 0 (mod n) ⇔ i ≡ 0 (mod m/2)",
        || {
            let f = if even(u) { 2 } else { 1 };
            vanishes_exactly_at(h as u64, |i| md(f * geom_sum(r, i, n), n) == 0)
        },
    );
}

fn check_d2(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let (hn, hm) = (n / 2, m / 2);
    let (r, s, u, w) = (c.v("r"), c.v("s"), c.v("u"), c.v("w"));
    ck.check("2 | n", || n % 2 == 0);
    if ck.done() {
        return;
    }
    if w == 0 {
        // o(a) = o(b) = 2 on this branch, so X ≅ D_8.
        ck.check("w = 0 ⇒ n = m = 2", || n == 2 && m == 2);
        ck.check("w = 0 ⇒ s = u = 0", || s == 0 && u == 0);
        ck.check("w = 0 ⇒ r = t = 1", || {
            c.eq_param("r", 1) && c.eq_param("t", 1)
        });
        return;
    }
    let sum = |k: i64| geom_sum(r, k as u64, hn);
    ck.check("s = u^2Σ_{0..w-1}r^l", || {
        c.eq_param("s", u * u * geom_sum0(r, w as u64, hn))
    });
    ck.check("t = 1 + 2wu", || c.eq_param("t", 1 + 2 * w * u));
    ck.check("nw ≡ 0 (mod m/2)", || md(n * w, hm) == 0);
    ck.check("2w(r-1) ≡ 0 (mod m/2)", || md(2 * w * (r - 1), hm) == 0);
    ck.check("2w(1+uw) ≡ 0 (mod m/2)", || {
        md(2 * w * (1 + u * w), hm) == 0
    });
    ck.check("r^(2w) ≡ 1 (mod n/2)", || {
        pow_mod(r, (2 * w) as u64, hn) == md(1, hn)
    });
    ck.check("(uΣ_{1..w}r^l)^2 ≡ r (mod n/2)", || {
        let y = md(u * sum(w), hn);
        md(y * y - r, hn) == 0
    });
    // o(b^c) = 2, in the unsimplified form: the factored version
    // (r^w + 1)(1 + sΣ_{0..w-1}r^l) ≡ 0 rejects groups that exist.
    ck.check("sr^(w+1) + sΣ_{1..w+t-1}r^l + sr ≡ 1 (mod n/2)", || {
        let t = c.v("t");
        md(
            s * pow_mod(r, (w + 1) as u64, hn) + s * sum(w + t - 1) + s * r - 1,
            hn,
        ) == 0
    });
    ck.check("Σ_{1..i}r^l ≡ 0 (mod n/2) ⇔ i ≡ 0 (mod m/2)", || {
        vanishes_exactly_at(hm as u64, |i| geom_sum(r, i, hn) == 0)
    });
}

fn check_q3(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let hn = n / 2;
    let (i, r, s, u, x) = (c.v("i"), c.v("r"), c.v("s"), c.v("u"), c.v("x"));
    ck.check("n ≡ 2 (mod 4)", || n % 4 == 2);
    if ck.done() {
        return;
    }
    if i == 0 {
        // a^c = b forces G ≅ Q_8, and then c^3 = 1.
        ck.check("i = 0 ⇒ n = 2, m = 3", || n == 2 && m == 3);
        ck.check("i = 0 ⇒ s = u = 0", || s == 0 && u == 0);
        ck.check("i = 0 ⇒ r = x = 1", || c.eq_param("r", 1) && x == 1);
        return;
    }
    ck.check("i = 1 ⇒ 6 | m", || m % 6 == 0);
    ck.check("r^(m/2) ≡ -1 (mod n)", || {
        pow_mod(r, (m / 2) as u64, n) == md(-1, n)
    });
    ck.check("o(r) = m", || mult_order(r, n) == Some(m as u64));
    if ck.done() {
        return;
    }
    let Some(ri) = inv_mod(r, n) else {
        ck.check("r invertible (mod n)", || false);
        return;
    };
    ck.check("2s ≡ r^-3 - 1 (mod n)", || {
        md(2 * s - (pow_mod(ri, 3, n) - 1), n) == 0 && hn > 0
    });
    ck.check("2r^2u ≡ r^3 - 1 (mod n)", || {
        md(2 * r * r * u - (pow_mod(r, 3, n) - 1), n) == 0
    });
    ck.check("x ≡ -r + r^2 + n/2 (mod n)", || {
        md(x - (-r + r * r + hn), n) == 0
    });
}

fn check_d3(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let hn = n / 2;
    let (i, l, r, u, x) = (c.v("i"), c.v("l"), c.v("r"), c.v("u"), c.v("x"));
    ck.check("n ≡ 2 (mod 4)", || n % 4 == 2);
    if ck.done() {
        return;
    }
    if i == 0 {
        // a^c = b forces o(a) = 2, and then X ≅ A_4.
        ck.check("i = 0 ⇒ n = 2, m = 3", || n == 2 && m == 3);
        ck.check("i = 0 ⇒ u = 0", || u == 0);
        ck.check("i = 0 ⇒ r = x = l = 1", || {
            c.eq_param("r", 1) && c.eq_param("x", 1) && c.eq_param("l", 1)
        });
        return;
    }
    ck.check("i = 1 ⇒ 6 | m", || m % 6 == 0);
    ck.check("l invertible (mod n)", || gcd(l, n) == 1);
    ck.check("l^(m/2) ≡ -1 (mod n/2)", || {
        pow_mod(l, (m / 2) as u64, hn) == md(-1, hn)
    });
    ck.check("r = l^3", || c.eq_param("r", pow_mod(l, 3, n)));
    ck.check("Σ_{1..j}r^l ≡ 0 (mod n/2) ⇔ j ≡ 0 (mod m/3)", || {
        vanishes_exactly_at((m / 3) as u64, |j| geom_sum(r, j, hn) == 0)
    });
    ck.check("2l^2u ≡ l^3 - 1 (mod n)", || {
        md(2 * l * l * u - (pow_mod(l, 3, n) - 1), n) == 0
    });
    ck.check("x ≡ -l + l^2 + n/2 (mod n)", || {
        md(x - (-l + l * l + hn), n) == 0
    });
}

/// `1 + 3d ≡ j·m/3 (mod m)`: the exponent `1 + jm/3` of the statement
/// equals the exponent `2 + 3d` used in the construction.
fn affine_jd(j: i64, d: i64, m: i64) -> bool {
    md(1 + 3 * d - j * (m / 3), m) == 0
}

fn check_q4(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let (hn, qn) = (n / 2, n / 4);
    let (i, j, d) = (c.v("i"), c.v("j"), c.v("d"));
    let (r, s, u, x, z) = (c.v("r"), c.v("s"), c.v("u"), c.v("x"), c.v("z"));
    ck.check("1 + 3d ≡ jm/3 (mod m)", || affine_jd(j, d, m));
    if i == 0 {
        // o(a^2) = o(b) = 4 forces G ≅ Q_16. Besides c^3 = 1 there is one
        // core-free extension with o(c) = 6, where c^a = a^6 c^5.
        ck.check("i = 0 ⇒ n = 4, m ∈ {3, 6}", || {
            n == 4 && (m == 3 || m == 6)
        });
        ck.check("i = 0 ⇒ r = 1, x = 3, s = u = 0", || {
            c.eq_param("r", 1) && x == 3 && s == 0 && u == 0
        });
        ck.check("i = 0 ⇒ j = m/3, z = j - 1", || j == m / 3 && z == j - 1);
        return;
    }
    ck.check("n ≡ 4 (mod 8)", || n % 8 == 4);
    ck.check("6 | m", || m % 6 == 0);
    ck.check("r^(m/2) ≡ -1 (mod n/2)", || {
        pow_mod(r, (m / 2) as u64, hn) == md(-1, hn)
    });
    ck.check("o(r) = m", || mult_order(r, hn) == Some(m as u64));
    if ck.done() {
        return;
    }
    let Some(ri) = inv_mod(r, hn) else {
        ck.check("r invertible (mod n/2)", || false);
        return;
    };
    ck.check("2s ≡ r^-3 - 1 (mod n/4)", || {
        md(2 * s - (pow_mod(ri, 3, qn.max(1)) - 1), qn.max(1)) == 0
    });
    ck.check("2r^2u ≡ r^3 - 1 (mod n/4)", || {
        md(2 * r * r * u - (pow_mod(r, 3, qn.max(1)) - 1), qn.max(1)) == 0
    });
    ck.check("x ≡ -r + r^2 + n/4 (mod n/2)", || {
        md(x - (-r + r * r + qn), hn) == 0
    });
    ck.check("2r(1 + 2z) ≡ 1 - r (mod n/2)", || {
        md(2 * r * (1 + 2 * z) - (1 - r), hn) == 0
    });
}

fn check_d4(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let (hn, qn) = (n / 2, n / 4);
    let (i, k, d) = (c.v("i"), c.v("k"), c.v("d"));
    let (l, r, z) = (c.v("l"), c.v("r"), c.v("z"));
    ck.check("1 + 3d ≡ km/3 (mod m)", || affine_jd(k, d, m));
    ck.check("l invertible (mod n)", || gcd(l, n) == 1);
    ck.check("r = l^3", || c.eq_param("r", pow_mod(l, 3, n)));
    if i == 0 {
        // o(a^2) = o(b) = 2 forces X ≅ S_4.
        ck.check("i = 0 ⇒ n = 4, m = 3", || n == 4 && m == 3);
        ck.check("i = 0 ⇒ z = d = 0", || z == 0 && d == 0);
        ck.check("i = 0 ⇒ k = l = 1", || k == 1 && l == 1);
        return;
    }
    ck.check("n ≡ 4 (mod 8)", || n % 8 == 4);
    ck.check("6 | m", || m % 6 == 0);
    ck.check("l^(m/2) ≡ -1 (mod n/4)", || {
        pow_mod(l, (m / 2) as u64, qn) == md(-1, qn)
    });
    ck.check("o(l) = m", || mult_order(l, n) == Some(m as u64));
    ck.check("4lz ≡ 1 - 3l (mod n/4)", || {
        md(4 * l * z - (1 - 3 * l), qn) == 0
    });
    ck.check("Σ_{1..j}r^i ≡ 0 (mod n/2) ⇔ j ≡ 0 (mod m/3)", || {
        vanishes_exactly_at((m / 3) as u64, |j| geom_sum(r, j, hn) == 0)
    });
}

fn check_5(c: &Ctx, ck: &mut Checker) {
    let (n, m) = (c.n, c.m);
    let r = c.v("r");
    let modulus = match c.p.family.flavor() {
        Flavor::Quaternion => 2 * n,
        Flavor::Dihedral => n,
    };
    ck.check("m ≡ 4 (mod 8)", || m % 8 == 4);
    ck.check("3 | n", || n % 3 == 0);
    ck.check("o(r) = m/4", || {
        mult_order(r, modulus) == Some((m / 4) as u64)
    });
}

/// Size of the residue box of a family at `(n, m)`.
pub fn box_size(family: Family, n: usize, m: usize) -> u128 {
    manifest(family)
        .iter()
        .map(|s| {
            let (lo, hi) = s.modulus.range(n, m);
            (hi - lo).max(0) as u128
        })
        .product()
}

/// All valid tuples of a family at `(n, m)`, in lexicographic order of the
/// manifest's parameter list.
pub fn enumerate_params(
    family: Family,
    n: usize,
    m: usize,
    box_limit: u128,
) -> Result<Vec<FamilyParams>, FamilyError> {
    if structural(family, n, m).is_err() {
        return Ok(Vec::new());
    }
    let size = box_size(family, n, m);
    if size > box_limit {
        return Err(FamilyError::BoxTooLarge {
            size,
            limit: box_limit,
        });
    }
    let specs = manifest(family);
    let ranges: Vec<(i64, i64)> = specs.iter().map(|s| s.modulus.range(n, m)).collect();
    let mut values: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut out = Vec::new();
    let mut p = FamilyParams {
        family,
        n,
        m,
        params: BTreeMap::new(),
    };
    loop {
        for (s, &v) in specs.iter().zip(&values) {
            p.params.insert(s.name.to_string(), v);
        }
        if is_valid(&p) {
            out.push(p.clone());
        }
        // Odometer increment, last parameter fastest.
        let mut k = specs.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            values[k] += 1;
            if values[k] < ranges[k].1 {
                break;
            }
            values[k] = ranges[k].0;
        }
    }
}

/// The base relators: `a^{2n} = 1, b^2 = a^n, a^b = a^{-1}` for the
/// quaternion flavor and `a^n = b^2 = 1, a^b = a^{-1}` for the dihedral one.
pub fn base_presentation(flavor: Flavor, n: usize) -> Presentation {
    let n = n as i64;
    let (a, b) = (Word::gen(0), Word::gen(1));
    let mut rels = Vec::new();
    match flavor {
        Flavor::Quaternion => {
            rels.push(a.pow(2 * n));
            rels.push(b.pow(2).mul(&a.pow(-n)));
        }
        Flavor::Dihedral => {
            rels.push(a.pow(n));
            rels.push(b.pow(2));
        }
    }
    rels.push(conjugation_relator(&a, &b, &a.inverse()));
    Presentation::new(vec!["a".into(), "b".into()], rels).expect("valid base presentation")
}

fn aw(e: i64) -> Word {
    Word::gen_pow(0, e)
}

fn bw() -> Word {
    Word::gen(1)
}

fn cw(e: i64) -> Word {
    Word::gen_pow(2, e)
}

/// `x^y = rhs`.
fn conj_rel(x: Word, y: Word, rhs: Word) -> Word {
    conjugation_relator(&x, &y, &rhs)
}

/// The family's presentation on `a, b, c`: base relators, `c^m = 1` and the
/// family's conjugation relators.
pub fn family_presentation(p: &FamilyParams) -> Result<Presentation, FamilyError> {
    structural(p.family, p.n, p.m)?;
    for s in manifest(p.family) {
        if !p.params.contains_key(s.name) {
            return Err(FamilyError::InvalidParams(vec![Violation {
                clause: format!("{} present", s.name),
            }]));
        }
    }
    let flavor = p.family.flavor();
    let (n, m) = (p.n as i64, p.m as i64);
    let v = |k: &str| p.params[k];
    let base = base_presentation(flavor, p.n);
    let mut rels = base.relators;
    rels.push(cw(m));
    let (a, b) = (aw(1), bw());
    match p.family {
        Family::Q1 | Family::D1 => {
            rels.push(conj_rel(aw(2), cw(1), aw(2 * v("r"))));
            rels.push(conj_rel(cw(1), a, aw(2 * v("s")).mul(&cw(v("t")))));
            rels.push(conj_rel(cw(1), b, aw(v("u")).mul(&cw(v("v")))));
        }
        Family::Q2 | Family::D2 => {
            rels.push(conj_rel(aw(2), cw(2), aw(2 * v("r"))));
            rels.push(conj_rel(
                cw(2),
                a.clone(),
                aw(2 * v("s")).mul(&cw(2 * v("t"))),
            ));
            rels.push(conj_rel(cw(2), b.clone(), aw(2 * v("u")).mul(&cw(2))));
            rels.push(conj_rel(a, cw(1), b.mul(&cw(2 * v("w")))));
        }
        Family::Q3 => {
            let i = v("i");
            if i == 1 && m % 2 != 0 {
                return Err(FamilyError::StructuralMismatch {
                    family: p.family,
                    what: "2 | m when i = 1".into(),
                });
            }
            rels.push(conj_rel(aw(2), cw(1), aw(2 * v("r"))));
            rels.push(conj_rel(cw(3), a.clone(), aw(2 * v("s")).mul(&cw(3))));
            rels.push(conj_rel(cw(3), b.clone(), aw(2 * v("u")).mul(&cw(3))));
            rels.push(conj_rel(a, cw(1), b.mul(&cw(i * m / 2))));
            rels.push(conj_rel(bw(), cw(1), aw(v("x")).mul(&bw())));
        }
        Family::D3 => {
            let i = v("i");
            if i == 1 && m % 2 != 0 {
                return Err(FamilyError::StructuralMismatch {
                    family: p.family,
                    what: "2 | m when i = 1".into(),
                });
            }
            rels.push(conj_rel(a.clone(), cw(3), aw(v("r"))));
            rels.push(conj_rel(cw(3), b.clone(), aw(2 * v("u")).mul(&cw(3))));
            rels.push(conj_rel(a, cw(1), b.mul(&cw(i * m / 2))));
            rels.push(conj_rel(bw(), cw(1), aw(v("x")).mul(&bw())));
        }
        Family::Q4 => {
            // a_1 = a^2, c_1 = c^3.
            let i = v("i");
            if i == 1 && m % 2 != 0 {
                return Err(FamilyError::StructuralMismatch {
                    family: p.family,
                    what: "2 | m when i = 1".into(),
                });
            }
            rels.push(conj_rel(aw(4), cw(1), aw(4 * v("r"))));
            rels.push(conj_rel(cw(3), aw(2), aw(4 * v("s")).mul(&cw(3))));
            rels.push(conj_rel(cw(3), b.clone(), aw(4 * v("u")).mul(&cw(3))));
            rels.push(conj_rel(aw(2), cw(1), b.mul(&cw(i * m / 2))));
            rels.push(conj_rel(bw(), cw(1), aw(2 * v("x")).mul(&bw())));
            let ce = 1 + v("j") * m / 3;
            rels.push(conj_rel(cw(1), a, aw(2 * (1 + 2 * v("z"))).mul(&cw(ce))));
        }
        Family::D4 => {
            let i = v("i");
            if i == 1 && m % 2 != 0 {
                return Err(FamilyError::StructuralMismatch {
                    family: p.family,
                    what: "2 | m when i = 1".into(),
                });
            }
            let l = v("l");
            let Some(li) = inv_mod(l, n) else {
                return Err(FamilyError::InvalidParams(vec![Violation {
                    clause: "l invertible (mod n)".into(),
                }]));
            };
            let e_cb = md(2 * (pow_mod(l, 3, n) - 1) * li * li, n);
            let e_bc = md(2 * (-l + l * l + n / 4), n);
            rels.push(conj_rel(aw(2), cw(3), aw(2 * v("r"))));
            rels.push(conj_rel(cw(3), b.clone(), aw(e_cb).mul(&cw(3))));
            rels.push(conj_rel(aw(2), cw(1), b.mul(&cw(i * m / 2))));
            rels.push(conj_rel(bw(), cw(1), aw(e_bc).mul(&bw())));
            let ce = 1 + v("k") * m / 3;
            rels.push(conj_rel(cw(1), a, aw(2 + 4 * v("z")).mul(&cw(ce))));
        }
        Family::Q5 | Family::D5 => {
            let r = v("r");
            let q = m / 4;
            rels.push(conj_rel(a.clone(), cw(4), aw(r)));
            rels.push(conj_rel(b.clone(), cw(4), aw(1 - r).mul(&b)));
            rels.push(conj_rel(aw(3), cw(q), aw(-3)));
            rels.push(conj_rel(a, cw(q), b.mul(&cw(3 * q))));
        }
    }
    Ok(
        Presentation::new(vec!["a".into(), "b".into(), "c".into()], rels)
            .expect("family relators use a, b, c only"),
    )
}

/// Builds the group of a valid tuple by coset enumeration over the trivial
/// subgroup and checks every invariant of the result.
///
/// `max_cosets = None` uses a bound of eight times the expected order.
pub fn build_group(
    p: &FamilyParams,
    max_cosets: Option<usize>,
) -> Result<MarkedFactorization, FamilyError> {
    let violations = validate_params(p);
    if !violations.is_empty() {
        return Err(FamilyError::InvalidParams(violations));
    }
    let xf = build_presented(p, max_cosets)?;
    if !xf.is_core_free() {
        return Err(FamilyError::NotCoreFree);
    }
    Ok(xf)
}

/// Enumerates the presentation of any tuple, valid or not, and checks only
/// the order and the factorization. Used for direct products and to probe
/// tuples outside the condition blocks.
pub fn build_presented(
    p: &FamilyParams,
    max_cosets: Option<usize>,
) -> Result<MarkedFactorization, FamilyError> {
    let expected = p.expected_order();
    let pres = family_presentation(p)?;
    let cap = max_cosets.unwrap_or_else(|| default_max_cosets(Some(expected)));
    let en = todd_coxeter(&pres, cap)?;
    let found = en.table.order();
    if found < expected {
        return Err(FamilyError::Collapse { expected, found });
    }
    if found > expected {
        return Err(FamilyError::OrderMismatch { expected, found });
    }
    let xf = MarkedFactorization {
        table: en.table,
        a: en.generators[0],
        b: en.generators[1],
        c: en.generators[2],
        n: p.n,
        m: p.m,
        flavor: p.family.flavor(),
        provenance: p.provenance(),
    };
    xf.validate()?;
    Ok(xf)
}

/// Tests whether `⟨N, t⟩` with `t^l = g` and `x^t = τ(x)` is a valid cyclic
/// extension of `N`: `τ^l` must be conjugation by `g` and `τ(g) = g`.
///
/// `tau` lists the image of every element of `n_group`.
pub fn cyclic_extension_check(
    n_group: &GroupTable,
    tau: &[Elem],
    l: usize,
    g: Elem,
) -> Result<bool, FamilyError> {
    let order = n_group.order();
    if tau.len() != order || g >= order {
        return Err(FamilyError::NotAutomorphism);
    }
    let mut seen = vec![false; order];
    for &y in tau {
        if y >= order || seen[y] {
            return Err(FamilyError::NotAutomorphism);
        }
        seen[y] = true;
    }
    let hom = n_group.elements().all(|x| {
        n_group
            .elements()
            .all(|y| tau[n_group.mul(x, y)] == n_group.mul(tau[x], tau[y]))
    });
    if !hom {
        return Err(FamilyError::NotAutomorphism);
    }
    let power_is_inner = n_group.elements().all(|x| {
        let mut y = x;
        for _ in 0..l {
            y = tau[y];
        }
        y == n_group.conj(x, g)
    });
    Ok(power_is_inner && tau[g] == g)
}

impl From<GroupError> for FamilyError {
    fn from(e: GroupError) -> Self {
        FamilyError::Coset(CosetError::Group(e))
    }
}
