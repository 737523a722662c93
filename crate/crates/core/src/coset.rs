//! Words, presentations and Todd–Coxeter enumeration over the trivial subgroup.
//!
//! Relator text grammar:
//!
//! ```text
//! relator := expr ('=' expr)?
//! expr    := term ('*'? term)*
//! term    := atom ('^' (int | atom))*        x^y is y⁻¹xy, left associative
//! atom    := ident | '1' | '(' expr ')' | '[' expr ',' expr ']'
//! ident   := letter (digit | '_')*
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CosetError;
use crate::group::{Elem, GroupTable};

/// Freely reduced word: `(generator, exponent)` pairs, exponents nonzero,
/// adjacent generators distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![(g, 1)])
    }

    pub fn gen_pow(g: usize, e: i64) -> Self {
        Word::from_syllables([(g, e)])
    }

    /// Reduces an arbitrary syllable sequence.
    pub fn from_syllables(syl: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in syl {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_syllables(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `y⁻¹·self·y`.
    pub fn conj(&self, y: &Word) -> Word {
        y.inverse().mul(self).mul(y)
    }

    /// Letters as signed generator columns: `g` → `2g`, `g⁻¹` → `2g+1`.
    fn letters(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &(g, e) in &self.0 {
            let col = if e > 0 { 2 * g } else { 2 * g + 1 };
            out.extend(std::iter::repeat_n(col, e.unsigned_abs() as usize));
        }
        out
    }

    pub fn letter_len(&self) -> usize {
        self.0.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    /// Evaluates the word in a group given generator images.
    pub fn eval(&self, g: &GroupTable, images: &[Elem]) -> Elem {
        self.0
            .iter()
            .fold(g.identity(), |acc, &(x, e)| g.mul(acc, g.pow(images[x], e)))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (k, &(g, e)) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[g])?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// `y⁻¹·x·y·rhs⁻¹`, the relator form of `x^y = rhs`.
pub fn conjugation_relator(x: &Word, y: &Word, rhs: &Word) -> Word {
    x.conj(y).mul(&rhs.inverse())
}

/// Generators and relators; each relator equals the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = CosetError;

    fn try_from(raw: RawPresentation) -> Result<Self, CosetError> {
        let relators = raw
            .relators
            .iter()
            .map(|r| parse_word(r, &raw.generators))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(raw.generators, relators)
    }
}

impl From<Presentation> for RawPresentation {
    fn from(p: Presentation) -> Self {
        RawPresentation {
            relators: p
                .relators
                .iter()
                .map(|w| w.display(&p.generators).to_string())
                .collect(),
            generators: p.generators,
        }
    }
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, CosetError> {
        if generators.is_empty() {
            return Err(CosetError::InvalidPresentation("no generators".into()));
        }
        for (i, name) in generators.iter().enumerate() {
            if !is_ident(name) {
                return Err(CosetError::InvalidPresentation(format!(
                    "bad generator name {name:?}"
                )));
            }
            if generators[..i].contains(name) {
                return Err(CosetError::InvalidPresentation(format!(
                    "duplicate generator {name:?}"
                )));
            }
        }
        for r in &relators {
            if let Some(&(g, _)) = r.0.iter().find(|&&(g, _)| g >= generators.len()) {
                return Err(CosetError::InvalidPresentation(format!(
                    "relator uses generator index {g}"
                )));
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Parses relator strings against the given generator names.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, CosetError> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let words = relators
            .iter()
            .map(|r| parse_word(r, &names))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(names, words)
    }

    pub fn from_json(s: &str) -> Result<Self, CosetError> {
        serde_json::from_str(s).map_err(|e| CosetError::InvalidPresentation(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_digit() || c == '_')
}

/// Parses one relator; errors carry the byte offset of the problem.
pub fn parse_word(src: &str, names: &[String]) -> Result<Word, CosetError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        names,
    };
    let lhs = p.expr()?;
    p.skip_ws();
    let w = if p.eat(b'=') {
        let rhs = p.expr()?;
        lhs.mul(&rhs.inverse())
    } else {
        lhs
    };
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> CosetError {
        CosetError::Parse {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn starts_atom(c: u8) -> bool {
        c.is_ascii_alphabetic() || c == b'(' || c == b'[' || c == b'1'
    }

    fn expr(&mut self) -> Result<Word, CosetError> {
        let mut w = self.term()?;
        loop {
            // `*` is optional between factors.
            if self.eat(b'*') || matches!(self.peek(), Some(c) if Self::starts_atom(c)) {
                w = w.mul(&self.term()?);
            } else {
                return Ok(w);
            }
        }
    }

    fn term(&mut self) -> Result<Word, CosetError> {
        let mut w = self.atom()?;
        while self.eat(b'^') {
            match self.peek() {
                Some(c) if c == b'-' || c.is_ascii_digit() => {
                    let k = self.int()?;
                    w = w.pow(k);
                }
                Some(c) if Self::starts_atom(c) => {
                    let y = self.atom()?;
                    w = w.conj(&y);
                }
                _ => return Err(self.error("expected exponent or conjugating word")),
            }
        }
        Ok(w)
    }

    fn int(&mut self) -> Result<i64, CosetError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(CosetError::Parse {
                offset: start,
                msg: "bad integer".into(),
            })
    }

    fn atom(&mut self) -> Result<Word, CosetError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                if !self.eat(b',') {
                    return Err(self.error("expected ','"));
                }
                let y = self.expr()?;
                if !self.eat(b']') {
                    return Err(self.error("expected ']'"));
                }
                Ok(x.inverse().mul(&y.inverse()).mul(&x).mul(&y))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|n| n == name) {
                    Some(g) => Ok(Word::gen(g)),
                    None => Err(CosetError::Parse {
                        offset: start,
                        msg: format!("unknown generator {name:?}"),
                    }),
                }
            }
            Some(_) => Err(self.error("expected generator, '1', '(' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Coset enumeration strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Relator scanning with fill, lookahead when the table is full.
    #[default]
    Hlt,
    /// Fill the first undefined entry, then process deductions.
    Felsch,
}

/// Result of a completed enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Regular representation; elements are cosets relabelled by BFS.
    pub table: GroupTable,
    /// Element representing each generator.
    pub generators: Vec<Elem>,
    /// Shortest word for each element, in the BFS order.
    pub words: Vec<Word>,
    /// Largest number of coset rows allocated at once.
    pub peak_cosets: usize,
}

/// Default coset limit: 8× the expected order, or 10^5 when unknown.
pub fn default_max_cosets(expected_order: Option<usize>) -> usize {
    expected_order.map_or(100_000, |n| 8 * n)
}

pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> Result<Enumeration, CosetError> {
    todd_coxeter_with(p, max_cosets, Strategy::Hlt)
}

pub fn todd_coxeter_with(
    p: &Presentation,
    max_cosets: usize,
    strategy: Strategy,
) -> Result<Enumeration, CosetError> {
    if max_cosets == 0 {
        return Err(CosetError::InvalidPresentation(
            "max_cosets must be positive".into(),
        ));
    }
    let rels: Vec<Vec<usize>> = p
        .relators
        .iter()
        .map(Word::letters)
        .filter(|r| !r.is_empty())
        .collect();
    let mut e = Enumerator::new(2 * p.ngens(), max_cosets);
    match strategy {
        Strategy::Hlt => e.run_hlt(&rels)?,
        Strategy::Felsch => e.run_felsch(&rels)?,
    }
    e.finish(p, &rels)
}

const NONE: u32 = u32::MAX;

struct Full;

struct Enumerator {
    ncols: usize,
    max: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    deductions: Vec<(u32, usize)>,
    peak: usize,
}

#[inline]
fn inv_col(x: usize) -> usize {
    x ^ 1
}

impl Enumerator {
    fn new(ncols: usize, max: usize) -> Self {
        Enumerator {
            ncols,
            max,
            table: vec![NONE; ncols],
            parent: vec![0],
            deductions: Vec::new(),
            peak: 1,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.ncols + x] = v;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Full> {
        if self.len() >= self.max {
            return Err(Full);
        }
        let d = self.len() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.set(c, x, d);
        self.set(d, inv_col(x), c);
        self.deductions.push((c, x));
        self.peak = self.peak.max(self.len());
        Ok(d)
    }

    fn merge(&mut self, k: u32, l: u32, queue: &mut Vec<u32>) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k != l {
            let (lo, hi) = if k < l { (k, l) } else { (l, k) };
            self.parent[hi as usize] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                self.set(f, inv_col(x), NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let e1x = self.get(e1, x);
                let f1x = self.get(f1, inv_col(x));
                if e1x != NONE {
                    self.merge(f1, e1x, &mut queue);
                } else if f1x != NONE {
                    self.merge(e1, f1x, &mut queue);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, inv_col(x), e1);
                    self.deductions.push((e1, x));
                }
            }
        }
    }

    /// Scans relator `w` from coset `c`; fills gaps when `fill` is set.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), Full> {
        let (mut f, mut i) = (c, 0usize);
        let (mut b, mut j) = (c, w.len());
        loop {
            while i < j {
                let nf = self.get(f, w[i]);
                if nf == NONE {
                    break;
                }
                f = nf;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let nb = self.get(b, inv_col(w[j - 1]));
                if nb == NONE {
                    break;
                }
                b = nb;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, inv_col(w[i]), f);
                self.deductions.push((f, w[i]));
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn run_hlt(&mut self, rels: &[Vec<usize>]) -> Result<(), CosetError> {
        let mut alpha = 0usize;
        while alpha < self.len() {
            match self.hlt_step(alpha as u32, rels) {
                Ok(()) => alpha += 1,
                Err(Full) => {
                    let before = self.len();
                    self.lookahead(rels);
                    alpha = self.compact(alpha);
                    if self.len() == before {
                        return Err(CosetError::CapacityExceeded(self.max));
                    }
                }
            }
        }
        Ok(())
    }

    fn hlt_step(&mut self, alpha: u32, rels: &[Vec<usize>]) -> Result<(), Full> {
        self.deductions.clear();
        for r in rels {
            if !self.live(alpha) {
                return Ok(());
            }
            self.scan(alpha, r, true)?;
        }
        for x in 0..self.ncols {
            if !self.live(alpha) {
                return Ok(());
            }
            if self.get(alpha, x) == NONE {
                self.define(alpha, x)?;
            }
        }
        Ok(())
    }

    fn lookahead(&mut self, rels: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.len() {
            for r in rels {
                if !self.live(c as u32) {
                    break;
                }
                let _ = self.scan(c as u32, r, false);
            }
            c += 1;
        }
    }

    /// Drops dead cosets, keeping live ones in order. Returns the new index
    /// of the first live coset at or after `alpha`.
    fn compact(&mut self, alpha: usize) -> usize {
        let n = self.len();
        let mut new_of = vec![NONE; n];
        let mut next = 0u32;
        let mut new_alpha = None;
        for c in 0..n {
            if c >= alpha && new_alpha.is_none() && self.parent[c] == c as u32 {
                new_alpha = Some(next as usize);
            }
            if self.parent[c] == c as u32 {
                new_of[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n {
            if new_of[c] == NONE {
                continue;
            }
            for x in 0..self.ncols {
                let v = self.table[c * self.ncols + x];
                table.push(if v == NONE { NONE } else { new_of[v as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.deductions.clear();
        new_alpha.unwrap_or(next as usize)
    }

    fn run_felsch(&mut self, rels: &[Vec<usize>]) -> Result<(), CosetError> {
        // Cyclic conjugates of relators and their inverses, indexed by first letter.
        let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.ncols];
        for r in rels {
            let inv: Vec<usize> = r.iter().rev().map(|&x| inv_col(x)).collect();
            for w in [r, &inv] {
                for k in 0..w.len() {
                    let rot: Vec<usize> = w[k..].iter().chain(&w[..k]).copied().collect();
                    if !by_first[rot[0]].contains(&rot) {
                        by_first[rot[0]].push(rot);
                    }
                }
            }
        }
        // Scan every relator from coset 0 first so the base coset is consistent.
        self.deductions.clear();
        for r in rels {
            let _ = self.scan(0, r, false);
        }
        self.process_deductions(&by_first);
        let mut alpha = 0usize;
        while alpha < self.len() {
            if self.live(alpha as u32) {
                for x in 0..self.ncols {
                    if !self.live(alpha as u32) {
                        break;
                    }
                    if self.get(alpha as u32, x) == NONE {
                        if self.define(alpha as u32, x).is_err() {
                            return Err(CosetError::CapacityExceeded(self.max));
                        }
                        self.process_deductions(&by_first);
                    }
                }
            }
            alpha += 1;
        }
        Ok(())
    }

    fn process_deductions(&mut self, by_first: &[Vec<Vec<usize>>]) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.live(c) {
                continue;
            }
            let d = self.get(c, x);
            for k in 0..by_first[x].len() {
                if !self.live(c) {
                    break;
                }
                let w = by_first[x][k].clone();
                let _ = self.scan(c, &w, false);
            }
            if d != NONE && self.live(d) {
                let y = inv_col(x);
                for k in 0..by_first[y].len() {
                    if !self.live(d) {
                        break;
                    }
                    let w = by_first[y][k].clone();
                    let _ = self.scan(d, &w, false);
                }
            }
        }
    }

    fn finish(mut self, p: &Presentation, rels: &[Vec<usize>]) -> Result<Enumeration, CosetError> {
        self.compact(0);
        let n = self.len();
        // Every entry defined and every relator closes at every coset.
        if self.table.contains(&NONE) {
            return Err(CosetError::CapacityExceeded(self.max));
        }
        for c in 0..n as u32 {
            for r in rels {
                let end = r.iter().fold(c, |acc, &x| self.get(acc, x));
                if end != c {
                    return Err(CosetError::InvalidPresentation(
                        "enumeration did not close consistently".into(),
                    ));
                }
            }
        }

        // Relabel by BFS over columns a, a⁻¹, b, b⁻¹, ...
        let mut new_of = vec![usize::MAX; n];
        let mut old_of = vec![0u32];
        let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
        new_of[0] = 0;
        let mut head = 0;
        while head < old_of.len() {
            let c = old_of[head];
            for x in 0..self.ncols {
                let d = self.get(c, x) as usize;
                if new_of[d] == usize::MAX {
                    new_of[d] = old_of.len();
                    old_of.push(d as u32);
                    parent.push((head, x));
                }
            }
            head += 1;
        }
        debug_assert_eq!(old_of.len(), n);
        let act = |new: usize, x: usize| new_of[self.get(old_of[new], x) as usize];

        // product[α][β] = product[α][γ]·x where β = γ·x in the BFS tree.
        let mut product = vec![0usize; n * n];
        for alpha in 0..n {
            product[alpha * n] = alpha;
            for beta in 1..n {
                let (gamma, x) = parent[beta];
                product[alpha * n + beta] = act(product[alpha * n + gamma], x);
            }
        }
        let table = GroupTable::new(n, product)?;

        let mut words = vec![Word::identity()];
        for beta in 1..n {
            let (gamma, x) = parent[beta];
            let e = if x % 2 == 0 { 1 } else { -1 };
            words.push(words[gamma].mul(&Word::gen_pow(x / 2, e)));
        }
        let labels = words
            .iter()
            .map(|w| w.display(&p.generators).to_string())
            .collect();
        let generators = (0..p.ngens()).map(|g| act(0, 2 * g)).collect();
        Ok(Enumeration {
            table: table.with_labels(labels),
            generators,
            words,
            peak_cosets: self.peak,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn word_reduction() {
        let w = Word::from_syllables([(0, 2), (0, -2), (1, 1), (1, 2), (2, 0)]);
        assert_eq!(w.syllables(), &[(1, 3)]);
        let a = Word::gen(0);
        assert_eq!(a.mul(&a.inverse()), Word::identity());
    }

    #[test]
    fn parse_grammar() {
        let n = names(&["a", "b", "c"]);
        assert_eq!(parse_word("a^6", &n).unwrap(), Word::gen_pow(0, 6));
        assert_eq!(
            parse_word("(a^b)*a", &n).unwrap(),
            Word::from_syllables([(1, -1), (0, 1), (1, 1), (0, 1)])
        );
        assert_eq!(
            parse_word("a b a^-1 b^-1", &n).unwrap(),
            parse_word("[a^-1,b^-1]", &n).unwrap()
        );
        assert_eq!(
            parse_word("a^b = a^-1", &n).unwrap(),
            parse_word("b^-1 a b a", &n).unwrap()
        );
        assert_eq!(parse_word("1", &n).unwrap(), Word::identity());
    }

    #[test]
    fn parse_errors_cite_offset() {
        let n = names(&["a", "b"]);
        match parse_word("a^2 d", &n) {
            Err(CosetError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse_word("(a b", &n) {
            Err(CosetError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_word("a^", &n),
            Err(CosetError::Parse { offset: 2, .. })
        ));
    }

    #[test]
    fn conjugation_relator_forms() {
        let (a, b, c) = (Word::gen(0), Word::gen(1), Word::gen(2));
        // (a^2)^c = a^{2r} with r = 3
        let w = conjugation_relator(&a.pow(2), &c, &a.pow(6));
        assert_eq!(w.syllables(), &[(2, -1), (0, 2), (2, 1), (0, -6)]);
        // x^y = x gives the commutator
        let w = conjugation_relator(&a, &b, &a);
        assert_eq!(w.syllables(), &[(1, -1), (0, 1), (1, 1), (0, -1)]);
        // b^{c^4} = a^{1-r} b with r = 2
        let w = conjugation_relator(&b, &c.pow(4), &a.pow(-1).mul(&b));
        assert_eq!(w.syllables(), &[(2, -4), (1, 1), (2, 4), (1, -1), (0, 1)]);
    }

    #[test]
    fn small_enumerations() {
        let p = Presentation::parse(&["g"], &["g^5"]).unwrap();
        assert_eq!(todd_coxeter(&p, 100).unwrap().table.order(), 5);
        let p = Presentation::parse(&["a", "b"], &["a^3", "b^2", "a^b a"]).unwrap();
        assert_eq!(todd_coxeter(&p, 100).unwrap().table.order(), 6);
        let p = Presentation::parse(&["a", "b"], &["a^4", "b^2 a^-2", "a^b a"]).unwrap();
        let e = todd_coxeter(&p, 100).unwrap();
        assert_eq!(e.table.order(), 8);
        assert_eq!(e.table.order_multiset().get(&2), Some(&1));
    }

    #[test]
    fn capacity_exceeded() {
        let p = Presentation::parse(&["a", "b"], &["a^2"]).unwrap();
        assert!(matches!(
            todd_coxeter(&p, 50),
            Err(CosetError::CapacityExceeded(50))
        ));
        let p = Presentation::parse(&["a"], &["a^20"]).unwrap();
        assert!(matches!(
            todd_coxeter_with(&p, 10, Strategy::Felsch),
            Err(CosetError::CapacityExceeded(10))
        ));
    }

    #[test]
    fn felsch_agrees_with_hlt() {
        let p = Presentation::parse(&["a", "b"], &["a^4", "b^3", "(a b)^2"]).unwrap();
        let h = todd_coxeter(&p, 1000).unwrap();
        let f = todd_coxeter_with(&p, 1000, Strategy::Felsch).unwrap();
        assert_eq!(h.table.order(), 24);
        assert_eq!(h.table.raw_product(), f.table.raw_product());
    }

    #[test]
    fn labels_and_generators() {
        let p = Presentation::parse(&["a", "b"], &["a^3", "b^2", "a^b a"]).unwrap();
        let e = todd_coxeter(&p, 100).unwrap();
        let t = &e.table;
        assert_eq!(e.generators, vec![1, 3]);
        for (x, w) in e.words.iter().enumerate() {
            assert_eq!(w.eval(t, &e.generators), x);
        }
        assert_eq!(t.labels().unwrap()[0], "1");
    }

    #[test]
    fn json_roundtrip() {
        let json = r#"{"generators":["a","b","c"],"relators":["a^6","b^2","(a^b)*a","c^2","[a,c]","[b,c]"]}"#;
        let p = Presentation::from_json(json).unwrap();
        assert_eq!(todd_coxeter(&p, 1000).unwrap().table.order(), 24);
        let back = Presentation::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert!(Presentation::from_json(r#"{"generators":["a"],"relators":["a^x"]}"#).is_err());
    }
}
