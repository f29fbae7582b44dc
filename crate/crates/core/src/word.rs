//! Variable words, points and section layouts.
//!
//! A variable word over `d` is a finite string over the digits `0..d` and the
//! variables `x0, x1, ...`. Points are plain digit strings; they are kept either
//! dense or as a sorted list of nonzero positions, since the prover works with
//! points of length in the thousands whose support is tiny.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use crate::error::{EnshError, Result};

/// Points up to this length are materialized densely by the constructors that pick
/// a representation themselves.
const DENSE_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Const(u8),
    Var(u32),
}

impl Symbol {
    pub fn is_var(self) -> bool {
        matches!(self, Symbol::Var(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Const(u) => write!(f, "{u}"),
            Symbol::Var(m) => write!(f, "x{m}"),
        }
    }
}

/// Coordinates of one variable inside a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub positions: Vec<usize>,
    pub first: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableWord {
    d: u8,
    symbols: Vec<Symbol>,
    nvars: usize,
}

impl VariableWord {
    /// A normalized word: exactly `x0..x{n-1}` occur and their first occurrences
    /// are increasing.
    pub fn new(d: u8, symbols: Vec<Symbol>) -> Result<Self> {
        let w = Self::loose(d, symbols)?;
        if !w.is_normalized() {
            return Err(EnshError::Malformed(format!(
                "variables of `{w}` are not numbered by first occurrence"
            )));
        }
        Ok(w)
    }

    /// A word whose variables may be any subset of `x0, x1, ...` in any order
    /// (the `[0,n]`-words substituted positionwise).
    pub fn loose(d: u8, symbols: Vec<Symbol>) -> Result<Self> {
        if d == 0 {
            return Err(EnshError::Malformed(
                "alphabet size must be positive".into(),
            ));
        }
        let mut seen = Vec::new();
        for (t, s) in symbols.iter().enumerate() {
            match *s {
                Symbol::Const(u) if u >= d => {
                    return Err(EnshError::Malformed(format!(
                        "digit {u} at position {t} is not below d = {d}"
                    )))
                }
                Symbol::Var(m) if !seen.contains(&m) => {
                    seen.push(m);
                }
                _ => {}
            }
        }
        Ok(VariableWord {
            d,
            symbols,
            nvars: seen.len(),
        })
    }

    pub(crate) fn from_parts_unchecked(d: u8, symbols: Vec<Symbol>, nvars: usize) -> Self {
        VariableWord { d, symbols, nvars }
    }

    pub fn constant(d: u8, digits: &[u8]) -> Result<Self> {
        Self::new(d, digits.iter().map(|&u| Symbol::Const(u)).collect())
    }

    pub fn parse(d: u8, text: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        for tok in text.split_whitespace() {
            let sym = if let Some(rest) = tok.strip_prefix('x') {
                let m = rest
                    .parse::<u32>()
                    .map_err(|_| EnshError::Malformed(format!("bad variable token `{tok}`")))?;
                Symbol::Var(m)
            } else {
                let u = tok
                    .parse::<u8>()
                    .map_err(|_| EnshError::Malformed(format!("bad digit token `{tok}`")))?;
                Symbol::Const(u)
            };
            symbols.push(sym);
        }
        Self::loose(d, symbols)
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Number of distinct variables occurring.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// One past the largest variable index occurring (0 for constant words).
    pub fn var_bound(&self) -> usize {
        self.symbols
            .iter()
            .filter_map(|s| match s {
                Symbol::Var(m) => Some(*m as usize + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_normalized(&self) -> bool {
        let mut next = 0u32;
        for s in &self.symbols {
            if let Symbol::Var(m) = *s {
                if m == next {
                    next += 1;
                } else if m > next {
                    return false;
                }
            }
        }
        true
    }

    pub fn occurrences(&self) -> BTreeMap<u32, Occurrence> {
        let mut map: BTreeMap<u32, Occurrence> = BTreeMap::new();
        for (t, s) in self.symbols.iter().enumerate() {
            if let Symbol::Var(m) = *s {
                map.entry(m)
                    .and_modify(|o| o.positions.push(t))
                    .or_insert(Occurrence {
                        positions: vec![t],
                        first: t,
                    });
            }
        }
        map
    }

    /// First occurrence of every occurring variable, in order of variable index.
    pub fn first_occurrences(&self) -> Vec<usize> {
        self.occurrences().values().map(|o| o.first).collect()
    }

    /// Renumbers the occurring variables by order of first occurrence.
    pub fn normalized(&self) -> VariableWord {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        let symbols = self
            .symbols
            .iter()
            .map(|s| match *s {
                Symbol::Var(m) => {
                    let next = map.len() as u32;
                    Symbol::Var(*map.entry(m).or_insert(next))
                }
                c => c,
            })
            .collect();
        VariableWord {
            d: self.d,
            symbols,
            nvars: map.len(),
        }
    }

    /// Concatenation; the result is loose unless both parts line up.
    pub fn concat(&self, other: &VariableWord) -> Result<VariableWord> {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Self::loose(self.d.max(other.d), symbols)
    }
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(Vec<u8>),
    Sparse(Vec<(usize, u8)>),
}

/// A string in `d^len`.
#[derive(Clone, Debug)]
pub struct Point {
    d: u8,
    len: usize,
    repr: Repr,
}

fn digit_char(u: u8) -> char {
    std::char::from_digit(u as u32, 36).unwrap_or('?')
}

impl Point {
    pub fn from_digits(d: u8, digits: Vec<u8>) -> Result<Self> {
        if let Some((t, u)) = digits.iter().enumerate().find(|(_, &u)| u >= d) {
            return Err(EnshError::Malformed(format!(
                "digit {u} at position {t} is not below d = {d}"
            )));
        }
        Ok(Point {
            d,
            len: digits.len(),
            repr: Repr::Dense(digits),
        })
    }

    pub fn zeros(d: u8, len: usize) -> Self {
        Point {
            d,
            len,
            repr: Repr::Sparse(Vec::new()),
        }
    }

    /// Sparse point from `(position, digit)` pairs; zero digits are dropped.
    pub fn from_support(d: u8, len: usize, mut entries: Vec<(usize, u8)>) -> Result<Self> {
        entries.retain(|&(_, u)| u != 0);
        entries.sort_unstable();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EnshError::Malformed(format!(
                    "position {} given twice",
                    w[0].0
                )));
            }
        }
        for &(t, u) in &entries {
            if t >= len {
                return Err(EnshError::Malformed(format!(
                    "position {t} outside length {len}"
                )));
            }
            if u >= d {
                return Err(EnshError::Malformed(format!(
                    "digit {u} is not below d = {d}"
                )));
            }
        }
        Ok(Point {
            d,
            len,
            repr: Repr::Sparse(entries),
        })
    }

    /// Binary point with ones exactly at `positions` (any order, no duplicates).
    pub fn from_set(len: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::from_support(2, len, positions.into_iter().map(|t| (t, 1)).collect())
    }

    /// Picks dense or sparse storage by length.
    pub(crate) fn from_nonzero_sorted(d: u8, len: usize, entries: Vec<(usize, u8)>) -> Self {
        if len <= DENSE_LIMIT {
            let mut digits = vec![0u8; len];
            for (t, u) in entries {
                digits[t] = u;
            }
            Point {
                d,
                len,
                repr: Repr::Dense(digits),
            }
        } else {
            Point {
                d,
                len,
                repr: Repr::Sparse(entries),
            }
        }
    }

    pub fn parse(d: u8, text: &str) -> Result<Self> {
        let digits = text
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|u| u as u8)
                    .ok_or_else(|| EnshError::Malformed(format!("bad digit `{c}`")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_digits(d, digits)
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.repr, Repr::Sparse(_))
    }

    pub fn get(&self, t: usize) -> u8 {
        match &self.repr {
            Repr::Dense(v) => v[t],
            Repr::Sparse(e) => match e.binary_search_by_key(&t, |&(p, _)| p) {
                Ok(i) => e[i].1,
                Err(_) => 0,
            },
        }
    }

    pub fn digits(&self) -> Vec<u8> {
        match &self.repr {
            Repr::Dense(v) => v.clone(),
            Repr::Sparse(e) => {
                let mut v = vec![0u8; self.len];
                for &(t, u) in e {
                    v[t] = u;
                }
                v
            }
        }
    }

    /// Nonzero `(position, digit)` pairs in increasing position order.
    pub fn nonzero(&self) -> Vec<(usize, u8)> {
        match &self.repr {
            Repr::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &u)| u != 0)
                .map(|(t, &u)| (t, u))
                .collect(),
            Repr::Sparse(e) => e.clone(),
        }
    }

    /// Positions carrying a nonzero digit (the set view of a binary point).
    pub fn support(&self) -> Vec<usize> {
        self.nonzero().into_iter().map(|(t, _)| t).collect()
    }

    pub fn to_dense(&self) -> Point {
        Point {
            d: self.d,
            len: self.len,
            repr: Repr::Dense(self.digits()),
        }
    }

    pub fn to_sparse(&self) -> Point {
        Point {
            d: self.d,
            len: self.len,
            repr: Repr::Sparse(self.nonzero()),
        }
    }

    /// Restriction to the given positions, in the order given.
    pub fn restrict(&self, positions: &[usize]) -> Point {
        let digits = positions.iter().map(|&t| self.get(t)).collect();
        Point {
            d: self.d,
            len: positions.len(),
            repr: Repr::Dense(digits),
        }
    }

    fn binary_pair(&self, other: &Point) -> Result<()> {
        if self.len != other.len {
            return Err(EnshError::Contract(format!(
                "set operation on lengths {} and {}",
                self.len, other.len
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &Point) -> Result<Point> {
        self.binary_pair(other)?;
        let mut s = self.support();
        s.extend(other.support());
        s.sort_unstable();
        s.dedup();
        Ok(Point::from_nonzero_sorted(
            2,
            self.len,
            s.into_iter().map(|t| (t, 1)).collect(),
        ))
    }

    pub fn difference(&self, other: &Point) -> Result<Point> {
        self.binary_pair(other)?;
        let o = other.support();
        let s = self
            .support()
            .into_iter()
            .filter(|t| o.binary_search(t).is_err())
            .map(|t| (t, 1))
            .collect();
        Ok(Point::from_nonzero_sorted(2, self.len, s))
    }

    pub fn is_disjoint(&self, other: &Point) -> bool {
        let o = other.support();
        self.support().iter().all(|t| o.binary_search(t).is_err())
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.len == other.len && self.nonzero() == other.nonzero()
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.d.hash(state);
        self.len.hash(state);
        match &self.repr {
            Repr::Sparse(e) => e.hash(state),
            Repr::Dense(_) => self.nonzero().hash(state),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in self.digits() {
            write!(f, "{}", digit_char(u))?;
        }
        Ok(())
    }
}

/// `d^n` when it fits a `u64`.
pub fn space_size(d: u8, n: usize) -> Result<u64> {
    (d as u64)
        .checked_pow(n as u32)
        .filter(|_| n <= u32::MAX as usize)
        .ok_or_else(|| EnshError::TooLarge {
            engine: "ranking",
            detail: format!("{d}^{n}"),
        })
}

/// Big-endian positional rank: position 0 is the most significant digit.
pub fn rank_point(p: &Point) -> Result<u64> {
    space_size(p.d, p.len)?;
    let d = p.d as u64;
    Ok(p.digits().iter().fold(0u64, |acc, &u| acc * d + u as u64))
}

pub fn unrank_point(mut i: u64, n: usize, d: u8) -> Result<Point> {
    let size = space_size(d, n)?;
    if i >= size {
        return Err(EnshError::Malformed(format!(
            "rank {i} is not below {d}^{n}"
        )));
    }
    let mut digits = vec![0u8; n];
    for t in (0..n).rev() {
        digits[t] = (i % d as u64) as u8;
        i /= d as u64;
    }
    Ok(Point {
        d,
        len: n,
        repr: Repr::Dense(digits),
    })
}

/// All of `d^n` in rank order.
pub fn all_points(d: u8, n: usize) -> Result<impl Iterator<Item = Point>> {
    let size = space_size(d, n)?;
    Ok((0..size).map(move |i| unrank_point(i, n, d).expect("rank in range")))
}

/// Substitutes `x_{m_t}` by `a(t)` for the occurring variables `m_0 < m_1 < ...`
/// and cuts the result just before the first occurrence of `x_{m_{|a|}}`.
pub fn substitute_truncating(v: &VariableWord, a: &Point) -> Result<Point> {
    let occ = v.occurrences();
    let order: Vec<u32> = occ.keys().copied().collect();
    let take = order.len().min(a.len());
    let cut = if a.len() < order.len() {
        occ[&order[a.len()]].first
    } else {
        v.len()
    };
    let mut value: BTreeMap<u32, u8> = BTreeMap::new();
    for (t, m) in order.iter().take(take).enumerate() {
        value.insert(*m, a.get(t));
    }
    let mut entries = Vec::new();
    for (t, s) in v.symbols()[..cut].iter().enumerate() {
        let u = match *s {
            Symbol::Const(u) => u,
            Symbol::Var(m) => *value.get(&m).ok_or_else(|| {
                EnshError::Contract(format!("x{m} occurs before the truncation point of `{v}`"))
            })?,
        };
        if u != 0 {
            entries.push((t, u));
        }
    }
    Ok(Point::from_nonzero_sorted(v.d(), cut, entries))
}

/// Positionwise substitution `x_m -> a(m)` without truncation.
pub fn substitute_total(v: &VariableWord, a: &Point) -> Result<Point> {
    let mut entries = Vec::new();
    for (t, s) in v.symbols().iter().enumerate() {
        let u = match *s {
            Symbol::Const(u) => u,
            Symbol::Var(m) => {
                if m as usize >= a.len() {
                    return Err(EnshError::Contract(format!(
                        "x{m} has no value in a point of length {}",
                        a.len()
                    )));
                }
                a.get(m as usize)
            }
        };
        if u != 0 {
            entries.push((t, u));
        }
    }
    Ok(Point::from_nonzero_sorted(
        v.d().max(a.d()),
        v.len(),
        entries,
    ))
}

/// Alphabet size, color count and block sizes `n_0 ... n_{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SectionLayout {
    d: u8,
    k: u8,
    seq: Vec<usize>,
    starts: Vec<usize>,
    total: usize,
}

impl SectionLayout {
    pub fn new(d: u8, k: u8, seq: Vec<usize>) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(EnshError::Malformed("d and k must be positive".into()));
        }
        if seq.is_empty() {
            return Err(EnshError::Malformed("block sequence is empty".into()));
        }
        if seq.contains(&0) {
            return Err(EnshError::Malformed("block sizes must be positive".into()));
        }
        let mut starts = Vec::with_capacity(seq.len());
        let mut total = 0usize;
        for &n in &seq {
            starts.push(total);
            total += n;
        }
        Ok(SectionLayout {
            d,
            k,
            seq,
            starts,
            total,
        })
    }

    /// Parses "2,2,2" (commas or whitespace).
    pub fn parse_seq(text: &str) -> Result<Vec<usize>> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| EnshError::Malformed(format!("bad block size `{t}`")))
            })
            .collect()
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn num_sections(&self) -> usize {
        self.seq.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn size(&self, s: usize) -> usize {
        self.seq[s]
    }

    pub fn start(&self, s: usize) -> usize {
        self.starts[s]
    }

    pub fn block(&self, s: usize) -> Range<usize> {
        self.starts[s]..self.starts[s] + self.seq[s]
    }

    /// Index of the block containing position `t`.
    pub fn section_of(&self, t: usize) -> Option<usize> {
        if t >= self.total {
            return None;
        }
        Some(self.starts.partition_point(|&st| st <= t) - 1)
    }

    pub fn with_alphabet(&self, d: u8, k: u8) -> Result<Self> {
        Self::new(d, k, self.seq.clone())
    }
}

impl fmt::Display for SectionLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.seq.iter().map(|n| n.to_string()).collect();
        write!(f, "d={} k={} seq={}", self.d, self.k, seq.join(","))
    }
}

pub fn is_section_word(v: &VariableWord, layout: &SectionLayout, s: usize) -> Result<bool> {
    if v.len() != layout.total() {
        return Err(EnshError::Contract(format!(
            "word length {} differs from layout length {}",
            v.len(),
            layout.total()
        )));
    }
    if s >= layout.num_sections() {
        return Err(EnshError::Contract(format!("section {s} out of range")));
    }
    if !v.is_normalized() || v.nvars() != layout.size(s) || v.d() != layout.d() {
        return Ok(false);
    }
    let block = layout.block(s);
    Ok(v.first_occurrences().into_iter().eq(block))
}

pub fn count_section_words(layout: &SectionLayout, s: usize) -> Result<u128> {
    let d = layout.d() as u128;
    let n = layout.size(s) as u128;
    let before = layout.start(s) as u32;
    let after = (layout.total() - layout.start(s) - layout.size(s)) as u32;
    let too_large = || EnshError::TooLarge {
        engine: "section-word count",
        detail: layout.to_string(),
    };
    let a = d.checked_pow(before).ok_or_else(too_large)?;
    let b = (d + n).checked_pow(after).ok_or_else(too_large)?;
    a.checked_mul(b).ok_or_else(too_large)
}

/// All section words of section `s` in lexicographic order over
/// `Const(0) < ... < Const(d-1) < Var(0) < ... < Var(n_s - 1)`.
#[derive(Clone, Debug)]
pub struct SectionWords {
    d: u8,
    nvars: usize,
    before: usize,
    counters: Vec<u8>,
    radices: Vec<u8>,
    done: bool,
}

impl SectionWords {
    pub fn new(layout: &SectionLayout, s: usize) -> Self {
        let d = layout.d();
        let nvars = layout.size(s);
        let before = layout.start(s);
        let after = layout.total() - before - nvars;
        let mut radices = vec![d; before];
        radices.extend(std::iter::repeat_n((d as usize + nvars) as u8, after));
        SectionWords {
            d,
            nvars,
            before,
            counters: vec![0; radices.len()],
            radices,
            done: false,
        }
    }

    fn build(&self) -> VariableWord {
        let d = self.d;
        let mut symbols = Vec::with_capacity(self.counters.len() + self.nvars);
        symbols.extend(
            self.counters[..self.before]
                .iter()
                .map(|&u| Symbol::Const(u)),
        );
        symbols.extend((0..self.nvars as u32).map(Symbol::Var));
        symbols.extend(self.counters[self.before..].iter().map(|&c| {
            if c < d {
                Symbol::Const(c)
            } else {
                Symbol::Var((c - d) as u32)
            }
        }));
        VariableWord::from_parts_unchecked(d, symbols, self.nvars)
    }
}

impl Iterator for SectionWords {
    type Item = VariableWord;

    fn next(&mut self) -> Option<VariableWord> {
        if self.done {
            return None;
        }
        let word = self.build();
        let mut t = self.counters.len();
        loop {
            if t == 0 {
                self.done = true;
                break;
            }
            t -= 1;
            self.counters[t] += 1;
            if self.counters[t] < self.radices[t] {
                break;
            }
            self.counters[t] = 0;
        }
        Some(word)
    }
}

pub fn enumerate_section_words(layout: &SectionLayout, s: usize) -> SectionWords {
    SectionWords::new(layout, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(d: u8, text: &str) -> VariableWord {
        VariableWord::parse(d, text).unwrap()
    }

    fn p(d: u8, text: &str) -> Point {
        Point::parse(d, text).unwrap()
    }

    fn sample_word() -> VariableWord {
        w(2, "0 1 1 x0 x0 0 1 1 x1 x0 x0 x1 x1 0 0 x2 x2")
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_point(&p(2, "00")).unwrap(), 0);
        assert_eq!(rank_point(&p(2, "10")).unwrap(), 2);
        assert_eq!(unrank_point(5, 3, 2).unwrap(), p(2, "101"));
        assert!(Point::parse(2, "12").is_err());
    }

    #[test]
    fn rank_unrank_exhaustive() {
        for d in 1..=4u8 {
            for n in 0..=16usize {
                let size = space_size(d, n).unwrap();
                if size > 70_000 {
                    continue;
                }
                for i in 0..size {
                    assert_eq!(rank_point(&unrank_point(i, n, d).unwrap()).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn truncating_substitution() {
        let v = sample_word();
        assert_eq!(
            substitute_truncating(&v, &p(2, "10")).unwrap(),
            p(2, "011110110110000")
        );
        let c = w(2, "1 0 1");
        assert_eq!(substitute_truncating(&c, &p(2, "01")).unwrap(), p(2, "101"));
        assert_eq!(
            substitute_truncating(&w(2, "x0 0 x1"), &p(2, "1")).unwrap(),
            p(2, "10")
        );
        // longer assignment than variables: truncation point is |v|
        assert_eq!(
            substitute_truncating(&w(2, "x0 0"), &p(2, "111")).unwrap(),
            p(2, "10")
        );
    }

    #[test]
    fn total_substitution() {
        let v = w(2, "0 x1 0");
        assert_eq!(substitute_total(&v, &p(2, "01")).unwrap(), p(2, "010"));
        assert_eq!(
            substitute_total(&w(2, "1 1"), &p(2, "0")).unwrap(),
            p(2, "11")
        );
        assert_eq!(
            substitute_total(&w(2, "x0 x1 x0"), &p(2, "10")).unwrap(),
            p(2, "101")
        );
        assert!(matches!(
            substitute_total(&w(2, "x2"), &p(2, "01")),
            Err(EnshError::Contract(_))
        ));
    }

    #[test]
    fn occurrence_sets() {
        let occ = sample_word().occurrences();
        assert_eq!(occ[&0].positions, vec![3, 4, 9, 10]);
        assert_eq!(occ[&1].positions, vec![8, 11, 12]);
        assert_eq!(occ[&0].first, 3);
        assert!(w(2, "0 1").occurrences().is_empty());
        let occ = w(2, "x0 x1 x0").occurrences();
        assert_eq!(occ[&0].positions, vec![0, 2]);
        assert_eq!(occ[&1].positions, vec![1]);
    }

    #[test]
    fn section_word_recognition() {
        let l = SectionLayout::new(2, 2, vec![2, 2]).unwrap();
        assert!(is_section_word(&w(2, "x0 x1 x0 0"), &l, 0).unwrap());
        assert!(!is_section_word(&w(2, "x0 x1 0 0"), &l, 1).unwrap());
        assert!(is_section_word(&w(2, "0 1 x0 x1"), &l, 1).unwrap());
        assert!(is_section_word(&w(2, "0 1"), &l, 0).is_err());
    }

    #[test]
    fn section_word_enumeration() {
        let l = SectionLayout::new(2, 2, vec![2, 2]).unwrap();
        let words: Vec<String> = enumerate_section_words(&l, 1)
            .map(|v| v.to_string())
            .collect();
        assert_eq!(words, ["0 0 x0 x1", "0 1 x0 x1", "1 0 x0 x1", "1 1 x0 x1"]);
        let l4 = SectionLayout::new(2, 2, vec![2, 2, 2, 2]).unwrap();
        let counts: Vec<u128> = (0..4)
            .map(|s| count_section_words(&l4, s).unwrap())
            .collect();
        assert_eq!(counts, [4096, 1024, 256, 64]);
        let one = SectionLayout::new(2, 2, vec![1]).unwrap();
        let words: Vec<String> = enumerate_section_words(&one, 0)
            .map(|v| v.to_string())
            .collect();
        assert_eq!(words, ["x0"]);
    }

    #[test]
    fn sparse_and_dense_agree() {
        let a = Point::from_support(3, 10, vec![(7, 2), (1, 1)]).unwrap();
        assert_eq!(a.to_dense(), a);
        assert_eq!(a.to_string(), "0100000200");
        assert_eq!(a.to_dense().to_sparse().nonzero(), vec![(1, 1), (7, 2)]);
    }
}
