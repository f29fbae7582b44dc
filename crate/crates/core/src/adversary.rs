//! Finite simulation of the correspondence between non-homogeneous sequences
//! and colorings of `d^{<N}` that defeat variable word strategies.
//!
//! One direction builds coloring levels `c: d^n -> k` for `n < horizon` against
//! registered strategies, coloring `d^t` through a witness for the prefix of the
//! target sequence that the active strategies occupy. The other direction runs
//! greedy extension slots against fixed levels and reads a non-homogeneous
//! sequence, with witnesses, off the words where they get stuck.

use serde::{Deserialize, Serialize};

use crate::checker::{find_sh_certificate, word_text, ShCertificate};
use crate::coloring::{Coloring, TableColoring};
use crate::error::{EnshError, Result};
use crate::search::{decide_ensh_brute, known_witness, EnshDecision};
use crate::word::{
    space_size, substitute_total, unrank_point, Point, SectionLayout, Symbol, VariableWord,
};

/// Default cap on candidate words examined by one extension search.
pub const EXTENSION_LIMIT: u64 = 200_000_000;

/// Colorings of `d^0, d^1, ...` up to some horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels {
    d: u8,
    k: u8,
    tables: Vec<TableColoring>,
}

impl Levels {
    pub fn new(d: u8, k: u8) -> Self {
        Levels {
            d,
            k,
            tables: Vec::new(),
        }
    }

    pub fn from_fn(d: u8, k: u8, horizon: usize, f: impl Fn(&Point) -> u8) -> Result<Self> {
        let mut levels = Levels::new(d, k);
        for n in 0..horizon {
            levels.push(TableColoring::from_fn(d, n, k, &f)?)?;
        }
        Ok(levels)
    }

    pub fn constant(d: u8, k: u8, horizon: usize, color: u8) -> Result<Self> {
        Self::from_fn(d, k, horizon, |_| color)
    }

    /// Appends the level for points of length `self.len()`.
    pub fn push(&mut self, table: TableColoring) -> Result<()> {
        let n = self.tables.len();
        let expect = TableColoring::new(self.d, n, self.k, table.values().to_vec())?;
        if expect != table {
            return Err(EnshError::Contract(format!(
                "level {n} must color {}^{n} with {} colors",
                self.d, self.k
            )));
        }
        self.tables.push(table);
        Ok(())
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Number of defined levels; points of length `< len()` are colored.
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn level(&self, n: usize) -> Option<&TableColoring> {
        self.tables.get(n)
    }

    pub fn color(&self, p: &Point) -> Result<u8> {
        let table = self.tables.get(p.len()).ok_or_else(|| {
            EnshError::Precondition(format!(
                "level {} is beyond the horizon {}",
                p.len(),
                self.len()
            ))
        })?;
        Coloring::Table(table.clone()).color(p)
    }

    /// The first `n` levels.
    pub fn truncated(&self, n: usize) -> Levels {
        Levels {
            d: self.d,
            k: self.k,
            tables: self.tables[..n.min(self.len())].to_vec(),
        }
    }

    pub fn digit_strings(&self) -> Vec<String> {
        self.tables.iter().map(|t| t.digit_string()).collect()
    }
}

/// Ranks of `w(a)` over all `a`, with the first `zero_prefix` symbols read as 0.
fn image_ranks(w: &[Symbol], d: u8, nvars: usize, zero_prefix: usize) -> Vec<u64> {
    let d = d as u64;
    let mut base = 0u64;
    let mut weights = vec![0u64; nvars];
    let mut place = 1u64;
    for t in (0..w.len()).rev() {
        match w[t] {
            Symbol::Const(u) if t >= zero_prefix => base += u as u64 * place,
            Symbol::Var(m) => weights[m as usize] += place,
            _ => {}
        }
        place = place.wrapping_mul(d);
    }
    let mut out = vec![base];
    for wt in weights {
        out = out
            .iter()
            .flat_map(|&r| (0..d).map(move |u| r + u * wt))
            .collect();
    }
    out
}

fn mono(values: &[u8], ranks: &[u64], shift: u64) -> Option<u8> {
    let first = values[(ranks[0] + shift) as usize];
    ranks
        .iter()
        .all(|&r| values[(r + shift) as usize] == first)
        .then_some(first)
}

/// How `w/a` is read: the constants `a` overwrite the first `|a|` symbols of
/// `w`, or `w` is taken as is.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slash {
    #[default]
    Overwrite,
    Literal,
}

impl std::str::FromStr for Slash {
    type Err = EnshError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overwrite" => Ok(Slash::Overwrite),
            "literal" => Ok(Slash::Literal),
            _ => Err(EnshError::Malformed(format!("slash reading `{s}`"))),
        }
    }
}

/// Some `a` in `d^prefix` for which `w/a` is monochromatic on `table`.
fn mono_for_some_prefix(
    table: &TableColoring,
    w: &[Symbol],
    d: u8,
    nvars: usize,
    prefix: usize,
    slash: Slash,
) -> bool {
    let n = w.len();
    let values = table.values();
    match slash {
        Slash::Literal => mono(values, &image_ranks(w, d, nvars, 0), 0).is_some(),
        Slash::Overwrite => {
            let ranks = image_ranks(w, d, nvars, prefix);
            let step = (d as u64).pow((n - prefix) as u32);
            (0..(d as u64).pow(prefix as u32)).any(|a| mono(values, &ranks, a * step).is_some())
        }
    }
}

/// Enumerates suffixes over `alphabet` symbols in lexicographic order.
struct Odometer {
    digits: Vec<usize>,
    base: usize,
    done: bool,
}

impl Odometer {
    fn new(len: usize, base: usize) -> Self {
        Odometer {
            digits: vec![0; len],
            base,
            done: base == 0 && len > 0,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        self.done = true;
        Some(&self.digits)
    }

    fn advance(&mut self) {
        for t in (0..self.digits.len()).rev() {
            self.digits[t] += 1;
            if self.digits[t] < self.base {
                self.done = false;
                return;
            }
            self.digits[t] = 0;
        }
    }
}

fn symbol_of(i: usize, d: u8) -> Symbol {
    if i < d as usize {
        Symbol::Const(i as u8)
    } else {
        Symbol::Var((i - d as usize) as u32)
    }
}

/// Visits every extension `w = v ^ u` of length in `lengths` whose suffix uses
/// the digits and `x0..x{max_var}` with `w` normalized and exactly `target`
/// variables; stops at the first one `hit` accepts.
fn scan_extensions(
    v: &VariableWord,
    target: usize,
    lengths: std::ops::Range<usize>,
    budget: &mut u64,
    mut hit: impl FnMut(&[Symbol]) -> bool,
) -> Result<Option<Vec<Symbol>>> {
    let d = v.d();
    let have = v.nvars();
    if target < have || v.var_bound() > have {
        return Ok(None);
    }
    let base = d as usize + target;
    for n in lengths.start.max(v.len())..lengths.end {
        let mut odo = Odometer::new(n - v.len(), base);
        let mut w: Vec<Symbol> = v.symbols().to_vec();
        w.resize(n, Symbol::Const(0));
        while odo.next().is_some() {
            let mut next = have as u32;
            let mut ok = true;
            for (i, &c) in odo.digits.iter().enumerate() {
                let s = symbol_of(c, d);
                if let Symbol::Var(m) = s {
                    if m > next {
                        ok = false;
                        break;
                    }
                    if m == next {
                        next += 1;
                    }
                }
                w[v.len() + i] = s;
            }
            if ok && next as usize == target {
                if *budget == 0 {
                    return Err(EnshError::TooLarge {
                        engine: "extension search",
                        detail: format!("extensions of `{v}` below length {}", lengths.end),
                    });
                }
                *budget -= 1;
                if hit(&w) {
                    return Ok(Some(w));
                }
            }
            odo.advance();
        }
    }
    Ok(None)
}

fn check_prefix_constant(v: &VariableWord, prefix: usize) -> Result<()> {
    if v.len() < prefix || v.symbols()[..prefix].iter().any(|s| s.is_var()) {
        return Err(EnshError::Contract(format!(
            "`{v}` must have {prefix} leading constants"
        )));
    }
    Ok(())
}

/// First extension of `v` by one more variable, of length in `lengths`, such that
/// `w/a` is monochromatic for some `a` in `d^prefix`. Shortest first, then
/// lexicographic suffix order (digits before variables).
fn find_extension(
    levels: &Levels,
    v: &VariableWord,
    prefix: usize,
    lengths: std::ops::Range<usize>,
    slash: Slash,
    budget: &mut u64,
) -> Result<Option<VariableWord>> {
    check_prefix_constant(v, prefix)?;
    let target = v.nvars() + 1;
    let lengths = lengths.start.max(v.len() + 1)..lengths.end.min(levels.len());
    let found = scan_extensions(v, target, lengths, budget, |w| {
        mono_for_some_prefix(&levels.tables[w.len()], w, levels.d, target, prefix, slash)
    })?;
    Ok(found.map(|w| VariableWord::from_parts_unchecked(levels.d, w, target)))
}

/// True iff no extension of `v` with exactly `nvars_target` variables and length
/// in `[min_len, horizon)` is monochromatic for the levels. Lengths below
/// `|v|` contribute nothing, so `horizon <= |v|` is vacuously true.
pub fn verify_no_extension(
    levels: &Levels,
    v: &VariableWord,
    nvars_target: usize,
    horizon: usize,
    min_len: usize,
) -> Result<bool> {
    let mut budget = EXTENSION_LIMIT;
    verify_stuck(
        levels,
        v,
        nvars_target,
        0,
        Slash::Literal,
        min_len..horizon,
        &mut budget,
    )
}

fn verify_stuck(
    levels: &Levels,
    v: &VariableWord,
    target: usize,
    prefix: usize,
    slash: Slash,
    lengths: std::ops::Range<usize>,
    budget: &mut u64,
) -> Result<bool> {
    if lengths.end > levels.len() {
        return Err(EnshError::Precondition(format!(
            "levels defined below {} but horizon is {}",
            levels.len(),
            lengths.end
        )));
    }
    if !v.is_normalized() {
        return Err(EnshError::Malformed(format!("`{v}` is not normalized")));
    }
    check_prefix_constant(v, prefix)?;
    let hit = scan_extensions(v, target, lengths, budget, |w| {
        mono_for_some_prefix(&levels.tables[w.len()], w, levels.d, target, prefix, slash)
    })?;
    Ok(hit.is_none())
}

/// A variable word source run against the levels defined so far.
pub trait Strategy {
    fn name(&self) -> String;

    /// The current chain element once `levels.len()` levels are defined. Each
    /// output must extend the previous one.
    fn next(&mut self, levels: &Levels) -> Result<VariableWord>;
}

/// Emits the last scheduled word whose time has come.
#[derive(Clone, Debug)]
pub struct Scripted {
    d: u8,
    schedule: Vec<(usize, VariableWord)>,
}

impl Scripted {
    pub fn new(d: u8, mut schedule: Vec<(usize, VariableWord)>) -> Self {
        schedule.sort_by_key(|(t, _)| *t);
        Scripted { d, schedule }
    }
}

impl Strategy for Scripted {
    fn name(&self) -> String {
        let parts: Vec<String> = self
            .schedule
            .iter()
            .map(|(t, w)| format!("{t}={}", w.to_string().replace(' ', ".")))
            .collect();
        format!("scripted:{}", parts.join(";"))
    }

    fn next(&mut self, levels: &Levels) -> Result<VariableWord> {
        let t = levels.len();
        Ok(self
            .schedule
            .iter()
            .rev()
            .find(|(at, _)| *at <= t)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(|| VariableWord::from_parts_unchecked(self.d, Vec::new(), 0)))
    }
}

/// Starts from `0^offset` and adds one variable whenever the visible levels
/// show an extension whose `/a` reading (with `|a| = offset`) is monochromatic.
#[derive(Clone, Debug)]
pub struct Greedy {
    offset: usize,
    slash: Slash,
    word: VariableWord,
    searched: usize,
}

impl Greedy {
    pub fn new(d: u8, offset: usize) -> Self {
        let word = VariableWord::from_parts_unchecked(d, vec![Symbol::Const(0); offset], 0);
        Greedy {
            offset,
            slash: Slash::Overwrite,
            word,
            searched: offset,
        }
    }
}

impl Strategy for Greedy {
    fn name(&self) -> String {
        format!("greedy:{}", self.offset)
    }

    fn next(&mut self, levels: &Levels) -> Result<VariableWord> {
        let from = self.searched.max(self.word.len()) + 1;
        let mut budget = EXTENSION_LIMIT;
        let found = find_extension(
            levels,
            &self.word,
            self.offset,
            from..levels.len(),
            self.slash,
            &mut budget,
        )?;
        match found {
            Some(w) => {
                self.searched = w.len();
                self.word = w;
            }
            None => self.searched = self.searched.max(levels.len().saturating_sub(1)),
        }
        Ok(self.word.clone())
    }
}

/// Serializable description of a builtin strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum StrategySpec {
    Greedy {
        offset: usize,
    },
    /// `(time, word)` pairs.
    Scripted {
        schedule: Vec<(usize, String)>,
    },
}

impl StrategySpec {
    pub fn build(&self, d: u8) -> Result<Box<dyn Strategy>> {
        Ok(match self {
            StrategySpec::Greedy { offset } => Box::new(Greedy::new(d, *offset)),
            StrategySpec::Scripted { schedule } => {
                let schedule = schedule
                    .iter()
                    .map(|(t, w)| Ok((*t, VariableWord::parse(d, w)?)))
                    .collect::<Result<Vec<_>>>()?;
                Box::new(Scripted::new(d, schedule))
            }
        })
    }
}

impl std::str::FromStr for StrategySpec {
    type Err = EnshError;

    /// `greedy:OFFSET`, or `scripted:T1=WORD1;T2=WORD2` with words written with
    /// `.` between symbols.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || EnshError::Malformed(format!("strategy `{s}`"));
        match s.split_once(':') {
            Some(("greedy", off)) => Ok(StrategySpec::Greedy {
                offset: off.parse().map_err(|_| bad())?,
            }),
            Some(("scripted", items)) => {
                let schedule = items
                    .split(';')
                    .filter(|x| !x.is_empty())
                    .map(|item| {
                        let (t, w) = item.split_once('=').ok_or_else(bad)?;
                        Ok((t.parse().map_err(|_| bad())?, w.replace('.', " ")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(StrategySpec::Scripted { schedule })
            }
            _ => Err(bad()),
        }
    }
}

/// A slot of the active set: the strategy holding it, its normalized word and
/// the first occurrences of that word's variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub strategy: usize,
    #[serde(with = "word_text")]
    pub word: VariableWord,
    pub positions: Vec<usize>,
}

/// Scheduler state when level `t` is defined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryState {
    pub t: usize,
    pub slots: Vec<Slot>,
}

impl AdversaryState {
    pub fn active(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.strategy).collect()
    }

    /// All first-occurrence positions, in increasing order.
    pub fn positions(&self) -> Vec<usize> {
        self.slots
            .iter()
            .flat_map(|s| s.positions.iter().copied())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct AdversaryRun {
    pub prefix: SectionLayout,
    pub levels: Levels,
    pub trace: Vec<AdversaryState>,
    pub strategies: Vec<String>,
}

/// A slot that keeps its holder and word from `since` up to the horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableSlot {
    pub slot: usize,
    pub strategy: usize,
    #[serde(with = "word_text")]
    pub word: VariableWord,
    pub since: usize,
}

impl AdversaryRun {
    /// Slots `r` such that slots `0..=r` are unchanged from some time on.
    pub fn stabilized(&self) -> Vec<StableSlot> {
        let Some(last) = self.trace.last() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for r in 0..last.slots.len() {
            let same =
                |st: &AdversaryState| st.slots.len() > r && st.slots[..=r] == last.slots[..=r];
            let since = self
                .trace
                .iter()
                .rposition(|st| !same(st))
                .map_or(0, |i| i + 1);
            let since = self.trace[since].t;
            let s = &last.slots[r];
            out.push(StableSlot {
                slot: r,
                strategy: s.strategy,
                word: s.word.clone(),
                since,
            });
        }
        out
    }
}

fn prefix_layout(prefix: &SectionLayout, r: usize) -> Result<SectionLayout> {
    SectionLayout::new(prefix.d(), prefix.k(), prefix.seq()[..r].to_vec())
}

/// Checks that `family[r]` colors `d^{X(0)+...+X(r)}` without a monochromatic
/// section word for the layout `X(0)..X(r)`.
pub fn verify_family(prefix: &SectionLayout, family: &[TableColoring]) -> Result<()> {
    if family.len() != prefix.num_sections() {
        return Err(EnshError::Precondition(format!(
            "{} witnesses for a prefix of {} blocks",
            family.len(),
            prefix.num_sections()
        )));
    }
    for (r, f) in family.iter().enumerate() {
        let layout = prefix_layout(prefix, r + 1)?;
        let coloring = Coloring::Table(f.clone());
        if coloring.n() != layout.total()
            || coloring.d() != layout.d()
            || coloring.k() != layout.k()
        {
            return Err(EnshError::Precondition(format!(
                "witness {r} does not color layout {layout}"
            )));
        }
        if let Some(cert) = find_sh_certificate(&coloring, &layout)? {
            return Err(EnshError::Precondition(format!(
                "witness {r} is homogeneous for {layout}: {cert}"
            )));
        }
    }
    Ok(())
}

/// Witnesses for every prefix of the layout: closed forms where known, else the
/// first one found by exhaustion.
pub fn witness_family(prefix: &SectionLayout) -> Result<Vec<TableColoring>> {
    (1..=prefix.num_sections())
        .map(|r| {
            let layout = prefix_layout(prefix, r)?;
            if let Some(f) = known_witness(&layout) {
                return f.to_table();
            }
            match decide_ensh_brute(&layout)? {
                EnshDecision::Witness(t) => Ok(t),
                EnshDecision::NoWitness(_) => Err(EnshError::Precondition(format!(
                    "layout {layout} has no witness"
                ))),
            }
        })
        .collect()
}

/// Keeps the first `count` variables of `u` that first occur at or after
/// `after`, renumbered, and turns every other variable into 0.
fn normalize_slot(
    u: &VariableWord,
    count: usize,
    after: usize,
) -> Option<(VariableWord, Vec<usize>)> {
    let mut keep: Vec<(u32, usize)> = Vec::new();
    let mut early: Vec<u32> = Vec::new();
    for (t, s) in u.symbols().iter().enumerate() {
        if let Symbol::Var(m) = *s {
            if early.contains(&m) || keep.iter().any(|(k, _)| *k == m) {
                continue;
            }
            if t < after || keep.len() == count {
                early.push(m);
            } else {
                keep.push((m, t));
            }
        }
    }
    if keep.len() < count {
        return None;
    }
    let symbols = u
        .symbols()
        .iter()
        .map(|s| match *s {
            Symbol::Var(m) => keep
                .iter()
                .position(|(k, _)| *k == m)
                .map_or(Symbol::Const(0), |i| Symbol::Var(i as u32)),
            c => c,
        })
        .collect();
    let word = VariableWord::from_parts_unchecked(u.d(), symbols, count);
    Some((word, keep.iter().map(|(_, t)| *t).collect()))
}

/// Color of `a` from the witness for the active prefix, read on the slot
/// positions. 0 when no slot is active.
pub fn level_color(state: &AdversaryState, family: &[TableColoring], a: &Point) -> u8 {
    if state.slots.is_empty() {
        return 0;
    }
    let f = &family[state.slots.len() - 1];
    let d = a.d().max(1) as u64;
    let rank = state
        .positions()
        .iter()
        .fold(0u64, |acc, &t| acc * d + a.get(t) as u64);
    f.at_rank(rank)
}

/// Builds levels `0..horizon`. At time `t` every strategy sees levels `< t`;
/// slots are then filled lowest strategy index first, slot `r` taking the
/// earliest chain element of length `< t` carrying `X(r)` variables that first
/// occur at or after the length of the word in slot `r - 1`.
pub fn adversary_levels(
    prefix: &SectionLayout,
    family: &[TableColoring],
    strategies: &mut [Box<dyn Strategy>],
    horizon: usize,
) -> Result<AdversaryRun> {
    verify_family(prefix, family)?;
    let (d, k) = (prefix.d(), prefix.k());
    let mut levels = Levels::new(d, k);
    let mut history: Vec<Vec<VariableWord>> = vec![Vec::new(); strategies.len()];
    let mut trace = Vec::with_capacity(horizon);
    for t in 0..horizon {
        for (w, strategy) in strategies.iter_mut().enumerate() {
            let out = strategy.next(&levels)?;
            if !out.is_normalized() {
                return Err(EnshError::Contract(format!(
                    "strategy {w} emitted `{out}`, not normalized"
                )));
            }
            let chain = &mut history[w];
            match chain.last() {
                Some(prev) if *prev == out => {}
                Some(prev) if !out.symbols().starts_with(prev.symbols()) => {
                    return Err(EnshError::Contract(format!(
                        "strategy {w} emitted `{out}`, which does not extend `{prev}`"
                    )))
                }
                _ => chain.push(out),
            }
        }
        let mut slots: Vec<Slot> = Vec::new();
        for (w, chain) in history.iter().enumerate().take(t) {
            let r = slots.len();
            if r == prefix.num_sections() {
                break;
            }
            let after = slots.last().map_or(0, |s| s.word.len());
            let pick = chain
                .iter()
                .filter(|u| u.len() < t)
                .find_map(|u| normalize_slot(u, prefix.size(r), after));
            if let Some((word, positions)) = pick {
                slots.push(Slot {
                    strategy: w,
                    word,
                    positions,
                });
            }
        }
        let state = AdversaryState { t, slots };
        for (r, s) in state.slots.iter().enumerate() {
            let after = if r == 0 {
                0
            } else {
                state.slots[r - 1].word.len()
            };
            let occupied = s.word.first_occurrences();
            if s.word.len() >= t
                || s.positions != occupied
                || s.positions.len() != prefix.size(r)
                || s.positions.iter().any(|&p| p < after)
            {
                return Err(EnshError::Internal(format!(
                    "slot {r} breaks the scheduler invariants at time {t}"
                )));
            }
        }
        let table = TableColoring::from_fn(d, t, k, |a| level_color(&state, family, a))?;
        levels.push(table)?;
        trace.push(state);
    }
    Ok(AdversaryRun {
        prefix: prefix.clone(),
        levels,
        trace,
        strategies: strategies.iter().map(|s| s.name()).collect(),
    })
}

/// Recomputes every defined level from the trace and the family.
pub fn level_identity_holds(run: &AdversaryRun, family: &[TableColoring]) -> Result<bool> {
    for (n, state) in run.trace.iter().enumerate() {
        let table = run
            .levels
            .level(n)
            .ok_or_else(|| EnshError::Internal(format!("level {n} missing")))?;
        let size = space_size(run.levels.d(), n)?;
        for i in 0..size {
            let a = unrank_point(i, n, run.levels.d())?;
            if table.at_rank(i) != level_color(state, family, &a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyConfig {
    pub slots: usize,
    pub horizon: usize,
    pub slash: Slash,
}

/// Where one greedy slot stopped. `hat` is `word ^ x_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StuckSlot {
    #[serde(with = "word_text")]
    pub word: VariableWord,
    #[serde(with = "word_text")]
    pub hat: VariableWord,
    pub n: usize,
    /// Length of the overwritten prefix, `|hat| of the slot below`.
    pub prefix: usize,
    /// The word left no room below the horizon to look for an extension.
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StuckReport {
    pub horizon: usize,
    pub slots: Vec<StuckSlot>,
    pub sequence: Vec<usize>,
    pub restarts: usize,
    pub extensions: usize,
    /// All requested slots stuck with room to spare.
    pub complete: bool,
}

impl StuckReport {
    pub fn hats(&self) -> Vec<VariableWord> {
        self.slots.iter().map(|s| s.hat.clone()).collect()
    }
}

/// Runs greedy slots against the levels over time. At time `t` the lowest slot
/// with a monochromatic one-more-variable extension below length `t` takes it
/// and the slots above restart; once every slot is stuck a new slot opens after
/// the top one. Time stops at the horizon and the slots then settle.
pub fn greedy_stuck_words(levels: &Levels, config: &GreedyConfig) -> Result<StuckReport> {
    let horizon = config.horizon;
    if horizon > levels.len() {
        return Err(EnshError::Precondition(format!(
            "levels defined below {} but horizon is {horizon}",
            levels.len()
        )));
    }
    let d = levels.d();
    struct State {
        word: VariableWord,
        searched: usize,
    }
    let open = |p: usize| State {
        word: VariableWord::from_parts_unchecked(d, vec![Symbol::Const(0); p], 0),
        searched: p,
    };
    let prefix_of = |slots: &[State], r: usize| {
        if r == 0 {
            0
        } else {
            slots[r - 1].word.len() + 1
        }
    };
    let mut slots: Vec<State> = Vec::new();
    let (mut restarts, mut extensions) = (0, 0);
    let mut budget = EXTENSION_LIMIT;
    let mut t = 1;
    loop {
        let mut changed = false;
        for r in 0..slots.len() {
            let p = prefix_of(&slots, r);
            let from = slots[r].searched + 1;
            let found = find_extension(
                levels,
                &slots[r].word,
                p,
                from..t,
                config.slash,
                &mut budget,
            )?;
            match found {
                Some(w) => {
                    slots[r] = State {
                        searched: w.len(),
                        word: w,
                    };
                    if slots.len() > r + 1 {
                        restarts += 1;
                        slots.truncate(r + 1);
                    }
                    extensions += 1;
                    changed = true;
                    break;
                }
                None => slots[r].searched = slots[r].searched.max(t - 1),
            }
        }
        if !changed && slots.len() < config.slots {
            let p = prefix_of(&slots, slots.len());
            if p < t {
                slots.push(open(p));
                changed = true;
            }
        }
        if t < horizon {
            t += 1;
        } else if !changed {
            break;
        }
    }
    let mut out = Vec::new();
    for (r, s) in slots.iter().enumerate() {
        let n = s.word.nvars() + 1;
        let mut hat = s.word.symbols().to_vec();
        hat.push(Symbol::Var(n as u32 - 1));
        out.push(StuckSlot {
            word: s.word.clone(),
            hat: VariableWord::from_parts_unchecked(d, hat, n),
            n,
            prefix: prefix_of(&slots, r),
            saturated: s.word.len() + 1 >= horizon,
        });
    }
    let complete = out.len() == config.slots && out.iter().all(|s| !s.saturated);
    Ok(StuckReport {
        horizon,
        sequence: out.iter().map(|s| s.n).collect(),
        slots: out,
        restarts,
        extensions,
        complete,
    })
}

/// The witness read off for one prefix `n_0..n_r` of the extracted sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedWitness {
    pub seq: Vec<usize>,
    pub digits: String,
    pub verified: bool,
    /// The monochromatic section word found when verification fails.
    pub counterexample: Option<ShCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub sequence: Vec<usize>,
    pub witnesses: Vec<ExtractedWitness>,
}

impl Extraction {
    pub fn all_verified(&self) -> bool {
        self.witnesses.iter().all(|w| w.verified)
    }

    /// Index of the first prefix whose witness fails.
    pub fn first_failure(&self) -> Option<usize> {
        self.witnesses.iter().position(|w| !w.verified)
    }
}

/// `h(a) = a_0' ... a_r'` with `a_s' = hat_s(a_s)` cut to `[|hat_{s-1}|, |hat_s|)`.
pub fn h_map(hats: &[VariableWord], a: &Point) -> Result<Point> {
    let mut digits = Vec::new();
    let mut at = 0;
    let mut lo = 0;
    for hat in hats {
        let n = hat.nvars();
        if at + n > a.len() {
            return Err(EnshError::Contract(format!(
                "point of length {} is too short for the slots",
                a.len()
            )));
        }
        let block = Point::from_digits(a.d(), (at..at + n).map(|t| a.get(t)).collect())?;
        let full = substitute_total(hat, &block)?;
        digits.extend((lo..hat.len()).map(|t| full.get(t)));
        at += n;
        lo = hat.len();
    }
    Point::from_digits(a.d(), digits)
}

/// Checks that no extension of `hat_r` with the same variable count is
/// monochromatic under any overwrite of its first `|hat_{r-1}|` symbols (up to
/// the levels' horizon), then verifies `f = c o h` for every prefix.
pub fn extract_witness_family(
    hats: &[VariableWord],
    levels: &Levels,
    slash: Slash,
) -> Result<Extraction> {
    let d = levels.d();
    let mut budget = EXTENSION_LIMIT;
    for (r, hat) in hats.iter().enumerate() {
        let prefix = if r == 0 { 0 } else { hats[r - 1].len() };
        if hat.len() <= prefix || hat.len() >= levels.len() {
            return Err(EnshError::Precondition(format!(
                "stuck word {r} does not fit below the horizon"
            )));
        }
        if !verify_stuck(
            levels,
            hat,
            hat.nvars(),
            prefix,
            slash,
            hat.len()..levels.len(),
            &mut budget,
        )? {
            return Err(EnshError::Precondition(format!(
                "stuck word {r} `{hat}` has a monochromatic extension below the horizon"
            )));
        }
    }
    let sequence: Vec<usize> = hats.iter().map(|h| h.nvars()).collect();
    let mut witnesses = Vec::new();
    for r in 0..hats.len() {
        let seq = sequence[..=r].to_vec();
        let layout = SectionLayout::new(d, levels.k(), seq.clone())?;
        let table = levels.level(hats[r].len()).expect("checked above");
        let c = Coloring::Table(table.clone());
        let values = crate::word::all_points(d, layout.total())?
            .map(|a| c.color(&h_map(&hats[..=r], &a)?))
            .collect::<Result<Vec<u8>>>()?;
        let f = TableColoring::new(d, layout.total(), levels.k(), values)?;
        let counterexample = find_sh_certificate(&Coloring::Table(f.clone()), &layout)?;
        witnesses.push(ExtractedWitness {
            seq,
            digits: f.digit_string(),
            verified: counterexample.is_none(),
            counterexample,
        });
    }
    Ok(Extraction {
        sequence,
        witnesses,
    })
}

/// Verification outcome for one stabilized slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotCheck {
    #[serde(flatten)]
    pub slot: StableSlot,
    pub no_extension: bool,
}

/// Both directions against one target prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryReport {
    pub horizon: usize,
    pub slash: Slash,
    pub prefix: Vec<usize>,
    pub strategies: Vec<String>,
    /// Active strategy indices per time step.
    pub trace: Vec<Vec<usize>>,
    pub level_identity: bool,
    pub stabilized: Vec<SlotCheck>,
    pub stuck: StuckReport,
    pub extraction: Option<Extraction>,
}

impl AdversaryReport {
    pub fn passed(&self) -> bool {
        self.level_identity
            && self.stabilized.iter().all(|s| s.no_extension)
            && self.extraction.as_ref().is_none_or(|e| e.all_verified())
    }
}

/// Builds levels against the strategies, checks the stabilized slots, then runs
/// the greedy slots on the same levels and extracts witnesses from their stuck
/// words when they all fit below the horizon.
pub fn duel(
    prefix: &SectionLayout,
    specs: &[StrategySpec],
    horizon: usize,
    slash: Slash,
) -> Result<AdversaryReport> {
    let family = witness_family(prefix)?;
    let mut strategies = specs
        .iter()
        .map(|s| s.build(prefix.d()))
        .collect::<Result<Vec<_>>>()?;
    let run = adversary_levels(prefix, &family, &mut strategies, horizon)?;
    let level_identity = level_identity_holds(&run, &family)?;
    let stabilized = run
        .stabilized()
        .into_iter()
        .map(|slot| {
            let target = prefix.size(slot.slot);
            let no_extension =
                verify_no_extension(&run.levels, &slot.word, target, horizon, slot.since)?;
            Ok(SlotCheck { slot, no_extension })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = GreedyConfig {
        slots: prefix.num_sections(),
        horizon,
        slash,
    };
    let stuck = greedy_stuck_words(&run.levels, &config)?;
    let fits: Vec<VariableWord> = stuck
        .slots
        .iter()
        .take_while(|s| !s.saturated)
        .map(|s| s.hat.clone())
        .collect();
    let extraction = if fits.is_empty() {
        None
    } else {
        Some(extract_witness_family(&fits, &run.levels, slash)?)
    };
    Ok(AdversaryReport {
        horizon,
        slash,
        prefix: prefix.seq().to_vec(),
        strategies: run.strategies.clone(),
        trace: run.trace.iter().map(|s| s.active()).collect(),
        level_identity,
        stabilized,
        stuck,
        extraction,
    })
}
