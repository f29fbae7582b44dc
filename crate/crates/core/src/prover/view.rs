//! Reduced instances of a coloring quad and the bookkeeping that maps their
//! words and certificates back to the original quad.
//!
//! A view keeps a subset of the original blocks, fixes every other position to a
//! constant, and may complement inputs (`mu`), exchange the indices 01 and 10
//! (`swap`) and complement colors (`eps`):
//!
//! `view_f_b(a) = eps ^ f_{perm(b)}(fill + place(a ^ mu))`, with
//! `perm(b) = swap^s(b ^ (mu, mu))`.
//!
//! Edge restrictions "not f_p = f_q = j" are stored in original terms together
//! with what to do when a point violates them: either the violation directly
//! yields an equal-color word, or it is the point an earlier lazy search step
//! assumed not to exist (an escape back to that step).

use std::cell::Cell;

use crate::checker::ShCertificate;
use crate::coloring::Coloring;
use crate::error::{EnshError, Result};
use crate::word::{Point, SectionLayout, Symbol, VariableWord};

use super::{ColoringQuad, QuadOutcome};

/// A finite set of positions, sorted.
pub type Set = Vec<usize>;

pub fn union(a: &[usize], b: &[usize]) -> Set {
    let mut out: Set = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn minus(a: &[usize], b: &[usize]) -> Set {
    a.iter()
        .copied()
        .filter(|t| b.binary_search(t).is_err())
        .collect()
}

/// Index of `b = b(0) b(1)` as `2*b(0) + b(1)`.
pub fn b_name(b: usize) -> &'static str {
    ["00", "01", "10", "11"][b]
}

fn swap_index(b: usize) -> usize {
    match b {
        1 => 2,
        2 => 1,
        other => other,
    }
}

/// Why a computation stopped early.
#[derive(Debug)]
pub enum Stop {
    Outcome(QuadOutcome),
    Escape { id: u64, point: Point },
    Fault(EnshError),
}

impl From<EnshError> for Stop {
    fn from(e: EnshError) -> Self {
        Stop::Fault(e)
    }
}

pub type Flow<T> = std::result::Result<T, Stop>;

/// Block structure of a view: sizes and start positions in view coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geom {
    pub sizes: Vec<usize>,
    pub starts: Vec<usize>,
    pub len: usize,
}

impl Geom {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut starts = Vec::with_capacity(sizes.len());
        let mut len = 0;
        for &n in &sizes {
            starts.push(len);
            len += n;
        }
        Geom { sizes, starts, len }
    }

    pub fn of(layout: &SectionLayout) -> Self {
        Self::new(layout.seq().to_vec())
    }

    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn block(&self, j: usize) -> std::ops::Range<usize> {
        self.starts[j]..self.starts[j] + self.sizes[j]
    }

    pub fn require(&self, blocks: usize, what: &str) -> Flow<()> {
        if self.blocks() < blocks {
            return Err(Stop::Fault(EnshError::Precondition(format!(
                "{what} needs {blocks} blocks, only {} available",
                self.blocks()
            ))));
        }
        Ok(())
    }
}

/// Subsets of a block in rank order of the block's digits (first position most
/// significant), starting with the empty set.
pub fn block_subsets(range: std::ops::Range<usize>) -> impl Iterator<Item = Set> {
    let n = range.len();
    let start = range.start;
    (0u64..(1u64 << n)).map(move |mask| {
        (0..n)
            .filter(|&t| (mask >> (n - 1 - t)) & 1 == 1)
            .map(|t| start + t)
            .collect()
    })
}

/// View symbols: `Const(1)` on `ones`, the given variables, `Const(0)` elsewhere.
pub fn word_symbols(len: usize, ones: &[usize], vars: &[(usize, u32)]) -> Vec<Symbol> {
    let mut syms = vec![Symbol::Const(0); len];
    for &t in ones {
        syms[t] = Symbol::Const(1);
    }
    for &(t, m) in vars {
        syms[t] = Symbol::Var(m);
    }
    syms
}

#[derive(Clone, Debug)]
pub struct View {
    blocks: Vec<usize>,
    geom: Geom,
    positions: Vec<usize>,
    fill: Vec<usize>,
    total: usize,
    pub mu: bool,
    pub swap: bool,
    pub eps: bool,
}

impl View {
    pub fn root(layout: &SectionLayout) -> Self {
        View {
            blocks: (0..layout.num_sections()).collect(),
            geom: Geom::of(layout),
            positions: (0..layout.total()).collect(),
            fill: Vec::new(),
            total: layout.total(),
            mu: false,
            swap: false,
            eps: false,
        }
    }

    pub fn geom(&self) -> &Geom {
        &self.geom
    }

    pub fn len(&self) -> usize {
        self.geom.len
    }

    pub fn perm(&self, b: usize) -> usize {
        let c = if self.mu { 3 - b } else { b };
        if self.swap {
            swap_index(c)
        } else {
            c
        }
    }

    /// Keeps the view blocks in `keep` (increasing); dropped positions take the
    /// value 1 on `ones` and 0 elsewhere (view terms).
    pub fn sub(&self, keep: &[usize], ones: &[usize]) -> View {
        let mut kept_pos = vec![false; self.len()];
        for &j in keep {
            for t in self.geom.block(j) {
                kept_pos[t] = true;
            }
        }
        let mut fill = self.fill.clone();
        let mut positions = Vec::new();
        for (t, &kept) in kept_pos.iter().enumerate() {
            if kept {
                positions.push(self.positions[t]);
            } else if (ones.binary_search(&t).is_ok()) != self.mu {
                fill.push(self.positions[t]);
            }
        }
        fill.sort_unstable();
        View {
            blocks: keep.iter().map(|&j| self.blocks[j]).collect(),
            geom: Geom::new(keep.iter().map(|&j| self.geom.sizes[j]).collect()),
            positions,
            fill,
            total: self.total,
            mu: self.mu,
            swap: self.swap,
            eps: self.eps,
        }
    }

    /// Blocks `from..` with the earlier blocks fixed to `ones`.
    pub fn suffix(&self, from: usize, ones: &[usize]) -> View {
        let keep: Vec<usize> = (from..self.geom.blocks()).collect();
        self.sub(&keep, ones)
    }

    /// Original block indices kept and original positions fixed to 1.
    pub fn placement(&self) -> (Vec<usize>, Vec<usize>) {
        (self.blocks.clone(), self.fill.clone())
    }

    pub fn complemented(&self) -> View {
        View {
            eps: !self.eps,
            ..self.clone()
        }
    }

    pub fn mirrored(&self) -> View {
        View {
            mu: !self.mu,
            ..self.clone()
        }
    }

    pub fn swapped(&self) -> View {
        View {
            swap: !self.swap,
            ..self.clone()
        }
    }

    /// The original point a view point stands for.
    pub fn embed(&self, a: &[usize]) -> Point {
        let mut ones = self.fill.clone();
        if self.mu {
            let mut i = 0;
            for (t, &p) in self.positions.iter().enumerate() {
                if i < a.len() && a[i] == t {
                    i += 1;
                } else {
                    ones.push(p);
                }
            }
        } else {
            ones.extend(a.iter().map(|&t| self.positions[t]));
        }
        ones.sort_unstable();
        Point::from_nonzero_sorted(2, self.total, ones.into_iter().map(|p| (p, 1)).collect())
    }

    /// View coordinates of an original point of this view.
    pub fn coords(&self, x: &Point) -> Set {
        if self.mu {
            (0..self.len())
                .filter(|&t| x.get(self.positions[t]) == 0)
                .collect()
        } else {
            x.support()
                .into_iter()
                .filter_map(|p| self.positions.binary_search(&p).ok())
                .collect()
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        let outside: Vec<usize> = x
            .support()
            .into_iter()
            .filter(|p| self.positions.binary_search(p).is_err())
            .collect();
        x.len() == self.total && outside == self.fill
    }

    fn pull_symbols(&self, syms: &[Symbol], swap_vars: bool) -> Vec<Symbol> {
        let mut out = vec![Symbol::Const(0); self.total];
        for &p in &self.fill {
            out[p] = Symbol::Const(1);
        }
        for (t, &s) in syms.iter().enumerate() {
            out[self.positions[t]] = match s {
                Symbol::Const(c) => Symbol::Const(c ^ self.mu as u8),
                Symbol::Var(m) if swap_vars && m < 2 => Symbol::Var(1 - m),
                v => v,
            };
        }
        out
    }

    /// A section certificate for view coloring `b` in original terms.
    pub fn pull_cert(&self, b: usize, s: usize, syms: &[Symbol], color: u8) -> Flow<QuadOutcome> {
        let word = VariableWord::new(2, self.pull_symbols(syms, false)).map_err(Stop::Fault)?;
        Ok(QuadOutcome::SectionCert {
            b: self.perm(b),
            cert: ShCertificate {
                s: self.blocks[s],
                word,
                color: color ^ self.eps as u8,
            },
        })
    }

    /// A `[0,2]`-word with all four view colors equal to `color`, in original terms.
    pub fn pull_word(&self, syms: &[Symbol], color: u8) -> Flow<QuadOutcome> {
        let word =
            VariableWord::loose(2, self.pull_symbols(syms, self.swap)).map_err(Stop::Fault)?;
        Ok(QuadOutcome::EqualWord {
            word,
            color: color ^ self.eps as u8,
        })
    }
}

/// What a violated restriction tells us.
#[derive(Clone, Debug)]
pub enum Action {
    /// The violation point is the object an earlier lazy step assumed absent.
    Escape(u64),
    /// The violation at `x` gives the word `Const(1)` on `a0`, `x_var` on the
    /// rest of `x` (coordinates of `parent`), all four colors `color` (view terms).
    Word {
        parent: View,
        a0: Set,
        var: u32,
        color: u8,
    },
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub p: usize,
    pub q: usize,
    pub color: u8,
    pub domain: View,
    pub action: Action,
}

impl Restriction {
    /// "not view_f_p = view_f_q = j" on all points of `view`.
    pub fn new(view: &View, p: usize, q: usize, j: u8, action: Action) -> Self {
        Restriction {
            p: view.perm(p),
            q: view.perm(q),
            color: j ^ view.eps as u8,
            domain: view.clone(),
            action,
        }
    }

    fn matches(&self, p: usize, q: usize, j: u8) -> bool {
        self.color == j && ((self.p, self.q) == (p, q) || (self.p, self.q) == (q, p))
    }
}

pub type Restrictions = Vec<Restriction>;

pub fn with(restr: &Restrictions, r: Restriction) -> Restrictions {
    let mut out = restr.clone();
    out.push(r);
    out
}

pub struct Ctx<'a> {
    pub quad: &'a ColoringQuad,
    next_id: Cell<u64>,
    ceiling: Option<u64>,
    queries: Cell<u64>,
}

impl<'a> Ctx<'a> {
    pub fn new(quad: &'a ColoringQuad, ceiling: Option<u64>) -> Self {
        Ctx {
            quad,
            next_id: Cell::new(0),
            ceiling,
            queries: Cell::new(0),
        }
    }

    pub fn fresh_id(&self) -> u64 {
        let id = self.next_id.get();
        self.next_id.set(id + 1);
        id
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn color_original(&self, b: usize, x: &Point) -> Flow<u8> {
        let q = self.queries.get() + 1;
        self.queries.set(q);
        if let Some(limit) = self.ceiling {
            if q > limit {
                return Err(Stop::Fault(EnshError::TooLarge {
                    engine: "prover",
                    detail: format!("query ceiling {limit} exceeded"),
                }));
            }
        }
        self.quad.color(b, x).map_err(Stop::Fault)
    }

    pub fn color(&self, view: &View, b: usize, a: &[usize]) -> Flow<u8> {
        Ok(self.color_original(view.perm(b), &view.embed(a))? ^ view.eps as u8)
    }

    fn fire(&self, r: &Restriction, x: &Point) -> Flow<std::convert::Infallible> {
        if !r.domain.contains(x) {
            return Err(Stop::Fault(EnshError::Internal(
                "restriction applied outside the view it was established on".into(),
            )));
        }
        match &r.action {
            Action::Escape(id) => Err(Stop::Escape {
                id: *id,
                point: x.clone(),
            }),
            Action::Word {
                parent,
                a0,
                var,
                color,
            } => {
                let coords = parent.coords(x);
                let rest = minus(&coords, a0);
                let vars: Vec<(usize, u32)> = rest.iter().map(|&t| (t, *var)).collect();
                let syms = word_symbols(parent.len(), a0, &vars);
                Err(Stop::Outcome(parent.pull_word(&syms, *color)?))
            }
        }
    }

    /// Colors `(view_f_p(a), view_f_q(a))`, using the restriction
    /// "not view_f_p = view_f_q = j" when both equal `j`.
    pub fn assume_not_both(
        &self,
        view: &View,
        restr: &Restrictions,
        p: usize,
        q: usize,
        j: u8,
        a: &[usize],
    ) -> Flow<(u8, u8)> {
        let x = view.embed(a);
        let e = view.eps as u8;
        let (pp, qq, jj) = (view.perm(p), view.perm(q), j ^ e);
        let fp = self.color_original(pp, &x)?;
        let fq = self.color_original(qq, &x)?;
        if fp != jj || fq != jj {
            return Ok((fp ^ e, fq ^ e));
        }
        let r = restr
            .iter()
            .rev()
            .find(|r| r.matches(pp, qq, jj))
            .ok_or_else(|| {
                Stop::Fault(EnshError::Internal(format!(
                    "no restriction on ({}, {}) color {jj}",
                    b_name(pp),
                    b_name(qq)
                )))
            })?;
        match self.fire(r, &x)? {}
    }

    /// Fires the first restriction in scope violated at `a`, if any.
    pub fn check_all(&self, view: &View, restr: &Restrictions, a: &[usize]) -> Flow<()> {
        let x = view.embed(a);
        let mut colors = [None; 4];
        for r in restr {
            for b in [r.p, r.q] {
                if colors[b].is_none() {
                    colors[b] = Some(self.color_original(b, &x)?);
                }
            }
            if colors[r.p] == Some(r.color) && colors[r.q] == Some(r.color) {
                match self.fire(r, &x)? {}
            }
        }
        Ok(())
    }

    pub fn has(&self, view: &View, restr: &Restrictions, p: usize, q: usize, j: u8) -> bool {
        let (pp, qq, jj) = (view.perm(p), view.perm(q), j ^ view.eps as u8);
        restr.iter().any(|r| r.matches(pp, qq, jj))
    }
}

/// Plain coloring of view points of a single coloring (used by the standalone
/// dichotomy procedures).
pub fn plain(f: &Coloring) -> impl Fn(&[usize]) -> Flow<u8> + '_ {
    move |a: &[usize]| -> Flow<u8> {
        let p = Point::from_set(f.n(), a.iter().copied()).map_err(Stop::Fault)?;
        f.color(&p).map_err(Stop::Fault)
    }
}

pub fn into_result<T>(flow: Flow<T>) -> Result<T> {
    match flow {
        Ok(t) => Ok(t),
        Err(Stop::Fault(e)) => Err(e),
        Err(Stop::Escape { id, .. }) => Err(EnshError::Internal(format!("escape {id} not caught"))),
        Err(Stop::Outcome(_)) => Err(EnshError::Internal("unexpected early outcome".into())),
    }
}
