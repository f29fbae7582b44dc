//! Certificate-producing prover for binary two-colorings whose layout starts
//! with a block of size 2.
//!
//! A coloring `f` is sliced into the quad `f_b(a) = f(b a)`; the quad solver
//! returns either a section certificate for one slice or a word `v` in `x0, x1`
//! with `f_b(v(b))` the same for all four `b`, and `x0 x1 v` is then a section-0
//! certificate for `f`.
//!
//! The quad solver first halves the layout four times, each time either finding
//! a point where two slices share a color on the first half or restricting to
//! the first half. Finding that point is not attempted up front: the prover
//! assumes it is absent and, if a later step meets a point proving otherwise,
//! returns to the halving step and takes the other branch. Every output is
//! verified against the original coloring.

pub mod budget;
pub mod lemmas;
pub mod oracles;
mod view;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::checker::{verify_sh_certificate, word_text, ShCertificate};
use crate::coloring::Coloring;
use crate::error::{EnshError, Result};
use crate::word::{
    all_points, is_section_word, substitute_total, Point, SectionLayout, Symbol, VariableWord,
};

pub use budget::{required_blocks, required_length, LengthBudget, Profile};
pub use lemmas::{
    search_or_certify_family, search_or_certify_mixed, search_or_certify_pair00, verify_family,
    verify_pair, Dichotomy,
};
pub use oracles::OracleSpec;
pub use view::b_name;

use lemmas::{mixed, pair00, subsets_by_size, Branch};
use view::{
    block_subsets, union, with, word_symbols, Action, Ctx, Flow, Restriction, Restrictions, Set,
    Stop, View,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuadOutcome {
    /// Certificate for the slice with index `b` (`2*b(0) + b(1)`).
    SectionCert { b: usize, cert: ShCertificate },
    /// `f_b(v(b)) = color` for every `b`.
    EqualWord {
        #[serde(with = "word_text")]
        word: VariableWord,
        color: u8,
    },
}

#[derive(Clone)]
enum Source {
    Four(Vec<Coloring>),
    Slices(Coloring),
}

/// Four binary two-colorings on a common layout.
#[derive(Clone)]
pub struct ColoringQuad {
    layout: SectionLayout,
    source: Source,
}

fn binary_layout(layout: &SectionLayout) -> Result<()> {
    if layout.d() != 2 || layout.k() != 2 {
        return Err(EnshError::Contract(
            "the prover handles d = k = 2 only".into(),
        ));
    }
    Ok(())
}

impl ColoringQuad {
    pub fn new(layout: SectionLayout, fs: [Coloring; 4]) -> Result<Self> {
        binary_layout(&layout)?;
        if fs
            .iter()
            .any(|f| f.d() != 2 || f.k() != 2 || f.n() != layout.total())
        {
            return Err(EnshError::Contract(format!(
                "quad colorings must be binary two-colorings of length {}",
                layout.total()
            )));
        }
        Ok(ColoringQuad {
            layout,
            source: Source::Four(fs.to_vec()),
        })
    }

    /// `f_b(a) = f(b a)` on the layout without its first block (of size 2).
    pub fn slices(f: &Coloring, layout: &SectionLayout) -> Result<Self> {
        binary_layout(layout)?;
        if layout.seq().first() != Some(&2) || layout.num_sections() < 2 {
            return Err(EnshError::Precondition(
                "layout must start with a block of size 2 and continue".into(),
            ));
        }
        if f.d() != 2 || f.k() != 2 || f.n() != layout.total() {
            return Err(EnshError::Contract(format!(
                "coloring must be a binary two-coloring of length {}",
                layout.total()
            )));
        }
        let rest = SectionLayout::new(2, 2, layout.seq()[1..].to_vec())?;
        Ok(ColoringQuad {
            layout: rest,
            source: Source::Slices(f.clone()),
        })
    }

    pub fn layout(&self) -> &SectionLayout {
        &self.layout
    }

    pub fn color(&self, b: usize, x: &Point) -> Result<u8> {
        match &self.source {
            Source::Four(fs) => fs[b].color(x),
            Source::Slices(f) => {
                let mut entries: Vec<(usize, u8)> = [(0, (b >> 1) as u8), (1, (b & 1) as u8)]
                    .into_iter()
                    .filter(|&(_, u)| u != 0)
                    .collect();
                entries.extend(x.nonzero().into_iter().map(|(t, u)| (t + 2, u)));
                f.color(&Point::from_nonzero_sorted(2, x.len() + 2, entries))
            }
        }
    }

    /// Recomputes the outcome's equalities on this quad.
    pub fn verify(&self, outcome: &QuadOutcome) -> Result<bool> {
        match outcome {
            QuadOutcome::SectionCert { b, cert } => {
                if *b > 3
                    || cert.s >= self.layout.num_sections()
                    || cert.word.len() != self.layout.total()
                {
                    return Ok(false);
                }
                let word = VariableWord::loose(2, cert.word.symbols().to_vec())?;
                if !is_section_word(&word, &self.layout, cert.s)? {
                    return Ok(false);
                }
                for a in all_points(2, word.nvars())? {
                    if self.color(*b, &substitute_total(&word, &a)?)? != cert.color {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            QuadOutcome::EqualWord { word, color } => {
                if word.len() != self.layout.total() || word.var_bound() > 2 || word.d() > 2 {
                    return Ok(false);
                }
                for b in 0..4u8 {
                    let a = Point::from_digits(2, vec![b >> 1, b & 1])?;
                    if self.color(b as usize, &substitute_total(word, &a)?)? != *color {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

const E1: [(usize, usize); 2] = [(0, 1), (2, 3)];
const E2: [(usize, usize); 2] = [(0, 2), (1, 3)];
/// Halving order: edge pair (E1 then E2) and color.
const STEPS: [(usize, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

type Labels = [(usize, usize)];

/// One of the three restriction profiles left after the halvings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeProfile {
    /// not f01 = f11 = 0 and not f10 = f11 = 0
    Corner,
    /// both colors restricted on 00-01 and on 01-11
    Shared,
    /// color 0 restricted on 00-01 and 01-11, color 1 on 00-10 and 10-11
    Split,
}

fn halve<T>(
    ctx: &Ctx,
    view: &View,
    restr: &Restrictions,
    labels: &Labels,
    k: &dyn Fn(&View, &Restrictions, &Labels) -> Flow<T>,
) -> Flow<T> {
    let step = labels.len();
    if step == STEPS.len() {
        return k(view, restr, labels);
    }
    let (pair, c) = STEPS[step];
    let edges = if pair == 0 { E1 } else { E2 };
    let h = view.geom().blocks() / 2;
    let id = ctx.fresh_id();
    let prefix = view.sub(&(0..h).collect::<Vec<_>>(), &[]);
    let (p, q) = edges[0];
    let r1 = with(
        restr,
        Restriction::new(&prefix, p, q, c, Action::Escape(id)),
    );
    let l1: Vec<(usize, usize)> = labels.iter().copied().chain([edges[0]]).collect();
    match halve(ctx, &prefix, &r1, &l1, k) {
        Err(Stop::Escape { id: e, point }) if e == id => {
            let a0 = view.coords(&point);
            let suffix = view.suffix(h, &a0);
            let (p2, q2) = edges[1];
            let action = Action::Word {
                parent: view.clone(),
                a0,
                var: pair as u32,
                color: c,
            };
            let r2 = with(restr, Restriction::new(&suffix, p2, q2, c, action));
            let l2: Vec<(usize, usize)> = labels.iter().copied().chain([edges[1]]).collect();
            halve(ctx, &suffix, &r2, &l2, k)
        }
        other => other,
    }
}

fn common(e: (usize, usize), g: (usize, usize)) -> usize {
    if e.0 == g.0 || e.0 == g.1 {
        e.0
    } else {
        e.1
    }
}

fn classify(
    ctx: &Ctx,
    view: &View,
    restr: &Restrictions,
    labels: &Labels,
) -> Flow<(View, EdgeProfile)> {
    let v0 = common(labels[0], labels[2]);
    let v1 = common(labels[1], labels[3]);
    let (v, profile) = match (v0, v1) {
        (3, _) => (view.clone(), EdgeProfile::Corner),
        (0, _) => (view.mirrored(), EdgeProfile::Corner),
        (_, 3) => (view.complemented(), EdgeProfile::Corner),
        (_, 0) => (view.mirrored().complemented(), EdgeProfile::Corner),
        (1, 1) => (view.clone(), EdgeProfile::Shared),
        (2, 2) => (view.swapped(), EdgeProfile::Shared),
        (1, 2) => (view.clone(), EdgeProfile::Split),
        _ => (view.complemented(), EdgeProfile::Split),
    };
    let needed: &[(usize, usize, u8)] = match profile {
        EdgeProfile::Corner => &[(1, 3, 0), (2, 3, 0)],
        EdgeProfile::Shared => &[(0, 1, 0), (0, 1, 1), (1, 3, 0), (1, 3, 1)],
        EdgeProfile::Split => &[(0, 1, 0), (0, 2, 1), (1, 3, 0), (2, 3, 1)],
    };
    if needed.iter().any(|&(p, q, j)| !ctx.has(&v, restr, p, q, j)) {
        return Err(Stop::Fault(EnshError::Internal(format!(
            "profile {profile:?} not established"
        ))));
    }
    Ok((v, profile))
}

fn internal<T>(msg: &str) -> Flow<T> {
    Err(Stop::Fault(EnshError::Internal(msg.to_string())))
}

/// First subset of block 0 where view coloring `b` takes color `want`; otherwise
/// block 0 carries a monochromatic section-0 word of the other color.
fn fix_first_block(ctx: &Ctx, view: &View, b: usize, want: u8) -> Flow<View> {
    view.geom().require(2, "first-block fix")?;
    for s in block_subsets(view.geom().block(0)) {
        if ctx.color(view, b, &s)? == want {
            return Ok(view.suffix(1, &s));
        }
    }
    Err(Stop::Outcome(block_zero_cert(view, b, 1 - want)?))
}

fn block_zero_cert(view: &View, b: usize, color: u8) -> Flow<QuadOutcome> {
    let vars: Vec<(usize, u32)> = view
        .geom()
        .block(0)
        .enumerate()
        .map(|(i, t)| (t, i as u32))
        .collect();
    view.pull_cert(b, 0, &word_symbols(view.len(), &[], &vars), color)
}

fn vars_on(sets: &[(&[usize], u32)]) -> Vec<(usize, u32)> {
    sets.iter()
        .flat_map(|&(s, m)| s.iter().map(move |&t| (t, m)))
        .collect()
}

/// Both color-0 restrictions meet at 11.
fn corner(ctx: &Ctx, view: &View, restr: &Restrictions) -> Flow<QuadOutcome> {
    let v1 = fix_first_block(ctx, view, 0, 1)?;
    let g11 = |a: &[usize]| ctx.color(&v1, 3, a);
    match pair00(&g11, v1.geom())? {
        Branch::Cert { s, syms, color } => v1.pull_cert(3, s, &syms, color),
        Branch::Found((a0, a1)) => {
            // f11 is 0 on both points, so f01(a0) = f10(a1) = 1
            let (f01, _) = ctx.assume_not_both(&v1, restr, 1, 3, 0, &a0)?;
            let (f10, _) = ctx.assume_not_both(&v1, restr, 2, 3, 0, &a1)?;
            if (f01, f10) != (1, 1) {
                return internal("corner word colors");
            }
            let syms = word_symbols(v1.len(), &[], &vars_on(&[(&a0, 1), (&a1, 0)]));
            v1.pull_word(&syms, 1)
        }
    }
}

/// Runs `k` on sub-views that add "not f01 = f10 = 0"; each escape from such a
/// sub-view supplies one point of a family whose unions settle the quad.
fn strengthen<T>(
    ctx: &Ctx,
    view: &View,
    restr: &Restrictions,
    profile: EdgeProfile,
    k: &dyn Fn(&View, &Restrictions) -> Flow<T>,
) -> Flow<T> {
    let v1 = fix_first_block(ctx, view, 0, 0)?;
    let geom = v1.geom().clone();
    geom.require(3, "strengthening")?;
    let (n0, n1) = (geom.sizes[0], geom.sizes[1]);
    let ms: Vec<usize> = std::iter::once(0).chain(n0..n0 + n1).collect();
    let chunk = (geom.blocks() - 2) / ms.len();
    geom.require(2 + ms.len(), "strengthening")?;
    let mut parts: Vec<Set> = Vec::with_capacity(ms.len());
    for (i, &m) in ms.iter().enumerate() {
        let keep: Vec<usize> = (2 + i * chunk..2 + (i + 1) * chunk).collect();
        let w = v1.sub(&keep, &[m]);
        let id = ctx.fresh_id();
        let r = with(restr, Restriction::new(&w, 1, 2, 0, Action::Escape(id)));
        match k(&w, &r) {
            Err(Stop::Escape { id: e, point }) if e == id => {
                let am = v1.coords(&point);
                if am.first() != Some(&m) {
                    return internal("escape point outside its chunk");
                }
                parts.push(am);
            }
            other => return other,
        }
    }
    // f01 = f10 = 0 on every part; unions containing parts[0] have f11 = 1
    let (f01, f11) = ctx.assume_not_both(&v1, restr, 1, 3, 0, &parts[0])?;
    if (f01, f11) != (0, 1) {
        return internal("strengthening base colors");
    }
    for j in subsets_by_size(n1) {
        let top = *j.last().expect("nonempty");
        let mut a = parts[0].clone();
        for &i in &j[..j.len() - 1] {
            a = union(&a, &parts[1 + i]);
        }
        let am = &parts[1 + top];
        if ctx.color(&v1, 3, &union(&a, am))? == 0 {
            let syms = match profile {
                EdgeProfile::Shared => {
                    let (f01, _) = ctx.assume_not_both(&v1, restr, 1, 3, 1, &a)?;
                    if f01 != 0 {
                        return internal("strengthening word colors");
                    }
                    word_symbols(v1.len(), &[], &vars_on(&[(&a, 1), (am, 0)]))
                }
                _ => {
                    let (f10, _) = ctx.assume_not_both(&v1, restr, 2, 3, 1, &a)?;
                    if f10 != 0 {
                        return internal("strengthening word colors");
                    }
                    word_symbols(v1.len(), &[], &vars_on(&[(&a, 0), (am, 1)]))
                }
            };
            return Err(Stop::Outcome(v1.pull_word(&syms, 0)?));
        }
    }
    let vars: Vec<(usize, u32)> = (0..n1)
        .flat_map(|i| parts[1 + i].iter().map(move |&t| (t, i as u32)))
        .collect();
    let syms = word_symbols(v1.len(), &parts[0], &vars);
    Err(Stop::Outcome(v1.pull_cert(3, 1, &syms, 1)?))
}

/// Shared profile plus both diagonal restrictions.
fn shared_word(ctx: &Ctx, view: &View, restr: &Restrictions) -> Flow<QuadOutcome> {
    let v1 = fix_first_block(ctx, view, 0, 0)?;
    let g01 = |a: &[usize]| ctx.color(&v1, 1, a);
    match mixed(&g01, v1.geom())? {
        Branch::Cert { s, syms, color } => v1.pull_cert(1, s, &syms, color),
        Branch::Found((a0, a1)) => {
            let (_, f10) = ctx.assume_not_both(&v1, restr, 1, 2, 1, &a1)?;
            let (_, f11) = ctx.assume_not_both(&v1, restr, 1, 3, 1, &union(&a0, &a1))?;
            if (f10, f11) != (0, 0) {
                return internal("shared word colors");
            }
            let syms = word_symbols(v1.len(), &[], &vars_on(&[(&a0, 1), (&a1, 0)]));
            v1.pull_word(&syms, 0)
        }
    }
}

/// Split profile plus both diagonal restrictions: f01 is forced to 1.
fn split_forced(ctx: &Ctx, view: &View, restr: &Restrictions) -> Flow<QuadOutcome> {
    view.geom().require(1, "forced colors")?;
    for s in block_subsets(view.geom().block(0)) {
        ctx.check_all(view, restr, &s)?;
        if ctx.color(view, 1, &s)? != 1 {
            return internal("restrictions do not force f01");
        }
    }
    block_zero_cert(view, 1, 1)
}

fn solve_cases(ctx: &Ctx, view: &View, restr: &Restrictions, labels: &Labels) -> Flow<QuadOutcome> {
    let (v, profile) = classify(ctx, view, restr, labels)?;
    match profile {
        EdgeProfile::Corner => corner(ctx, &v, restr),
        EdgeProfile::Shared => strengthen(ctx, &v, restr, profile, &|w1, r1| {
            strengthen(ctx, &w1.complemented(), r1, profile, &|w2, r2| {
                shared_word(ctx, w2, r2)
            })
        }),
        EdgeProfile::Split => strengthen(ctx, &v, restr, profile, &|w1, r1| {
            strengthen(ctx, &w1.complemented().swapped(), r1, profile, &|w2, r2| {
                split_forced(ctx, w2, r2)
            })
        }),
    }
}

fn settle(quad: &ColoringQuad, flow: Flow<QuadOutcome>) -> Result<QuadOutcome> {
    let outcome = match flow {
        Ok(o) | Err(Stop::Outcome(o)) => o,
        Err(Stop::Fault(e)) => return Err(e),
        Err(Stop::Escape { id, .. }) => {
            return Err(EnshError::Internal(format!("escape {id} reached the top")))
        }
    };
    if !quad.verify(&outcome)? {
        return Err(EnshError::Internal(format!(
            "outcome fails on the original quad: {outcome:?}"
        )));
    }
    Ok(outcome)
}

/// Outcome with the number of quad queries it took.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadReport {
    pub outcome: QuadOutcome,
    pub queries: u64,
}

pub fn solve_quad_with(quad: &ColoringQuad, ceiling: Option<u64>) -> Result<QuadReport> {
    let ctx = Ctx::new(quad, ceiling);
    let root = View::root(quad.layout());
    // the constant word 0...0 settles quads that agree at the zero point
    let zero = (0..4)
        .map(|b| ctx.color(&root, b, &[]))
        .collect::<Flow<Vec<u8>>>();
    let flow = match zero {
        Ok(z) if z.iter().all(|&c| c == z[0]) => {
            let word = VariableWord::loose(2, vec![Symbol::Const(0); root.len()])?;
            Ok(QuadOutcome::EqualWord { word, color: z[0] })
        }
        Ok(_) => halve(&ctx, &root, &Vec::new(), &[], &|v, r, l| {
            solve_cases(&ctx, v, r, l)
        }),
        Err(stop) => Err(stop),
    };
    let outcome = settle(quad, flow)?;
    Ok(QuadReport {
        outcome,
        queries: ctx.queries(),
    })
}

pub fn solve_quad(quad: &ColoringQuad) -> Result<QuadOutcome> {
    Ok(solve_quad_with(quad, None)?.outcome)
}

/// A restriction "not f_p = f_q = color" in original terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRestriction {
    pub p: String,
    pub q: String,
    pub color: u8,
}

/// The reduced quad the halvings settle on, with its recorded moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedQuad {
    pub profile: EdgeProfile,
    /// Original block indices kept.
    pub blocks: Vec<usize>,
    /// Original positions fixed to 1 (all other dropped positions are 0).
    pub fill: Vec<usize>,
    pub mirror: bool,
    pub swap: bool,
    pub complement: bool,
    pub restrictions: Vec<EdgeRestriction>,
    pub samples_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Reduction {
    Reduced(ReducedQuad),
    Settled { outcome: QuadOutcome },
}

/// Runs the four halvings and classifies the result. Restrictions are checked on
/// `samples` seeded random points of the reduced view plus its all-0 and all-1
/// points; a violation is acted on exactly as in [`solve_quad`].
pub fn reduce_edges(quad: &ColoringQuad, samples: usize, seed: u64) -> Result<Reduction> {
    let ctx = Ctx::new(quad, None);
    let root = View::root(quad.layout());
    let flow = halve(&ctx, &root, &Vec::new(), &[], &|view, restr, labels| {
        let (v, profile) = classify(&ctx, view, restr, labels)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = v.len();
        let mut points: Vec<Set> = vec![Vec::new(), (0..n).collect()];
        points.extend((0..samples).map(|_| (0..n).filter(|_| rng.random::<bool>()).collect()));
        for a in &points {
            ctx.check_all(&v, restr, a)?;
        }
        let restrictions = restr
            .iter()
            .map(|r| EdgeRestriction {
                p: b_name(r.p).into(),
                q: b_name(r.q).into(),
                color: r.color,
            })
            .collect();
        let (blocks, fill) = v.placement();
        Ok(ReducedQuad {
            profile,
            blocks,
            fill,
            mirror: v.mu,
            swap: v.swap,
            complement: v.eps,
            restrictions,
            samples_checked: points.len(),
        })
    });
    match flow {
        Ok(r) => Ok(Reduction::Reduced(r)),
        Err(Stop::Outcome(o)) => Ok(Reduction::Settled {
            outcome: settle(quad, Ok(o))?,
        }),
        Err(Stop::Fault(e)) => Err(e),
        Err(Stop::Escape { id, .. }) => {
            Err(EnshError::Internal(format!("escape {id} reached the top")))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProverOptions {
    /// Abort once this many quad queries were made.
    pub ceiling: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub cert: ShCertificate,
    pub quad_outcome: QuadOutcome,
    pub queries: u64,
    pub blocks: usize,
    pub budget_blocks: usize,
}

/// Default query ceiling: blocks squared times `2^(2B)`, `B` the largest block.
pub fn default_ceiling(layout: &SectionLayout) -> u64 {
    let blocks = layout.num_sections() as u64;
    let b = layout.seq().iter().copied().max().unwrap_or(1).min(20) as u32;
    blocks * blocks * (1u64 << (2 * b))
}

pub fn prove_prefix2(
    f: &Coloring,
    layout: &SectionLayout,
    opts: ProverOptions,
) -> Result<ProofReport> {
    let quad = ColoringQuad::slices(f, layout)?;
    let report = solve_quad_with(&quad, opts.ceiling)?;
    let (s, head, tail, color) = match &report.outcome {
        QuadOutcome::SectionCert { b, cert } => (
            cert.s + 1,
            [Symbol::Const((b >> 1) as u8), Symbol::Const((b & 1) as u8)],
            &cert.word,
            cert.color,
        ),
        QuadOutcome::EqualWord { word, color } => {
            (0, [Symbol::Var(0), Symbol::Var(1)], word, *color)
        }
    };
    let symbols: Vec<Symbol> = head
        .into_iter()
        .chain(tail.symbols().iter().copied())
        .collect();
    let cert = ShCertificate {
        s,
        word: VariableWord::new(2, symbols)?,
        color,
    };
    if !verify_sh_certificate(f, layout, &cert) {
        return Err(EnshError::Internal(format!(
            "lifted certificate fails: {cert}"
        )));
    }
    Ok(ProofReport {
        cert,
        quad_outcome: report.outcome,
        queries: report.queries,
        blocks: layout.num_sections(),
        budget_blocks: required_blocks(Profile::Prefix2, layout.seq()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(n: usize, c: u8) -> Coloring {
        Coloring::oracle(2, n, 2, "c", move |_| c)
    }

    #[test]
    fn constant_quads() {
        let layout = SectionLayout::new(2, 2, vec![1; 120]).unwrap();
        let n = layout.total();
        for c in 0..2 {
            let q =
                ColoringQuad::new(layout.clone(), [0, 1, 2, 3].map(|_| constant(n, c))).unwrap();
            match solve_quad(&q).unwrap() {
                QuadOutcome::EqualWord { color, .. } => assert_eq!(color, c),
                other => panic!("{other:?}"),
            }
        }
        // never all equal, so a certificate is the only possible outcome
        let q = ColoringQuad::new(layout.clone(), [0, 1, 0, 1].map(|c| constant(n, c))).unwrap();
        assert!(matches!(
            solve_quad(&q).unwrap(),
            QuadOutcome::SectionCert { .. }
        ));
        let q = ColoringQuad::new(layout.clone(), [1, 1, 0, 0].map(|c| constant(n, c))).unwrap();
        assert!(matches!(
            solve_quad(&q).unwrap(),
            QuadOutcome::SectionCert { .. }
        ));
        let q = ColoringQuad::new(layout, [0, 1, 1, 0].map(|c| constant(n, c))).unwrap();
        match reduce_edges(&q, 8, 1).unwrap() {
            Reduction::Reduced(r) => {
                assert_eq!(r.profile, EdgeProfile::Corner);
                assert!(r.mirror);
            }
            other => panic!("{other:?}"),
        }
    }

    /// Quad whose tuple `(f00, f01, f10, f11)` at each point is one of the
    /// tuples `allowed` accepts, chosen by a seeded hash of the point.
    fn tuple_quad(layout: &SectionLayout, seed: u64, allowed: fn([u8; 4]) -> bool) -> ColoringQuad {
        let n = layout.total();
        let tuples: Vec<[u8; 4]> = (0..16u8)
            .map(|i| [i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1])
            .filter(|&t| allowed(t))
            .collect();
        let picks: Vec<Coloring> = (0..3)
            .map(|i| OracleSpec::Random { seed: seed * 3 + i }.build(n).unwrap())
            .collect();
        let fs: [Coloring; 4] = std::array::from_fn(|b| {
            let (tuples, picks) = (tuples.clone(), picks.clone());
            Coloring::oracle(2, n, 2, "tuple", move |p| {
                let i = picks
                    .iter()
                    .fold(0, |acc, f| 2 * acc + f.color(p).unwrap() as usize);
                tuples[i % tuples.len()][b]
            })
        });
        ColoringQuad::new(layout.clone(), fs).unwrap()
    }

    const CORNER: &[(usize, usize, u8)] = &[(1, 3, 0), (2, 3, 0)];
    const SHARED: &[(usize, usize, u8)] = &[(0, 1, 0), (0, 1, 1), (1, 3, 0), (1, 3, 1)];
    const SPLIT: &[(usize, usize, u8)] = &[(0, 1, 0), (0, 2, 1), (1, 3, 0), (2, 3, 1)];

    fn satisfies(rs: &[(usize, usize, u8)], t: [u8; 4]) -> bool {
        rs.iter().all(|&(p, q, j)| !(t[p] == j && t[q] == j))
    }

    /// Runs one case procedure with its profile installed as restrictions that
    /// must never fire.
    fn run_case(q: &ColoringQuad, profile: EdgeProfile) -> Result<QuadOutcome> {
        let ctx = Ctx::new(q, None);
        let root = View::root(q.layout());
        let rs = match profile {
            EdgeProfile::Corner => CORNER,
            EdgeProfile::Shared => SHARED,
            EdgeProfile::Split => SPLIT,
        };
        let restr: Restrictions = rs
            .iter()
            .map(|&(p, qq, j)| Restriction::new(&root, p, qq, j, Action::Escape(u64::MAX)))
            .collect();
        let flow = match profile {
            EdgeProfile::Corner => corner(&ctx, &root, &restr),
            EdgeProfile::Shared => strengthen(&ctx, &root, &restr, profile, &|w1, r1| {
                strengthen(&ctx, &w1.complemented(), r1, profile, &|w2, r2| {
                    shared_word(&ctx, w2, r2)
                })
            }),
            EdgeProfile::Split => strengthen(&ctx, &root, &restr, profile, &|w1, r1| {
                strengthen(
                    &ctx,
                    &w1.complemented().swapped(),
                    r1,
                    profile,
                    &|w2, r2| split_forced(&ctx, w2, r2),
                )
            }),
        };
        settle(q, flow)
    }

    #[test]
    fn case_procedures_on_profile_quads() {
        let mut kinds = std::collections::BTreeMap::new();
        for size in [1usize, 2] {
            let [corner_b, shared_b, split_b] = budget::case_blocks(size);
            for (profile, blocks, allowed) in [
                (
                    EdgeProfile::Corner,
                    corner_b,
                    (|t| satisfies(CORNER, t)) as fn([u8; 4]) -> bool,
                ),
                (EdgeProfile::Shared, shared_b, |t| satisfies(SHARED, t)),
                (EdgeProfile::Split, split_b, |t| satisfies(SPLIT, t)),
            ] {
                let layout = SectionLayout::new(2, 2, vec![size; blocks]).unwrap();
                for seed in 0..40 {
                    let q = tuple_quad(&layout, seed, allowed);
                    let outcome = run_case(&q, profile).unwrap();
                    let kind = match outcome {
                        QuadOutcome::SectionCert { b, .. } => {
                            format!("{profile:?} cert {}", b_name(b))
                        }
                        QuadOutcome::EqualWord { color, .. } => format!("{profile:?} word {color}"),
                    };
                    *kinds.entry(kind).or_insert(0) += 1;
                }
            }
        }
        // every case ends in an equal-color word for some quads
        for p in ["Corner", "Shared", "Split"] {
            assert!(kinds.keys().any(|k| k.starts_with(p)), "{kinds:?}");
        }
    }

    #[test]
    fn prefix2_small_oracles() {
        let layout = SectionLayout::new(2, 2, vec![2; 913]).unwrap();
        let n = layout.total();
        for spec in [
            "constant:0",
            "parity",
            "random:3",
            "junta:0,1,5:9",
            "random:11",
        ] {
            let f = spec.parse::<OracleSpec>().unwrap().build(n).unwrap();
            let report = prove_prefix2(&f, &layout, ProverOptions::default()).unwrap();
            assert!(verify_sh_certificate(&f, &layout, &report.cert), "{spec}");
        }
    }
}
