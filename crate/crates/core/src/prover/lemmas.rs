//! Single-coloring dichotomies: either find points with prescribed colors and
//! supports, or assemble a monochromatic section word from the failed search.

use serde::{Deserialize, Serialize};

use crate::checker::{verify_sh_certificate, ShCertificate};
use crate::coloring::Coloring;
use crate::error::{EnshError, Result};
use crate::word::{Point, SectionLayout, Symbol, VariableWord};

use super::view::{block_subsets, into_result, plain, union, word_symbols, Flow, Geom, Set};

/// Result of a dichotomy in view coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch<T> {
    Found(T),
    Cert {
        s: usize,
        syms: Vec<Symbol>,
        color: u8,
    },
}

pub type Color<'a> = &'a dyn Fn(&[usize]) -> Flow<u8>;

/// First `{m} + S`, `S` a subset of block `j`, colored `want`; otherwise the
/// section-`j` word with `1` at `m` is monochromatic in the other color.
fn search_singleton_plus(g: Color, geom: &Geom, m: usize, j: usize, want: u8) -> Flow<Branch<Set>> {
    search_base_plus(g, geom, &[m], j, want)
}

fn search_base_plus(
    g: Color,
    geom: &Geom,
    base: &[usize],
    j: usize,
    want: u8,
) -> Flow<Branch<Set>> {
    for s in block_subsets(geom.block(j)) {
        let a = union(base, &s);
        if g(&a)? == want {
            return Ok(Branch::Found(a));
        }
    }
    let vars: Vec<(usize, u32)> = geom
        .block(j)
        .enumerate()
        .map(|(i, t)| (t, i as u32))
        .collect();
    Ok(Branch::Cert {
        s: j,
        syms: word_symbols(geom.len, base, &vars),
        color: 1 - want,
    })
}

/// Nonempty subsets of `0..n` ordered by size, then lexicographically.
pub fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            combos(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=n {
        combos(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Points `a_m` (m below the first block size) with `m` the least element,
/// supports inside `{m} + N_{m+1}` and color 0.
pub fn family(g: Color, geom: &Geom) -> Flow<Branch<Vec<Set>>> {
    let n0 = geom.sizes[0];
    geom.require(n0 + 1, "family search")?;
    let mut out = Vec::with_capacity(n0);
    for m in 0..n0 {
        match search_singleton_plus(g, geom, m, m + 1, 0)? {
            Branch::Found(a) => out.push(a),
            Branch::Cert { s, syms, color } => return Ok(Branch::Cert { s, syms, color }),
        }
    }
    Ok(Branch::Found(out))
}

/// Disjoint `a0, a1` with colors 0, 0 and union colored 1.
pub fn pair00(g: Color, geom: &Geom) -> Flow<Branch<(Set, Set)>> {
    geom.require(2, "pair search")?;
    let (n0, n1) = (geom.sizes[0], geom.sizes[1]);
    geom.require(n0 + n1 + 2, "pair search")?;
    let ms: Vec<usize> = std::iter::once(0).chain(n0..n0 + n1).collect();
    let mut parts = Vec::with_capacity(ms.len());
    for &m in &ms {
        match search_singleton_plus(g, geom, m, m + 2, 0)? {
            Branch::Found(a) => parts.push(a),
            Branch::Cert { s, syms, color } => return Ok(Branch::Cert { s, syms, color }),
        }
    }
    // unions containing parts[0], by size; all smaller ones are known to be 0
    for j in subsets_by_size(n1) {
        let top = *j.last().expect("nonempty");
        let mut a = parts[0].clone();
        for &i in &j[..j.len() - 1] {
            a = union(&a, &parts[1 + i]);
        }
        let am = &parts[1 + top];
        if g(&union(&a, am))? == 1 {
            return Ok(Branch::Found((a, am.clone())));
        }
    }
    let vars: Vec<(usize, u32)> = (0..n1)
        .flat_map(|i| parts[1 + i].iter().map(move |&t| (t, i as u32)))
        .collect();
    Ok(Branch::Cert {
        s: 1,
        syms: word_symbols(geom.len, &parts[0], &vars),
        color: 0,
    })
}

/// Disjoint `a0, a1` with colors 0 and 1 and union colored 1.
pub fn mixed(g: Color, geom: &Geom) -> Flow<Branch<(Set, Set)>> {
    let n0 = geom.sizes[0];
    geom.require(n0 + 2, "mixed search")?;
    let head: Set = (0..geom.starts[n0] + geom.sizes[n0]).collect();
    let a = match search_base_plus(g, geom, &head, n0 + 1, 1)? {
        Branch::Found(a) => a,
        Branch::Cert { s, syms, color } => return Ok(Branch::Cert { s, syms, color }),
    };
    let mut parts = Vec::with_capacity(n0);
    for m in 0..n0 {
        match search_singleton_plus(g, geom, m, m + 1, 1)? {
            Branch::Found(am) => parts.push(am),
            Branch::Cert { s, syms, color } => return Ok(Branch::Cert { s, syms, color }),
        }
    }
    // a minus a union of parts is known to be 1 for all smaller index sets
    for i in subsets_by_size(n0) {
        let top = *i.last().expect("nonempty");
        let mut rest = a.clone();
        for &m in &i[..i.len() - 1] {
            rest = super::view::minus(&rest, &parts[m]);
        }
        let low = super::view::minus(&rest, &parts[top]);
        if g(&low)? == 0 {
            return Ok(Branch::Found((low, parts[top].clone())));
        }
    }
    let all: Set = parts.iter().fold(Vec::new(), |acc, p| union(&acc, p));
    let ones = super::view::minus(&a, &all);
    let vars: Vec<(usize, u32)> = parts
        .iter()
        .enumerate()
        .flat_map(|(m, p)| p.iter().map(move |&t| (t, m as u32)))
        .collect();
    Ok(Branch::Cert {
        s: 0,
        syms: word_symbols(geom.len, &ones, &vars),
        color: 1,
    })
}

/// A returned dichotomy branch over an explicit coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "kebab-case")]
pub enum Dichotomy<T> {
    Found { points: T },
    Certificate { cert: ShCertificate },
}

impl<T> Dichotomy<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Dichotomy::Found { .. })
    }
}

fn to_point(n: usize, a: &[usize]) -> Result<Point> {
    Point::from_set(n, a.iter().copied())
}

fn finish<T, U>(
    f: &Coloring,
    layout: &SectionLayout,
    branch: Branch<T>,
    map: impl FnOnce(T) -> Result<U>,
) -> Result<Dichotomy<U>> {
    match branch {
        Branch::Found(t) => Ok(Dichotomy::Found { points: map(t)? }),
        Branch::Cert { s, syms, color } => {
            let cert = ShCertificate {
                s,
                word: VariableWord::new(2, syms)?,
                color,
            };
            if !verify_sh_certificate(f, layout, &cert) {
                return Err(EnshError::Internal(format!(
                    "assembled certificate fails: {cert}"
                )));
            }
            Ok(Dichotomy::Certificate { cert })
        }
    }
}

fn check_binary(f: &Coloring, layout: &SectionLayout) -> Result<()> {
    if f.d() != 2 || f.k() != 2 || f.n() != layout.total() {
        return Err(EnshError::Contract(format!(
            "binary two-colorings of length {} only",
            layout.total()
        )));
    }
    Ok(())
}

pub fn search_or_certify_family(
    f: &Coloring,
    layout: &SectionLayout,
) -> Result<Dichotomy<Vec<Point>>> {
    check_binary(f, layout)?;
    let branch = into_result(family(&plain(f), &Geom::of(layout)))?;
    let out = finish(f, layout, branch, |v: Vec<Set>| {
        v.iter()
            .map(|a| to_point(f.n(), a))
            .collect::<Result<Vec<Point>>>()
    })?;
    if let Dichotomy::Found { points } = &out {
        if !verify_family(f, points)? {
            return Err(EnshError::Internal("family fails its equalities".into()));
        }
    }
    Ok(out)
}

pub fn search_or_certify_pair00(
    f: &Coloring,
    layout: &SectionLayout,
) -> Result<Dichotomy<(Point, Point)>> {
    check_binary(f, layout)?;
    let branch = into_result(pair00(&plain(f), &Geom::of(layout)))?;
    let out = finish(f, layout, branch, |(a, b)| {
        Ok((to_point(f.n(), &a)?, to_point(f.n(), &b)?))
    })?;
    if let Dichotomy::Found { points } = &out {
        if !verify_pair(f, points, [0, 0])? {
            return Err(EnshError::Internal("pair fails its equalities".into()));
        }
    }
    Ok(out)
}

pub fn search_or_certify_mixed(
    f: &Coloring,
    layout: &SectionLayout,
) -> Result<Dichotomy<(Point, Point)>> {
    check_binary(f, layout)?;
    let branch = into_result(mixed(&plain(f), &Geom::of(layout)))?;
    let out = finish(f, layout, branch, |(a, b)| {
        Ok((to_point(f.n(), &a)?, to_point(f.n(), &b)?))
    })?;
    if let Dichotomy::Found { points } = &out {
        if !verify_pair(f, points, [0, 1])? {
            return Err(EnshError::Internal(
                "mixed pair fails its equalities".into(),
            ));
        }
    }
    Ok(out)
}

/// Disjoint supports, `m` least in the `m`-th support, all colored 0.
pub fn verify_family(f: &Coloring, points: &[Point]) -> Result<bool> {
    for (m, a) in points.iter().enumerate() {
        if a.support().first() != Some(&m) || f.color(a)? != 0 {
            return Ok(false);
        }
        if points[..m].iter().any(|b| !b.is_disjoint(a)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Disjoint, colored `colors`, union colored 1.
pub fn verify_pair(f: &Coloring, (a0, a1): &(Point, Point), colors: [u8; 2]) -> Result<bool> {
    Ok(a0.is_disjoint(a1)
        && f.color(a0)? == colors[0]
        && f.color(a1)? == colors[1]
        && f.color(&a0.union(a1)?)? == 1)
}
