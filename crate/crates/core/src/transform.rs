//! Moving witness colorings between layouts: passing to a subsequence of blocks,
//! shrinking blocks, and enlarging the alphabet or the color set.

use crate::checker::find_sh_certificate;
use crate::coloring::Coloring;
use crate::error::{EnshError, Result};
use crate::word::{Point, SectionLayout};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransportSpec {
    Subsequence(Vec<usize>),
    Domination(Vec<usize>),
    Enlarge { d: u8, k: u8 },
}

fn require_witness(f: &Coloring, layout: &SectionLayout) -> Result<()> {
    if let Some(cert) = find_sh_certificate(f, layout)? {
        return Err(EnshError::Precondition(format!(
            "input is not a witness for {layout}: {cert}"
        )));
    }
    Ok(())
}

fn check_output(f: Coloring, layout: &SectionLayout) -> Result<Coloring> {
    if let Some(cert) = find_sh_certificate(&f, layout)? {
        return Err(EnshError::Internal(format!(
            "transported coloring is homogeneous for {layout}: {cert}"
        )));
    }
    Ok(f)
}

/// Keeps the blocks at `indices` (strictly increasing); the new coloring pads the
/// skipped blocks with zeros and asks the old one.
pub fn transport_subsequence(
    fhat: &Coloring,
    lhat: &SectionLayout,
    indices: &[usize],
) -> Result<(SectionLayout, Coloring)> {
    if indices.is_empty()
        || indices.windows(2).any(|w| w[0] >= w[1])
        || indices.iter().any(|&i| i >= lhat.num_sections())
    {
        return Err(EnshError::Malformed(format!(
            "indices {indices:?} are not an increasing subset of 0..{}",
            lhat.num_sections()
        )));
    }
    require_witness(fhat, lhat)?;
    let seq: Vec<usize> = indices.iter().map(|&i| lhat.size(i)).collect();
    let layout = SectionLayout::new(lhat.d(), lhat.k(), seq)?;
    // position t of the small layout sits at embed[t] in the large one
    let mut embed = Vec::with_capacity(layout.total());
    for &i in indices {
        embed.extend(lhat.block(i));
    }
    let big = lhat.total();
    let f = Coloring::table(layout.d(), layout.total(), layout.k(), |a| {
        let entries = a
            .nonzero()
            .into_iter()
            .map(|(t, u)| (embed[t], u))
            .collect();
        let ahat = Point::from_support(lhat.d(), big, entries).expect("embedding in range");
        fhat.color(&ahat).expect("input coloring total")
    })?;
    Ok((layout.clone(), check_output(f, &layout)?))
}

/// Grows block `s` from `n̂_s` to `target[s]`; extra digits of a block are ignored.
pub fn transport_domination(
    fhat: &Coloring,
    lhat: &SectionLayout,
    target: &[usize],
) -> Result<(SectionLayout, Coloring)> {
    if target.len() != lhat.num_sections() || target.iter().zip(lhat.seq()).any(|(&n, &nh)| n < nh)
    {
        return Err(EnshError::Malformed(format!(
            "target {target:?} does not dominate {:?}",
            lhat.seq()
        )));
    }
    require_witness(fhat, lhat)?;
    let layout = SectionLayout::new(lhat.d(), lhat.k(), target.to_vec())?;
    let mut keep = Vec::with_capacity(lhat.total());
    for s in 0..layout.num_sections() {
        let start = layout.start(s);
        keep.extend(start..start + lhat.size(s));
    }
    let f = Coloring::table(layout.d(), layout.total(), layout.k(), |a| {
        fhat.color(&a.restrict(&keep))
            .expect("input coloring total")
    })?;
    Ok((layout.clone(), check_output(f, &layout)?))
}

/// Same layout over a larger alphabet and color set; digits `>= d` read as 0.
pub fn transport_enlarge(
    f: &Coloring,
    layout: &SectionLayout,
    dhat: u8,
    khat: u8,
) -> Result<(SectionLayout, Coloring)> {
    if dhat < layout.d() || khat < layout.k() {
        return Err(EnshError::Malformed(format!(
            "cannot shrink d={} k={} to d={dhat} k={khat}",
            layout.d(),
            layout.k()
        )));
    }
    require_witness(f, layout)?;
    let big = layout.with_alphabet(dhat, khat)?;
    let d = layout.d();
    let n = layout.total();
    let g = Coloring::table(dhat, n, khat, |a| {
        let entries = a.nonzero().into_iter().filter(|&(_, u)| u < d).collect();
        let p = Point::from_support(d, n, entries).expect("projection in range");
        f.color(&p).expect("input coloring total")
    })?;
    Ok((big.clone(), check_output(g, &big)?))
}

pub fn transport(
    f: &Coloring,
    layout: &SectionLayout,
    spec: &TransportSpec,
) -> Result<(SectionLayout, Coloring)> {
    match spec {
        TransportSpec::Subsequence(ix) => transport_subsequence(f, layout, ix),
        TransportSpec::Domination(seq) => transport_domination(f, layout, seq),
        TransportSpec::Enlarge { d, k } => transport_enlarge(f, layout, *d, *k),
    }
}
