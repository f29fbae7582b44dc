//! Hales-Jewett search at desk scale and the block coding that turns a
//! monochromatic line over `d^n` into a section certificate over `d`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checker::{verify_sh_certificate, word_text, ShCertificate, WordRanker};
use crate::coloring::{Coloring, TableColoring};
use crate::error::{EnshError, Result};
use crate::search::BRUTE_LIMIT;
use crate::word::{space_size, Point, SectionLayout, Symbol, VariableWord};

/// A monochromatic `n`-variable word of length `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjWitness {
    #[serde(rename = "N")]
    pub len: usize,
    #[serde(with = "word_text")]
    pub word: VariableWord,
    pub color: u8,
}

fn coded_alphabet(d: u8, n: usize) -> Result<u8> {
    let size = space_size(d, n)?;
    u8::try_from(size).map_err(|_| EnshError::TooLarge {
        engine: "block code",
        detail: format!("{d}^{n} letters"),
    })
}

/// Letter `t` of the result is the positional code of `p(nt) ... p(nt+n-1)`.
pub fn block_code(p: &Point, n: usize) -> Result<Point> {
    if n == 0 || !p.len().is_multiple_of(n) {
        return Err(EnshError::Contract(format!(
            "length {} is not a multiple of {n}",
            p.len()
        )));
    }
    let dd = coded_alphabet(p.d(), n)?;
    let digits = p.digits();
    let letters = digits
        .chunks(n)
        .map(|c| c.iter().fold(0u32, |acc, &u| acc * p.d() as u32 + u as u32) as u8)
        .collect();
    Point::from_digits(dd, letters)
}

pub fn block_decode(q: &Point, d: u8, n: usize) -> Result<Point> {
    let dd = coded_alphabet(d, n)?;
    let mut digits = Vec::with_capacity(q.len() * n);
    for letter in q.digits() {
        if letter >= dd {
            return Err(EnshError::Malformed(format!(
                "letter {letter} is not below {dd}"
            )));
        }
        let mut block = vec![0u8; n];
        let mut x = letter;
        for j in (0..n).rev() {
            block[j] = x % d;
            x /= d;
        }
        digits.extend(block);
    }
    Point::from_digits(d, digits)
}

/// All normalized words of length `len` over `d` in which exactly `x0..x{n-1}`
/// occur, in lexicographic order (constants before variables).
pub fn hj_words(d: u8, n: usize, len: usize) -> Vec<VariableWord> {
    fn go(
        d: u8,
        n: usize,
        len: usize,
        cur: &mut Vec<Symbol>,
        next: usize,
        out: &mut Vec<VariableWord>,
    ) {
        let left = len - cur.len();
        if left < n - next {
            return;
        }
        if left == 0 {
            out.push(VariableWord::from_parts_unchecked(d, cur.clone(), n));
            return;
        }
        for u in 0..d {
            cur.push(Symbol::Const(u));
            go(d, n, len, cur, next, out);
            cur.pop();
        }
        for m in 0..n.min(next + 1) {
            cur.push(Symbol::Var(m as u32));
            go(d, n, len, cur, next.max(m + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, n, len, &mut Vec::new(), 0, &mut out);
    out
}

/// The first monochromatic `n`-variable word for `c`. All `n` variables occur,
/// so the truncating substitution over `d^n` never cuts.
pub fn hj_search_word(c: &Coloring, n: usize) -> Result<Option<HjWitness>> {
    let d = c.d();
    for v in hj_words(d, n, c.n()) {
        let ranks = WordRanker::new(&v, d)?.image_ranks();
        let colors: Vec<u8> = match c.as_table() {
            Some(t) => ranks.iter().map(|&r| t.at_rank(r)).collect(),
            None => ranks
                .iter()
                .map(|&r| c.color(&crate::word::unrank_point(r, c.n(), d)?))
                .collect::<Result<_>>()?,
        };
        if colors.iter().all(|&x| x == colors[0]) {
            return Ok(Some(HjWitness {
                len: c.n(),
                word: v,
                color: colors[0],
            }));
        }
    }
    Ok(None)
}

/// Least `N <= n_max` such that every `k`-coloring of `d^N` has a monochromatic
/// `n`-variable word.
pub fn hj_number(d: u8, k: u8, n: usize, n_max: usize) -> Result<Option<usize>> {
    for len in n..=n_max {
        if k == 1 {
            return Ok(Some(len));
        }
        let size = space_size(d, len)?;
        let total = (k as u64)
            .checked_pow(size as u32)
            .filter(|&t| t <= BRUTE_LIMIT * 16)
            .ok_or_else(|| EnshError::TooLarge {
                engine: "hj number",
                detail: format!("{k}^({d}^{len})"),
            })?;
        let images: Vec<Vec<u64>> = hj_words(d, n, len)
            .iter()
            .map(|v| WordRanker::new(v, d).map(|r| r.image_ranks()))
            .collect::<Result<_>>()?;
        let table_of = |i: u64| -> Vec<u8> {
            let mut values = vec![0u8; size as usize];
            let mut x = i;
            for r in (0..size as usize).rev() {
                values[r] = (x % k as u64) as u8;
                x /= k as u64;
            }
            values
        };
        let escape = (0..total).into_par_iter().find_any(|&i| {
            let t = table_of(i);
            !images
                .iter()
                .any(|img| img.iter().all(|&r| t[r as usize] == t[img[0] as usize]))
        });
        if escape.is_none() {
            return Ok(Some(len));
        }
    }
    Ok(None)
}

/// Section certificate for the layout of `r` blocks of size `n`, read off a
/// monochromatic line of the block-coded coloring.
pub fn ensh_refutation_from_hj(f: &Coloring, n: usize, r: usize) -> Result<ShCertificate> {
    let d = f.d();
    let layout = SectionLayout::new(d, f.k(), vec![n; r])?;
    if f.n() != layout.total() {
        return Err(EnshError::Contract(format!(
            "coloring length {} is not {n}*{r}",
            f.n()
        )));
    }
    let dd = coded_alphabet(d, n)?;
    let coded = TableColoring::from_fn(dd, r, f.k(), |q| {
        f.color(&block_decode(q, d, n).expect("letters in range"))
            .expect("coloring total")
    })?;
    let line = hj_search_word(&coded.into(), 1)?.ok_or_else(|| {
        EnshError::Precondition(format!(
            "no monochromatic line over {dd}^{r}; r is too small"
        ))
    })?;
    let mut symbols = Vec::with_capacity(n * r);
    let mut s = None;
    for (t, sym) in line.word.symbols().iter().enumerate() {
        match *sym {
            Symbol::Const(letter) => {
                let block = block_decode(&Point::from_digits(dd, vec![letter])?, d, n)?;
                symbols.extend(block.digits().into_iter().map(Symbol::Const));
            }
            Symbol::Var(_) => {
                s.get_or_insert(t);
                symbols.extend((0..n as u32).map(Symbol::Var));
            }
        }
    }
    let cert = ShCertificate {
        s: s.expect("line has a variable"),
        word: VariableWord::new(d, symbols)?,
        color: line.color,
    };
    if !verify_sh_certificate(f, &layout, &cert) {
        return Err(EnshError::Internal(format!(
            "decoded certificate fails: {cert}"
        )));
    }
    Ok(cert)
}
