//! Sectional homogeneity: monochromatic section words and their certificates.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{EnshError, Result};
use crate::word::{
    all_points, enumerate_section_words, is_section_word, space_size, substitute_total,
    SectionLayout, Symbol, VariableWord,
};

/// A monochromatic section word: evidence that a layout is sectionally
/// homogeneous for a coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShCertificate {
    pub s: usize,
    #[serde(with = "word_text")]
    pub word: VariableWord,
    pub color: u8,
}

impl fmt::Display for ShCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "section {} word `{}` color {}",
            self.s, self.word, self.color
        )
    }
}

/// Serializes a binary-alphabet-agnostic word as its text form. The alphabet is
/// recovered from the largest digit, so callers re-attach `d` when they know it.
pub(crate) mod word_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::word::VariableWord;

    pub fn serialize<S: Serializer>(w: &VariableWord, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&w.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<VariableWord, D::Error> {
        let text = String::deserialize(d)?;
        VariableWord::parse(u8::MAX, &text).map_err(serde::de::Error::custom)
    }
}

impl ShCertificate {
    /// Re-reads the word over alphabet `d` (deserialization cannot know it).
    pub fn with_alphabet(mut self, d: u8) -> Result<Self> {
        self.word = VariableWord::loose(d, self.word.symbols().to_vec())?;
        Ok(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "sh-cert",
            "s": self.s,
            "word": self.word.to_string(),
            "color": self.color,
        })
    }
}

/// Rank arithmetic for a fixed word: `rank(v(a)) = base + sum_m a(m) * weight[m]`.
#[derive(Clone, Debug)]
pub struct WordRanker {
    base: u64,
    weights: Vec<u64>,
    d: u8,
}

impl WordRanker {
    pub fn new(v: &VariableWord, d: u8) -> Result<Self> {
        space_size(d, v.len())?;
        let n = v.len();
        let mut base = 0u64;
        let mut weights = vec![0u64; v.var_bound()];
        let mut place = 1u64;
        for t in (0..n).rev() {
            match v.symbols()[t] {
                Symbol::Const(u) => base += u as u64 * place,
                Symbol::Var(m) => weights[m as usize] += place,
            }
            if t > 0 {
                place *= d as u64;
            }
        }
        Ok(WordRanker { base, weights, d })
    }

    /// Ranks of `v(a)` for every `a` in `d^nvars`, in rank order of `a`.
    pub fn image_ranks(&self) -> Vec<u64> {
        let m = self.weights.len();
        let d = self.d as u64;
        let mut out = vec![self.base];
        for j in 0..m {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for &r in &out {
                for u in 0..d {
                    next.push(r + u * self.weights[j]);
                }
            }
            out = next;
        }
        out
    }
}

/// `Some(j)` iff every substitution instance of `v` gets color `j`. Queries
/// exactly `d^n` points, where `x0..x{n-1}` are the variables of `v`.
pub fn monochromatic_color(
    f: &Coloring,
    v: &VariableWord,
    layout: &SectionLayout,
) -> Result<Option<u8>> {
    if v.len() != layout.total() {
        return Err(EnshError::Contract(format!(
            "word length {} differs from layout length {}",
            v.len(),
            layout.total()
        )));
    }
    let d = layout.d();
    if let Some(t) = f.as_table() {
        let ranks = WordRanker::new(v, d)?.image_ranks();
        let first = t.at_rank(ranks[0]);
        let mono = ranks.iter().all(|&r| t.at_rank(r) == first);
        return Ok(mono.then_some(first));
    }
    let mut seen: Option<u8> = None;
    let mut mono = true;
    for a in all_points(d, v.var_bound())? {
        let c = f.color(&substitute_total(v, &a)?)?;
        match seen {
            None => seen = Some(c),
            Some(j) if j != c => mono = false,
            _ => {}
        }
    }
    Ok(if mono { seen } else { None })
}

/// The canonically first monochromatic section word (by section, then
/// enumeration order), or `None` when `f` witnesses non-homogeneity.
pub fn find_sh_certificate(f: &Coloring, layout: &SectionLayout) -> Result<Option<ShCertificate>> {
    if f.n() != layout.total() || f.d() != layout.d() {
        return Err(EnshError::Contract(format!(
            "coloring of {}^{} does not match layout {layout}",
            f.d(),
            f.n()
        )));
    }
    for s in 0..layout.num_sections() {
        let best = enumerate_section_words(layout, s)
            .enumerate()
            .par_bridge()
            .filter_map(|(i, v)| match monochromatic_color(f, &v, layout) {
                Ok(Some(c)) => Some((i, Ok((v, c)))),
                Ok(None) => None,
                Err(e) => Some((i, Err(e))),
            })
            .min_by_key(|(i, _)| *i);
        if let Some((_, hit)) = best {
            let (word, color) = hit?;
            return Ok(Some(ShCertificate { s, word, color }));
        }
    }
    Ok(None)
}

pub fn verify_sh_certificate(f: &Coloring, layout: &SectionLayout, cert: &ShCertificate) -> bool {
    if cert.s >= layout.num_sections() || cert.word.len() != layout.total() {
        return false;
    }
    let Ok(word) = VariableWord::loose(layout.d(), cert.word.symbols().to_vec()) else {
        return false;
    };
    matches!(is_section_word(&word, layout, cert.s), Ok(true))
        && matches!(monochromatic_color(f, &word, layout), Ok(Some(c)) if c == cert.color)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(seq: &[usize]) -> SectionLayout {
        SectionLayout::new(2, 2, seq.to_vec()).unwrap()
    }

    fn parity3(seq: &[usize]) -> Coloring {
        let n = seq.iter().sum();
        Coloring::table(2, n, 2, |p| (p.get(0) + p.get(1) + p.get(2)) % 2).unwrap()
    }

    #[test]
    fn monochromatic_examples() {
        let l = layout(&[2, 2]);
        let zero = Coloring::table(2, 4, 2, |_| 0).unwrap();
        let v = VariableWord::parse(2, "x0 x1 x0 0").unwrap();
        assert_eq!(monochromatic_color(&zero, &v, &l).unwrap(), Some(0));
        assert_eq!(
            monochromatic_color(&parity3(&[2, 2]), &v, &l).unwrap(),
            None
        );
        let one = layout(&[1]);
        let first = Coloring::table(2, 1, 2, |p| p.get(0)).unwrap();
        let x0 = VariableWord::parse(2, "x0").unwrap();
        assert_eq!(monochromatic_color(&first, &x0, &one).unwrap(), None);
    }

    #[test]
    fn known_witnesses_have_no_certificate() {
        assert_eq!(
            find_sh_certificate(&parity3(&[2, 2]), &layout(&[2, 2])).unwrap(),
            None
        );
        let f = Coloring::table(2, 6, 2, |p| {
            (((p.get(0) + p.get(1)) > 0) as u8 + p.get(2) + p.get(3) + p.get(4)) % 2
        })
        .unwrap();
        assert_eq!(find_sh_certificate(&f, &layout(&[2, 2, 2])).unwrap(), None);
    }

    #[test]
    fn constant_coloring_gives_first_word() {
        let l = layout(&[2, 2]);
        let one = Coloring::table(2, 4, 2, |_| 1).unwrap();
        let cert = find_sh_certificate(&one, &l).unwrap().unwrap();
        assert_eq!(cert.s, 0);
        assert_eq!(cert.word.to_string(), "x0 x1 0 0");
        assert_eq!(cert.color, 1);
        assert!(verify_sh_certificate(&one, &l, &cert));
        let wrong = ShCertificate { s: 1, ..cert };
        assert!(!verify_sh_certificate(&one, &l, &wrong));
    }

    #[test]
    fn oracle_and_table_agree() {
        let l = layout(&[1, 2]);
        for code in 0u32..64 {
            let g = move |p: &crate::word::Point| {
                ((code >> (crate::word::rank_point(p).unwrap() % 6)) & 1) as u8
            };
            let t = Coloring::table(2, 3, 2, g).unwrap();
            let o = Coloring::oracle(2, 3, 2, "code", g);
            assert_eq!(
                find_sh_certificate(&t, &l).unwrap(),
                find_sh_certificate(&o, &l).unwrap()
            );
        }
    }

    #[test]
    fn image_ranks_match_substitution() {
        let v = VariableWord::parse(3, "2 x0 x1 x0 1").unwrap();
        let ranks = WordRanker::new(&v, 3).unwrap().image_ranks();
        let direct: Vec<u64> = all_points(3, 2)
            .unwrap()
            .map(|a| crate::word::rank_point(&substitute_total(&v, &a).unwrap()).unwrap())
            .collect();
        assert_eq!(ranks, direct);
    }

    #[test]
    fn certificate_json_shape() {
        let cert = ShCertificate {
            s: 1,
            word: VariableWord::parse(2, "0 1 x0 x1").unwrap(),
            color: 0,
        };
        let v = cert.to_json();
        assert_eq!(v["kind"], "sh-cert");
        assert_eq!(v["word"], "0 1 x0 x1");
        let back: ShCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back.with_alphabet(2).unwrap(), cert);
    }
}
