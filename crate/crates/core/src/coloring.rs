//! Colorings `f: d^N -> k`, either as a dense table indexed by rank or as a
//! callable oracle with memoization and query accounting.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::{EnshError, Result};
use crate::word::{rank_point, space_size, unrank_point, Point};

/// Largest table we are willing to materialize (`d^N` entries).
pub const TABLE_LIMIT: u64 = 1 << 24;

/// Every this many memo hits the oracle is re-evaluated to catch nondeterminism.
const RECHECK_EVERY: u64 = 64;

pub type ColorFn = Arc<dyn Fn(&Point) -> u8 + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableColoring {
    d: u8,
    n: usize,
    k: u8,
    values: Vec<u8>,
}

impl TableColoring {
    pub fn new(d: u8, n: usize, k: u8, values: Vec<u8>) -> Result<Self> {
        let size = space_size(d, n)?;
        if size > TABLE_LIMIT {
            return Err(EnshError::TooLarge {
                engine: "table coloring",
                detail: format!("{d}^{n}"),
            });
        }
        if values.len() as u64 != size {
            return Err(EnshError::Malformed(format!(
                "table has {} entries, expected {size}",
                values.len()
            )));
        }
        if let Some(&c) = values.iter().find(|&&c| c >= k) {
            return Err(EnshError::ColorOutOfRange { color: c, k });
        }
        Ok(TableColoring { d, n, k, values })
    }

    pub fn from_fn(d: u8, n: usize, k: u8, f: impl Fn(&Point) -> u8) -> Result<Self> {
        let size = space_size(d, n)?;
        if size > TABLE_LIMIT {
            return Err(EnshError::TooLarge {
                engine: "table coloring",
                detail: format!("{d}^{n}"),
            });
        }
        let values = (0..size)
            .map(|i| f(&unrank_point(i, n, d).expect("in range")))
            .collect();
        Self::new(d, n, k, values)
    }

    /// One color digit per point in rank order.
    pub fn from_digit_string(d: u8, n: usize, k: u8, digits: &str) -> Result<Self> {
        let values = digits
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|u| u as u8)
                    .ok_or_else(|| EnshError::Malformed(format!("bad color digit `{c}`")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(d, n, k, values)
    }

    pub fn digit_string(&self) -> String {
        self.values
            .iter()
            .map(|&c| std::char::from_digit(c as u32, 36).unwrap_or('?'))
            .collect()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn at_rank(&self, i: u64) -> u8 {
        self.values[i as usize]
    }
}

#[derive(Clone)]
pub struct OracleColoring {
    d: u8,
    n: usize,
    k: u8,
    label: String,
    func: ColorFn,
    memo: Option<Arc<Mutex<HashMap<Point, u8>>>>,
    queries: Arc<AtomicU64>,
    hits: Arc<AtomicU64>,
}

impl OracleColoring {
    pub fn new(d: u8, n: usize, k: u8, label: impl Into<String>, func: ColorFn) -> Self {
        OracleColoring {
            d,
            n,
            k,
            label: label.into(),
            func,
            memo: Some(Arc::new(Mutex::new(HashMap::new()))),
            queries: Arc::new(AtomicU64::new(0)),
            hits: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Drops the memo table; every query evaluates the function.
    pub fn without_memo(mut self) -> Self {
        self.memo = None;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn query(&self, p: &Point) -> Result<u8> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let Some(memo) = &self.memo else {
            return Ok((self.func)(p));
        };
        let cached = memo.lock().expect("memo lock").get(p).copied();
        match cached {
            Some(c) => {
                let hits = self.hits.fetch_add(1, Ordering::Relaxed) + 1;
                if hits.is_multiple_of(RECHECK_EVERY) {
                    let again = (self.func)(p);
                    if again != c {
                        return Err(EnshError::NondeterministicOracle {
                            point: p.to_string(),
                            first: c,
                            second: again,
                        });
                    }
                }
                Ok(c)
            }
            None => {
                let c = (self.func)(p);
                let mut guard = memo.lock().expect("memo lock");
                if let Some(&prev) = guard.get(p) {
                    if prev != c {
                        return Err(EnshError::NondeterministicOracle {
                            point: p.to_string(),
                            first: prev,
                            second: c,
                        });
                    }
                }
                guard.insert(p.clone(), c);
                Ok(c)
            }
        }
    }
}

impl fmt::Debug for OracleColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleColoring")
            .field("d", &self.d)
            .field("n", &self.n)
            .field("k", &self.k)
            .field("label", &self.label)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum Coloring {
    Table(TableColoring),
    Oracle(OracleColoring),
}

impl Coloring {
    pub fn table(d: u8, n: usize, k: u8, f: impl Fn(&Point) -> u8) -> Result<Self> {
        Ok(Coloring::Table(TableColoring::from_fn(d, n, k, f)?))
    }

    pub fn oracle(
        d: u8,
        n: usize,
        k: u8,
        label: impl Into<String>,
        f: impl Fn(&Point) -> u8 + Send + Sync + 'static,
    ) -> Self {
        Coloring::Oracle(OracleColoring::new(d, n, k, label, Arc::new(f)))
    }

    pub fn d(&self) -> u8 {
        match self {
            Coloring::Table(t) => t.d,
            Coloring::Oracle(o) => o.d,
        }
    }

    /// Length of the points colored.
    pub fn n(&self) -> usize {
        match self {
            Coloring::Table(t) => t.n,
            Coloring::Oracle(o) => o.n,
        }
    }

    pub fn k(&self) -> u8 {
        match self {
            Coloring::Table(t) => t.k,
            Coloring::Oracle(o) => o.k,
        }
    }

    pub fn as_table(&self) -> Option<&TableColoring> {
        match self {
            Coloring::Table(t) => Some(t),
            Coloring::Oracle(_) => None,
        }
    }

    /// Number of color lookups made so far (oracles only; tables report 0).
    pub fn queries(&self) -> u64 {
        match self {
            Coloring::Table(_) => 0,
            Coloring::Oracle(o) => o.queries.load(Ordering::Relaxed),
        }
    }

    pub fn color(&self, p: &Point) -> Result<u8> {
        if p.len() != self.n() || p.d() > self.d() {
            return Err(EnshError::Contract(format!(
                "point of length {} over {} given to a coloring of {}^{}",
                p.len(),
                p.d(),
                self.d(),
                self.n()
            )));
        }
        let c = match self {
            Coloring::Table(t) => t.values[rank_point(p)? as usize],
            Coloring::Oracle(o) => o.query(p)?,
        };
        if c >= self.k() {
            return Err(EnshError::ColorOutOfRange {
                color: c,
                k: self.k(),
            });
        }
        Ok(c)
    }

    /// Materializes the coloring as a table.
    pub fn to_table(&self) -> Result<TableColoring> {
        match self {
            Coloring::Table(t) => Ok(t.clone()),
            Coloring::Oracle(_) => {
                let size = space_size(self.d(), self.n())?;
                if size > TABLE_LIMIT {
                    return Err(EnshError::TooLarge {
                        engine: "table coloring",
                        detail: format!("{}^{}", self.d(), self.n()),
                    });
                }
                let values = (0..size)
                    .map(|i| self.color(&unrank_point(i, self.n(), self.d())?))
                    .collect::<Result<Vec<u8>>>()?;
                TableColoring::new(self.d(), self.n(), self.k(), values)
            }
        }
    }
}

impl From<TableColoring> for Coloring {
    fn from(t: TableColoring) -> Self {
        Coloring::Table(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::AtomicBool;

    #[test]
    fn table_lookup_matches_function() {
        let f = Coloring::table(2, 3, 2, |p| p.get(0) ^ p.get(2)).unwrap();
        for i in 0..8 {
            let p = unrank_point(i, 3, 2).unwrap();
            assert_eq!(f.color(&p).unwrap(), p.get(0) ^ p.get(2));
        }
        assert_eq!(f.as_table().unwrap().digit_string(), "01011010");
    }

    #[test]
    fn out_of_range_colors_are_rejected() {
        assert!(TableColoring::new(2, 1, 2, vec![0, 2]).is_err());
        let f = Coloring::oracle(2, 1, 2, "bad", |_| 5);
        assert!(matches!(
            f.color(&Point::zeros(2, 1)),
            Err(EnshError::ColorOutOfRange { color: 5, k: 2 })
        ));
    }

    #[test]
    fn memo_detects_flipping_oracle() {
        let flip = Arc::new(AtomicBool::new(false));
        let g = flip.clone();
        let f = Coloring::oracle(2, 1, 2, "flip", move |_| {
            g.fetch_xor(true, Ordering::SeqCst) as u8
        });
        let p = Point::zeros(2, 1);
        let mut failed = false;
        for _ in 0..(2 * RECHECK_EVERY) {
            if f.color(&p).is_err() {
                failed = true;
                break;
            }
        }
        assert!(failed);
    }

    #[test]
    fn sparse_points_hit_the_same_memo_entry() {
        let f = Coloring::oracle(2, 100, 2, "first", |p| p.get(0));
        let a = Point::from_set(100, [0, 7]).unwrap();
        let b = a.to_dense();
        assert_eq!(f.color(&a).unwrap(), f.color(&b).unwrap());
        assert_eq!(f.queries(), 2);
    }
}
