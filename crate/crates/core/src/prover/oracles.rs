//! Builtin oracle families for the prover: constant, parity, juntas and
//! seeded pseudo-random colorings of sparse binary points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{EnshError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum OracleSpec {
    Constant {
        color: u8,
    },
    Parity,
    /// Color read from a seeded table indexed by the digits at `positions`.
    Junta {
        positions: Vec<usize>,
        seed: u64,
    },
    /// Color is a seeded hash of the support.
    Random {
        seed: u64,
    },
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl OracleSpec {
    pub fn build(&self, n: usize) -> Result<Coloring> {
        let label = self.to_string();
        Ok(match self.clone() {
            OracleSpec::Constant { color } => {
                if color > 1 {
                    return Err(EnshError::ColorOutOfRange { color, k: 2 });
                }
                Coloring::oracle(2, n, 2, label, move |_| color)
            }
            OracleSpec::Parity => {
                Coloring::oracle(2, n, 2, label, |p| (p.support().len() % 2) as u8)
            }
            OracleSpec::Junta { positions, seed } => {
                if let Some(&t) = positions.iter().find(|&&t| t >= n) {
                    return Err(EnshError::Malformed(format!(
                        "junta position {t} not below {n}"
                    )));
                }
                if positions.len() > 63 {
                    return Err(EnshError::TooLarge {
                        engine: "junta oracle",
                        detail: format!("{} positions", positions.len()),
                    });
                }
                Coloring::oracle(2, n, 2, label, move |p| {
                    let index = positions
                        .iter()
                        .fold(0u64, |acc, &t| 2 * acc + p.get(t) as u64);
                    (splitmix(seed ^ splitmix(index)) & 1) as u8
                })
            }
            OracleSpec::Random { seed } => Coloring::oracle(2, n, 2, label, move |p| {
                let h = p
                    .support()
                    .iter()
                    .fold(splitmix(seed), |acc, &t| splitmix(acc ^ t as u64));
                (h & 1) as u8
            }),
        })
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSpec::Constant { color } => write!(f, "constant:{color}"),
            OracleSpec::Parity => write!(f, "parity"),
            OracleSpec::Junta { positions, seed } => {
                let ps: Vec<String> = positions.iter().map(|t| t.to_string()).collect();
                write!(f, "junta:{}:{seed}", ps.join(","))
            }
            OracleSpec::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for OracleSpec {
    type Err = EnshError;

    /// `constant:C`, `parity`, `junta:T1,T2,...:SEED`, `random:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || EnshError::Malformed(format!("oracle spec `{s}`"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["constant", c] => Ok(OracleSpec::Constant {
                color: num(c)? as u8,
            }),
            ["parity"] => Ok(OracleSpec::Parity),
            ["random", seed] => Ok(OracleSpec::Random { seed: num(seed)? }),
            ["junta", ps, seed] => {
                let positions = if ps.is_empty() {
                    Vec::new()
                } else {
                    ps.split(',')
                        .map(|t| num(t).map(|v| v as usize))
                        .collect::<Result<_>>()?
                };
                Ok(OracleSpec::Junta {
                    positions,
                    seed: num(seed)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Point;

    #[test]
    fn spec_text_round_trip() {
        for text in [
            "constant:1",
            "parity",
            "junta:0,5,9:7",
            "random:42",
            "junta::3",
        ] {
            assert_eq!(text.parse::<OracleSpec>().unwrap().to_string(), text);
        }
        assert!("junta:1".parse::<OracleSpec>().is_err());
    }

    #[test]
    fn junta_reads_only_its_positions() {
        let f = OracleSpec::Junta {
            positions: vec![1, 3],
            seed: 5,
        }
        .build(6)
        .unwrap();
        for extra in [vec![], vec![0], vec![2, 4, 5]] {
            let mut with: Vec<usize> = extra.clone();
            with.push(3);
            assert_eq!(
                f.color(&Point::from_set(6, extra).unwrap()).unwrap(),
                f.color(&Point::from_set(6, [0usize; 0]).unwrap()).unwrap()
            );
            let _ = f.color(&Point::from_set(6, with).unwrap()).unwrap();
        }
        let parity = OracleSpec::Parity.build(4).unwrap();
        assert_eq!(
            parity
                .color(&Point::from_set(4, [0, 2, 3]).unwrap())
                .unwrap(),
            1
        );
    }
}
