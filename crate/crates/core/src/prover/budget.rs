//! Block budgets for the prover stages.
//!
//! Composite stages only know the largest block size `B` of the layout, so their
//! budgets are worst cases over blocks of size at most `B`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EnshError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// disjoint color-0 points, one per position of the first block
    Family,
    /// color 0, color 0, union color 1
    Pair,
    /// colors 0 and 1, union color 1
    Mixed,
    /// both color-0 restrictions meet at 11
    CornerWord,
    /// both colors restricted on 00-01, 01-11 and the diagonal
    SharedWord,
    /// all six restrictions of the split profile force constant colorings
    SplitForced,
    /// adds one diagonal restriction under the shared profile
    StrengthenShared,
    /// adds one diagonal restriction under the split profile
    StrengthenSplit,
    /// full quad solver
    Quad,
    /// certificate for a layout whose first block has size 2
    Prefix2,
}

pub const PROFILES: [Profile; 10] = [
    Profile::Family,
    Profile::Pair,
    Profile::Mixed,
    Profile::CornerWord,
    Profile::SharedWord,
    Profile::SplitForced,
    Profile::StrengthenShared,
    Profile::StrengthenSplit,
    Profile::Quad,
    Profile::Prefix2,
];

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Family => "family",
            Profile::Pair => "pair",
            Profile::Mixed => "mixed",
            Profile::CornerWord => "corner-word",
            Profile::SharedWord => "shared-word",
            Profile::SplitForced => "split-forced",
            Profile::StrengthenShared => "strengthen-shared",
            Profile::StrengthenSplit => "strengthen-split",
            Profile::Quad => "quad",
            Profile::Prefix2 => "prefix2",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = EnshError;

    fn from_str(s: &str) -> Result<Self> {
        PROFILES
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| EnshError::Malformed(format!("unknown profile `{s}`")))
    }
}

/// Blocks a strengthening step needs when its continuation needs `inner`.
pub fn strengthen_blocks(max_block: usize, inner: usize) -> usize {
    3 + (max_block + 1) * inner
}

/// Blocks needed by the quad case procedures, for blocks of size at most `b`.
pub fn case_blocks(b: usize) -> [usize; 3] {
    let corner = 2 * b + 3;
    let shared = strengthen_blocks(b, strengthen_blocks(b, b + 3));
    let split = strengthen_blocks(b, strengthen_blocks(b, 1));
    [corner, shared, split]
}

/// Number of blocks (`r + 1`) a stage needs on a layout with these sizes.
pub fn required_blocks(profile: Profile, seq: &[usize]) -> usize {
    let b = seq.iter().copied().max().unwrap_or(1).max(1);
    let n = |i: usize| seq.get(i).copied().unwrap_or(b);
    match profile {
        Profile::Family => n(0) + 1,
        Profile::Pair => n(0) + n(1) + 2,
        Profile::Mixed => n(0) + 2,
        Profile::CornerWord => n(1) + n(2) + 3,
        Profile::SharedWord => n(1) + 3,
        Profile::SplitForced => 1,
        Profile::StrengthenShared => strengthen_blocks(b, b + 3),
        Profile::StrengthenSplit => strengthen_blocks(b, 1),
        Profile::Quad => 16 * case_blocks(b).into_iter().max().expect("three cases"),
        Profile::Prefix2 => 1 + 16 * case_blocks(b).into_iter().max().expect("three cases"),
    }
}

/// Largest index `r` of a sufficient layout `n_0 ... n_r`.
pub fn required_length(profile: Profile, seq: &[usize]) -> usize {
    required_blocks(profile, seq) - 1
}

/// Per-stage block counts for blocks of size at most `b`, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBudget {
    pub max_block: usize,
    pub stages: Vec<(Profile, usize)>,
}

impl LengthBudget {
    pub fn new(max_block: usize) -> Self {
        let seq = [max_block];
        let stages = PROFILES
            .iter()
            .map(|&p| (p, required_blocks(p, &seq)))
            .collect();
        LengthBudget { max_block, stages }
    }

    pub fn blocks(&self, profile: Profile) -> usize {
        self.stages
            .iter()
            .find(|(p, _)| *p == profile)
            .map(|&(_, n)| n)
            .expect("all profiles listed")
    }
}
