//! Trade data model and the direct-counting verifier.
//!
//! A `T(t,v,k)` trade is a pair of disjoint multisets `T1`, `T2` of ordered
//! k-tuples over `{1..v}` such that every pattern on every t-subset of
//! coordinates is covered equally often by both sides. `Trade` itself only
//! enforces *structural* validity (block lengths and symbol ranges); balance
//! and disjointness are checked by [`Trade::verify`], which reports every
//! violated pattern rather than failing fast.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frequency::FrequencyVector;

/// Parameter triple of a trade: strength `t`, block length `k`, universe size `v`.
///
/// Strength 0 is allowed (it arises as the strength of level trades of
/// 1-trades); at strength 0 the trade condition degenerates to `|T1| = |T2|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub t: u32,
    pub k: u32,
    pub v: u32,
}

impl Params {
    pub fn new(t: u32, k: u32, v: u32) -> Result<Params> {
        if t > k {
            return Err(Error::InvalidParams { t, k, v, reason: "t must be at most k" });
        }
        if v < 1 {
            return Err(Error::InvalidParams { t, k, v, reason: "v must be at least 1" });
        }
        Ok(Params { t, k, v })
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{})", self.t, self.v, self.k)
    }
}

/// An ordered k-tuple of symbols from `{1..v}`; one column of a trade table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block(Vec<u32>);

impl Block {
    pub fn new(entries: Vec<u32>) -> Block {
        Block(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Extracts the symbols at the given 0-based coordinates.
    pub(crate) fn extract(&self, positions: &[u32]) -> Vec<u32> {
        positions.iter().map(|&p| self.0[p as usize]).collect()
    }
}

impl From<Vec<u32>> for Block {
    fn from(entries: Vec<u32>) -> Block {
        Block(entries)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A t-subset of coordinates together with an ordered pattern of symbols.
///
/// `positions` are 1-based and strictly increasing, matching the convention
/// that the elements of a coordinate subset are arranged in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubBlockKey {
    pub positions: Vec<u32>,
    pub values: Vec<u32>,
}

impl fmt::Display for SubBlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})_{{{}}}",
            self.values.iter().join(","),
            self.positions.iter().join(",")
        )
    }
}

/// One violated pattern: the signed count difference `count_T1 - count_T2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub key: SubBlockKey,
    pub delta: i64,
}

/// Exhaustive verification report: every violated pattern at the checked
/// strength plus every block shared by the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    /// Strength the trade was checked at.
    pub strength: u32,
    /// Patterns whose containment counts differ between the two sides,
    /// ordered by coordinate subset, then pattern.
    pub balance_violations: Vec<Violation>,
    /// Distinct blocks occurring (with positive multiplicity) on both sides.
    pub shared_blocks: Vec<Block>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.balance_violations.is_empty() && self.shared_blocks.is_empty()
    }
}

/// A pair of block multisets with fixed parameters.
///
/// Both sides are kept sorted lexicographically, so two trades are equal as
/// values exactly when they are equal as multiset pairs. Construction checks
/// block lengths and symbol ranges only; use [`Trade::verify`] for the trade
/// condition itself. Unbalanced or overlapping sides are representable on
/// purpose, so that the verifier has something to report on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trade {
    params: Params,
    t1: Vec<Block>,
    t2: Vec<Block>,
}

impl Trade {
    pub fn new(params: Params, mut t1: Vec<Block>, mut t2: Vec<Block>) -> Result<Trade> {
        for (side, blocks) in [("T1", &t1), ("T2", &t2)] {
            for block in blocks.iter() {
                if block.len() != params.k as usize {
                    return Err(Error::Structural(format!(
                        "{side} block {block} has length {}, expected k={}",
                        block.len(),
                        params.k
                    )));
                }
                if let Some(&bad) = block.entries().iter().find(|&&x| x < 1 || x > params.v) {
                    return Err(Error::Structural(format!(
                        "{side} block {block} contains symbol {bad} outside 1..={}",
                        params.v
                    )));
                }
            }
        }
        t1.sort_unstable();
        t2.sort_unstable();
        Ok(Trade { params, t1, t2 })
    }

    /// The trivial trade `(∅, ∅)`.
    pub fn empty(params: Params) -> Trade {
        Trade { params, t1: Vec::new(), t2: Vec::new() }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn t1(&self) -> &[Block] {
        &self.t1
    }

    pub fn t2(&self) -> &[Block] {
        &self.t2
    }

    /// The volume `s = |T1|`. Equals `|T2|` for anything accepted by `verify`.
    pub fn volume(&self) -> usize {
        self.t1.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.t1.is_empty() && self.t2.is_empty()
    }

    /// The set of symbols appearing in the trade.
    ///
    /// Both sides of a trade cover the same symbols; if they do not, the
    /// input is not a trade and a [`Error::FoundationMismatch`] is returned.
    pub fn foundation(&self) -> Result<BTreeSet<u32>> {
        let symbols = |side: &[Block]| -> BTreeSet<u32> {
            side.iter().flat_map(|b| b.entries().iter().copied()).collect()
        };
        let f1 = symbols(&self.t1);
        let f2 = symbols(&self.t2);
        if f1 == f2 {
            Ok(f1)
        } else {
            Err(Error::FoundationMismatch {
                only_in_t1: f1.difference(&f2).copied().collect(),
                only_in_t2: f2.difference(&f1).copied().collect(),
            })
        }
    }

    /// Checks the trade condition at strength `t` by direct counting.
    ///
    /// For every t-subset `I` of coordinates and every pattern `u`, the number
    /// of blocks of `T1` containing `u` at `I` must equal the number in `T2`,
    /// and the two sides must share no block. All violations are collected.
    pub fn verify(&self, t: u32) -> Result<VerifyReport> {
        if t > self.params.k {
            return Err(Error::StrengthTooLarge { t, k: self.params.k });
        }
        let mut balance_violations = Vec::new();
        for positions in (0..self.params.k).combinations(t as usize) {
            let mut counts = std::collections::BTreeMap::<Vec<u32>, i64>::new();
            for block in &self.t1 {
                *counts.entry(block.extract(&positions)).or_insert(0) += 1;
            }
            for block in &self.t2 {
                *counts.entry(block.extract(&positions)).or_insert(0) -= 1;
            }
            for (values, delta) in counts {
                if delta != 0 {
                    balance_violations.push(Violation {
                        key: SubBlockKey {
                            positions: positions.iter().map(|&p| p + 1).collect(),
                            values,
                        },
                        delta,
                    });
                }
            }
        }
        Ok(VerifyReport {
            strength: t,
            balance_violations,
            shared_blocks: self.shared_blocks(),
        })
    }

    /// Distinct blocks present on both sides (each listed once).
    pub fn shared_blocks(&self) -> Vec<Block> {
        // Both sides are sorted; walk them in merge order.
        let mut shared = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.t1.len() && j < self.t2.len() {
            match self.t1[i].cmp(&self.t2[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let b = self.t1[i].clone();
                    while i < self.t1.len() && self.t1[i] == b {
                        i += 1;
                    }
                    while j < self.t2.len() && self.t2[j] == b {
                        j += 1;
                    }
                    shared.push(b);
                }
            }
        }
        shared
    }

    /// Net signed multiplicity vector: `+p` for a block occurring `p` times in
    /// `T1`, `-q` for `q` times in `T2`. Blocks occurring on both sides cancel
    /// to their net count, so the conversion is lossless exactly on trades
    /// with disjoint sides.
    pub fn to_frequency(&self) -> FrequencyVector {
        let mut fv = FrequencyVector::zero(self.params);
        for block in &self.t1 {
            fv.add_entry(block.clone(), 1);
        }
        for block in &self.t2 {
            fv.add_entry(block.clone(), -1);
        }
        fv
    }

    /// Rebuilds the trade determined by a signed multiplicity vector:
    /// positive components populate `T1`, negative components `T2`.
    pub fn from_frequency(fv: &FrequencyVector) -> Trade {
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for (block, &coeff) in fv.entries() {
            let (side, copies) = if coeff > 0 {
                (&mut t1, coeff as usize)
            } else {
                (&mut t2, (-coeff) as usize)
            };
            for _ in 0..copies {
                side.push(block.clone());
            }
        }
        // Entries come out of a sorted map, so the sides are already sorted.
        Trade { params: fv.params(), t1, t2 }
    }
}

impl fmt::Display for Trade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T({}) volume {}: T1 = [{}], T2 = [{}]",
            self.params,
            self.volume(),
            self.t1.iter().join(" "),
            self.t2.iter().join(" ")
        )
    }
}

/// Wire format: `{"t":…,"k":…,"v":…,"t1":[[…],…],"t2":[[…],…]}`.
#[derive(Serialize, Deserialize)]
struct TradeFile {
    t: u32,
    k: u32,
    v: u32,
    t1: Vec<Vec<u32>>,
    t2: Vec<Vec<u32>>,
}

impl Serialize for Trade {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TradeFile {
            t: self.params.t,
            k: self.params.k,
            v: self.params.v,
            t1: self.t1.iter().map(|b| b.entries().to_vec()).collect(),
            t2: self.t2.iter().map(|b| b.entries().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Trade {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Trade, D::Error> {
        let file = TradeFile::deserialize(deserializer)?;
        let params = Params::new(file.t, file.k, file.v).map_err(D::Error::custom)?;
        Trade::new(
            params,
            file.t1.into_iter().map(Block::new).collect(),
            file.t2.into_iter().map(Block::new).collect(),
        )
        .map_err(D::Error::custom)
    }
}
