//! Signed multiplicity vectors over `V^k`.
//!
//! A frequency vector stores, for each block, its net signed multiplicity:
//! positive for the first side of a trade, negative for the second. Trades
//! correspond exactly to the integer null vectors of the inclusion matrix,
//! so addition and negation of frequency vectors implement trade composition.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::trade::{Block, Params};

/// Sparse map from blocks to nonzero signed integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    params: Params,
    entries: BTreeMap<Block, i64>,
}

impl FrequencyVector {
    /// The zero vector.
    pub fn zero(params: Params) -> FrequencyVector {
        FrequencyVector { params, entries: BTreeMap::new() }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// Nonzero entries in lexicographic block order.
    pub fn entries(&self) -> &BTreeMap<Block, i64> {
        &self.entries
    }

    pub fn coefficient(&self, block: &Block) -> i64 {
        self.entries.get(block).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `coeff` to the block's coefficient, dropping entries that cancel
    /// to zero.
    pub fn add_entry(&mut self, block: Block, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.entries.entry(block) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    /// Sum of the positive coefficients: the volume of the trade this vector
    /// determines.
    pub fn positive_volume(&self) -> u64 {
        self.entries.values().filter(|&&c| c > 0).map(|&c| c as u64).sum()
    }

    /// Sum of the absolute values of the negative coefficients.
    pub fn negative_volume(&self) -> u64 {
        self.entries.values().filter(|&&c| c < 0).map(|&c| (-c) as u64).sum()
    }

    /// Componentwise sum. Both vectors must share `t` and `k`; the universe
    /// size of the result is the larger of the two.
    pub fn checked_add(&self, other: &FrequencyVector) -> Result<FrequencyVector> {
        if self.params.t != other.params.t || self.params.k != other.params.k {
            return Err(Error::ParamMismatch(format!(
                "cannot add a {} vector to a {} vector",
                other.params, self.params
            )));
        }
        let params = Params {
            t: self.params.t,
            k: self.params.k,
            v: self.params.v.max(other.params.v),
        };
        let mut sum = FrequencyVector { params, entries: self.entries.clone() };
        for (block, &coeff) in &other.entries {
            sum.add_entry(block.clone(), coeff);
        }
        Ok(sum)
    }

    /// Componentwise negation; swaps the two sides of the determined trade.
    pub fn negated(&self) -> FrequencyVector {
        FrequencyVector {
            params: self.params,
            entries: self.entries.iter().map(|(b, &c)| (b.clone(), -c)).collect(),
        }
    }
}
