//! Level trades: fixing a symbol at one coordinate and deleting it.
//!
//! Fixing `x` at coordinate `j` of a t-trade and deleting that coordinate
//! yields a (t-1)-trade. Decomposing along a direction partitions the
//! blocks, so the level volumes always sum to the parent volume; when a
//! decomposition has exactly two nonempty levels their volumes are equal
//! (the parent has the doubled shape), which is what drives the search's
//! level-volume pruning.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::trade::{Block, Params, Trade};

/// All level trades of a trade in one direction, keyed by symbol. Only
/// symbols actually occurring at the coordinate get an entry.
#[derive(Debug, Clone)]
pub struct LevelDecomposition {
    pub direction: u32,
    pub levels: BTreeMap<u32, Trade>,
}

impl LevelDecomposition {
    /// Level volumes keyed by symbol.
    pub fn volumes(&self) -> BTreeMap<u32, usize> {
        self.levels.iter().map(|(&x, t)| (x, t.volume())).collect()
    }
}

fn check_direction(trade: &Trade, j: u32) -> Result<Params> {
    let params = trade.params();
    if params.t < 1 {
        return Err(Error::InvalidParams {
            t: params.t,
            k: params.k,
            v: params.v,
            reason: "level trades need strength at least 1",
        });
    }
    if j < 1 || j > params.k {
        return Err(Error::IndexOutOfRange {
            what: "direction",
            value: j as u64,
            min: 1,
            max: params.k as u64,
        });
    }
    Params::new(params.t - 1, params.k - 1, params.v)
}

fn delete_coordinate(block: &Block, j: usize) -> Block {
    let mut entries = block.entries().to_vec();
    entries.remove(j);
    Block::new(entries)
}

/// The level trade of `trade` in direction `j` (1-based) at symbol `x`:
/// both sides restricted to blocks with `x` at coordinate `j`, with that
/// coordinate deleted. Parameters drop to `(t-1, k-1)`.
pub fn level_trade(trade: &Trade, j: u32, x: u32) -> Result<Trade> {
    let level_params = check_direction(trade, j)?;
    let idx = (j - 1) as usize;
    let restrict = |side: &[Block]| -> Vec<Block> {
        side.iter()
            .filter(|b| b.entries()[idx] == x)
            .map(|b| delete_coordinate(b, idx))
            .collect()
    };
    Trade::new(level_params, restrict(trade.t1()), restrict(trade.t2()))
}

/// Splits a trade into its level trades along direction `j` (1-based).
pub fn level_decomposition(trade: &Trade, j: u32) -> Result<LevelDecomposition> {
    let level_params = check_direction(trade, j)?;
    let idx = (j - 1) as usize;
    let mut sides: BTreeMap<u32, (Vec<Block>, Vec<Block>)> = BTreeMap::new();
    for block in trade.t1() {
        let entry = sides.entry(block.entries()[idx]).or_default();
        entry.0.push(delete_coordinate(block, idx));
    }
    for block in trade.t2() {
        let entry = sides.entry(block.entries()[idx]).or_default();
        entry.1.push(delete_coordinate(block, idx));
    }
    let mut levels = BTreeMap::new();
    for (x, (t1, t2)) in sides {
        levels.insert(x, Trade::new(level_params, t1, t2)?);
    }
    Ok(LevelDecomposition { direction: j, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::double;
    use crate::fixtures;

    #[test]
    fn level_of_example1_is_example2() {
        let level = level_trade(&fixtures::example1(), 3, 3).unwrap();
        assert_eq!(level, fixtures::example2());
    }

    #[test]
    fn absent_symbol_gives_the_trivial_level() {
        let level = level_trade(&fixtures::example1(), 3, 4).unwrap();
        assert!(level.is_trivial());
    }

    #[test]
    fn levels_of_a_doubled_trade_are_the_halves() {
        let base = fixtures::example2();
        let doubled = double(&base, 1, 2).unwrap();
        let front = level_trade(&doubled, 1, 1).unwrap();
        assert_eq!(front, base);
        // The other level is the side swap.
        let back = level_trade(&doubled, 1, 2).unwrap();
        assert_eq!(back.t1(), base.t2());
        assert_eq!(back.t2(), base.t1());
    }

    #[test]
    fn example1_has_three_levels_in_direction_3() {
        let decomposition = level_decomposition(&fixtures::example1(), 3).unwrap();
        assert_eq!(decomposition.levels.len(), 3);
        let total: usize = decomposition.volumes().values().sum();
        assert_eq!(total, 15);
        for (x, level) in &decomposition.levels {
            assert!(level.verify(2).unwrap().is_valid(), "level {x} invalid");
        }
    }

    #[test]
    fn trivial_trade_has_no_levels() {
        let t = Trade::empty(Params::new(2, 3, 3).unwrap());
        assert!(level_decomposition(&t, 1).unwrap().levels.is_empty());
    }

    #[test]
    fn doubled_trade_has_two_equal_levels_in_front() {
        let doubled = double(&fixtures::example2(), 1, 2).unwrap();
        let decomposition = level_decomposition(&doubled, 1).unwrap();
        assert_eq!(
            decomposition.volumes(),
            BTreeMap::from([(1, 7), (2, 7)])
        );
    }

    #[test]
    fn direction_out_of_range_is_rejected() {
        assert!(level_trade(&fixtures::example2(), 0, 1).is_err());
        assert!(level_trade(&fixtures::example2(), 4, 1).is_err());
        assert!(level_decomposition(&fixtures::example2(), 9).is_err());
    }

    #[test]
    fn level_volumes_sum_to_parent_in_every_direction() {
        for f in fixtures::all() {
            let k = f.trade.params().k;
            for j in 1..=k {
                let decomposition = level_decomposition(&f.trade, j).unwrap();
                let total: usize = decomposition.volumes().values().sum();
                assert_eq!(total, f.trade.volume(), "{} direction {}", f.name, j);
                for (x, level) in &decomposition.levels {
                    assert!(
                        level.verify(f.strength - 1).unwrap().is_valid(),
                        "{} level ({j},{x})",
                        f.name
                    );
                }
            }
        }
    }
}
