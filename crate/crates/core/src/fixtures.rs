//! Built-in trade corpus, transcribed column-by-column from published tables.
//!
//! Each table is kept in row-major form exactly as printed (one string per
//! coordinate row, blocks are the columns) so the transcription can be
//! eyeball-checked. Everything else about the fixtures is enforced by tests:
//! all of them must verify at their declared strength via both oracles.

use crate::trade::{Block, Params, Trade};

/// A named fixture together with the strength it is declared at.
pub struct Fixture {
    pub name: &'static str,
    pub strength: u32,
    pub trade: Trade,
}

fn columns(rows: &[&str]) -> Vec<Block> {
    let grid: Vec<Vec<u32>> = rows
        .iter()
        .map(|row| {
            row.split_whitespace()
                .map(|s| s.parse().expect("fixture tables contain digits"))
                .collect()
        })
        .collect();
    let width = grid[0].len();
    assert!(grid.iter().all(|r| r.len() == width), "ragged fixture table");
    (0..width)
        .map(|c| Block::new(grid.iter().map(|r| r[c]).collect()))
        .collect()
}

fn trade(t: u32, k: u32, v: u32, t1_rows: &[&str], t2_rows: &[&str]) -> Trade {
    let params = Params::new(t, k, v).expect("fixture parameters are valid");
    Trade::new(params, columns(t1_rows), columns(t2_rows))
        .expect("fixture tables are structurally valid")
}

/// The 3-(3,4) trade of volume 15 with foundation {1,2,3}.
pub fn example1() -> Trade {
    trade(
        3,
        4,
        3,
        &[
            "3 3 2 2 2 1 1 2 2 1 1 3 3 2 2",
            "3 2 3 2 1 2 1 2 1 2 1 3 2 3 2",
            "3 3 3 3 3 3 3 2 2 2 2 1 1 1 1",
            "2 3 3 1 2 2 1 2 1 1 2 3 2 2 3",
        ],
        &[
            "3 3 2 2 2 1 1 2 2 1 1 3 3 2 2",
            "3 2 3 2 1 2 1 2 1 2 1 3 2 3 2",
            "3 3 3 3 3 3 3 2 2 2 2 1 1 1 1",
            "3 2 2 3 1 1 2 1 2 2 1 2 3 3 2",
        ],
    )
}

/// The Latin bitrade of volume 7, written as (row, column, symbol) triples.
pub fn example2() -> Trade {
    trade(
        2,
        3,
        3,
        &[
            "1 1 2 2 2 3 3",
            "1 2 1 2 3 2 3",
            "1 2 2 1 3 3 2",
        ],
        &[
            "1 1 2 2 2 3 3",
            "1 2 1 2 3 2 3",
            "2 1 1 3 2 2 3",
        ],
    )
}

/// A 3-(4,4) trade of volume 17.
pub fn appendix17() -> Trade {
    trade(
        3,
        4,
        4,
        &[
            "2 2 2 1 1 1 3 3 1 1 3 3 2 2 2 1 1",
            "3 2 1 3 2 1 3 2 3 2 3 2 3 2 1 2 1",
            "3 3 3 3 3 3 2 2 2 2 1 1 1 1 1 1 1",
            "2 3 1 3 1 2 3 2 2 3 2 3 3 1 2 2 1",
        ],
        &[
            "2 2 2 1 1 1 3 3 1 1 3 3 2 2 2 1 1",
            "3 2 1 3 2 1 3 2 3 2 3 2 3 2 1 2 1",
            "3 3 3 3 3 3 2 2 2 2 1 1 1 1 1 1 1",
            "3 1 2 2 3 1 2 3 3 2 3 2 2 3 1 1 2",
        ],
    )
}

/// A 3-(4,4) trade of volume 19.
pub fn appendix19() -> Trade {
    trade(
        3,
        4,
        4,
        &[
            "3 3 2 2 2 1 1 1 2 2 1 1 3 3 2 2 2 1 1",
            "3 2 4 3 1 4 2 1 4 2 4 2 3 2 3 2 1 2 1",
            "3 3 3 3 3 3 3 3 2 2 2 2 1 1 1 1 1 1 1",
            "3 2 3 2 1 1 3 2 1 3 3 1 2 3 3 1 2 2 1",
        ],
        &[
            "3 3 2 2 2 1 1 1 2 2 1 1 3 3 2 2 2 1 1",
            "3 2 4 3 1 4 2 1 4 2 4 2 3 2 3 2 1 2 1",
            "3 3 3 3 3 3 3 3 2 2 2 2 1 1 1 1 1 1 1",
            "2 3 1 3 2 3 2 1 3 1 1 3 3 2 2 3 1 1 2",
        ],
    )
}

/// A 3-(3,4) trade of volume 21.
pub fn appendix21() -> Trade {
    trade(
        3,
        4,
        3,
        &[
            "3 3 2 2 2 1 1 3 3 2 2 2 1 1 3 3 2 2 2 1 1",
            "3 2 3 2 1 2 1 3 2 3 2 1 2 1 3 2 3 2 1 2 1",
            "3 3 3 3 3 3 3 2 2 2 2 2 2 2 1 1 1 1 1 1 1",
            "1 3 3 2 1 1 2 2 1 1 3 2 2 3 3 2 2 1 3 3 1",
        ],
        &[
            "3 3 2 2 2 1 1 3 3 2 2 2 1 1 3 3 2 2 2 1 1",
            "3 2 3 2 1 2 1 3 2 3 2 1 2 1 3 2 3 2 1 2 1",
            "3 3 3 3 3 3 3 2 2 2 2 2 2 2 1 1 1 1 1 1 1",
            "3 1 1 3 2 2 1 1 2 2 1 3 3 2 2 3 3 2 1 1 3",
        ],
    )
}

/// All fixtures with their declared strengths and volumes checked by tests.
pub fn all() -> Vec<Fixture> {
    vec![
        Fixture { name: "example1", strength: 3, trade: example1() },
        Fixture { name: "example2", strength: 2, trade: example2() },
        Fixture { name: "appendix17", strength: 3, trade: appendix17() },
        Fixture { name: "appendix19", strength: 3, trade: appendix19() },
        Fixture { name: "appendix21", strength: 3, trade: appendix21() },
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}

/// Fixture names in corpus order.
pub fn names() -> Vec<&'static str> {
    all().into_iter().map(|f| f.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_volumes() {
        let volumes: Vec<(&str, usize)> =
            all().iter().map(|f| (f.name, f.trade.volume())).collect();
        assert_eq!(
            volumes,
            vec![
                ("example1", 15),
                ("example2", 7),
                ("appendix17", 17),
                ("appendix19", 19),
                ("appendix21", 21),
            ]
        );
    }

    #[test]
    fn both_sides_have_equal_size() {
        for f in all() {
            assert_eq!(f.trade.t1().len(), f.trade.t2().len(), "{}", f.name);
        }
    }

    #[test]
    fn fixtures_verify_at_declared_strength() {
        for f in all() {
            let report = f.trade.verify(f.strength).unwrap();
            assert!(
                report.is_valid(),
                "{} failed: {:?} shared {:?}",
                f.name,
                report.balance_violations,
                report.shared_blocks
            );
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(by_name("appendix21").unwrap().trade.volume(), 21);
        assert!(by_name("nonsense").is_none());
    }
}
