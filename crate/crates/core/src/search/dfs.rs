//! Bounded exhaustive existence search over canonical frequency vectors.
//!
//! The search decides whether a trade of volume `s` exists at `(t, k)` for
//! *some* universe size. Blocks over `{1..s}^k` are enumerated in
//! lexicographic order and assigned signed multiplicities (positive mass
//! `s` on one side, `s` on the other). Soundness of a nonexistence verdict
//! rests on two reductions:
//!
//! - relabeling invariance: symbols may be permuted independently per
//!   coordinate, so each coordinate needs at most `s` symbols (each side has
//!   `s` blocks and both sides use the same symbols per coordinate), and the
//!   search may demand that new symbols appear in increasing order along the
//!   enumeration. The lexicographically least relabeling of any trade
//!   satisfies that rule, so at least one representative of every trade
//!   survives the restriction.
//! - side symmetry: swapping the two sides negates the vector, so the first
//!   assigned block can be required to carry positive sign.
//!
//! Pruning maintains, per coordinate subset, the positive and negative mass
//! still needed to repair unbalanced patterns (each future block changes one
//! pattern per subset), drops branches whose unbalanced patterns can no
//! longer be touched, and for `k = t+1` bounds partial level volumes: every
//! nonempty level of a nonempty trade is a `(t-1)`-trade with `k' = t'+1`,
//! so its volume lies in `[2^(t-1), s - 2^(t-1)]` (there are at least two
//! nonempty levels per direction). That last rule is the nonexistence
//! induction run inside the search, and it is what makes desk-scale
//! exhaustion feasible.

use std::time::{Duration, Instant};

use crate::combinatorics::subsets_lex;
use crate::trade::{Block, Params, Trade};

use super::{ExhaustionBound, SearchStats, SearchVerdict, UnknownReason};

/// Default node budget for searches that do not pin their own.
pub const DEFAULT_MAX_NODES: u64 = 200_000_000;

/// Largest block universe (`s^k`) the engine will allocate tables for.
const MAX_UNIVERSE: u64 = 1 << 20;

/// Node and wall-clock caps. Exceeding either yields an `Unknown` verdict,
/// never a wrong one.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_duration: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: Some(DEFAULT_MAX_NODES),
            max_duration: Some(Duration::from_secs(60)),
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { max_nodes: None, max_duration: None }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes: Some(max_nodes), max_duration: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Exhausted,
    Found,
    NodeLimit,
    TimeLimit,
}

/// Decides existence of a trade of volume `s` at `(t, k)` over an unbounded
/// universe, within the given budget.
///
/// Returns `Certificate` with a verified trade, `ExhaustedNonexistent` once
/// the whole canonical space is exhausted, or `Unknown` if the budget ran
/// out first.
pub fn exhaustive_exists(t: u32, k: u32, s: u64, budget: &SearchBudget) -> SearchVerdict {
    assert!(t >= 1 && t <= k, "search requires 1 <= t <= k");
    if s == 0 {
        let params = Params::new(t, k, 1).expect("trivial parameters are valid");
        return SearchVerdict::Certificate(Trade::empty(params));
    }
    let started = Instant::now();
    let cap = s;
    let universe = (0..k).try_fold(1u64, |acc, _| {
        acc.checked_mul(cap).filter(|&u| u <= MAX_UNIVERSE)
    });
    let universe = match universe {
        Some(u) if cap <= u16::MAX as u64 => u,
        _ => {
            return SearchVerdict::Unknown(SearchStats {
                nodes: 0,
                elapsed: started.elapsed(),
                reason: UnknownReason::UniverseTooLarge,
            })
        }
    };

    let mut engine = Engine::new(t as usize, k as usize, s, cap as usize, universe as usize, budget);
    let outcome = engine.dfs(0);
    let stats = SearchStats {
        nodes: engine.nodes,
        elapsed: started.elapsed(),
        reason: UnknownReason::NodeBudget,
    };
    match outcome {
        Outcome::Found => {
            let trade = engine.solution_trade(t, k);
            assert_eq!(trade.volume() as u64, s, "search produced a wrong-volume certificate");
            assert!(
                trade.verify(t).expect("t <= k").is_valid(),
                "search produced an invalid certificate"
            );
            SearchVerdict::Certificate(trade)
        }
        Outcome::Exhausted => SearchVerdict::ExhaustedNonexistent(ExhaustionBound {
            per_coordinate_symbols: cap,
            nodes: engine.nodes,
        }),
        Outcome::NodeLimit => SearchVerdict::Unknown(stats),
        Outcome::TimeLimit => SearchVerdict::Unknown(SearchStats {
            reason: UnknownReason::TimeBudget,
            ..stats
        }),
    }
}

struct Engine {
    k: usize,
    cap: usize,
    universe: usize,
    subset_count: usize,
    /// `2^(t-1)`; level-volume bounds apply only when `k == t+1`.
    level_floor: i64,
    level_bounds: bool,
    total: i64,

    /// Digits of every block, `universe * k`, lexicographic.
    digits: Vec<u16>,
    /// Pattern key of every block per subset, `universe * subset_count`.
    keys_per_block: Vec<u32>,
    /// Largest block index containing each pattern key.
    last_block_of_key: Vec<u32>,

    delta: Vec<i64>,
    nonzero_keys: usize,
    need_pos_subset: Vec<i64>,
    need_neg_subset: Vec<i64>,
    level_pos: Vec<i64>,
    level_neg: Vec<i64>,
    need_pos_level: Vec<i64>,
    need_neg_level: Vec<i64>,
    floor_need_pos: Vec<i64>,
    floor_need_neg: Vec<i64>,
    pos_rem: i64,
    neg_rem: i64,
    symbols_used: Vec<usize>,
    chosen: Vec<(u32, i64)>,
    solution: Option<Vec<(u32, i64)>>,

    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Engine {
    fn new(
        t: usize,
        k: usize,
        s: u64,
        cap: usize,
        universe: usize,
        budget: &SearchBudget,
    ) -> Engine {
        let subsets = subsets_lex(k as u32, t as u32);
        let subset_count = subsets.len();
        let pattern_count = cap.pow(t as u32);

        let mut digits = vec![0u16; universe * k];
        let mut keys_per_block = vec![0u32; universe * subset_count];
        let mut block = vec![0usize; k];
        for b in 0..universe {
            if b > 0 {
                for d in block.iter_mut().rev() {
                    if *d + 1 < cap {
                        *d += 1;
                        break;
                    }
                    *d = 0;
                }
            }
            for (j, &d) in block.iter().enumerate() {
                digits[b * k + j] = d as u16;
            }
            for (si, subset) in subsets.iter().enumerate() {
                let rank = subset.iter().fold(0usize, |acc, &p| acc * cap + block[p as usize]);
                keys_per_block[b * subset_count + si] = (si * pattern_count + rank) as u32;
            }
        }

        // The last block containing pattern (I, u) fixes u on I and takes the
        // top symbol everywhere else.
        let key_count = subset_count * pattern_count;
        let mut last_block_of_key = vec![0u32; key_count];
        for (si, subset) in subsets.iter().enumerate() {
            for rank in 0..pattern_count {
                let mut pattern = vec![0usize; subset.len()];
                let mut r = rank;
                for slot in pattern.iter_mut().rev() {
                    *slot = r % cap;
                    r /= cap;
                }
                let mut index = 0usize;
                let mut next = 0usize;
                for j in 0..k {
                    let d = if next < subset.len() && subset[next] as usize == j {
                        next += 1;
                        pattern[next - 1]
                    } else {
                        cap - 1
                    };
                    index = index * cap + d;
                }
                last_block_of_key[si * pattern_count + rank] = index as u32;
            }
        }

        Engine {
            k,
            cap,
            universe,
            subset_count,
            level_floor: 1i64 << (t - 1),
            level_bounds: k == t + 1,
            total: s as i64,
            digits,
            keys_per_block,
            last_block_of_key,
            delta: vec![0; key_count],
            nonzero_keys: 0,
            need_pos_subset: vec![0; subset_count],
            need_neg_subset: vec![0; subset_count],
            level_pos: vec![0; k * cap],
            level_neg: vec![0; k * cap],
            need_pos_level: vec![0; k],
            need_neg_level: vec![0; k],
            floor_need_pos: vec![0; k],
            floor_need_neg: vec![0; k],
            pos_rem: s as i64,
            neg_rem: s as i64,
            symbols_used: vec![0; k],
            chosen: Vec::new(),
            solution: None,
            nodes: 0,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.max_duration.map(|d| Instant::now() + d),
            timed_out: false,
        }
    }

    #[inline]
    fn digit(&self, b: usize, j: usize) -> usize {
        self.digits[b * self.k + j] as usize
    }

    /// New symbols must appear in increasing order per coordinate: a digit is
    /// usable if it is already in use or the next fresh one.
    #[inline]
    fn canonical_ok(&self, b: usize) -> bool {
        (0..self.k).all(|j| self.digit(b, j) <= self.symbols_used[j])
    }

    fn apply(&mut self, b: usize, m: i64) -> u32 {
        let magnitude = m.abs();
        if m > 0 {
            self.pos_rem -= magnitude;
        } else {
            self.neg_rem -= magnitude;
        }
        for si in 0..self.subset_count {
            let key = self.keys_per_block[b * self.subset_count + si] as usize;
            let old = self.delta[key];
            let new = old + m;
            self.delta[key] = new;
            self.nonzero_keys = self.nonzero_keys + (new != 0) as usize - (old != 0) as usize;
            self.need_neg_subset[si] += new.max(0) - old.max(0);
            self.need_pos_subset[si] += (-new).max(0) - (-old).max(0);
        }
        for j in 0..self.k {
            let idx = j * self.cap + self.digit(b, j);
            let (old_pos, old_neg) = (self.level_pos[idx], self.level_neg[idx]);
            if m > 0 {
                self.level_pos[idx] += magnitude;
            } else {
                self.level_neg[idx] += magnitude;
            }
            let (new_pos, new_neg) = (self.level_pos[idx], self.level_neg[idx]);
            let (old_net, new_net) = (old_pos - old_neg, new_pos - new_neg);
            self.need_neg_level[j] += new_net.max(0) - old_net.max(0);
            self.need_pos_level[j] += (-new_net).max(0) - (-old_net).max(0);
            if self.level_bounds {
                let committed_before = old_pos + old_neg > 0;
                let before_pos = if committed_before { (self.level_floor - old_pos).max(0) } else { 0 };
                let before_neg = if committed_before { (self.level_floor - old_neg).max(0) } else { 0 };
                self.floor_need_pos[j] += (self.level_floor - new_pos).max(0) - before_pos;
                self.floor_need_neg[j] += (self.level_floor - new_neg).max(0) - before_neg;
            }
        }
        let mut fresh = 0u32;
        for j in 0..self.k {
            if self.digit(b, j) == self.symbols_used[j] {
                self.symbols_used[j] += 1;
                fresh |= 1 << j;
            }
        }
        self.chosen.push((b as u32, m));
        fresh
    }

    fn undo(&mut self, b: usize, m: i64, fresh: u32) {
        self.chosen.pop();
        for j in 0..self.k {
            if fresh & (1 << j) != 0 {
                self.symbols_used[j] -= 1;
            }
        }
        let magnitude = m.abs();
        for j in 0..self.k {
            let idx = j * self.cap + self.digit(b, j);
            let (old_pos, old_neg) = (self.level_pos[idx], self.level_neg[idx]);
            if m > 0 {
                self.level_pos[idx] -= magnitude;
            } else {
                self.level_neg[idx] -= magnitude;
            }
            let (new_pos, new_neg) = (self.level_pos[idx], self.level_neg[idx]);
            let (old_net, new_net) = (old_pos - old_neg, new_pos - new_neg);
            self.need_neg_level[j] += new_net.max(0) - old_net.max(0);
            self.need_pos_level[j] += (-new_net).max(0) - (-old_net).max(0);
            if self.level_bounds {
                let committed_after = new_pos + new_neg > 0;
                let after_pos = if committed_after { (self.level_floor - new_pos).max(0) } else { 0 };
                let after_neg = if committed_after { (self.level_floor - new_neg).max(0) } else { 0 };
                self.floor_need_pos[j] += after_pos - (self.level_floor - old_pos).max(0);
                self.floor_need_neg[j] += after_neg - (self.level_floor - old_neg).max(0);
            }
        }
        for si in 0..self.subset_count {
            let key = self.keys_per_block[b * self.subset_count + si] as usize;
            let old = self.delta[key];
            let new = old - m;
            self.delta[key] = new;
            self.nonzero_keys = self.nonzero_keys + (new != 0) as usize - (old != 0) as usize;
            self.need_neg_subset[si] += new.max(0) - old.max(0);
            self.need_pos_subset[si] += (-new).max(0) - (-old).max(0);
        }
        if m > 0 {
            self.pos_rem += magnitude;
        } else {
            self.neg_rem += magnitude;
        }
    }

    /// Remaining mass must cover every repair obligation. Each future block
    /// contributes one unit to exactly one pattern per subset and one level
    /// per direction.
    fn feasible(&self) -> bool {
        for si in 0..self.subset_count {
            if self.need_pos_subset[si] > self.pos_rem || self.need_neg_subset[si] > self.neg_rem {
                return false;
            }
        }
        for j in 0..self.k {
            if self.need_pos_level[j] > self.pos_rem || self.need_neg_level[j] > self.neg_rem {
                return false;
            }
        }
        if self.level_bounds {
            for j in 0..self.k {
                if self.floor_need_pos[j] > self.pos_rem || self.floor_need_neg[j] > self.neg_rem {
                    return false;
                }
            }
        }
        true
    }

    /// Level-volume caps for the levels the block touches: with at least two
    /// nonempty levels per direction, none may exceed `s - 2^(t-1)`.
    fn block_levels_ok(&self, b: usize) -> bool {
        if !self.level_bounds {
            return true;
        }
        let limit = self.total - self.level_floor;
        (0..self.k).all(|j| {
            let idx = j * self.cap + self.digit(b, j);
            self.level_pos[idx] <= limit && self.level_neg[idx] <= limit
        })
    }

    /// Moving past `b` freezes every pattern whose last containing block is
    /// `b`, and for the first coordinate freezes a whole level at the end of
    /// its run.
    fn can_advance(&self, b: usize) -> bool {
        for si in 0..self.subset_count {
            let key = self.keys_per_block[b * self.subset_count + si] as usize;
            if self.last_block_of_key[key] as usize == b && self.delta[key] != 0 {
                return false;
            }
        }
        if self.level_bounds {
            let run = self.universe / self.cap;
            if (b + 1) % run == 0 {
                let x = b / run;
                let pos = self.level_pos[x];
                if pos > 0 && pos < self.level_floor {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, from: usize) -> Outcome {
        if self.pos_rem == 0 && self.neg_rem == 0 {
            return if self.nonzero_keys == 0 {
                self.solution = Some(self.chosen.clone());
                Outcome::Found
            } else {
                Outcome::Exhausted
            };
        }
        let mut b = from;
        while b < self.universe {
            if self.canonical_ok(b) {
                let positives = if self.pos_rem > 0 { 1..=self.pos_rem } else { 1..=0 };
                let negatives = if self.neg_rem > 0 && !self.chosen.is_empty() {
                    1..=self.neg_rem
                } else {
                    1..=0
                };
                for m in positives.map(|m| m).chain(negatives.map(|m| -m)) {
                    self.nodes += 1;
                    if self.nodes > self.max_nodes {
                        return Outcome::NodeLimit;
                    }
                    if self.nodes % 8192 == 0 {
                        if let Some(deadline) = self.deadline {
                            if Instant::now() >= deadline {
                                self.timed_out = true;
                                return Outcome::TimeLimit;
                            }
                        }
                    }
                    let fresh = self.apply(b, m);
                    let viable =
                        self.feasible() && self.block_levels_ok(b) && self.can_advance(b);
                    let outcome = if viable { self.dfs(b + 1) } else { Outcome::Exhausted };
                    self.undo(b, m, fresh);
                    if outcome != Outcome::Exhausted {
                        return outcome;
                    }
                }
            }
            if !self.can_advance(b) {
                return Outcome::Exhausted;
            }
            b += 1;
        }
        Outcome::Exhausted
    }

    fn solution_trade(&self, t: u32, k: u32) -> Trade {
        let support = self.solution.as_ref().expect("solution recorded on Found");
        let mut v = 1u32;
        for &(b, _) in support {
            for j in 0..self.k {
                v = v.max(self.digit(b as usize, j) as u32 + 1);
            }
        }
        let params = Params::new(t, k, v).expect("search parameters are valid");
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for &(b, m) in support {
            let entries: Vec<u32> =
                (0..self.k).map(|j| self.digit(b as usize, j) as u32 + 1).collect();
            let (side, copies) = if m > 0 { (&mut t1, m) } else { (&mut t2, -m) };
            for _ in 0..copies {
                side.push(Block::new(entries.clone()));
            }
        }
        Trade::new(params, t1, t2).expect("search blocks are structurally valid")
    }
}
