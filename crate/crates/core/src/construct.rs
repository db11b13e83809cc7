//! Constructive operations on trades.
//!
//! Everything here is a pure function from trades (or parameters) to trades,
//! and every output is expected to pass [`Trade::verify`] at its declared
//! strength; the property suite checks this over randomized inputs.
//!
//! The one construction with real content is [`critical_trade`]: a signed
//! product of `t+1` binomials expands to a trade, and summing two such
//! products that agree in their first `t+1-i` binomials cancels a
//! `2^(t+1-i)`-term tail, leaving exactly the critical volume
//! `2^(t+1) - 2^(t+1-i)`. The volume is asserted after cancellation, so any
//! accidental collision aborts instead of returning a wrong-volume trade.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frequency::FrequencyVector;
use crate::trade::{Block, Params, Trade};

/// One factor of a signed product: a fixed symbol or a difference `a - b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Symbol(u32),
    Difference(u32, u32),
}

/// Sign of a product or of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A signed product of `k` factors, each a monomial or a binomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedProductSpec {
    pub sign: Sign,
    pub factors: Vec<Factor>,
}

/// Distributes a signed product into its frequency vector.
///
/// Coordinate `j` of each expanded block takes one of the symbols of the
/// `j`-th factor; choosing the subtrahend of a binomial flips the sign.
/// Coefficients of coinciding blocks are summed.
pub fn expand_polynomial(spec: &SignedProductSpec, params: Params) -> Result<FrequencyVector> {
    if spec.factors.len() != params.k as usize {
        return Err(Error::ParamMismatch(format!(
            "product has {} factors, parameters require k={}",
            spec.factors.len(),
            params.k
        )));
    }
    for factor in &spec.factors {
        let ok = match *factor {
            Factor::Symbol(a) => (1..=params.v).contains(&a),
            Factor::Difference(a, b) => {
                if a == b {
                    return Err(Error::Structural(format!(
                        "binomial factor ({a} - {b}) repeats a symbol"
                    )));
                }
                (1..=params.v).contains(&a) && (1..=params.v).contains(&b)
            }
        };
        if !ok {
            return Err(Error::Structural(format!(
                "factor {factor:?} uses a symbol outside 1..={}",
                params.v
            )));
        }
    }

    let mut terms: Vec<(Vec<u32>, i64)> = vec![(Vec::new(), spec.sign.unit())];
    for factor in &spec.factors {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (prefix, coeff) in &terms {
            match *factor {
                Factor::Symbol(a) => {
                    let mut b = prefix.clone();
                    b.push(a);
                    next.push((b, *coeff));
                }
                Factor::Difference(a, b_sym) => {
                    let mut first = prefix.clone();
                    first.push(a);
                    next.push((first, *coeff));
                    let mut second = prefix.clone();
                    second.push(b_sym);
                    next.push((second, -*coeff));
                }
            }
        }
        terms = next;
    }

    let mut fv = FrequencyVector::zero(params);
    for (entries, coeff) in terms {
        fv.add_entry(Block::new(entries), coeff);
    }
    Ok(fv)
}

/// The critical volumes `s_i = 2^(t+1) - 2^(t+1-i)` for `0 <= i <= t+1`, in
/// increasing order.
pub fn critical_volume(t: u32, i: u32) -> u64 {
    assert!(t >= 1 && t <= 62 && i <= t + 1);
    (1u64 << (t + 1)) - (1u64 << (t + 1 - i))
}

/// Builds a verified trade of the critical volume `s_i` at strength `t` and
/// block length `k >= t+1`.
///
/// The two products share their first `t+1-i` binomials; the shared part is
/// instantiated with symbols 1 (minuends) and 2 (subtrahends), the deviating
/// binomials of the second product use 3 as minuend, and trailing monomials
/// are fixed to 1, giving foundation within `{1,2,3}`.
pub fn critical_trade(t: u32, k: u32, i: u32) -> Result<Trade> {
    if t < 1 || t > 20 {
        return Err(Error::InvalidParams { t, k, v: 3, reason: "strength must be in 1..=20" });
    }
    if k < t + 1 {
        return Err(Error::InvalidParams { t, k, v: 3, reason: "k must be at least t+1" });
    }
    if i > t + 1 {
        return Err(Error::IndexOutOfRange {
            what: "critical index i",
            value: i as u64,
            min: 0,
            max: (t + 1) as u64,
        });
    }
    let params = Params::new(t, k, 3)?;
    if i == 0 {
        return Ok(Trade::empty(params));
    }

    let shared = (t + 1 - i) as usize;
    let binomials = (t + 1) as usize;
    let monomials = (k - t - 1) as usize;

    let mut first = Vec::with_capacity(k as usize);
    let mut second = Vec::with_capacity(k as usize);
    for b in 0..binomials {
        first.push(Factor::Difference(1, 2));
        second.push(if b < shared {
            Factor::Difference(1, 2)
        } else {
            Factor::Difference(3, 2)
        });
    }
    first.extend(std::iter::repeat(Factor::Symbol(1)).take(monomials));
    second.extend(std::iter::repeat(Factor::Symbol(1)).take(monomials));

    let sum = expand_polynomial(&SignedProductSpec { sign: Sign::Plus, factors: first }, params)?
        .checked_add(&expand_polynomial(
            &SignedProductSpec { sign: Sign::Minus, factors: second },
            params,
        )?)?;
    let trade = Trade::from_frequency(&sum);

    let expected = critical_volume(t, i);
    if trade.volume() as u64 != expected || sum.negative_volume() != expected {
        return Err(Error::Construction(format!(
            "critical trade (t={t}, k={k}, i={i}) came out with volume {} instead of {expected}",
            trade.volume()
        )));
    }
    if !trade.verify(t)?.is_valid() {
        return Err(Error::Construction(format!(
            "critical trade (t={t}, k={k}, i={i}) failed verification"
        )));
    }
    Ok(trade)
}

/// Extends every block of both sides to length `k_new` with copies of the
/// fill symbol 1. Volume and strength are preserved.
pub fn pad_to_k(trade: &Trade, k_new: u32) -> Result<Trade> {
    pad_to_k_with(trade, k_new, 1)
}

/// [`pad_to_k`] with an explicit fill symbol.
pub fn pad_to_k_with(trade: &Trade, k_new: u32, fill: u32) -> Result<Trade> {
    let params = trade.params();
    if k_new < params.k {
        return Err(Error::IndexOutOfRange {
            what: "padded length k_new",
            value: k_new as u64,
            min: params.k as u64,
            max: u32::MAX as u64,
        });
    }
    if fill < 1 {
        return Err(Error::Structural("fill symbol must be at least 1".into()));
    }
    let new_params = Params::new(params.t, k_new, params.v.max(fill))?;
    let extend = |side: &[Block]| -> Vec<Block> {
        side.iter()
            .map(|b| {
                let mut entries = b.entries().to_vec();
                entries.resize(k_new as usize, fill);
                Block::new(entries)
            })
            .collect()
    };
    Trade::new(new_params, extend(trade.t1()), extend(trade.t2()))
}

/// Doubles a trade: prepending `x` to one side and `y` to the other, both
/// ways round, yields a trade of strength `t+1`, length `k+1` and twice the
/// volume.
pub fn double(trade: &Trade, x: u32, y: u32) -> Result<Trade> {
    if x == y {
        return Err(Error::Structural(format!(
            "doubling needs two distinct symbols, got {x} twice"
        )));
    }
    if x < 1 || y < 1 {
        return Err(Error::Structural("doubling symbols must be at least 1".into()));
    }
    let params = trade.params();
    let new_params = Params::new(params.t + 1, params.k + 1, params.v.max(x).max(y))?;
    fn prepend(symbol: u32, side: &[Block]) -> impl Iterator<Item = Block> + '_ {
        side.iter().map(move |b| {
            let mut entries = Vec::with_capacity(b.len() + 1);
            entries.push(symbol);
            entries.extend_from_slice(b.entries());
            Block::new(entries)
        })
    }
    Trade::new(
        new_params,
        prepend(x, trade.t1()).chain(prepend(y, trade.t2())).collect(),
        prepend(x, trade.t2()).chain(prepend(y, trade.t1())).collect(),
    )
}

/// Composes two trades by exact signed cancellation of their frequency
/// vectors: `a + b` merges like sides, `a - b` merges opposite sides. Blocks
/// appearing on both sides of the merge cancel.
pub fn compose(a: &Trade, b: &Trade, sign: Sign) -> Result<Trade> {
    if a.params().t != b.params().t || a.params().k != b.params().k {
        return Err(Error::ParamMismatch(format!(
            "cannot compose a {} trade with a {} trade",
            a.params(),
            b.params()
        )));
    }
    let fb = match sign {
        Sign::Plus => b.to_frequency(),
        Sign::Minus => b.to_frequency().negated(),
    };
    Ok(Trade::from_frequency(&a.to_frequency().checked_add(&fb)?))
}

/// The cyclic 1-(v,2) trade of volume `s >= 2`: pairs `(i, i)` against
/// `(i, i mod s + 1)`. Volume 1 does not exist at strength 1 and is refused.
pub fn cyclic_one_trade(s: u32) -> Result<Trade> {
    if s == 0 {
        return Ok(Trade::empty(Params::new(1, 2, 1)?));
    }
    if s == 1 {
        return Err(Error::Nonexistent(
            "a 1-(v,2) trade of volume 1 does not exist".into(),
        ));
    }
    let params = Params::new(1, 2, s)?;
    let t1 = (1..=s).map(|i| Block::new(vec![i, i])).collect();
    let t2 = (1..=s).map(|i| Block::new(vec![i, i % s + 1])).collect();
    Trade::new(params, t1, t2)
}

/// The cyclic-shift Latin bitrade of order `n >= 2`: the cells of an `n x n`
/// cyclic Latin square against the same square with every symbol shifted by
/// one. A 2-(n,3) trade of volume `n^2`.
pub fn cyclic_bitrade(n: u32) -> Result<Trade> {
    if n == 0 {
        return Ok(Trade::empty(Params::new(2, 3, 1)?));
    }
    if n == 1 {
        return Err(Error::Nonexistent(
            "shifting a 1x1 square leaves its only cell unchanged".into(),
        ));
    }
    let params = Params::new(2, 3, n)?;
    let symbol = |r: u32, c: u32, shift: u32| (r - 1 + c - 1 + shift) % n + 1;
    let side = |shift: u32| -> Vec<Block> {
        (1..=n)
            .flat_map(|r| (1..=n).map(move |c| Block::new(vec![r, c, symbol(r, c, shift)])))
            .collect()
    };
    Trade::new(params, side(0), side(1))
}

/// Per-coordinate symbol maps for [`relabel`], one map per coordinate.
pub type CoordinateMaps = Vec<BTreeMap<u32, u32>>;

/// Applies a symbol bijection independently at every coordinate.
///
/// Each map must cover the symbols actually used at its coordinate and be
/// injective on them; symbols outside the map's domain may not occur.
/// Relabeling preserves volume and the verification verdict.
pub fn relabel(trade: &Trade, maps: &[BTreeMap<u32, u32>]) -> Result<Trade> {
    let params = trade.params();
    if maps.len() != params.k as usize {
        return Err(Error::ParamMismatch(format!(
            "{} coordinate maps supplied for k={}",
            maps.len(),
            params.k
        )));
    }
    // Validate each map against the symbols used at its coordinate.
    let mut max_image = 1u32;
    for (j, map) in maps.iter().enumerate() {
        let mut images = BTreeMap::new();
        for block in trade.t1().iter().chain(trade.t2()) {
            let used = block.entries()[j];
            let image = *map.get(&used).ok_or_else(|| Error::NonBijectiveRelabel {
                coordinate: j as u32 + 1,
                reason: format!("symbol {used} is used but not mapped"),
            })?;
            if image < 1 {
                return Err(Error::NonBijectiveRelabel {
                    coordinate: j as u32 + 1,
                    reason: format!("symbol {used} maps to {image}, below 1"),
                });
            }
            if let Some(&prior) = images.get(&image) {
                if prior != used {
                    return Err(Error::NonBijectiveRelabel {
                        coordinate: j as u32 + 1,
                        reason: format!("symbols {prior} and {used} both map to {image}"),
                    });
                }
            }
            images.insert(image, used);
            max_image = max_image.max(image);
        }
    }
    let new_params = Params::new(params.t, params.k, params.v.max(max_image))?;
    let apply = |side: &[Block]| -> Vec<Block> {
        side.iter()
            .map(|b| {
                Block::new(
                    b.entries()
                        .iter()
                        .enumerate()
                        .map(|(j, sym)| maps[j][sym])
                        .collect(),
                )
            })
            .collect()
    };
    Trade::new(new_params, apply(trade.t1()), apply(trade.t2()))
}

/// Shifts every symbol of every coordinate up by `offset`. With
/// `offset >= max(found(trade))` the result's foundation is disjoint from
/// the original's, which is what composition with additive volume needs.
pub fn relabel_shift(trade: &Trade, offset: u32) -> Result<Trade> {
    let k = trade.params().k as usize;
    let mut maps: CoordinateMaps = vec![BTreeMap::new(); k];
    for block in trade.t1().iter().chain(trade.t2()) {
        for (j, &sym) in block.entries().iter().enumerate() {
            maps[j].insert(sym, sym + offset);
        }
    }
    relabel(trade, &maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn block(entries: &[u32]) -> Block {
        Block::new(entries.to_vec())
    }

    fn fv_entries(fv: &FrequencyVector) -> Vec<(Vec<u32>, i64)> {
        fv.entries()
            .iter()
            .map(|(b, &c)| (b.entries().to_vec(), c))
            .collect()
    }

    #[test]
    fn expand_single_binomial() {
        let spec = SignedProductSpec {
            sign: Sign::Plus,
            factors: vec![Factor::Difference(1, 2)],
        };
        let fv = expand_polynomial(&spec, Params::new(1, 1, 2).unwrap()).unwrap();
        assert_eq!(fv_entries(&fv), vec![(vec![1], 1), (vec![2], -1)]);
    }

    #[test]
    fn expand_two_binomials() {
        let spec = SignedProductSpec {
            sign: Sign::Plus,
            factors: vec![Factor::Difference(1, 2), Factor::Difference(1, 2)],
        };
        let fv = expand_polynomial(&spec, Params::new(1, 2, 2).unwrap()).unwrap();
        assert_eq!(
            fv_entries(&fv),
            vec![
                (vec![1, 1], 1),
                (vec![1, 2], -1),
                (vec![2, 1], -1),
                (vec![2, 2], 1),
            ]
        );
    }

    #[test]
    fn expand_monomial_fixes_a_coordinate() {
        let spec = SignedProductSpec {
            sign: Sign::Plus,
            factors: vec![Factor::Difference(1, 2), Factor::Symbol(3)],
        };
        let fv = expand_polynomial(&spec, Params::new(1, 2, 3).unwrap()).unwrap();
        assert_eq!(fv_entries(&fv), vec![(vec![1, 3], 1), (vec![2, 3], -1)]);
    }

    #[test]
    fn expand_rejects_degenerate_binomials() {
        let spec = SignedProductSpec {
            sign: Sign::Plus,
            factors: vec![Factor::Difference(2, 2)],
        };
        assert!(expand_polynomial(&spec, Params::new(1, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn critical_trade_smallest_case() {
        let t = critical_trade(1, 2, 2).unwrap();
        assert_eq!(t.volume(), 3);
        assert_eq!(t.t1(), &[block(&[1, 1]), block(&[2, 3]), block(&[3, 2])]);
        assert_eq!(t.t2(), &[block(&[1, 2]), block(&[2, 1]), block(&[3, 3])]);
    }

    #[test]
    fn critical_trade_index_zero_is_trivial() {
        let t = critical_trade(3, 4, 0).unwrap();
        assert!(t.is_trivial());
    }

    #[test]
    fn critical_trade_volume_eight() {
        let t = critical_trade(3, 4, 1).unwrap();
        assert_eq!(t.volume(), 8); // 2^4 - 2^3
        assert!(t.verify(3).unwrap().is_valid());
    }

    #[test]
    fn critical_trade_range_checks() {
        assert!(critical_trade(2, 2, 1).is_err()); // k < t+1
        assert!(critical_trade(2, 3, 4).is_err()); // i > t+1
    }

    #[test]
    fn pad_preserves_volume_and_strength() {
        let padded = pad_to_k(&fixtures::example2(), 4).unwrap();
        assert_eq!(padded.volume(), 7);
        assert_eq!(padded.params().k, 4);
        assert!(padded.verify(2).unwrap().is_valid());
    }

    #[test]
    fn pad_to_same_length_is_identity() {
        let t = fixtures::example2();
        assert_eq!(pad_to_k(&t, 3).unwrap(), t);
    }

    #[test]
    fn pad_cyclic_trade() {
        let padded = pad_to_k(&cyclic_one_trade(2).unwrap(), 3).unwrap();
        assert_eq!(padded.volume(), 2);
        assert!(padded.verify(1).unwrap().is_valid());
    }

    #[test]
    fn pad_cannot_shrink() {
        assert!(pad_to_k(&fixtures::example1(), 3).is_err());
    }

    #[test]
    fn double_quadruples_the_intercalate() {
        let doubled = double(&cyclic_one_trade(2).unwrap(), 1, 2).unwrap();
        assert_eq!(doubled.volume(), 4);
        assert_eq!(doubled.params().t, 2);
        assert_eq!(doubled.params().k, 3);
        assert!(doubled.verify(2).unwrap().is_valid());
    }

    #[test]
    fn double_of_trivial_is_trivial() {
        let doubled = double(&Trade::empty(Params::new(1, 2, 2).unwrap()), 1, 2).unwrap();
        assert!(doubled.is_trivial());
    }

    #[test]
    fn double_example2_gives_volume_fourteen() {
        let doubled = double(&fixtures::example2(), 4, 5).unwrap();
        assert_eq!(doubled.volume(), 14);
        assert!(doubled.verify(3).unwrap().is_valid());
    }

    #[test]
    fn double_rejects_equal_symbols() {
        assert!(double(&fixtures::example2(), 2, 2).is_err());
    }

    #[test]
    fn compose_with_disjoint_foundations_adds_volumes() {
        let eight = critical_trade(3, 4, 1).unwrap();
        let fifteen = relabel_shift(&fixtures::example1(), 3).unwrap();
        let sum = compose(&eight, &fifteen, Sign::Plus).unwrap();
        assert_eq!(sum.volume(), 23);
        assert!(sum.verify(3).unwrap().is_valid());
    }

    #[test]
    fn compose_minus_self_cancels() {
        let t = fixtures::example1();
        assert!(compose(&t, &t, Sign::Minus).unwrap().is_trivial());
    }

    #[test]
    fn compose_rejects_mismatched_params() {
        assert!(compose(&fixtures::example1(), &fixtures::example2(), Sign::Plus).is_err());
    }

    #[test]
    fn cyclic_one_trade_smallest() {
        let t = cyclic_one_trade(2).unwrap();
        assert_eq!(t.t1(), &[block(&[1, 1]), block(&[2, 2])]);
        assert_eq!(t.t2(), &[block(&[1, 2]), block(&[2, 1])]);
    }

    #[test]
    fn cyclic_one_trade_volume_one_is_refused() {
        assert!(matches!(cyclic_one_trade(1), Err(Error::Nonexistent(_))));
        assert!(cyclic_one_trade(0).unwrap().is_trivial());
    }

    #[test]
    fn cyclic_one_trade_verifies() {
        let t = cyclic_one_trade(5).unwrap();
        assert_eq!(t.volume(), 5);
        assert!(t.verify(1).unwrap().is_valid());
        assert_eq!(t.foundation().unwrap().len(), 5);
    }

    #[test]
    fn cyclic_bitrade_is_a_square_volume_trade() {
        for n in 2..=4u32 {
            let t = cyclic_bitrade(n).unwrap();
            assert_eq!(t.volume() as u32, n * n);
            assert!(t.verify(2).unwrap().is_valid());
        }
        assert!(cyclic_bitrade(1).is_err());
    }

    #[test]
    fn relabel_identity() {
        let t = fixtures::example1();
        let maps: CoordinateMaps =
            vec![BTreeMap::from([(1, 1), (2, 2), (3, 3)]); 4];
        assert_eq!(relabel(&t, &maps).unwrap(), t);
    }

    #[test]
    fn relabel_shift_makes_foundations_disjoint() {
        let t = fixtures::example1();
        let shifted = relabel_shift(&t, 3).unwrap();
        assert!(shifted.verify(3).unwrap().is_valid());
        let original = t.foundation().unwrap();
        let moved = shifted.foundation().unwrap();
        assert!(original.is_disjoint(&moved));
        assert_eq!(shifted.volume(), 15);
    }

    #[test]
    fn relabel_swap_in_one_coordinate() {
        let t = fixtures::example1();
        let identity = BTreeMap::from([(1, 1), (2, 2), (3, 3)]);
        let swap = BTreeMap::from([(1, 2), (2, 1), (3, 3)]);
        let maps = vec![swap, identity.clone(), identity.clone(), identity];
        let relabeled = relabel(&t, &maps).unwrap();
        assert_eq!(relabeled.volume(), 15);
        assert!(relabeled.verify(3).unwrap().is_valid());
        assert_ne!(relabeled, t);
    }

    #[test]
    fn relabel_rejects_non_bijections() {
        let t = fixtures::example2();
        let collapse = BTreeMap::from([(1, 1), (2, 1), (3, 3)]);
        let identity = BTreeMap::from([(1, 1), (2, 2), (3, 3)]);
        let maps = vec![collapse, identity.clone(), identity.clone()];
        assert!(matches!(
            relabel(&t, &maps),
            Err(Error::NonBijectiveRelabel { coordinate: 1, .. })
        ));
        // Missing symbol in the domain.
        let partial = BTreeMap::from([(1, 1), (2, 2)]);
        let identity = BTreeMap::from([(1, 1), (2, 2), (3, 3)]);
        let maps = vec![identity.clone(), identity, partial];
        assert!(relabel(&t, &maps).is_err());
    }
}
