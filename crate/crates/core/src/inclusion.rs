//! Sparse t-inclusion matrix `M` and exact null-space membership checks.
//!
//! Columns are indexed by `V^k` in lexicographic order. Rows are indexed by
//! pairs `(I, u)` of a t-subset of coordinates and a pattern: all t-subsets
//! `I` in lexicographic order, and within each subset all patterns `u` in
//! lexicographic order. The entry at `((I, u), x)` is 1 exactly when the
//! block `x` carries the pattern `u` on the coordinates `I`.
//!
//! A signed multiplicity vector determines a trade exactly when it lies in
//! the integer null space of `M`; [`InclusionMatrix::null_check`] computes
//! the product exactly over `i64` and reports every nonzero row. This is the
//! linear-algebra counterpart of the direct-counting verifier and the two are
//! kept independent of each other on purpose.

use std::io::Write;

use crate::combinatorics::{binomial, checked_pow, rank_tuple, subsets_lex, unrank_tuple};
use crate::error::{Error, Result};
use crate::frequency::FrequencyVector;
use crate::trade::{Block, Params, SubBlockKey};

/// Default cap on the number of stored 1-entries (`v^k * C(k,t)`).
pub const DEFAULT_ENTRY_CAP: u64 = 1 << 23;

/// The sparse 0/1 matrix `M` for fixed `(t, v, k)`.
///
/// Every column holds exactly `C(k,t)` ones, one per coordinate subset, so
/// the storage is a dense table of row indices grouped by column.
#[derive(Debug, Clone)]
pub struct InclusionMatrix {
    params: Params,
    subsets: Vec<Vec<u32>>,
    /// Row indices of the ones, column-major: entries
    /// `[col * C(k,t) .. (col+1) * C(k,t)]` belong to column `col` and are
    /// strictly increasing within each column.
    rows_by_col: Vec<u64>,
    row_count: u64,
    col_count: u64,
}

/// Builds `M` for `(t, v, k)` under the default size cap.
pub fn build_inclusion_matrix(t: u32, v: u32, k: u32) -> Result<InclusionMatrix> {
    build_inclusion_matrix_capped(t, v, k, DEFAULT_ENTRY_CAP)
}

/// Builds `M` for `(t, v, k)`, refusing (never truncating) above `entry_cap`
/// stored entries.
pub fn build_inclusion_matrix_capped(
    t: u32,
    v: u32,
    k: u32,
    entry_cap: u64,
) -> Result<InclusionMatrix> {
    let params = Params::new(t, k, v)?;
    let subset_count =
        binomial(k as u64, t as u64).expect("binomial fits in u64 for t <= k <= 64");
    let cols = checked_pow(v as u64, k);
    let entries = cols.and_then(|c| c.checked_mul(subset_count));
    match entries {
        Some(e) if e <= entry_cap => {}
        _ => {
            let required = match (cols, entries) {
                (Some(c), Some(e)) => e.max(c) as u128,
                (Some(c), None) => c as u128 * subset_count as u128,
                _ => u128::MAX,
            };
            return Err(Error::CapacityExceeded {
                what: "inclusion matrix entries",
                required,
                cap: entry_cap,
            });
        }
    }
    let cols = cols.expect("checked above");
    let subsets = subsets_lex(k, t);
    let pattern_count = checked_pow(v as u64, t).expect("v^t <= v^k");

    let mut rows_by_col = Vec::with_capacity((cols * subset_count) as usize);
    let mut block = vec![1u32; k as usize];
    for col in 0..cols {
        if col > 0 {
            // Odometer step through V^k in lexicographic order.
            for digit in block.iter_mut().rev() {
                if *digit < v {
                    *digit += 1;
                    break;
                }
                *digit = 1;
            }
        }
        for (si, subset) in subsets.iter().enumerate() {
            let pattern: Vec<u32> = subset.iter().map(|&p| block[p as usize]).collect();
            rows_by_col.push(si as u64 * pattern_count + rank_tuple(&pattern, v as u64));
        }
    }

    Ok(InclusionMatrix {
        params,
        subsets,
        rows_by_col,
        row_count: subset_count * pattern_count,
        col_count: cols,
    })
}

impl InclusionMatrix {
    pub fn params(&self) -> Params {
        self.params
    }

    pub fn row_count(&self) -> u64 {
        self.row_count
    }

    pub fn col_count(&self) -> u64 {
        self.col_count
    }

    pub fn entry_count(&self) -> u64 {
        self.rows_by_col.len() as u64
    }

    /// Number of ones per column, `C(k,t)`.
    pub fn column_degree(&self) -> u64 {
        self.subsets.len() as u64
    }

    /// Lexicographic column index of a block.
    pub fn column_of_block(&self, block: &Block) -> u64 {
        rank_tuple(block.entries(), self.params.v as u64)
    }

    /// Row indices of the ones in the given column.
    pub fn column_rows(&self, col: u64) -> &[u64] {
        let degree = self.subsets.len();
        let start = col as usize * degree;
        &self.rows_by_col[start..start + degree]
    }

    /// The `(I, u)` pair a row index stands for.
    pub fn row_key(&self, row: u64) -> SubBlockKey {
        let pattern_count = checked_pow(self.params.v as u64, self.params.t)
            .expect("pattern count fit during build");
        let subset = &self.subsets[(row / pattern_count) as usize];
        SubBlockKey {
            positions: subset.iter().map(|&p| p + 1).collect(),
            values: unrank_tuple(row % pattern_count, self.params.v as u64, self.params.t),
        }
    }

    /// Computes `M * fv` exactly over the integers.
    pub fn null_check(&self, fv: &FrequencyVector) -> Result<NullCheckReport> {
        if fv.params() != self.params {
            return Err(Error::ParamMismatch(format!(
                "vector has parameters {}, matrix has {}",
                fv.params(),
                self.params
            )));
        }
        let mut products = std::collections::BTreeMap::<u64, i64>::new();
        for (block, &coeff) in fv.entries() {
            for &row in self.column_rows(self.column_of_block(block)) {
                *products.entry(row).or_insert(0) += coeff;
            }
        }
        Ok(NullCheckReport {
            nonzero_rows: products
                .into_iter()
                .filter(|&(_, product)| product != 0)
                .map(|(row, product)| RowProduct { row, key: self.row_key(row), product })
                .collect(),
        })
    }

    /// Writes the matrix in the interchange format: a header line
    /// `t k v rows cols`, then one 0-based `row col` pair per line, sorted.
    pub fn export<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "{} {} {} {} {}",
            self.params.t, self.params.k, self.params.v, self.row_count, self.col_count
        )?;
        let degree = self.subsets.len();
        let mut entries: Vec<(u64, u64)> = self
            .rows_by_col
            .iter()
            .enumerate()
            .map(|(i, &row)| (row, (i / degree) as u64))
            .collect();
        entries.sort_unstable();
        for (row, col) in entries {
            writeln!(w, "{row} {col}")?;
        }
        Ok(())
    }
}

/// One nonzero coordinate of the product `M * fv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowProduct {
    pub row: u64,
    pub key: SubBlockKey,
    pub product: i64,
}

/// Result of a null-space membership check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullCheckReport {
    /// Rows with nonzero product, ascending.
    pub nonzero_rows: Vec<RowProduct>,
}

impl NullCheckReport {
    pub fn is_zero(&self) -> bool {
        self.nonzero_rows.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trade::Trade;

    #[test]
    fn small_matrix_dimensions() {
        let m = build_inclusion_matrix(1, 2, 2).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (4, 4));
        for col in 0..4 {
            assert_eq!(m.column_rows(col).len(), 2);
        }

        let m = build_inclusion_matrix(2, 3, 3).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (27, 27));
        for col in 0..27 {
            assert_eq!(m.column_rows(col).len(), 3);
        }
    }

    #[test]
    fn row_count_follows_the_counting_formula() {
        // C(k,t) * v^t, checked against the actual enumeration length.
        let m = build_inclusion_matrix(3, 3, 4).unwrap();
        assert_eq!(m.row_count(), 4 * 27);
        assert_eq!(m.col_count(), 81);
        let distinct_rows: std::collections::BTreeSet<u64> =
            m.rows_by_col.iter().copied().collect();
        assert_eq!(distinct_rows.len() as u64, m.row_count());
        assert_eq!(distinct_rows.iter().max(), Some(&(m.row_count() - 1)));
    }

    #[test]
    fn every_row_has_v_to_the_k_minus_t_ones() {
        let m = build_inclusion_matrix(2, 3, 4).unwrap();
        let mut per_row = vec![0u64; m.row_count() as usize];
        for &row in &m.rows_by_col {
            per_row[row as usize] += 1;
        }
        assert!(per_row.iter().all(|&n| n == 9)); // v^(k-t) = 3^2
    }

    #[test]
    fn size_cap_is_enforced() {
        let err = build_inclusion_matrix_capped(2, 10, 6, 1000).unwrap_err();
        assert!(matches!(err, Error::CapacityExceeded { .. }));
        // Far beyond u64: must refuse, not wrap.
        assert!(build_inclusion_matrix(3, 1000, 12).is_err());
    }

    #[test]
    fn example1_is_in_the_null_space() {
        let m = build_inclusion_matrix(3, 3, 4).unwrap();
        let report = m.null_check(&fixtures::example1().to_frequency()).unwrap();
        assert!(report.is_zero());
    }

    #[test]
    fn zero_vector_is_in_the_null_space() {
        let m = build_inclusion_matrix(2, 3, 3).unwrap();
        let fv = FrequencyVector::zero(m.params());
        assert!(m.null_check(&fv).unwrap().is_zero());
    }

    #[test]
    fn singleton_vector_hits_one_row_per_subset() {
        let m = build_inclusion_matrix(2, 3, 3).unwrap();
        let mut fv = FrequencyVector::zero(m.params());
        fv.add_entry(Block::new(vec![1, 2, 3]), 1);
        let report = m.null_check(&fv).unwrap();
        assert_eq!(report.nonzero_rows.len(), 3); // C(3,2)
        assert!(report.nonzero_rows.iter().all(|r| r.product == 1));
        let keys: Vec<String> =
            report.nonzero_rows.iter().map(|r| r.key.to_string()).collect();
        assert_eq!(keys, vec!["(1,2)_{1,2}", "(1,3)_{1,3}", "(2,3)_{2,3}"]);
    }

    #[test]
    fn null_check_rejects_mismatched_params() {
        let m = build_inclusion_matrix(2, 3, 3).unwrap();
        let fv = FrequencyVector::zero(Params::new(2, 3, 4).unwrap());
        assert!(m.null_check(&fv).is_err());
    }

    #[test]
    fn mutated_trade_leaves_the_null_space() {
        let t = fixtures::example2();
        let mut t1 = t.t1().to_vec();
        let mut entries = t1[0].entries().to_vec();
        entries[2] = entries[2] % 3 + 1;
        t1[0] = Block::new(entries);
        let mutated = Trade::new(t.params(), t1, t.t2().to_vec()).unwrap();
        let m = build_inclusion_matrix(2, 3, 3).unwrap();
        assert!(!m.null_check(&mutated.to_frequency()).unwrap().is_zero());
    }

    #[test]
    fn export_format_is_stable() {
        let m = build_inclusion_matrix(1, 2, 1).unwrap();
        let mut out = Vec::new();
        m.export(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 1 2 2 2\n0 0\n1 1\n");
    }
}
