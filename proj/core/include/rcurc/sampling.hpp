#pragma once

#include <cstddef>
#include <utility>

#include "rcurc/dense_matrix.hpp"
#include "rcurc/rng.hpp"

namespace rcurc {

/// Sorted set of distinct 0-based indices drawn from [0, universe).
struct IndexSet {
  std::size_t universe = 0;
  alloc::TrackedVec<index_t> values;  ///< strictly increasing

  IndexSet() = default;
  /// Validates sortedness, uniqueness and range; throws ArgumentError.
  IndexSet(std::size_t universe, alloc::TrackedVec<index_t> values);

  std::size_t size() const { return values.size(); }
  bool contains(index_t v) const;
};

/// Set of (row, col) coordinates inside a rows x cols matrix, stored sorted
/// in row-major order without duplicates.
struct Mask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  alloc::TrackedVec<std::pair<index_t, index_t>> entries;

  Mask() = default;
  /// Validates range, ordering and uniqueness; throws ArgumentError.
  Mask(std::size_t rows, std::size_t cols,
       alloc::TrackedVec<std::pair<index_t, index_t>> entries);

  std::size_t size() const { return entries.size(); }
  bool contains(index_t i, index_t j) const;
};

/// Cross-concentrated observation of a matrix: entries sampled inside a row
/// panel (rows in row_idx, any column) and a column panel (any row, columns
/// in col_idx), with the observed values attached.
///
/// Invariants: every omega_r entry has its row in row_idx; every omega_c
/// entry has its column in col_idx; values are defined exactly on
/// omega_r union omega_c (sorted row-major, one value per coordinate).
struct CcsObservation {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  IndexSet row_idx;  ///< universe n1
  IndexSet col_idx;  ///< universe n2
  Mask omega_r;      ///< shape n1 x n2, rows restricted to row_idx
  Mask omega_c;      ///< shape n1 x n2, columns restricted to col_idx

  /// Union support and values, parallel arrays sorted row-major.
  alloc::TrackedVec<index_t> union_i;
  alloc::TrackedVec<index_t> union_j;
  alloc::TrackedVec<double> union_val;

  /// Assembles and validates an observation (used by deserialization and by
  /// tests that build observations by hand). The union arrays are recomputed
  /// from the masks and `values` lookup.
  static CcsObservation create(std::size_t n1, std::size_t n2, IndexSet row_idx,
                               IndexSet col_idx, Mask omega_r, Mask omega_c,
                               alloc::TrackedVec<index_t> union_i,
                               alloc::TrackedVec<index_t> union_j,
                               alloc::TrackedVec<double> union_val);

  std::size_t union_size() const { return union_val.size(); }

  /// Value at an observed coordinate; throws ArgumentError if unobserved.
  double value_at(index_t i, index_t j) const;
  bool observed(index_t i, index_t j) const;
};

/// Draw `count` distinct indices uniformly from [0, universe) by repeated
/// draws with replacement until the deduplicated set reaches `count`
/// (rng consumption: one uniform_index(universe) per attempt).
IndexSet sample_unique_indices(std::size_t universe, std::size_t count, Rng& rng);

/// Cross-concentrated sampling of y:
///   1. row set I: ceil(row_frac * n1) distinct rows,
///   2. column set J: ceil(col_frac * n2) distinct columns,
///   3. omega_r: ceil(p_row * |I| * n2) distinct cells of the I x [n2] panel,
///   4. omega_c: ceil(p_col * |J| * n1) distinct cells of the [n1] x J panel,
/// drawn in exactly that order from `rng`. Panel cells are drawn as flat
/// indices (row-major within each panel) with replacement until distinct
/// counts are reached. Fractions and rates must lie in (0, 1].
CcsObservation ccs_sample(const DenseMatrix& y, double row_frac, double col_frac,
                          double p_row, double p_col, Rng& rng);

struct ObservationRates {
  double p_r = 0.0;  ///< |omega_r| / (|I| * n2)
  double p_c = 0.0;  ///< |omega_c| / (|J| * n1)
};

/// Achieved per-panel observation rates.
ObservationRates observation_rates(const CcsObservation& obs);

/// Entries observed by both panels: omega_r intersect omega_c. Always a
/// subset of row_idx x col_idx.
Mask overlap(const CcsObservation& obs);

}  // namespace rcurc
