#include "rcurc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcurc/errors.hpp"

namespace rcurc {

IndexSet::IndexSet(std::size_t universe_in, alloc::TrackedVec<index_t> values_in)
    : universe(universe_in), values(std::move(values_in)) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] >= universe) {
      throw ArgumentError("IndexSet: value " + std::to_string(values[k]) +
                          " outside universe " + std::to_string(universe));
    }
    if (k > 0 && values[k - 1] >= values[k]) {
      throw ArgumentError("IndexSet: values must be strictly increasing");
    }
  }
}

bool IndexSet::contains(index_t v) const {
  return std::binary_search(values.begin(), values.end(), v);
}

Mask::Mask(std::size_t rows_in, std::size_t cols_in,
           alloc::TrackedVec<std::pair<index_t, index_t>> entries_in)
    : rows(rows_in), cols(cols_in), entries(std::move(entries_in)) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [i, j] = entries[k];
    if (i >= rows || j >= cols) {
      throw ArgumentError("Mask: entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ") outside " + std::to_string(rows) +
                          "x" + std::to_string(cols));
    }
    if (k > 0 && !(entries[k - 1] < entries[k])) {
      throw ArgumentError("Mask: entries must be sorted row-major and unique");
    }
  }
}

bool Mask::contains(index_t i, index_t j) const {
  return std::binary_search(entries.begin(), entries.end(), std::make_pair(i, j));
}

CcsObservation CcsObservation::create(std::size_t n1, std::size_t n2,
                                      IndexSet row_idx, IndexSet col_idx,
                                      Mask omega_r, Mask omega_c,
                                      alloc::TrackedVec<index_t> union_i,
                                      alloc::TrackedVec<index_t> union_j,
                                      alloc::TrackedVec<double> union_val) {
  if (n1 == 0 || n2 == 0) {
    throw ArgumentError("CcsObservation: shape must be positive");
  }
  if (row_idx.universe != n1 || col_idx.universe != n2) {
    throw ArgumentError("CcsObservation: index set universes must match shape");
  }
  if (omega_r.rows != n1 || omega_r.cols != n2 || omega_c.rows != n1 ||
      omega_c.cols != n2) {
    throw ArgumentError("CcsObservation: mask shapes must match shape");
  }
  for (const auto& [i, j] : omega_r.entries) {
    (void)j;
    if (!row_idx.contains(i)) {
      throw ArgumentError("CcsObservation: omega_r row " + std::to_string(i) +
                          " not in row_idx");
    }
  }
  for (const auto& [i, j] : omega_c.entries) {
    (void)i;
    if (!col_idx.contains(j)) {
      throw ArgumentError("CcsObservation: omega_c column " + std::to_string(j) +
                          " not in col_idx");
    }
  }

  if (union_i.size() != union_j.size() || union_i.size() != union_val.size()) {
    throw ArgumentError("CcsObservation: union arrays must be parallel");
  }
  // The value support must be exactly omega_r union omega_c. Walk the two
  // sorted masks and the sorted value arrays in lockstep.
  std::size_t a = 0, b = 0, k = 0;
  const auto& er = omega_r.entries;
  const auto& ec = omega_c.entries;
  while (a < er.size() || b < ec.size()) {
    std::pair<index_t, index_t> next;
    if (b >= ec.size() || (a < er.size() && er[a] <= ec[b])) {
      next = er[a];
      if (b < ec.size() && ec[b] == er[a]) ++b;
      ++a;
    } else {
      next = ec[b];
      ++b;
    }
    if (k >= union_val.size() ||
        std::make_pair(union_i[k], union_j[k]) != next) {
      throw ArgumentError(
          "CcsObservation: values must cover exactly the union of the masks "
          "in row-major order");
    }
    ++k;
  }
  if (k != union_val.size()) {
    throw ArgumentError("CcsObservation: values extend beyond the mask union");
  }

  CcsObservation obs;
  obs.n1 = n1;
  obs.n2 = n2;
  obs.row_idx = std::move(row_idx);
  obs.col_idx = std::move(col_idx);
  obs.omega_r = std::move(omega_r);
  obs.omega_c = std::move(omega_c);
  obs.union_i = std::move(union_i);
  obs.union_j = std::move(union_j);
  obs.union_val = std::move(union_val);
  return obs;
}

bool CcsObservation::observed(index_t i, index_t j) const {
  std::size_t lo = 0, hi = union_val.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto key = std::make_pair(union_i[mid], union_j[mid]);
    if (key < std::make_pair(i, j)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < union_val.size() && union_i[lo] == i && union_j[lo] == j;
}

double CcsObservation::value_at(index_t i, index_t j) const {
  std::size_t lo = 0, hi = union_val.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto key = std::make_pair(union_i[mid], union_j[mid]);
    if (key < std::make_pair(i, j)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo >= union_val.size() || union_i[lo] != i || union_j[lo] != j) {
    throw ArgumentError("CcsObservation::value_at: (" + std::to_string(i) + "," +
                        std::to_string(j) + ") is not observed");
  }
  return union_val[lo];
}

IndexSet sample_unique_indices(std::size_t universe, std::size_t count, Rng& rng) {
  if (universe == 0) {
    throw ArgumentError("sample_unique_indices: empty universe");
  }
  if (count == 0 || count > universe) {
    throw ArgumentError("sample_unique_indices: count " + std::to_string(count) +
                        " outside [1, " + std::to_string(universe) + "]");
  }
  alloc::TrackedVec<bool> seen(universe, false);
  std::size_t have = 0;
  while (have < count) {
    const auto v = static_cast<std::size_t>(rng.uniform_index(universe));
    if (!seen[v]) {
      seen[v] = true;
      ++have;
    }
  }
  alloc::TrackedVec<index_t> values;
  values.reserve(count);
  for (std::size_t v = 0; v < universe; ++v) {
    if (seen[v]) values.push_back(static_cast<index_t>(v));
  }
  return IndexSet(universe, std::move(values));
}

namespace {

std::size_t ceil_count(double rate, std::size_t cells, const char* what) {
  if (!(rate > 0.0) || rate > 1.0) {
    throw ArgumentError(std::string(what) + " must lie in (0, 1], got " +
                        std::to_string(rate));
  }
  const double target = std::ceil(rate * static_cast<double>(cells));
  return static_cast<std::size_t>(target);
}

/// Draw `count` distinct flat cells of a panel with `cells` positions, then
/// emit them in increasing flat order.
alloc::TrackedVec<std::size_t> sample_panel_cells(std::size_t cells,
                                                  std::size_t count, Rng& rng) {
  alloc::TrackedVec<bool> seen(cells, false);
  std::size_t have = 0;
  while (have < count) {
    const auto q = static_cast<std::size_t>(rng.uniform_index(cells));
    if (!seen[q]) {
      seen[q] = true;
      ++have;
    }
  }
  alloc::TrackedVec<std::size_t> out;
  out.reserve(count);
  for (std::size_t q = 0; q < cells; ++q) {
    if (seen[q]) out.push_back(q);
  }
  return out;
}

}  // namespace

CcsObservation ccs_sample(const DenseMatrix& y, double row_frac, double col_frac,
                          double p_row, double p_col, Rng& rng) {
  const std::size_t n1 = y.rows();
  const std::size_t n2 = y.cols();
  if (n1 == 0 || n2 == 0) {
    throw ArgumentError("ccs_sample: y must be non-empty");
  }

  const std::size_t i_count = ceil_count(row_frac, n1, "row_frac");
  const std::size_t j_count = ceil_count(col_frac, n2, "col_frac");

  IndexSet row_idx = sample_unique_indices(n1, i_count, rng);
  IndexSet col_idx = sample_unique_indices(n2, j_count, rng);

  const std::size_t r_cells = row_idx.size() * n2;
  const std::size_t c_cells = n1 * col_idx.size();
  const std::size_t r_count = ceil_count(p_row, r_cells, "p_row");
  const std::size_t c_count = ceil_count(p_col, c_cells, "p_col");

  // Row panel: flat cell q maps to (row_idx[q / n2], q % n2); scanning q in
  // increasing order yields row-major sorted global coordinates.
  alloc::TrackedVec<std::pair<index_t, index_t>> r_entries;
  r_entries.reserve(r_count);
  for (std::size_t q : sample_panel_cells(r_cells, r_count, rng)) {
    r_entries.emplace_back(row_idx.values[q / n2], static_cast<index_t>(q % n2));
  }

  // Column panel: flat cell q maps to (q / |J|, col_idx[q % |J|]); increasing
  // q again yields row-major sorted global coordinates.
  alloc::TrackedVec<std::pair<index_t, index_t>> c_entries;
  c_entries.reserve(c_count);
  for (std::size_t q : sample_panel_cells(c_cells, c_count, rng)) {
    c_entries.emplace_back(static_cast<index_t>(q / col_idx.size()),
                           col_idx.values[q % col_idx.size()]);
  }

  Mask omega_r(n1, n2, std::move(r_entries));
  Mask omega_c(n1, n2, std::move(c_entries));

  // Merge the sorted masks into the union support and attach y values.
  alloc::TrackedVec<index_t> ui, uj;
  alloc::TrackedVec<double> uv;
  const std::size_t upper = omega_r.size() + omega_c.size();
  ui.reserve(upper);
  uj.reserve(upper);
  uv.reserve(upper);
  std::size_t a = 0, b = 0;
  while (a < omega_r.entries.size() || b < omega_c.entries.size()) {
    std::pair<index_t, index_t> next;
    if (b >= omega_c.entries.size() ||
        (a < omega_r.entries.size() && omega_r.entries[a] <= omega_c.entries[b])) {
      next = omega_r.entries[a];
      if (b < omega_c.entries.size() && omega_c.entries[b] == omega_r.entries[a]) {
        ++b;
      }
      ++a;
    } else {
      next = omega_c.entries[b];
      ++b;
    }
    ui.push_back(next.first);
    uj.push_back(next.second);
    uv.push_back(y(next.first, next.second));
  }

  return CcsObservation::create(n1, n2, std::move(row_idx), std::move(col_idx),
                                std::move(omega_r), std::move(omega_c),
                                std::move(ui), std::move(uj), std::move(uv));
}

ObservationRates observation_rates(const CcsObservation& obs) {
  ObservationRates r;
  r.p_r = static_cast<double>(obs.omega_r.size()) /
          (static_cast<double>(obs.row_idx.size()) * static_cast<double>(obs.n2));
  r.p_c = static_cast<double>(obs.omega_c.size()) /
          (static_cast<double>(obs.col_idx.size()) * static_cast<double>(obs.n1));
  return r;
}

Mask overlap(const CcsObservation& obs) {
  alloc::TrackedVec<std::pair<index_t, index_t>> both;
  std::set_intersection(obs.omega_r.entries.begin(), obs.omega_r.entries.end(),
                        obs.omega_c.entries.begin(), obs.omega_c.entries.end(),
                        std::back_inserter(both));
  return Mask(obs.n1, obs.n2, std::move(both));
}

}  // namespace rcurc
