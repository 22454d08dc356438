#include "rcurc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcurc/errors.hpp"
#include "rcurc/linalg.hpp"
#include "eigen_bridge.hpp"

namespace rcurc {

DenseMatrix gen_low_rank(std::size_t n1, std::size_t n2, std::size_t r, Rng& rng) {
  if (n1 == 0 || n2 == 0) {
    throw ArgumentError("gen_low_rank: shape must be positive");
  }
  if (r == 0 || r > std::min(n1, n2)) {
    throw ArgumentError("gen_low_rank: rank " + std::to_string(r) +
                        " outside [1, " + std::to_string(std::min(n1, n2)) + "]");
  }
  alloc::TrackedVec<double> w(n1 * r), v(n2 * r);
  for (double& x : w) x = rng.normal();
  for (double& x : v) x = rng.normal();
  const DenseMatrix wm = detail::make_matrix_unchecked(n1, r, std::move(w));
  const DenseMatrix vm = detail::make_matrix_unchecked(n2, r, std::move(v));
  return detail::build_matrix(n1, n2, [&](detail::MapRM out) {
    out.noalias() = detail::as_eigen(wm) * detail::as_eigen(vm).transpose();
  });
}

DenseMatrix gen_sparse_outliers(const DenseMatrix& x, double alpha, double c,
                                Rng& rng) {
  if (!(alpha >= 0.0) || alpha >= 0.5) {
    throw ArgumentError("gen_sparse_outliers: alpha must lie in [0, 0.5), got " +
                        std::to_string(alpha));
  }
  if (!(c > 0.0)) {
    throw ArgumentError("gen_sparse_outliers: amplitude multiplier must be > 0");
  }
  const std::size_t n1 = x.rows();
  const std::size_t n2 = x.cols();
  DenseMatrix s(n1, n2);

  const auto quota = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n2)));
  const auto cap = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n1)));
  if (quota == 0 || cap == 0) return s;

  // Support selection pass. Rejection sampling per row with an exact
  // availability count so exhaustion (no acceptable column left for this
  // row) ends the row instead of spinning.
  alloc::TrackedVec<std::size_t> col_cnt(n2, 0);
  alloc::TrackedVec<bool> in_row(n2, false);
  alloc::TrackedVec<index_t> picked;  // this row's columns, for cleanup
  alloc::TrackedVec<alloc::TrackedVec<index_t>> support(n1);
  std::size_t open_cols = n2;  // columns with col_cnt < cap

  for (std::size_t i = 0; i < n1; ++i) {
    picked.clear();
    std::size_t picked_open = 0;  // picked this row and still below cap
    while (picked.size() < quota) {
      if (open_cols - picked_open == 0) break;  // row cannot be filled further
      const auto j = static_cast<std::size_t>(rng.uniform_index(n2));
      if (in_row[j] || col_cnt[j] >= cap) continue;
      in_row[j] = true;
      picked.push_back(static_cast<index_t>(j));
      if (++col_cnt[j] == cap) {
        --open_cols;
      } else {
        ++picked_open;
      }
    }
    std::sort(picked.begin(), picked.end());
    support[i].assign(picked.begin(), picked.end());
    for (index_t j : picked) in_row[j] = false;
  }

  // Value pass, row-major over the chosen support.
  double mean_abs = 0.0;
  for (double v : x.data()) mean_abs += std::abs(v);
  mean_abs /= static_cast<double>(x.size());
  const double amp = c * mean_abs;
  for (std::size_t i = 0; i < n1; ++i) {
    for (index_t j : support[i]) {
      s(i, j) = (2.0 * rng.uniform_real() - 1.0) * amp;
    }
  }
  return s;
}

SyntheticProblem make_synthetic_problem(std::size_t n1, std::size_t n2,
                                        std::size_t r, double alpha, double c,
                                        Rng& rng) {
  SyntheticProblem p;
  p.rank = r;
  p.alpha = alpha;
  p.amp = c;
  p.x_true = gen_low_rank(n1, n2, r, rng);
  p.s_true = gen_sparse_outliers(p.x_true, alpha, c, rng);
  alloc::TrackedVec<double> y(n1 * n2);
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = p.x_true.data()[k] + p.s_true.data()[k];
  }
  p.y = detail::make_matrix_unchecked(n1, n2, std::move(y));
  return p;
}

double incoherence_mu(const DenseMatrix& x, std::size_t r) {
  const SvdR f = truncated_svd(x, r);
  auto max_row_sq = [](const DenseMatrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a < m.cols(); ++a) acc += m(i, a) * m(i, a);
      best = std::max(best, acc);
    }
    return best;
  };
  const double ru = static_cast<double>(x.rows()) / static_cast<double>(r) *
                    max_row_sq(f.u);
  const double rv = static_cast<double>(x.cols()) / static_cast<double>(r) *
                    max_row_sq(f.v);
  return std::max(ru, rv);
}

double sparsity_alpha(const DenseMatrix& s) {
  if (s.size() == 0) {
    throw ArgumentError("sparsity_alpha: empty matrix");
  }
  alloc::TrackedVec<std::size_t> col_cnt(s.cols(), 0);
  std::size_t worst_row = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::size_t row_cnt = 0;
    for (std::size_t j = 0; j < s.cols(); ++j) {
      if (s(i, j) != 0.0) {
        ++row_cnt;
        ++col_cnt[j];
      }
    }
    worst_row = std::max(worst_row, row_cnt);
  }
  const std::size_t worst_col = *std::max_element(col_cnt.begin(), col_cnt.end());
  return std::max(
      static_cast<double>(worst_row) / static_cast<double>(s.cols()),
      static_cast<double>(worst_col) / static_cast<double>(s.rows()));
}

CurCheckResult cur_exact_check(const DenseMatrix& x, const IndexSet& I,
                               const IndexSet& J) {
  if (I.universe != x.rows() || J.universe != x.cols()) {
    throw ArgumentError("cur_exact_check: index set universes must match x");
  }
  if (I.size() == 0 || J.size() == 0) {
    throw ArgumentError("cur_exact_check: index sets must be non-empty");
  }
  const DenseMatrix c_panel = submatrix(x, all_indices, J.values);
  const DenseMatrix r_panel = submatrix(x, I.values, all_indices);
  const DenseMatrix core = submatrix(x, I.values, J.values);

  const SvdR core_svd = truncated_svd(core, std::min(I.size(), J.size()));
  const DenseMatrix rec = matmul(matmul(c_panel, pinv_rank_r(core_svd)), r_panel);

  double err_sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x.data()[k] - rec.data()[k];
    err_sq += d * d;
  }
  const double denom = frob_norm(x);
  CurCheckResult out;
  out.rel_err = denom > 0.0 ? std::sqrt(err_sq) / denom : std::sqrt(err_sq);
  out.ok = out.rel_err <= 1e-8;
  return out;
}

}  // namespace rcurc
