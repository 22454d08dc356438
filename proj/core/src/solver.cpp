#include "rcurc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "eigen_bridge.hpp"
#include "rcurc/errors.hpp"

namespace rcurc {

namespace {

using Entry = std::pair<index_t, index_t>;

/// Number of leading singular values above the pseudoinverse cutoff
/// (sigma > 1e-12 * sigma_max, matching pinv_rank_r). Directions at or below
/// the cutoff carry no weight in the estimate x = c * pinv(core) * r_mat, so
/// every per-entry evaluation below sums over this prefix only.
std::size_t effective_rank(const alloc::TrackedVec<double>& sigma) {
  if (sigma.empty()) return 0;
  const double tol = 1e-12 * sigma.front();
  std::size_t n = 0;
  while (n < sigma.size() && sigma[n] > tol) ++n;
  return n;
}

/// Observation rearranged for streaming iteration. Row-panel entries keep
/// the row-major order of omega_r.entries, grouped by local row via r_off.
/// Column-panel entries are regrouped by local column (rows ascending within
/// a group); c_perm maps the grouped position back to omega_c.entries.
struct PanelObs {
  std::size_t n1 = 0, n2 = 0, ni = 0, nj = 0;

  alloc::TrackedVec<index_t> r_off;       ///< ni + 1 offsets into omega_r
  alloc::TrackedVec<double> r_y;          ///< observed value per omega_r entry
  alloc::TrackedVec<std::uint8_t> r_dup;  ///< entry also present in omega_c

  alloc::TrackedVec<index_t> c_off;   ///< nj + 1 offsets into c_perm
  alloc::TrackedVec<index_t> c_perm;  ///< grouped position -> omega_c entry
  alloc::TrackedVec<double> c_y;      ///< observed value, c_perm order
  alloc::TrackedVec<std::uint8_t> c_dup;

  alloc::TrackedVec<std::int32_t> row_local;  ///< global row -> local, -1 off panel
  alloc::TrackedVec<std::int32_t> col_local;

  double y_sq_sum = 0.0;
};

PanelObs build_panel_obs(const CcsObservation& obs) {
  PanelObs p;
  p.n1 = obs.n1;
  p.n2 = obs.n2;
  p.ni = obs.row_idx.size();
  p.nj = obs.col_idx.size();

  p.row_local.assign(p.n1, -1);
  for (std::size_t a = 0; a < p.ni; ++a)
    p.row_local[obs.row_idx.values[a]] = static_cast<std::int32_t>(a);
  p.col_local.assign(p.n2, -1);
  for (std::size_t a = 0; a < p.nj; ++a)
    p.col_local[obs.col_idx.values[a]] = static_cast<std::int32_t>(a);

  const auto& re = obs.omega_r.entries;
  const auto& ce = obs.omega_c.entries;

  // Observed values per mask entry: both masks are sorted subsequences of the
  // union arrays, so a single forward walk finds every value.
  const auto fill_values = [&obs](const alloc::TrackedVec<Entry>& es,
                                  alloc::TrackedVec<double>& out) {
    out.resize(es.size());
    std::size_t u = 0;
    for (std::size_t q = 0; q < es.size(); ++q) {
      while (u < obs.union_size() && (obs.union_i[u] != es[q].first ||
                                      obs.union_j[u] != es[q].second))
        ++u;
      if (u == obs.union_size())
        throw ArgumentError(
            "solver: observation union does not cover a panel mask entry");
      out[q] = obs.union_val[u];
    }
  };
  fill_values(re, p.r_y);
  alloc::TrackedVec<double> c_y0;
  fill_values(ce, c_y0);

  // Shared entries (observed by both panels), via a two-pointer sweep.
  p.r_dup.assign(re.size(), 0);
  alloc::TrackedVec<std::uint8_t> c_dup0(ce.size(), 0);
  for (std::size_t a = 0, b = 0; a < re.size() && b < ce.size();) {
    if (re[a] < ce[b]) {
      ++a;
    } else if (ce[b] < re[a]) {
      ++b;
    } else {
      p.r_dup[a] = 1;
      c_dup0[b] = 1;
      ++a;
      ++b;
    }
  }

  // Row grouping: omega_r is row-major sorted, so offsets are a prefix count.
  p.r_off.assign(p.ni + 1, 0);
  for (const auto& e : re) {
    const std::int32_t il = p.row_local[e.first];
    if (il < 0)
      throw ArgumentError("solver: row-panel entry outside the row index set");
    ++p.r_off[static_cast<std::size_t>(il) + 1];
  }
  for (std::size_t a = 0; a < p.ni; ++a) p.r_off[a + 1] += p.r_off[a];

  // Column grouping: counting sort of omega_c entries by local column. The
  // row-major scan order keeps rows ascending within each column group.
  p.c_off.assign(p.nj + 1, 0);
  for (const auto& e : ce) {
    const std::int32_t jl = p.col_local[e.second];
    if (jl < 0)
      throw ArgumentError(
          "solver: column-panel entry outside the column index set");
    ++p.c_off[static_cast<std::size_t>(jl) + 1];
  }
  for (std::size_t a = 0; a < p.nj; ++a) p.c_off[a + 1] += p.c_off[a];
  alloc::TrackedVec<index_t> next(p.c_off.begin(), p.c_off.end() - 1);
  p.c_perm.resize(ce.size());
  p.c_y.resize(ce.size());
  p.c_dup.resize(ce.size());
  for (std::size_t q = 0; q < ce.size(); ++q) {
    const auto jl = static_cast<std::size_t>(p.col_local[ce[q].second]);
    const index_t pos = next[jl]++;
    p.c_perm[pos] = static_cast<index_t>(q);
    p.c_y[pos] = c_y0[q];
    p.c_dup[pos] = c_dup0[q];
  }

  for (const double v : obs.union_val) p.y_sq_sum += v * v;
  return p;
}

void validate_factors(const CcsObservation& obs, const CurFactors& f) {
  const std::size_t ni = obs.row_idx.size();
  const std::size_t nj = obs.col_idx.size();
  if (f.rank == 0 || f.u.rank() != f.rank)
    throw ArgumentError("solver: factors carry an inconsistent rank");
  if (f.u.u.rows() != ni || f.u.u.cols() != f.rank || f.u.v.rows() != nj ||
      f.u.v.cols() != f.rank)
    throw ArgumentError("solver: core factor shapes do not fit the panels");
  if (f.c.rows() != obs.n1 || f.c.cols() != nj || f.r_mat.rows() != ni ||
      f.r_mat.cols() != obs.n2)
    throw ArgumentError("solver: panel shapes do not match the observation");
  if (f.row_idx.universe != obs.row_idx.universe ||
      f.row_idx.values != obs.row_idx.values ||
      f.col_idx.universe != obs.col_idx.universe ||
      f.col_idx.values != obs.col_idx.values)
    throw ArgumentError("solver: factor index sets do not match the observation");
}

void require_resolved(const SolverConfig& cfg, const char* who) {
  if (!cfg.eta_r || !cfg.eta_c || !cfg.zeta0)
    throw ArgumentError(std::string(who) +
                        ": config must be resolved first (resolve_config)");
}

/// The per-iteration engine. Holds the iterate in factor form plus flat
/// per-entry residual buffers; never touches an n1 x n2 buffer.
class Engine {
 public:
  Engine(const CcsObservation& obs, const SolverConfig& resolved, CurFactors f)
      : obs_(&obs),
        p_(build_panel_obs(obs)),
        f_(std::move(f)),
        rank_(resolved.rank),
        eta_r_(*resolved.eta_r),
        eta_c_(*resolved.eta_c) {
    validate_factors(obs, f_);
    if (f_.rank != rank_)
      throw ArgumentError("solver: factor rank differs from the config rank");
    resid_r_.resize(obs.omega_r.size());
    resid_c_.resize(obs.omega_c.size());
    t_rt_ = DenseMatrix(p_.n2, rank_);
    t_c_ = DenseMatrix(p_.n1, rank_);
    core_ = DenseMatrix(p_.ni, p_.nj);
    eff_ = effective_rank(f_.u.sigma);
  }

  /// One full iteration at threshold zeta; returns the post-step relative
  /// residual energy. Residual buffers keep the pre-step residuals (the basis
  /// of the sparse iterate) until the next call.
  double iterate(double zeta) {
    refresh_projections();
    compute_residuals();
    apply_step(zeta);
    refresh_projections();
    return post_step_error(zeta);
  }

  /// Sparse iterate of the most recent step: residual entries the threshold
  /// kept, as sorted row-major triplets.
  SparseCross extract_sparse(double zeta) const {
    struct Triple {
      index_t i, j;
      double v;
    };
    alloc::TrackedVec<Triple> t;
    const auto& re = obs_->omega_r.entries;
    const auto& ce = obs_->omega_c.entries;
    for (std::size_t e = 0; e < re.size(); ++e)
      if (std::abs(resid_r_[e]) >= zeta)
        t.push_back({re[e].first, re[e].second, resid_r_[e]});
    for (std::size_t pos = 0; pos < p_.c_perm.size(); ++pos) {
      if (p_.c_dup[pos]) continue;  // already captured by the row panel
      if (std::abs(resid_c_[pos]) >= zeta) {
        const Entry& en = ce[p_.c_perm[pos]];
        t.push_back({en.first, en.second, resid_c_[pos]});
      }
    }
    std::sort(t.begin(), t.end(), [](const Triple& a, const Triple& b) {
      return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    SparseCross s;
    s.n1 = p_.n1;
    s.n2 = p_.n2;
    s.i.reserve(t.size());
    s.j.reserve(t.size());
    s.v.reserve(t.size());
    for (const Triple& x : t) {
      s.i.push_back(x.i);
      s.j.push_back(x.j);
      s.v.push_back(x.v);
    }
    return s;
  }

  CurFactors take_factors() { return std::move(f_); }
  std::size_t rank_drops() const { return rank_drops_; }

 private:
  /// Estimate value at a core coordinate: sum over the effective spectrum.
  double core_val(std::size_t il, std::size_t jl) const {
    const double* ur = f_.u.u.raw() + il * rank_;
    const double* vr = f_.u.v.raw() + jl * rank_;
    const double* sg = f_.u.sigma.data();
    double acc = 0.0;
    for (std::size_t a = 0; a < eff_; ++a) acc += ur[a] * sg[a] * vr[a];
    return acc;
  }

  /// Row-panel estimate off the core: row il of u times column gj of u^T R.
  double row_dot(std::size_t il, std::size_t gj) const {
    const double* ur = f_.u.u.raw() + il * rank_;
    const double* tr = t_rt_.raw() + gj * rank_;
    double acc = 0.0;
    for (std::size_t a = 0; a < eff_; ++a) acc += ur[a] * tr[a];
    return acc;
  }

  /// Column-panel estimate off the core: row gi of C v times row jl of v.
  double col_dot(std::size_t gi, std::size_t jl) const {
    const double* tc = t_c_.raw() + gi * rank_;
    const double* vr = f_.u.v.raw() + jl * rank_;
    double acc = 0.0;
    for (std::size_t a = 0; a < eff_; ++a) acc += tc[a] * vr[a];
    return acc;
  }

  /// t_rt = r_mat^T u and t_c = c v over the effective spectrum, so that the
  /// estimate restricted to either panel is a cheap per-entry dot product.
  void refresh_projections() {
    if (eff_ == 0) return;  // estimate is identically zero; dots skip reads
    const auto n = static_cast<Eigen::Index>(eff_);
    detail::as_eigen(t_rt_).leftCols(n).noalias() =
        detail::as_eigen(f_.r_mat).transpose() *
        detail::as_eigen(f_.u.u).leftCols(n);
    detail::as_eigen(t_c_).leftCols(n).noalias() =
        detail::as_eigen(f_.c) * detail::as_eigen(f_.u.v).leftCols(n);
  }

  /// Residual y - x_k on both panel supports. Entries observed by both
  /// panels evaluate through the same core expression, so the two copies of
  /// their residual are bitwise identical.
  void compute_residuals() {
    const auto& re = obs_->omega_r.entries;
    const auto& ce = obs_->omega_c.entries;
    for (std::size_t il = 0; il < p_.ni; ++il) {
      for (std::size_t e = p_.r_off[il]; e < p_.r_off[il + 1]; ++e) {
        const index_t gj = re[e].second;
        const std::int32_t jl = p_.col_local[gj];
        const double x = jl >= 0 ? core_val(il, static_cast<std::size_t>(jl))
                                 : row_dot(il, gj);
        resid_r_[e] = p_.r_y[e] - x;
      }
    }
    for (std::size_t jl = 0; jl < p_.nj; ++jl) {
      for (std::size_t pos = p_.c_off[jl]; pos < p_.c_off[jl + 1]; ++pos) {
        const index_t gi = ce[p_.c_perm[pos]].first;
        const std::int32_t il = p_.row_local[gi];
        const double x = il >= 0 ? core_val(static_cast<std::size_t>(il), jl)
                                 : col_dot(gi, jl);
        resid_c_[pos] = p_.c_y[pos] - x;
      }
    }
  }

  /// The update itself: panel bases in place, below-threshold gradient
  /// scatter, core merge, rank-r projection of the core, and the write of the
  /// projected core into both panels from one shared buffer.
  void apply_step(double zeta) {
    const auto& re = obs_->omega_r.entries;
    const auto& ce = obs_->omega_c.entries;

    // Panel bases: the current estimate restricted to each panel, written
    // over the panel buffers (the projections hold everything needed).
    if (eff_ == 0) {
      std::fill(f_.r_mat.data().begin(), f_.r_mat.data().end(), 0.0);
      std::fill(f_.c.data().begin(), f_.c.data().end(), 0.0);
      std::fill(core_.data().begin(), core_.data().end(), 0.0);
    } else {
      const auto n = static_cast<Eigen::Index>(eff_);
      detail::as_eigen(f_.r_mat).noalias() =
          detail::as_eigen(f_.u.u).leftCols(n) *
          detail::as_eigen(t_rt_).leftCols(n).transpose();
      detail::as_eigen(f_.c).noalias() =
          detail::as_eigen(t_c_).leftCols(n) *
          detail::as_eigen(f_.u.v).leftCols(n).transpose();
      const Eigen::Map<const Eigen::VectorXd> sig(f_.u.sigma.data(), n);
      detail::as_eigen(core_).noalias() =
          detail::as_eigen(f_.u.u).leftCols(n) * sig.asDiagonal() *
          detail::as_eigen(f_.u.v).leftCols(n).transpose();
    }

    // Projected-gradient step: the residual mass the threshold absorbed into
    // the sparse iterate is withheld; everything below the threshold moves
    // the panels.
    for (std::size_t il = 0; il < p_.ni; ++il) {
      double* row = f_.r_mat.raw() + il * p_.n2;
      for (std::size_t e = p_.r_off[il]; e < p_.r_off[il + 1]; ++e) {
        const double g = resid_r_[e];
        if (std::abs(g) < zeta) row[re[e].second] += eta_r_ * g;
      }
    }
    for (std::size_t jl = 0; jl < p_.nj; ++jl) {
      for (std::size_t pos = p_.c_off[jl]; pos < p_.c_off[jl + 1]; ++pos) {
        const double g = resid_c_[pos];
        if (std::abs(g) < zeta) {
          const index_t gi = ce[p_.c_perm[pos]].first;
          f_.c.raw()[static_cast<std::size_t>(gi) * p_.nj + jl] += eta_c_ * g;
        }
      }
    }

    // Core merge: shared base plus the union of the two panels' gradient
    // increments. An entry both panels observed gets the weighted mean of
    // the two single-panel updates; its residual copies are bitwise equal,
    // which collapses to one combined weight.
    const double w_both = 2.0 * eta_r_ * eta_c_ / (eta_r_ + eta_c_);
    for (std::size_t il = 0; il < p_.ni; ++il) {
      for (std::size_t e = p_.r_off[il]; e < p_.r_off[il + 1]; ++e) {
        const std::int32_t jl = p_.col_local[re[e].second];
        if (jl < 0) continue;
        const double g = resid_r_[e];
        if (std::abs(g) < zeta)
          core_.raw()[il * p_.nj + static_cast<std::size_t>(jl)] +=
              (p_.r_dup[e] ? w_both : eta_r_) * g;
      }
    }
    for (std::size_t jl = 0; jl < p_.nj; ++jl) {
      for (std::size_t pos = p_.c_off[jl]; pos < p_.c_off[jl + 1]; ++pos) {
        if (p_.c_dup[pos]) continue;
        const std::int32_t il = p_.row_local[ce[p_.c_perm[pos]].first];
        if (il < 0) continue;
        const double g = resid_c_[pos];
        if (std::abs(g) < zeta)
          core_.raw()[static_cast<std::size_t>(il) * p_.nj + jl] += eta_c_ * g;
      }
    }

    // Rank-r projection of the merged core.
    SvdR d = truncated_svd(core_, rank_);
    eff_ = effective_rank(d.sigma);
    if (eff_ < rank_) ++rank_drops_;
    f_.u = std::move(d);

    // Write the projected core back into both panels from one buffer, so the
    // three stored copies of the core block agree (the panel copies exactly).
    const Eigen::Map<const Eigen::VectorXd> sig(
        f_.u.sigma.data(), static_cast<Eigen::Index>(rank_));
    detail::as_eigen(core_).noalias() = detail::as_eigen(f_.u.u) *
                                        sig.asDiagonal() *
                                        detail::as_eigen(f_.u.v).transpose();
    const auto& rows = obs_->row_idx.values;
    const auto& cols = obs_->col_idx.values;
    for (std::size_t il = 0; il < p_.ni; ++il) {
      const double* krow = core_.raw() + il * p_.nj;
      double* rrow = f_.r_mat.raw() + il * p_.n2;
      for (std::size_t jl = 0; jl < p_.nj; ++jl) rrow[cols[jl]] = krow[jl];
      std::copy(krow, krow + p_.nj,
                f_.c.raw() + static_cast<std::size_t>(rows[il]) * p_.nj);
    }
  }

  /// Relative residual energy of the (new factors, kept residuals) pair over
  /// the observed union, streamed without materializing anything.
  double post_step_error(double zeta) const {
    const auto& re = obs_->omega_r.entries;
    const auto& ce = obs_->omega_c.entries;
    double num = 0.0;
    for (std::size_t il = 0; il < p_.ni; ++il) {
      for (std::size_t e = p_.r_off[il]; e < p_.r_off[il + 1]; ++e) {
        const index_t gj = re[e].second;
        const std::int32_t jl = p_.col_local[gj];
        const double x = jl >= 0 ? core_val(il, static_cast<std::size_t>(jl))
                                 : row_dot(il, gj);
        const double r0 = resid_r_[e];
        const double s = std::abs(r0) >= zeta ? r0 : 0.0;
        const double d = s + x - p_.r_y[e];
        num += d * d;
      }
    }
    for (std::size_t jl = 0; jl < p_.nj; ++jl) {
      for (std::size_t pos = p_.c_off[jl]; pos < p_.c_off[jl + 1]; ++pos) {
        if (p_.c_dup[pos]) continue;  // counted once, by the row-panel pass
        const index_t gi = ce[p_.c_perm[pos]].first;
        const std::int32_t il = p_.row_local[gi];
        const double x = il >= 0 ? core_val(static_cast<std::size_t>(il), jl)
                                 : col_dot(gi, jl);
        const double r0 = resid_c_[pos];
        const double s = std::abs(r0) >= zeta ? r0 : 0.0;
        const double d = s + x - p_.c_y[pos];
        num += d * d;
      }
    }
    return num / p_.y_sq_sum;
  }

  const CcsObservation* obs_;
  PanelObs p_;
  CurFactors f_;
  std::size_t rank_;
  double eta_r_;
  double eta_c_;
  std::size_t eff_ = 0;  ///< effective spectrum width of the current factors
  std::size_t rank_drops_ = 0;
  alloc::TrackedVec<double> resid_r_, resid_c_;
  DenseMatrix t_rt_;  ///< n2 x rank, row j holds (u^T r_mat) column j
  DenseMatrix t_c_;   ///< n1 x rank, row i holds (c v) row i
  DenseMatrix core_;  ///< ni x nj scratch: merge input, then projected core
};

}  // namespace

double SparseCross::value_at(index_t row, index_t col) const {
  std::size_t lo = 0, hi = v.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (i[mid] < row || (i[mid] == row && j[mid] < col))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < v.size() && i[lo] == row && j[lo] == col) return v[lo];
  return 0.0;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iters:
      return "max_iters";
    case Termination::stagnated:
      return "stagnated";
  }
  return "unknown";
}

SolverConfig resolve_config(const CcsObservation& obs, SolverConfig cfg) {
  const std::size_t ni = obs.row_idx.size();
  const std::size_t nj = obs.col_idx.size();
  if (obs.n1 == 0 || obs.n2 == 0 || ni == 0 || nj == 0)
    throw ArgumentError(
        "resolve_config: observation has an empty shape or index set");
  if (obs.omega_r.size() == 0 || obs.omega_c.size() == 0)
    throw ArgumentError(
        "resolve_config: both panel masks need at least one entry");
  if (cfg.rank == 0 || cfg.rank > std::min(ni, nj))
    throw ArgumentError(
        "resolve_config: rank must satisfy 1 <= rank <= min(|I|, |J|)");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
    throw ArgumentError("resolve_config: gamma must lie in (0, 1)");
  if (!(cfg.eps >= 0.0))
    throw ArgumentError("resolve_config: eps must be >= 0");
  if (cfg.max_iters == 0)
    throw ArgumentError("resolve_config: max_iters must be >= 1");
  if (cfg.eta_r && !(*cfg.eta_r > 0.0))
    throw ArgumentError("resolve_config: eta_r must be positive");
  if (cfg.eta_c && !(*cfg.eta_c > 0.0))
    throw ArgumentError("resolve_config: eta_c must be positive");
  if (cfg.zeta0 && !(*cfg.zeta0 >= 0.0))
    throw ArgumentError("resolve_config: zeta0 must be >= 0");

  double y_abs_max = 0.0;
  for (const double v : obs.union_val)
    y_abs_max = std::max(y_abs_max, std::abs(v));
  if (y_abs_max == 0.0)
    throw ArgumentError("resolve_config: every observed value is zero");

  const ObservationRates rates = observation_rates(obs);
  if (!cfg.eta_r) cfg.eta_r = 1.0 / rates.p_r;
  if (!cfg.eta_c) cfg.eta_c = 1.0 / rates.p_c;
  if (!cfg.zeta0) cfg.zeta0 = y_abs_max;
  return cfg;
}

DenseMatrix hard_threshold(const DenseMatrix& m, double zeta) {
  if (!(zeta >= 0.0))
    throw ArgumentError("hard_threshold: zeta must be >= 0");
  DenseMatrix out = m;
  for (double& v : out.data())
    if (std::abs(v) < zeta) v = 0.0;
  return out;
}

double zeta_at(const SolverConfig& cfg, std::size_t k) {
  if (!cfg.zeta0)
    throw ArgumentError("zeta_at: zeta0 is unset; resolve the config first");
  if (!(*cfg.zeta0 >= 0.0))
    throw ArgumentError("zeta_at: zeta0 must be >= 0");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
    throw ArgumentError("zeta_at: gamma must lie in (0, 1)");
  // Repeated multiplication, bit-for-bit the sequence the solve loop uses.
  double z = *cfg.zeta0;
  for (std::size_t a = 0; a < k; ++a) z *= cfg.gamma;
  return z;
}

DenseMatrix union_sum(const DenseMatrix& r_blk, const DenseMatrix& c_blk,
                      const Mask& omega_r_core, const Mask& omega_c_core,
                      double eta_r, double eta_c) {
  if (!r_blk.same_shape(c_blk))
    throw ArgumentError("union_sum: block shapes differ");
  if (omega_r_core.rows != r_blk.rows() || omega_r_core.cols != r_blk.cols() ||
      omega_c_core.rows != r_blk.rows() || omega_c_core.cols != r_blk.cols())
    throw ArgumentError("union_sum: mask shapes must match the blocks");
  if (!(eta_r > 0.0) || !(eta_c > 0.0))
    throw ArgumentError("union_sum: step weights must be positive");
  DenseMatrix out(r_blk.rows(), r_blk.cols());
  for (const auto& [i, j] : omega_r_core.entries) out(i, j) = r_blk(i, j);
  for (const auto& [i, j] : omega_c_core.entries)
    out(i, j) = omega_r_core.contains(i, j)
                    ? (eta_c * r_blk(i, j) + eta_r * c_blk(i, j)) /
                          (eta_r + eta_c)
                    : c_blk(i, j);
  return out;
}

DenseMatrix restricted_reconstruct(const CurFactors& f, PanelSide side) {
  if (f.rank == 0 || f.u.rank() != f.rank)
    throw ArgumentError("restricted_reconstruct: factors carry no rank");
  const std::span<const index_t> rows{f.row_idx.values.data(),
                                      f.row_idx.values.size()};
  const std::span<const index_t> cols{f.col_idx.values.data(),
                                      f.col_idx.values.size()};
  const DenseMatrix core_pinv = pinv_rank_r(f.u);  // |J| x |I|
  if (side == PanelSide::rows) {
    const DenseMatrix c_rows = submatrix(f.c, rows, all_indices);
    return matmul(matmul(c_rows, core_pinv), f.r_mat);
  }
  const DenseMatrix r_cols = submatrix(f.r_mat, all_indices, cols);
  return matmul(matmul(f.c, core_pinv), r_cols);
}

DenseMatrix materialize(const CurFactors& f) {
  if (f.rank == 0 || f.u.rank() != f.rank)
    throw ArgumentError("materialize: factors carry no rank");
  return matmul(matmul(f.c, pinv_rank_r(f.u)), f.r_mat);
}

double compute_error(const CcsObservation& obs, const CurFactors& f,
                     const SparseCross& s) {
  if (s.n1 != obs.n1 || s.n2 != obs.n2)
    throw ArgumentError("compute_error: sparse shape does not match");
  validate_factors(obs, f);
  const DenseMatrix row_panel = restricted_reconstruct(f, PanelSide::rows);
  const DenseMatrix col_panel = restricted_reconstruct(f, PanelSide::cols);

  alloc::TrackedVec<std::int32_t> row_local(obs.n1, -1);
  for (std::size_t a = 0; a < obs.row_idx.size(); ++a)
    row_local[obs.row_idx.values[a]] = static_cast<std::int32_t>(a);
  alloc::TrackedVec<std::int32_t> col_local(obs.n2, -1);
  for (std::size_t a = 0; a < obs.col_idx.size(); ++a)
    col_local[obs.col_idx.values[a]] = static_cast<std::int32_t>(a);

  double num = 0.0, den = 0.0;
  std::size_t sp = 0;
  for (std::size_t q = 0; q < obs.union_size(); ++q) {
    const index_t i = obs.union_i[q];
    const index_t j = obs.union_j[q];
    const double y = obs.union_val[q];
    while (sp < s.size() &&
           (s.i[sp] < i || (s.i[sp] == i && s.j[sp] < j)))
      ++sp;
    const double sval =
        (sp < s.size() && s.i[sp] == i && s.j[sp] == j) ? s.v[sp] : 0.0;
    const std::int32_t il = row_local[i];
    double x;
    if (il >= 0) {
      x = row_panel(static_cast<std::size_t>(il), j);
    } else {
      const std::int32_t jl = col_local[j];
      if (jl < 0)
        throw ArgumentError(
            "compute_error: observed entry lies outside both panels");
      x = col_panel(i, static_cast<std::size_t>(jl));
    }
    const double d = sval + x - y;
    num += d * d;
    den += y * y;
  }
  if (den == 0.0)
    throw ArgumentError("compute_error: every observed value is zero");
  return num / den;
}

CurFactors zero_factors(const CcsObservation& obs, std::size_t rank) {
  const std::size_t ni = obs.row_idx.size();
  const std::size_t nj = obs.col_idx.size();
  if (rank == 0 || rank > std::min(ni, nj))
    throw ArgumentError(
        "zero_factors: rank must satisfy 1 <= rank <= min(|I|, |J|)");
  CurFactors f;
  f.c = DenseMatrix(obs.n1, nj);
  f.r_mat = DenseMatrix(ni, obs.n2);
  // Zero singular values on an orthonormal basis: the exact zero estimate,
  // with every factor invariant intact.
  DenseMatrix u(ni, rank), v(nj, rank);
  for (std::size_t a = 0; a < rank; ++a) {
    u(a, a) = 1.0;
    v(a, a) = 1.0;
  }
  f.u = SvdR{std::move(u), alloc::TrackedVec<double>(rank, 0.0), std::move(v)};
  f.row_idx = obs.row_idx;
  f.col_idx = obs.col_idx;
  f.rank = rank;
  return f;
}

std::pair<CurFactors, SparseCross> rcurc_step(const CcsObservation& obs,
                                              CurFactors f_k,
                                              const SolverConfig& cfg,
                                              std::size_t k) {
  require_resolved(cfg, "rcurc_step");
  const SolverConfig rc = resolve_config(obs, cfg);  // validates the fields
  Engine eng(obs, rc, std::move(f_k));
  const double zeta = zeta_at(rc, k);
  eng.iterate(zeta);
  SparseCross s = eng.extract_sparse(zeta);
  return {eng.take_factors(), std::move(s)};
}

SolveReport solve(const CcsObservation& obs, const SolverConfig& cfg_in) {
  const SolverConfig cfg = resolve_config(obs, cfg_in);
  const auto t0 = std::chrono::steady_clock::now();

  Engine eng(obs, cfg, zero_factors(obs, cfg.rank));
  SolveReport rep;
  rep.resolved = cfg;
  rep.termination = Termination::max_iters;

  double zeta = *cfg.zeta0;
  double prev_e = 0.0;
  int stall = 0;
  bool done = false;
  for (std::size_t k = 0; k < cfg.max_iters && !done; ++k) {
    if (k > 0) zeta *= cfg.gamma;
    const double e = eng.iterate(zeta);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    rep.trace.push_back(TracePoint{k + 1, e, zeta, wall_ms});

    if (e <= cfg.eps) {
      rep.termination = Termination::converged;
      done = true;
    } else if (k > 0) {
      // Stagnation guard: ten consecutive iterations without a relative
      // improvement of at least 1e-12.
      if (prev_e - e > 1e-12 * prev_e) {
        stall = 0;
      } else if (++stall >= 10) {
        rep.termination = Termination::stagnated;
        done = true;
      }
    }
    prev_e = e;
  }

  rep.sparse = eng.extract_sparse(zeta);
  rep.rank_deficiency_events = eng.rank_drops();
  rep.factors = eng.take_factors();
  return rep;
}

}  // namespace rcurc
