#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "rcurc/dense_matrix.hpp"
#include "rcurc/linalg.hpp"
#include "rcurc/sampling.hpp"

namespace rcurc {

/// Solver parameters. eta_r/eta_c/zeta0 left empty mean "derive from the
/// observation": step sizes default to the reciprocal of the achieved panel
/// observation rates, zeta0 to the largest absolute observed value.
struct SolverConfig {
  std::size_t rank = 1;
  std::optional<double> eta_r;
  std::optional<double> eta_c;
  std::optional<double> zeta0;
  double gamma = 0.65;   ///< geometric threshold decay per iteration
  double eps = 1e-4;     ///< stop once the relative residual energy e_k <= eps
  std::size_t max_iters = 100;
};

/// Fill in the derived defaults and validate every field against the
/// observation (rank must fit the core, rates must be positive, ...).
SolverConfig resolve_config(const CcsObservation& obs, SolverConfig cfg);

/// Low-rank iterate in cross factor form. The full estimate
/// X = c * pinv(core) * r_mat is represented by its column panel c (n1 x |J|),
/// row panel r_mat (|I| x n2) and the rank-r SVD `u` of the |I| x |J| core.
///
/// Invariant: the core block is stored three times (rows row_idx of c,
/// columns col_idx of r_mat, and u.reconstruct()); after every step the
/// copies agree within 1e-10 (the two panel copies are written from one
/// shared buffer and agree exactly).
struct CurFactors {
  DenseMatrix c;
  SvdR u;
  DenseMatrix r_mat;
  IndexSet row_idx;
  IndexSet col_idx;
  std::size_t rank = 0;
};

/// Sparse matrix supported on the observation cross, stored as sorted
/// row-major coordinate triplets. Support stays inside
/// (row_idx x [n2]) union ([n1] x col_idx); in practice inside the observed
/// union.
struct SparseCross {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  alloc::TrackedVec<index_t> i;
  alloc::TrackedVec<index_t> j;
  alloc::TrackedVec<double> v;

  std::size_t size() const { return v.size(); }
  /// Value at (i, j); 0 when the coordinate is not stored.
  double value_at(index_t row, index_t col) const;
};

enum class Termination : std::uint8_t { converged, max_iters, stagnated };

const char* to_string(Termination t);

struct TracePoint {
  std::size_t iter = 0;   ///< 1-based completed-iteration count
  double e_k = 0.0;       ///< relative residual energy after the iteration
  double zeta_k = 0.0;    ///< threshold used by the iteration
  double wall_ms = 0.0;   ///< cumulative wall time when the iteration finished
};

struct SolveReport {
  alloc::TrackedVec<TracePoint> trace;
  Termination termination = Termination::max_iters;
  CurFactors factors;
  SparseCross sparse;
  SolverConfig resolved;                  ///< config with defaults filled in
  std::size_t rank_deficiency_events = 0; ///< iterations whose core dropped rank
};

/// Entrywise hard threshold: values with |m_ij| < zeta become 0, all others
/// (ties included) are kept verbatim. zeta must be >= 0.
DenseMatrix hard_threshold(const DenseMatrix& m, double zeta);

/// Threshold schedule zeta_0 * gamma^k (computed by repeated multiplication,
/// so it matches the solve loop bit for bit). cfg.zeta0 must be resolved.
double zeta_at(const SolverConfig& cfg, std::size_t k);

/// Merge the two gradient-updated core blocks. Entry rules:
///   in omega_r only                -> r_blk value
///   in omega_c only                -> c_blk value
///   in both                        -> (eta_c * r + eta_r * c) / (eta_r + eta_c)
///   in neither                     -> 0
/// Blocks and masks share the local core shape. eta_r + eta_c must be nonzero.
DenseMatrix union_sum(const DenseMatrix& r_blk, const DenseMatrix& c_blk,
                      const Mask& omega_r_core, const Mask& omega_c_core,
                      double eta_r, double eta_c);

enum class PanelSide : std::uint8_t { rows, cols };

/// Restricted reconstruction of the estimate: the row panel
/// c(row_idx,:) * pinv(core) * r_mat (|I| x n2) or the column panel
/// c * pinv(core) * r_mat(:,col_idx) (n1 x |J|). The full n1 x n2 estimate is
/// never formed here.
DenseMatrix restricted_reconstruct(const CurFactors& f, PanelSide side);

/// Relative residual energy on the observed union:
///   sum_{(i,j) observed} (s_ij + x_ij - y_ij)^2 / sum_{(i,j) observed} y_ij^2
/// with x values taken from the restricted panel reconstructions.
double compute_error(const CcsObservation& obs, const CurFactors& f,
                     const SparseCross& s);

/// Factors representing the zero estimate X_0 = 0: zero panels plus a core
/// factorization with orthonormal basis columns and zero singular values.
CurFactors zero_factors(const CcsObservation& obs, std::size_t rank);

/// One iteration k (0-based) of the alternating update: threshold the
/// residual into S_{k+1} at zeta_0 * gamma^k, take the projected-gradient
/// panel steps, merge the core blocks, project to rank r and write the
/// projected core back into both panels. cfg must be resolved.
std::pair<CurFactors, SparseCross> rcurc_step(const CcsObservation& obs,
                                              CurFactors f_k,
                                              const SolverConfig& cfg,
                                              std::size_t k);

/// Dense n1 x n2 estimate c * pinv(core) * r_mat. Post-processing export
/// only (evaluation, image reassembly); the solver itself never calls this.
DenseMatrix materialize(const CurFactors& f);

/// Full solve from X_0 = 0. Stops when e_k <= eps (converged), after
/// max_iters iterations (max_iters), or when e_k fails to improve by at
/// least a 1e-12 relative margin over 10 consecutive iterations (stagnated).
/// Never allocates an n1 x n2 buffer; working memory is panels, the core and
/// per-entry observation arrays.
SolveReport solve(const CcsObservation& obs, const SolverConfig& cfg);

}  // namespace rcurc
