#pragma once

#include <optional>
#include <span>

#include "rcurc/dense_matrix.hpp"
#include "rcurc/solver.hpp"

namespace rcurc {

/// Relative Frobenius error ||x_hat - x_true||_F / ||x_true||_F.
/// Shapes must match and x_true must be nonzero.
double recovery_error(const DenseMatrix& x_hat, const DenseMatrix& x_true);

/// Peak signal-to-noise ratio in dB: 10*log10(peak^2 / MSE) with
/// MSE = ||reference - estimate||_F^2 / (rows*cols) over every entry.
/// An empty `peak` means "auto": the largest absolute reference entry.
/// An explicit peak must be finite and positive. MSE == 0 returns +infinity.
double psnr(const DenseMatrix& reference, const DenseMatrix& estimate,
            std::optional<double> peak = std::nullopt);

/// Least-squares line through (iter, ln e_k): slope is the per-iteration
/// log-residual decay, r2 the fraction of variance explained.
struct ConvergenceFit {
  double slope = 0.0;
  double r2 = 0.0;              ///< in [0, 1]; 0 when the trace is constant
  std::size_t iters_used = 0;   ///< >= 2
};

/// Fit ln(e_k) against the iteration number over the longest prefix of the
/// trace whose e_k values are finite and strictly positive (a zero residual
/// ends the usable prefix). Fewer than two usable points is an error.
ConvergenceFit fit_linear_rate(std::span<const TracePoint> trace);

}  // namespace rcurc
