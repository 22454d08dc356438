#include "rcurc/metrics.hpp"

#include <cmath>
#include <limits>

#include "rcurc/errors.hpp"
#include "rcurc/linalg.hpp"

namespace rcurc {

double recovery_error(const DenseMatrix& x_hat, const DenseMatrix& x_true) {
  if (!x_hat.same_shape(x_true))
    throw ArgumentError("recovery_error: shapes differ");
  const double den = frob_norm(x_true);
  if (den == 0.0)
    throw ArgumentError("recovery_error: ground truth is identically zero");
  double num_sq = 0.0;
  const auto a = x_hat.data();
  const auto b = x_true.data();
  for (std::size_t q = 0; q < a.size(); ++q) {
    const double d = a[q] - b[q];
    num_sq += d * d;
  }
  return std::sqrt(num_sq) / den;
}

double psnr(const DenseMatrix& reference, const DenseMatrix& estimate,
            std::optional<double> peak) {
  if (!reference.same_shape(estimate))
    throw ArgumentError("psnr: shapes differ");
  if (reference.size() == 0)
    throw ArgumentError("psnr: matrices are empty");
  double p;
  if (peak) {
    p = *peak;
    if (!(std::isfinite(p) && p > 0.0))
      throw ArgumentError("psnr: explicit peak must be finite and positive");
  } else {
    p = 0.0;
    for (const double v : reference.data()) p = std::max(p, std::abs(v));
  }
  double err_sq = 0.0;
  const auto a = reference.data();
  const auto b = estimate.data();
  for (std::size_t q = 0; q < a.size(); ++q) {
    const double d = a[q] - b[q];
    err_sq += d * d;
  }
  if (err_sq == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = err_sq / static_cast<double>(reference.size());
  return 10.0 * std::log10(p * p / mse);
}

ConvergenceFit fit_linear_rate(std::span<const TracePoint> trace) {
  // Usable prefix: finite, strictly positive residuals (the log domain).
  std::size_t n = 0;
  while (n < trace.size() && std::isfinite(trace[n].e_k) && trace[n].e_k > 0.0)
    ++n;
  if (n < 2)
    throw ArgumentError(
        "fit_linear_rate: need at least 2 finite positive residuals");

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    mean_x += static_cast<double>(trace[q].iter);
    mean_y += std::log(trace[q].e_k);
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double dx = static_cast<double>(trace[q].iter) - mean_x;
    const double dy = std::log(trace[q].e_k) - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0)
    throw ArgumentError("fit_linear_rate: iteration numbers are not distinct");

  ConvergenceFit fit;
  fit.iters_used = n;
  fit.slope = sxy / sxx;
  // A perfectly flat trace has no variance to explain; report r2 = 0.
  fit.r2 = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace rcurc
