#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evtortho/distributions.hpp"
#include "evtortho/fisher.hpp"
#include "evtortho/reparam.hpp"

namespace evt {

/// Optimizer settings for maximum-likelihood fits.
struct FitConfig {
  int max_iterations = 500;      ///< simplex iterations per start
  double convergence_tol = 1e-8; ///< on coordinate spread and objective change
  int restarts = 3;              ///< total starts (>= 1), deterministic jitter
  double hessian_rel_step = 1e-4;  ///< observed-information step factor

  void validate() const;
};

/// Result of one maximum-likelihood fit.
struct FitResult {
  std::vector<std::string> labels;  ///< fitted-coordinate names
  std::vector<double> estimate;     ///< in fitted coordinates
  ClassicalParams estimate_classical;  ///< same point, classical coordinates
  double loglik = 0.0;
  FisherMatrix observed_info;  ///< negative Hessian at the optimum
  std::vector<double> std_errors;
  SquareMatrix correlation;  ///< correlation of inverse observed information
  /// Off-diagonal of `correlation` for two-parameter fits; for
  /// three-parameter fits, the (interest, scale-type nuisance) entry.
  double cross_correlation = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Maximize the log-likelihood in classical coordinates.
/// Deterministic given (data, cfg). Non-convergence is reported through
/// converged=false; an std::invalid_argument is thrown only when no
/// parameter value can give a finite likelihood (fewer than 5 points, or
/// zero-variance data).
FitResult fit_classical(Family family, const std::vector<double>& data,
                        const FitConfig& cfg = {});

/// Maximize the log-likelihood in chart coordinates. The classical image of
/// the optimum agrees with fit_classical to the optimizer tolerance
/// (functional invariance of the MLE).
FitResult fit_ortho(Chart chart, const std::vector<double>& data,
                    const FitConfig& cfg = {});

/// Negative Hessian of the log-likelihood by central finite differences with
/// per-coordinate relative steps (h_i = rel_step * |theta_i|), symmetrized.
/// Coordinates with |theta_i| < 1e-8 make relative stepping meaningless and
/// raise std::runtime_error. Points whose stencil crosses the support
/// boundary fall back to a one-sided second-difference stencil.
FisherMatrix observed_information(Family family,
                                  const ClassicalParams& at,
                                  const std::vector<double>& data,
                                  double rel_step = 1e-4);

FisherMatrix observed_information(Chart chart, const OrthoParams& at,
                                  const std::vector<double>& data,
                                  double rel_step = 1e-4);

/// Correlation matrix of info⁻¹ (the asymptotic covariance proxy).
/// Throws std::runtime_error when info is numerically singular.
SquareMatrix estimate_correlation(const FisherMatrix& info);

/// Convenience for two-parameter matrices: the single off-diagonal of
/// estimate_correlation, which for a 2x2 information matrix equals
/// -i12/sqrt(i11*i22).
double estimate_correlation_offdiag(const FisherMatrix& info);

}  // namespace evt
