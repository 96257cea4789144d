#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "evtortho/distributions.hpp"
#include "evtortho/fisher.hpp"

namespace evt {

/// Settings for the independent Fisher-information estimators.
struct OracleConfig {
  std::size_t mc_samples = 1000000;  ///< >= 10^4
  double quadrature_rel_tol = 1e-8;
  double fd_step = 1e-5;  ///< central-difference step factor, in (1e-9, 1e-2)
  unsigned workers = 0;   ///< 0 = hardware concurrency

  void validate() const;
};

/// Monte-Carlo information estimate with per-entry standard errors.
struct FisherEstimate {
  FisherMatrix value;
  SquareMatrix std_error;
  std::size_t samples = 0;
};

/// Score vector d log f(x; params) / d params in label order.
/// Uses the closed-form scores for gumbel and gev2; central finite
/// differences with Richardson extrapolation (step cfg-controlled) for the
/// families without printed scores (gev3, gp2, gp3).
std::vector<double> score(const ClassicalParams& params, double x,
                          double fd_step = 1e-5);

/// Sample average of score outer products over draws from the distribution
/// itself. Deterministic given (params, cfg.mc_samples, seed) regardless of
/// cfg.workers: sampling is split into fixed-size blocks with sub-streams
/// derived from (seed, block index) and reduced in block order.
/// Throws std::domain_error for xi <= -0.5 (the information integrals
/// diverge there).
FisherEstimate fisher_mc(const ClassicalParams& params,
                         const OracleConfig& cfg, std::uint64_t seed);

/// Deterministic quadrature of score-product expectations. The integral over
/// the support is transformed by u = F(x) so every entry is an integral over
/// (0,1); adaptive Gauss-Kronrod panels to cfg.quadrature_rel_tol.
/// Throws std::runtime_error if the tolerance is unreachable and
/// std::domain_error for xi <= -0.5 (the information integrals diverge).
FisherMatrix fisher_quad(const ClassicalParams& params,
                         const OracleConfig& cfg);

/// Derivatives (d mu~/d xi, d sigma~/d xi) that an orthogonal chart keeping
/// xi as interest parameter would need at this point, implied by the
/// orthogonality identities: solve
///
///   [ i_mm  i_sm ] [d mu~/d xi   ]   [ -i_xm ]
///   [ i_ms  i_ss ] [d sigma~/d xi] = [ -i_xs ]
///
/// with the closed-form information entries of the three-parameter family
/// (gev3 or gp3). For gp3 this yields exactly (0, -sigma/(1+xi)) — the
/// gp3_scale chart; for gev3 the implied field has no closed-form primitive.
struct ImpliedChartDerivatives {
  double dmu_dxi;
  double dsigma_dxi;
};

ImpliedChartDerivatives implied_chart_derivatives(const ClassicalParams& params);

/// Evaluate implied_chart_derivatives over a (mu, sigma, xi) grid for gev3,
/// demonstrating that any single-parameter identity-style chart leaves
/// nonzero cross-information (the implied derivative field is nonzero).
struct PdeScanPoint {
  double mu;
  double sigma;
  double xi;
  double dmu_dxi;
  double dsigma_dxi;
};

std::vector<PdeScanPoint> gev3_pde_residual_scan(
    const std::vector<std::array<double, 3>>& grid);

}  // namespace evt
