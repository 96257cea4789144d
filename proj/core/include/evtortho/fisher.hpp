#pragma once

#include <string>
#include <vector>

#include "evtortho/distributions.hpp"
#include "evtortho/linalg.hpp"

namespace evt {

/// Per-observation expected information matrix with parameter labels.
/// Symmetric and positive definite on each family's validity domain.
struct FisherMatrix {
  std::vector<std::string> labels;
  SquareMatrix m;
};

/// Helper p(xi) = (1+xi)^2 * Gamma(1+2xi). Requires xi > -0.5.
double p_of_xi(double xi);

/// Helper q(xi) = Gamma(2+xi) * (digamma(1+xi) + 1/xi + 1).
/// Requires xi > -1 and xi != 0.
double q_of_xi(double xi);

/// GEV(mu, sigma, xi) information, labels [mu, sigma, xi].
/// Requires sigma > 0, xi > -0.5 and |xi| >= 1e-4 (use fisher_gumbel for the
/// xi -> 0 member; the closed forms have removable 1/xi singularities that
/// are numerically hopeless below that cutoff).
FisherMatrix fisher_gev3(double mu, double sigma, double xi);

/// Gumbel(mu, sigma) information, labels [mu, sigma]; independent of mu.
FisherMatrix fisher_gumbel(double mu, double sigma);

/// Two-parameter GEV(sigma, xi) information, labels [sigma, xi].
/// Requires sigma > 0 and |xi| >= 1e-4.
FisherMatrix fisher_gev2(double sigma, double xi);

/// Generalised Pareto (sigma, xi) information, labels [sigma, xi].
/// Requires sigma > 0 and xi > -0.5.
FisherMatrix fisher_gp2(double sigma, double xi);

/// Three-parameter generalised Pareto (mu, sigma, xi) information,
/// labels [mu, sigma, xi]; entries independent of mu. Its (sigma, xi) block
/// equals fisher_gp2 exactly.
FisherMatrix fisher_gp3(double mu, double sigma, double xi);

/// Dispatch on params.family.
FisherMatrix fisher_matrix(const ClassicalParams& params);

}  // namespace evt
