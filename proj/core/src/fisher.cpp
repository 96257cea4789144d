#include "evtortho/fisher.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "evtortho/specfun.hpp"

namespace evt {

namespace {

using constants::euler_gamma;
using constants::pi_sq_over_6;

// The GEV closed forms below have removable singularities at xi = 0 built
// from 1/xi^k cancellations; beneath this cutoff they lose every significant
// digit, so callers must switch to the Gumbel member instead.
constexpr double kXiCutoff = 1e-4;

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be finite and > 0, got " +
                                std::to_string(sigma));
  }
}

void require_xi_gt(double xi, double bound) {
  if (!(xi > bound) || !std::isfinite(xi)) {
    throw std::domain_error("xi must be > " + std::to_string(bound) +
                            ", got " + std::to_string(xi));
  }
}

void require_xi_away_from_zero(double xi) {
  if (std::abs(xi) < kXiCutoff) {
    throw std::domain_error(
        "|xi| must be >= 1e-4; for the xi -> 0 member use the gumbel "
        "information instead");
  }
}

}  // namespace

double p_of_xi(double xi) {
  require_xi_gt(xi, -0.5);
  return (1.0 + xi) * (1.0 + xi) * gamma_fn(1.0 + 2.0 * xi);
}

double q_of_xi(double xi) {
  require_xi_gt(xi, -1.0);
  if (xi == 0.0) {
    throw std::domain_error("q_of_xi: xi must be nonzero (1/xi term)");
  }
  return gamma_fn(2.0 + xi) * (digamma(1.0 + xi) + 1.0 / xi + 1.0);
}

FisherMatrix fisher_gev3(double mu, double sigma, double xi) {
  (void)mu;  // entries do not depend on the location parameter
  require_sigma(sigma);
  require_xi_gt(xi, -0.5);
  require_xi_away_from_zero(xi);

  const double p = p_of_xi(xi);
  const double q = q_of_xi(xi);
  const double g2 = gamma_fn(2.0 + xi);
  const double s2 = sigma * sigma;
  const double one_m_g = 1.0 - euler_gamma;

  FisherMatrix f{{"mu", "sigma", "xi"}, SquareMatrix(3)};
  f.m(0, 0) = p / s2;
  f.m(1, 1) = (1.0 - 2.0 * g2 + p) / (s2 * xi * xi);
  const double a = one_m_g + 1.0 / xi;
  f.m(2, 2) =
      (pi_sq_over_6 + a * a - 2.0 * q / xi + p / (xi * xi)) / (xi * xi);
  f.m(0, 1) = f.m(1, 0) = -(p - g2) / (s2 * xi);
  f.m(0, 2) = f.m(2, 0) = -(q - p / xi) / (sigma * xi);
  f.m(1, 2) = f.m(2, 1) =
      -(one_m_g + (1.0 - g2) / xi - q + p / xi) / (sigma * xi * xi);
  return f;
}

FisherMatrix fisher_gumbel(double mu, double sigma) {
  (void)mu;  // entries do not depend on the location parameter
  require_sigma(sigma);
  const double s2 = sigma * sigma;
  FisherMatrix f{{"mu", "sigma"}, SquareMatrix(2)};
  f.m(0, 0) = 1.0 / s2;
  f.m(1, 1) = (pi_sq_over_6 + euler_gamma * euler_gamma -
               2.0 * euler_gamma + 1.0) /
              s2;
  f.m(0, 1) = f.m(1, 0) = (euler_gamma - 1.0) / s2;
  return f;
}

FisherMatrix fisher_gev2(double sigma, double xi) {
  require_sigma(sigma);
  if (!std::isfinite(xi)) {
    throw std::domain_error("xi must be finite");
  }
  require_xi_away_from_zero(xi);

  const double one_m_g = 1.0 - euler_gamma;
  FisherMatrix f{{"sigma", "xi"}, SquareMatrix(2)};
  f.m(0, 0) = 1.0 / (xi * sigma * xi * sigma);
  f.m(0, 1) = f.m(1, 0) =
      -one_m_g / (sigma * xi * xi) - 1.0 / (sigma * xi * xi * xi);
  f.m(1, 1) = (pi_sq_over_6 + 1.0 - 2.0 * euler_gamma +
               euler_gamma * euler_gamma) /
                  (xi * xi) +
              2.0 * one_m_g / (xi * xi * xi) + 1.0 / (xi * xi * xi * xi);
  return f;
}

FisherMatrix fisher_gp2(double sigma, double xi) {
  require_sigma(sigma);
  require_xi_gt(xi, -0.5);
  FisherMatrix f{{"sigma", "xi"}, SquareMatrix(2)};
  f.m(0, 0) = 1.0 / (sigma * sigma * (1.0 + 2.0 * xi));
  f.m(1, 1) = 2.0 / ((1.0 + xi) * (1.0 + 2.0 * xi));
  f.m(0, 1) = f.m(1, 0) = 1.0 / (sigma * (1.0 + xi) * (1.0 + 2.0 * xi));
  return f;
}

FisherMatrix fisher_gp3(double mu, double sigma, double xi) {
  (void)mu;  // entries do not depend on the threshold parameter
  require_sigma(sigma);
  require_xi_gt(xi, -0.5);
  const FisherMatrix block = fisher_gp2(sigma, xi);
  FisherMatrix f{{"mu", "sigma", "xi"}, SquareMatrix(3)};
  f.m(0, 0) = (xi + 1.0) * (xi + 1.0) / (sigma * sigma * (1.0 + 2.0 * xi));
  f.m(0, 1) = f.m(1, 0) = -xi / (sigma * sigma * (1.0 + 2.0 * xi));
  f.m(0, 2) = f.m(2, 0) = -xi / (sigma * (1.0 + xi) * (1.0 + 2.0 * xi));
  f.m(1, 1) = block.m(0, 0);
  f.m(1, 2) = f.m(2, 1) = block.m(0, 1);
  f.m(2, 2) = block.m(1, 1);
  return f;
}

FisherMatrix fisher_matrix(const ClassicalParams& p) {
  switch (p.family) {
    case Family::gev3:
      return fisher_gev3(p.mu, p.sigma, p.xi);
    case Family::gumbel:
      return fisher_gumbel(p.mu, p.sigma);
    case Family::gev2:
      return fisher_gev2(p.sigma, p.xi);
    case Family::gp2:
      return fisher_gp2(p.sigma, p.xi);
    case Family::gp3:
      return fisher_gp3(p.mu, p.sigma, p.xi);
  }
  throw std::invalid_argument("unknown family enumerator");
}

}  // namespace evt
