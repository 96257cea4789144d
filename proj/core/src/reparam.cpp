#include "evtortho/reparam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "evtortho/specfun.hpp"

namespace evt {

namespace {

using constants::euler_gamma;
using constants::pi_sq_over_6;

// Slope of the transformed Gumbel scale parameter in the location:
// (1-gamma)/(pi^2/6 + gamma^2 - 2*gamma + 1).
double gumbel_scale_slope() {
  return (1.0 - euler_gamma) /
         (pi_sq_over_6 + euler_gamma * euler_gamma - 2.0 * euler_gamma + 1.0);
}

[[noreturn]] void chart_domain_error(Chart chart, const std::string& what) {
  throw std::domain_error("chart " + to_string(chart) + ": " + what);
}

// Position of the interest parameter among the classical labels.
std::size_t interest_classical_index(Chart chart) {
  switch (chart) {
    case Chart::gumbel_loc:
      return 1;  // sigma in (mu, sigma)
    case Chart::gumbel_scale:
      return 0;  // mu in (mu, sigma)
    case Chart::gev2_scale:
    case Chart::gp_scale:
      return 1;  // xi in (sigma, xi)
    case Chart::gp_shape:
      return 0;  // sigma in (sigma, xi)
    case Chart::gp3_scale:
      return 2;  // xi in (mu, sigma, xi)
  }
  throw std::invalid_argument("unknown chart enumerator");
}

}  // namespace

Chart chart_from_string(std::string_view name) {
  if (name == "gumbel-loc") return Chart::gumbel_loc;
  if (name == "gumbel-scale") return Chart::gumbel_scale;
  if (name == "gev2-scale") return Chart::gev2_scale;
  if (name == "gp-scale") return Chart::gp_scale;
  if (name == "gp-shape") return Chart::gp_shape;
  if (name == "gp3-scale") return Chart::gp3_scale;
  throw std::invalid_argument("unknown chart name: " + std::string(name));
}

std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::gumbel_loc:
      return "gumbel-loc";
    case Chart::gumbel_scale:
      return "gumbel-scale";
    case Chart::gev2_scale:
      return "gev2-scale";
    case Chart::gp_scale:
      return "gp-scale";
    case Chart::gp_shape:
      return "gp-shape";
    case Chart::gp3_scale:
      return "gp3-scale";
  }
  throw std::invalid_argument("unknown chart enumerator");
}

Family chart_family(Chart chart) {
  switch (chart) {
    case Chart::gumbel_loc:
    case Chart::gumbel_scale:
      return Family::gumbel;
    case Chart::gev2_scale:
      return Family::gev2;
    case Chart::gp_scale:
    case Chart::gp_shape:
      return Family::gp2;
    case Chart::gp3_scale:
      return Family::gp3;
  }
  throw std::invalid_argument("unknown chart enumerator");
}

std::size_t chart_dim(Chart chart) {
  return chart == Chart::gp3_scale ? 3 : 2;
}

std::vector<std::string> chart_param_names(Chart chart) {
  switch (chart) {
    case Chart::gumbel_loc:
      return {"nu", "sigma"};
    case Chart::gumbel_scale:
      return {"mu", "rho"};
    case Chart::gev2_scale:
      return {"rho", "xi"};
    case Chart::gp_scale:
      return {"nu", "xi"};
    case Chart::gp_shape:
      return {"sigma", "zeta"};
    case Chart::gp3_scale:
      return {"mu", "nu", "xi"};
  }
  throw std::invalid_argument("unknown chart enumerator");
}

std::size_t interest_index(Chart chart) {
  switch (chart) {
    case Chart::gumbel_loc:
      return 1;  // sigma
    case Chart::gumbel_scale:
      return 0;  // mu
    case Chart::gev2_scale:
    case Chart::gp_scale:
      return 1;  // xi
    case Chart::gp_shape:
      return 0;  // sigma
    case Chart::gp3_scale:
      return 2;  // xi
  }
  throw std::invalid_argument("unknown chart enumerator");
}

std::vector<double> OrthoParams::as_vector() const {
  switch (chart) {
    case Chart::gumbel_loc:   // (nu, sigma)
    case Chart::gev2_scale:   // (rho, xi)
    case Chart::gp_scale:     // (nu, xi)
      return {nuisance, interest};
    case Chart::gumbel_scale:  // (mu, rho)
    case Chart::gp_shape:      // (sigma, zeta)
      return {interest, nuisance};
    case Chart::gp3_scale:  // (mu, nu, xi)
      return {mu, nuisance, interest};
  }
  throw std::invalid_argument("unknown chart enumerator");
}

OrthoParams OrthoParams::from_vector(Chart chart,
                                     const std::vector<double>& coords) {
  if (coords.size() != chart_dim(chart)) {
    throw std::invalid_argument("coordinate vector has wrong length for " +
                                to_string(chart));
  }
  switch (chart) {
    case Chart::gumbel_loc:
    case Chart::gev2_scale:
    case Chart::gp_scale:
      return {chart, coords[1], coords[0]};
    case Chart::gumbel_scale:
    case Chart::gp_shape:
      return {chart, coords[0], coords[1]};
    case Chart::gp3_scale:
      return {chart, coords[2], coords[1], coords[0]};
  }
  throw std::invalid_argument("unknown chart enumerator");
}

ClassicalParams to_classical(const OrthoParams& op) {
  switch (op.chart) {
    case Chart::gumbel_loc: {
      const double sigma = op.interest;
      if (!(sigma > 0.0)) chart_domain_error(op.chart, "sigma must be > 0");
      const double mu = (1.0 - euler_gamma) * sigma + op.nuisance;
      return ClassicalParams::gumbel(mu, sigma);
    }
    case Chart::gumbel_scale: {
      const double mu = op.interest;
      const double sigma = gumbel_scale_slope() * mu + op.nuisance;
      if (!(sigma > 0.0)) {
        chart_domain_error(op.chart, "implied sigma must be > 0");
      }
      return ClassicalParams::gumbel(mu, sigma);
    }
    case Chart::gev2_scale: {
      const double xi = op.interest;
      const double rho = op.nuisance;
      const double sigma = rho * xi * std::exp((1.0 - euler_gamma) * xi);
      if (!(sigma > 0.0)) {
        chart_domain_error(op.chart,
                           "rho and xi must share a sign (implied sigma > 0)");
      }
      return ClassicalParams::gev2(sigma, xi);
    }
    case Chart::gp_scale: {
      const double xi = op.interest;
      const double sigma = op.nuisance / (1.0 + xi);
      if (!(sigma > 0.0)) {
        chart_domain_error(op.chart, "implied sigma must be > 0");
      }
      return ClassicalParams::gp2(sigma, xi);
    }
    case Chart::gp_shape: {
      const double sigma = op.interest;
      if (!(sigma > 0.0)) chart_domain_error(op.chart, "sigma must be > 0");
      const double xi = op.nuisance - 0.5 * std::log(sigma);
      return ClassicalParams::gp2(sigma, xi);
    }
    case Chart::gp3_scale: {
      const double xi = op.interest;
      const double sigma = op.nuisance / (1.0 + xi);
      if (!(sigma > 0.0)) {
        chart_domain_error(op.chart, "implied sigma must be > 0");
      }
      return ClassicalParams::gp3(op.mu, sigma, xi);
    }
  }
  throw std::invalid_argument("unknown chart enumerator");
}

OrthoParams from_classical(Chart chart, const ClassicalParams& cp) {
  if (cp.family != chart_family(chart)) {
    throw std::invalid_argument("chart " + to_string(chart) +
                                " does not apply to family " +
                                to_string(cp.family));
  }
  switch (chart) {
    case Chart::gumbel_loc:
      return {chart, cp.sigma, cp.mu - (1.0 - euler_gamma) * cp.sigma};
    case Chart::gumbel_scale:
      return {chart, cp.mu, cp.sigma - gumbel_scale_slope() * cp.mu};
    case Chart::gev2_scale:
      return {chart, cp.xi,
              cp.sigma / (cp.xi * std::exp((1.0 - euler_gamma) * cp.xi))};
    case Chart::gp_scale:
      return {chart, cp.xi, cp.sigma * (1.0 + cp.xi)};
    case Chart::gp_shape:
      return {chart, cp.sigma, cp.xi + 0.5 * std::log(cp.sigma)};
    case Chart::gp3_scale:
      return {chart, cp.xi, cp.sigma * (1.0 + cp.xi), cp.mu};
  }
  throw std::invalid_argument("unknown chart enumerator");
}

double ortho_log_likelihood(const OrthoParams& op,
                            const std::vector<double>& data) {
  if (data.empty()) {
    throw std::invalid_argument("ortho_log_likelihood: data must be nonempty");
  }
  return log_likelihood(to_classical(op), data);
}

SquareMatrix chart_jacobian(const OrthoParams& op) {
  const std::size_t dim = chart_dim(op.chart);
  SquareMatrix j(dim);
  switch (op.chart) {
    case Chart::gumbel_loc:
      // classical (mu, sigma); chart (nu, sigma)
      j(0, 0) = 1.0;
      j(0, 1) = 1.0 - euler_gamma;
      j(1, 0) = 0.0;
      j(1, 1) = 1.0;
      return j;
    case Chart::gumbel_scale:
      // classical (mu, sigma); chart (mu, rho)
      j(0, 0) = 1.0;
      j(0, 1) = 0.0;
      j(1, 0) = gumbel_scale_slope();
      j(1, 1) = 1.0;
      return j;
    case Chart::gev2_scale: {
      // classical (sigma, xi); chart (rho, xi)
      const double xi = op.interest;
      const double e = std::exp((1.0 - euler_gamma) * xi);
      j(0, 0) = xi * e;
      j(0, 1) = op.nuisance * e * (1.0 + (1.0 - euler_gamma) * xi);
      j(1, 0) = 0.0;
      j(1, 1) = 1.0;
      return j;
    }
    case Chart::gp_scale: {
      // classical (sigma, xi); chart (nu, xi)
      const double opx = 1.0 + op.interest;
      j(0, 0) = 1.0 / opx;
      j(0, 1) = -op.nuisance / (opx * opx);
      j(1, 0) = 0.0;
      j(1, 1) = 1.0;
      return j;
    }
    case Chart::gp_shape:
      // classical (sigma, xi); chart (sigma, zeta)
      j(0, 0) = 1.0;
      j(0, 1) = 0.0;
      j(1, 0) = -0.5 / op.interest;
      j(1, 1) = 1.0;
      return j;
    case Chart::gp3_scale: {
      // classical (mu, sigma, xi); chart (mu, nu, xi)
      const double opx = 1.0 + op.interest;
      j(0, 0) = 1.0;
      j(1, 1) = 1.0 / opx;
      j(1, 2) = -op.nuisance / (opx * opx);
      j(2, 2) = 1.0;
      return j;
    }
  }
  throw std::invalid_argument("unknown chart enumerator");
}

std::vector<double> orthogonality_residuals(const OrthoParams& op) {
  const ClassicalParams cp = to_classical(op);
  const FisherMatrix info = fisher_matrix(cp);
  const SquareMatrix j = chart_jacobian(op);
  const std::size_t dim = chart_dim(op.chart);
  const std::size_t psi = interest_classical_index(op.chart);
  const std::size_t psi_col = interest_index(op.chart);

  std::vector<double> residuals;
  residuals.reserve(dim - 1);
  for (std::size_t out = 0; out < dim; ++out) {
    if (out == psi) continue;
    // sum_i I_{t_i, t_out} * (d t_i / d psi)  +  I_{psi, t_out}
    double r = info.m(psi, out);
    for (std::size_t in = 0; in < dim; ++in) {
      if (in == psi) continue;
      r += info.m(in, out) * j(in, psi_col);
    }
    residuals.push_back(r);
  }
  return residuals;
}

FisherMatrix ortho_fisher(const OrthoParams& op) {
  const ClassicalParams cp = to_classical(op);
  const FisherMatrix info = fisher_matrix(cp);
  return {chart_param_names(op.chart), congruence(info.m, chart_jacobian(op))};
}

}  // namespace evt
