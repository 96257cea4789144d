#include "evtortho/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace evt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this magnitude of xi, GEV3/GP3 evaluation switches to the
// Gumbel/exponential limit form: (1+xi*z)^(-1/xi) loses all precision while
// the limit is accurate to ~|xi*z^2/2|.
constexpr double kXiLimitEps = 1e-8;

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be finite and > 0, got " +
                                std::to_string(sigma));
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

// Guard against interior-of-support overflow (deep tails can push the exact
// log-density past double range); anything at or below the sentinel, or
// non-finite, collapses to the sentinel.
double clamp_log(double lf) {
  if (!(lf > kLogZero)) return kLogZero;
  return lf;
}

}  // namespace

Family family_from_string(std::string_view name) {
  if (name == "gev3") return Family::gev3;
  if (name == "gumbel") return Family::gumbel;
  if (name == "gev2") return Family::gev2;
  if (name == "gp2") return Family::gp2;
  if (name == "gp3") return Family::gp3;
  throw std::invalid_argument("unknown family name: " + std::string(name));
}

std::string to_string(Family family) {
  switch (family) {
    case Family::gev3:
      return "gev3";
    case Family::gumbel:
      return "gumbel";
    case Family::gev2:
      return "gev2";
    case Family::gp2:
      return "gp2";
    case Family::gp3:
      return "gp3";
  }
  throw std::invalid_argument("unknown family enumerator");
}

std::size_t n_params(Family family) {
  switch (family) {
    case Family::gev3:
    case Family::gp3:
      return 3;
    default:
      return 2;
  }
}

std::vector<std::string> param_names(Family family) {
  switch (family) {
    case Family::gev3:
    case Family::gp3:
      return {"mu", "sigma", "xi"};
    case Family::gumbel:
      return {"mu", "sigma"};
    case Family::gev2:
    case Family::gp2:
      return {"sigma", "xi"};
  }
  throw std::invalid_argument("unknown family enumerator");
}

ClassicalParams ClassicalParams::gev3(double mu, double sigma, double xi) {
  require_finite(mu, "mu");
  require_sigma(sigma);
  require_finite(xi, "xi");
  return {Family::gev3, mu, sigma, xi};
}

ClassicalParams ClassicalParams::gumbel(double mu, double sigma) {
  require_finite(mu, "mu");
  require_sigma(sigma);
  return {Family::gumbel, mu, sigma, 0.0};
}

ClassicalParams ClassicalParams::gev2(double sigma, double xi) {
  require_sigma(sigma);
  require_finite(xi, "xi");
  if (xi == 0.0) {
    throw std::invalid_argument(
        "gev2 requires xi != 0 (the xi = 0 member is the gumbel family)");
  }
  return {Family::gev2, sigma / xi, sigma, xi};
}

ClassicalParams ClassicalParams::gp2(double sigma, double xi) {
  require_sigma(sigma);
  require_finite(xi, "xi");
  return {Family::gp2, 0.0, sigma, xi};
}

ClassicalParams ClassicalParams::gp3(double mu, double sigma, double xi) {
  require_finite(mu, "mu");
  require_sigma(sigma);
  require_finite(xi, "xi");
  return {Family::gp3, mu, sigma, xi};
}

std::vector<double> ClassicalParams::as_vector() const {
  switch (family) {
    case Family::gev3:
    case Family::gp3:
      return {mu, sigma, xi};
    case Family::gumbel:
      return {mu, sigma};
    case Family::gev2:
    case Family::gp2:
      return {sigma, xi};
  }
  throw std::invalid_argument("unknown family enumerator");
}

ClassicalParams ClassicalParams::from_vector(Family family,
                                             const std::vector<double>& c) {
  if (c.size() != n_params(family)) {
    throw std::invalid_argument("parameter vector has wrong length for " +
                                to_string(family));
  }
  switch (family) {
    case Family::gev3:
      return gev3(c[0], c[1], c[2]);
    case Family::gumbel:
      return gumbel(c[0], c[1]);
    case Family::gev2:
      return gev2(c[0], c[1]);
    case Family::gp2:
      return gp2(c[0], c[1]);
    case Family::gp3:
      return gp3(c[0], c[1], c[2]);
  }
  throw std::invalid_argument("unknown family enumerator");
}

SupportSpec support(const ClassicalParams& p) {
  switch (p.family) {
    case Family::gumbel:
      return {-kInf, kInf};
    case Family::gev3:
      if (std::abs(p.xi) < kXiLimitEps) return {-kInf, kInf};
      if (p.xi > 0.0) return {p.mu - p.sigma / p.xi, kInf};
      return {-kInf, p.mu - p.sigma / p.xi};
    case Family::gev2:
      return p.xi > 0.0 ? SupportSpec{0.0, kInf} : SupportSpec{-kInf, 0.0};
    case Family::gp2:
    case Family::gp3: {
      const double lo = p.family == Family::gp2 ? 0.0 : p.mu;
      if (p.xi >= 0.0 || std::abs(p.xi) < kXiLimitEps) return {lo, kInf};
      return {lo, lo - p.sigma / p.xi};
    }
  }
  throw std::invalid_argument("unknown family enumerator");
}

double log_density(const ClassicalParams& p, double x) {
  switch (p.family) {
    case Family::gumbel: {
      const double z = (x - p.mu) / p.sigma;
      return clamp_log(-std::log(p.sigma) - z - std::exp(-z));
    }
    case Family::gev3: {
      const double z = (x - p.mu) / p.sigma;
      if (std::abs(p.xi) < kXiLimitEps) {
        return clamp_log(-std::log(p.sigma) - z - std::exp(-z));
      }
      const double xz = p.xi * z;
      if (!(1.0 + xz > 0.0)) return kLogZero;
      const double log_t = std::log1p(xz);
      return clamp_log(-std::log(p.sigma) - (1.0 + 1.0 / p.xi) * log_t -
                       std::exp(-log_t / p.xi));
    }
    case Family::gev2: {
      const double t = p.xi * x / p.sigma;
      if (!(t > 0.0)) return kLogZero;
      const double log_t = std::log(t);
      return clamp_log(-std::log(p.sigma) - (1.0 + 1.0 / p.xi) * log_t -
                       std::exp(-log_t / p.xi));
    }
    case Family::gp2:
    case Family::gp3: {
      const double lo = p.family == Family::gp2 ? 0.0 : p.mu;
      const double z = (x - lo) / p.sigma;
      // The lower endpoint carries density 1/sigma and belongs to the
      // support (unlike the gev endpoint, where the density vanishes).
      if (!(z >= 0.0)) return kLogZero;
      if (std::abs(p.xi) < kXiLimitEps) {
        return clamp_log(-std::log(p.sigma) - z);
      }
      const double xz = p.xi * z;
      if (!(1.0 + xz > 0.0)) return kLogZero;
      return clamp_log(-std::log(p.sigma) -
                       (1.0 + 1.0 / p.xi) * std::log1p(xz));
    }
  }
  throw std::invalid_argument("unknown family enumerator");
}

double cdf(const ClassicalParams& p, double x) {
  double v = 0.0;
  switch (p.family) {
    case Family::gumbel: {
      const double z = (x - p.mu) / p.sigma;
      v = std::exp(-std::exp(-z));
      break;
    }
    case Family::gev3: {
      const double z = (x - p.mu) / p.sigma;
      if (std::abs(p.xi) < kXiLimitEps) {
        v = std::exp(-std::exp(-z));
        break;
      }
      const double xz = p.xi * z;
      if (!(1.0 + xz > 0.0)) {
        // Left of a lower bound: mass 0; right of an upper bound: mass 1.
        v = p.xi > 0.0 ? 0.0 : 1.0;
        break;
      }
      v = std::exp(-std::exp(-std::log1p(xz) / p.xi));
      break;
    }
    case Family::gev2: {
      const double t = p.xi * x / p.sigma;
      if (!(t > 0.0)) {
        v = p.xi > 0.0 ? 0.0 : 1.0;
        break;
      }
      v = std::exp(-std::exp(-std::log(t) / p.xi));
      break;
    }
    case Family::gp2:
    case Family::gp3: {
      const double lo = p.family == Family::gp2 ? 0.0 : p.mu;
      const double z = (x - lo) / p.sigma;
      if (!(z > 0.0)) {
        v = 0.0;
        break;
      }
      if (std::abs(p.xi) < kXiLimitEps) {
        v = -std::expm1(-z);
        break;
      }
      const double xz = p.xi * z;
      if (!(1.0 + xz > 0.0)) {
        v = 1.0;  // beyond the finite upper endpoint (xi < 0)
        break;
      }
      v = -std::expm1(-std::log1p(xz) / p.xi);
      break;
    }
    default:
      throw std::invalid_argument("unknown family enumerator");
  }
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

double quantile(const ClassicalParams& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("quantile: probability must lie in (0,1), got " +
                            std::to_string(prob));
  }
  switch (p.family) {
    case Family::gumbel:
      return p.mu - p.sigma * std::log(-std::log(prob));
    case Family::gev3: {
      const double w = -std::log(prob);  // > 0
      if (std::abs(p.xi) < kXiLimitEps) return p.mu - p.sigma * std::log(w);
      // ((-log p)^(-xi) - 1)/xi, evaluated as expm1 for small |xi|*|log w|.
      return p.mu + p.sigma * std::expm1(-p.xi * std::log(w)) / p.xi;
    }
    case Family::gev2: {
      const double w = -std::log(prob);
      // x = (sigma/xi) * w^(-xi); support sign comes out automatically.
      return (p.sigma / p.xi) * std::exp(-p.xi * std::log(w));
    }
    case Family::gp2:
    case Family::gp3: {
      const double lo = p.family == Family::gp2 ? 0.0 : p.mu;
      if (std::abs(p.xi) < kXiLimitEps) {
        return lo - p.sigma * std::log1p(-prob);
      }
      // ((1-p)^(-xi) - 1)/xi
      return lo + p.sigma * std::expm1(-p.xi * std::log1p(-prob)) / p.xi;
    }
  }
  throw std::invalid_argument("unknown family enumerator");
}

double quantile_complement(const ClassicalParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error(
        "quantile_complement: tail probability must lie in (0,1), got " +
        std::to_string(q));
  }
  switch (p.family) {
    case Family::gumbel: {
      const double w = -std::log1p(-q);  // -log(1-q), exact for tiny q
      return p.mu - p.sigma * std::log(w);
    }
    case Family::gev3: {
      const double w = -std::log1p(-q);
      if (std::abs(p.xi) < kXiLimitEps) return p.mu - p.sigma * std::log(w);
      return p.mu + p.sigma * std::expm1(-p.xi * std::log(w)) / p.xi;
    }
    case Family::gev2: {
      const double w = -std::log1p(-q);
      return (p.sigma / p.xi) * std::exp(-p.xi * std::log(w));
    }
    case Family::gp2:
    case Family::gp3: {
      // Survival function is (1 + xi z)^(-1/xi) = q directly.
      const double lo = p.family == Family::gp2 ? 0.0 : p.mu;
      if (std::abs(p.xi) < kXiLimitEps) return lo - p.sigma * std::log(q);
      return lo + p.sigma * std::expm1(-p.xi * std::log(q)) / p.xi;
    }
  }
  throw std::invalid_argument("unknown family enumerator");
}

std::vector<double> sample(const ClassicalParams& p, std::size_t n, Rng& rng) {
  if (n < 1) {
    throw std::invalid_argument("sample: n must be >= 1");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(p, rng.uniform01());
  return out;
}

double log_likelihood(const ClassicalParams& p,
                      const std::vector<double>& data) {
  double acc = 0.0;
  for (const double x : data) {
    const double lf = log_density(p, x);
    if (lf <= kLogZero) return kLogZero;
    acc += lf;
  }
  return acc;
}

}  // namespace evt
