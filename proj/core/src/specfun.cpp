#include "evtortho/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace evt {

namespace {

void require_positive(double z, const char* fn) {
  if (!(z > 0.0)) {
    throw std::domain_error(std::string(fn) + ": argument must be > 0, got " +
                            std::to_string(z));
  }
}

// Lanczos coefficients for g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kSqrtTwoPi = 2.5066282746310005024;
constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

double lanczos_sum(double z) {
  // z >= 0.5 assumed; series is evaluated at z - 1.
  double a = kLanczos[0];
  for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z - 1.0 + k);
  return a;
}

}  // namespace

double gamma_fn(double z) {
  if (z <= 0.0 && z == std::floor(z)) {
    throw std::domain_error("gamma_fn: pole at non-positive integer " +
                            std::to_string(z));
  }
  if (z < 0.5) {
    // Reflection keeps the Lanczos argument in its accurate range and
    // extends the function to negative non-integer arguments.
    return M_PI / (std::sin(M_PI * z) * gamma_fn(1.0 - z));
  }
  const double t = z - 1.0 + kLanczosG + 0.5;
  return kSqrtTwoPi * std::exp((z - 0.5) * std::log(t) - t) * lanczos_sum(z);
}

double lgamma_fn(double z) {
  require_positive(z, "lgamma_fn");
  if (z < 0.5) {
    return std::log(M_PI / std::sin(M_PI * z)) - lgamma_fn(1.0 - z);
  }
  const double t = z - 1.0 + kLanczosG + 0.5;
  return kLogSqrtTwoPi + (z - 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double digamma(double z) {
  require_positive(z, "digamma");
  // Shift into the asymptotic region with psi(z) = psi(z+1) - 1/z.
  double acc = 0.0;
  while (z < 10.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  // psi(z) ~ ln z - 1/(2z) - sum B_{2n} / (2n z^{2n})
  const double r = 1.0 / (z * z);
  const double series =
      r * (1.0 / 12.0 +
           r * (-1.0 / 120.0 +
                r * (1.0 / 252.0 +
                     r * (-1.0 / 240.0 +
                          r * (1.0 / 132.0 +
                               r * (-691.0 / 32760.0 + r * (1.0 / 12.0)))))));
  return acc + std::log(z) - 0.5 / z - series;
}

double trigamma(double z) {
  require_positive(z, "trigamma");
  // psi_1(z) = psi_1(z+1) + 1/z^2
  double acc = 0.0;
  while (z < 10.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  // psi_1(z) ~ 1/z + 1/(2z^2) + sum B_{2n} / z^{2n+1}
  const double r = 1.0 / (z * z);
  const double tail =
      r * (1.0 / 6.0 +
           r * (-1.0 / 30.0 +
                r * (1.0 / 42.0 +
                     r * (-1.0 / 30.0 +
                          r * (5.0 / 66.0 +
                               r * (-691.0 / 2730.0 + r * (7.0 / 6.0)))))));
  return acc + 1.0 / z + 0.5 * r + tail / z;
}

double gamma_deriv(int n, double z) {
  require_positive(z, "gamma_deriv");
  switch (n) {
    case 0:
      return gamma_fn(z);
    case 1:
      return gamma_fn(z) * digamma(z);
    case 2: {
      const double psi = digamma(z);
      return gamma_fn(z) * (psi * psi + trigamma(z));
    }
    default:
      throw std::invalid_argument(
          "gamma_deriv: derivative order must be 0, 1 or 2");
  }
}

}  // namespace evt
