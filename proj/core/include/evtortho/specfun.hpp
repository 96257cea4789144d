#pragma once

namespace evt {

/// Mathematical constants used throughout the extreme-value formulas.
namespace constants {

// Euler-Mascheroni constant, correctly rounded to double.
inline constexpr double euler_gamma = 0.5772156649015328606;

// pi^2/6 == trigamma(1).
inline constexpr double pi_sq_over_6 = 1.6449340668482264365;

}  // namespace constants

/// Gamma function. Lanczos rational approximation with the reflection
/// formula for z < 0.5; relative error below 1e-12 on [0.05, 50] and at
/// negative non-integers. Throws std::domain_error at the poles (z a
/// non-positive integer).
double gamma_fn(double z);

/// log Gamma(z) for z > 0.
double lgamma_fn(double z);

/// Digamma psi(z) = Gamma'(z)/Gamma(z) for z > 0. Recurrence shift to the
/// asymptotic region, then the Bernoulli-number expansion; absolute error
/// below 1e-12 on [0.05, 50].
double digamma(double z);

/// Trigamma psi_1(z) = psi'(z) for z > 0. Same scheme as digamma.
double trigamma(double z);

/// n-th derivative of Gamma at z > 0 for n in {0, 1, 2}:
///   Gamma'(z)  = Gamma(z) psi(z)
///   Gamma''(z) = Gamma(z) (psi(z)^2 + psi_1(z))
double gamma_deriv(int n, double z);

}  // namespace evt
