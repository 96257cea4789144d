#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "evtortho/rng.hpp"

namespace evt {

/// Distribution families handled by the library.
///
///  - gev3:   generalised extreme value GEV(mu, sigma, xi)
///  - gumbel: Gumbel(mu, sigma), the xi -> 0 member of the GEV family
///  - gev2:   two-parameter GEV(sigma, xi) with the support bound fixed at 0,
///            which forces mu = sigma/xi (support x > 0 for xi > 0, x < 0 for
///            xi < 0)
///  - gp2:    generalised Pareto GP(sigma, xi) with threshold 0
///  - gp3:    generalised Pareto GP(mu, sigma, xi) with free threshold mu
enum class Family { gev3, gumbel, gev2, gp2, gp3 };

Family family_from_string(std::string_view name);
std::string to_string(Family family);

/// Number of free parameters in the family (2 or 3).
std::size_t n_params(Family family);

/// Canonical parameter labels, e.g. {"mu","sigma","xi"} for gev3.
std::vector<std::string> param_names(Family family);

/// Classical (natural) parameters of one family.
///
/// Unused fields are fixed: mu = sigma/xi for gev2 (implied, not stored),
/// mu = 0 for gp2, xi meaningless for gumbel. Use the named factories; they
/// validate the constraints (sigma > 0, gev2/gev3/gp xi domains).
struct ClassicalParams {
  Family family;
  double mu;
  double sigma;
  double xi;

  static ClassicalParams gev3(double mu, double sigma, double xi);
  static ClassicalParams gumbel(double mu, double sigma);
  static ClassicalParams gev2(double sigma, double xi);
  static ClassicalParams gp2(double sigma, double xi);
  static ClassicalParams gp3(double mu, double sigma, double xi);

  /// Free parameters in label order (e.g. {sigma, xi} for gev2).
  std::vector<double> as_vector() const;

  /// Rebuild from a label-ordered coordinate vector (validates like the
  /// factories).
  static ClassicalParams from_vector(Family family,
                                     const std::vector<double>& coords);
};

/// Open support interval of the density; infinities mark unbounded ends.
struct SupportSpec {
  double lower;
  double upper;
};

SupportSpec support(const ClassicalParams& params);

/// Finite stand-in for log(0) returned by log_density outside the support.
/// Kept finite (rather than -inf) so optimizers can rank and reject
/// out-of-support proposals without NaNs propagating through arithmetic.
inline constexpr double kLogZero = -1e308;

/// log f(x; params). Returns kLogZero outside the support. Stable as xi -> 0
/// (switches to the Gumbel/exponential limit form for |xi| < 1e-8).
double log_density(const ClassicalParams& params, double x);

/// Distribution function, clamped to [0,1].
double cdf(const ClassicalParams& params, double x);

/// Inverse distribution function (closed form); requires p in (0,1).
double quantile(const ClassicalParams& params, double p);

/// Upper-tail quantile: the point x with 1 - F(x) = q, computed without the
/// cancellation that quantile(params, 1 - q) suffers for q below ~1e-16.
/// Requires q in (0,1).
double quantile_complement(const ClassicalParams& params, double q);

/// n i.i.d. draws by inversion: quantile(params, U). Deterministic given the
/// stream state. Requires n >= 1.
std::vector<double> sample(const ClassicalParams& params, std::size_t n,
                           Rng& rng);

/// Sum of log_density over data, with an early return of kLogZero as soon as
/// any point falls outside the support.
double log_likelihood(const ClassicalParams& params,
                      const std::vector<double>& data);

}  // namespace evt
