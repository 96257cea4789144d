#include "evtortho/mle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "evtortho/rng.hpp"
#include "evtortho/specfun.hpp"

namespace evt {

namespace {

constexpr double kPenalty = 1e300;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Data summaries used by the moment-based starting points
// ---------------------------------------------------------------------------

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double acc = 0.0;
  for (const double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double sample_median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (hi + v[mid - 1]);
  }
  return hi;
}

// Sign branch for the gev2 family: +1 for all-positive data, -1 for
// all-negative; anything else admits no finite likelihood.
int gev2_sign_branch(const std::vector<double>& data) {
  bool any_pos = false, any_nonpos = false;
  for (const double x : data) (x > 0.0 ? any_pos : any_nonpos) = true;
  if (any_pos && !any_nonpos) return +1;
  if (!any_pos && any_nonpos) {
    for (const double x : data) {
      if (x == 0.0) {
        throw std::invalid_argument(
            "fit: gev2 data must be strictly one-signed (found 0)");
      }
    }
    return -1;
  }
  throw std::invalid_argument(
      "fit: gev2 data must be strictly positive or strictly negative");
}

void require_fit_data(Family family, const std::vector<double>& data) {
  if (data.size() < 5) {
    throw std::invalid_argument("fit: need at least 5 observations");
  }
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (!(*lo < *hi)) {
    throw std::invalid_argument(
        "fit: degenerate data (all observations equal)");
  }
  switch (family) {
    case Family::gev2:
      (void)gev2_sign_branch(data);
      break;
    case Family::gp2:
      if (!(*lo > 0.0)) {
        throw std::invalid_argument(
            "fit: gp2 data must be strictly positive");
      }
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// Coordinate transforms to an unconstrained search space
// ---------------------------------------------------------------------------

// Scale-type coordinates run through log so the simplex can never propose
// sigma <= 0; shape coordinates stay raw. Two deliberate exceptions:
// the gev2 branch uses sign * exp so xi and rho keep the data-determined
// sign, and the gumbel_scale nuisance rho stays raw because rho = sigma -
// slope*mu is legitimately negative whenever mu is large (infeasible
// proposals are rejected through the likelihood sentinel instead).
struct SearchSpace {
  std::vector<std::string> labels;
  std::function<std::vector<double>(const std::vector<double>&)> to_natural;
  std::function<std::vector<double>(const std::vector<double>&)>
      to_unconstrained;
  std::function<double(const std::vector<double>&)> negloglik;  // natural
};

SearchSpace make_classical_space(Family family,
                                 const std::vector<double>& data) {
  SearchSpace s;
  s.labels = param_names(family);
  switch (family) {
    case Family::gumbel:
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{u[0], std::exp(u[1])};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{c[0], std::log(c[1])};
      };
      break;
    case Family::gev3:
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{u[0], std::exp(u[1]), u[2]};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{c[0], std::log(c[1]), c[2]};
      };
      break;
    case Family::gev2: {
      const double sign = gev2_sign_branch(data);
      s.to_natural = [sign](const std::vector<double>& u) {
        return std::vector<double>{std::exp(u[0]), sign * std::exp(u[1])};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{std::log(c[0]),
                                   std::log(std::abs(c[1]))};
      };
      break;
    }
    case Family::gp2:
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{std::exp(u[0]), u[1]};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{std::log(c[0]), c[1]};
      };
      break;
    case Family::gp3:
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{u[0], std::exp(u[1]), u[2]};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{c[0], std::log(c[1]), c[2]};
      };
      break;
  }
  s.negloglik = [family, &data](const std::vector<double>& coords) {
    try {
      const double ll =
          log_likelihood(ClassicalParams::from_vector(family, coords), data);
      return ll <= kLogZero ? kPenalty : -ll;
    } catch (const std::invalid_argument&) {
      return kPenalty;
    } catch (const std::domain_error&) {
      return kPenalty;
    }
  };
  return s;
}

SearchSpace make_ortho_space(Chart chart, const std::vector<double>& data) {
  SearchSpace s;
  s.labels = chart_param_names(chart);
  switch (chart) {
    case Chart::gumbel_loc:  // (nu, sigma)
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{u[0], std::exp(u[1])};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{c[0], std::log(c[1])};
      };
      break;
    case Chart::gumbel_scale:  // (mu, rho), rho unconstrained (see above)
      s.to_natural = [](const std::vector<double>& u) { return u; };
      s.to_unconstrained = [](const std::vector<double>& c) { return c; };
      break;
    case Chart::gev2_scale: {  // (rho, xi), both carry the branch sign
      const double sign = gev2_sign_branch(data);
      s.to_natural = [sign](const std::vector<double>& u) {
        return std::vector<double>{sign * std::exp(u[0]),
                                   sign * std::exp(u[1])};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{std::log(std::abs(c[0])),
                                   std::log(std::abs(c[1]))};
      };
      break;
    }
    case Chart::gp_scale:  // (nu, xi)
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{std::exp(u[0]), u[1]};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{std::log(c[0]), c[1]};
      };
      break;
    case Chart::gp_shape:  // (sigma, zeta)
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{std::exp(u[0]), u[1]};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{std::log(c[0]), c[1]};
      };
      break;
    case Chart::gp3_scale:  // (mu, nu, xi)
      s.to_natural = [](const std::vector<double>& u) {
        return std::vector<double>{u[0], std::exp(u[1]), u[2]};
      };
      s.to_unconstrained = [](const std::vector<double>& c) {
        return std::vector<double>{c[0], std::log(c[1]), c[2]};
      };
      break;
  }
  s.negloglik = [chart, &data](const std::vector<double>& coords) {
    try {
      const double ll = ortho_log_likelihood(
          OrthoParams::from_vector(chart, coords), data);
      return ll <= kLogZero ? kPenalty : -ll;
    } catch (const std::invalid_argument&) {
      return kPenalty;
    } catch (const std::domain_error&) {
      return kPenalty;
    }
  };
  return s;
}

// ---------------------------------------------------------------------------
// Moment-based starting points (classical coordinates)
// ---------------------------------------------------------------------------

std::vector<double> initial_classical(Family family,
                                      const std::vector<double>& data) {
  const double mean = sample_mean(data);
  const double sd = sample_sd(data);
  switch (family) {
    case Family::gumbel: {
      const double sigma0 = sd * std::sqrt(6.0) / M_PI;
      return {mean - constants::euler_gamma * sigma0, sigma0};
    }
    case Family::gev3: {
      const double sigma0 = sd * std::sqrt(6.0) / M_PI;
      return {mean - constants::euler_gamma * sigma0, sigma0, 0.1};
    }
    case Family::gev2: {
      // Match the sample median: q(1/2) = (sigma/xi) * (log 2)^(-xi).
      const double med = sample_median(data);
      const double xi0 = med > 0.0 ? 0.2 : -0.2;
      const double sigma0 =
          xi0 * med * std::exp(xi0 * std::log(std::log(2.0)));
      return {sigma0, xi0};
    }
    case Family::gp2: {
      const double xi0 = 0.1;
      return {mean * (1.0 + xi0), xi0};
    }
    case Family::gp3: {
      const double lo = *std::min_element(data.begin(), data.end());
      const double mu0 = lo - 0.1 * sd;
      const double xi0 = 0.1;
      return {mu0, (mean - mu0) * (1.0 + xi0), xi0};
    }
  }
  throw std::invalid_argument("unknown family enumerator");
}

// ---------------------------------------------------------------------------
// Nelder-Mead simplex (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2) over the unconstrained coordinates
// ---------------------------------------------------------------------------

struct SimplexOutcome {
  std::vector<double> u;
  double f = kPenalty;
  bool converged = false;
  int iterations = 0;
};

SimplexOutcome nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& u0, int max_iterations, double tol) {
  const std::size_t k = u0.size();
  std::vector<std::vector<double>> x(k + 1, u0);
  std::vector<double> fx(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    x[i + 1][i] += 0.2 * (1.0 + std::abs(u0[i]));
  }
  for (std::size_t i = 0; i <= k; ++i) fx[i] = f(x[i]);

  auto order = [&]() {
    std::vector<std::size_t> idx(k + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> xs(k + 1);
    std::vector<double> fs(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
      xs[i] = x[idx[i]];
      fs[i] = fx[idx[i]];
    }
    x = std::move(xs);
    fx = std::move(fs);
  };

  SimplexOutcome out;
  int it = 0;
  for (; it < max_iterations; ++it) {
    order();
    double spread_f = fx[k] - fx[0];
    double spread_x = 0.0;
    double scale_x = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      scale_x = std::max(scale_x, std::abs(x[0][i]));
      for (std::size_t v = 1; v <= k; ++v) {
        spread_x = std::max(spread_x, std::abs(x[v][i] - x[0][i]));
      }
    }
    if (spread_f <= tol * (1.0 + std::abs(fx[0])) &&
        spread_x <= tol * (1.0 + scale_x)) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(k, 0.0);
    for (std::size_t v = 0; v < k; ++v) {
      for (std::size_t i = 0; i < k; ++i) centroid[i] += x[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(k);

    auto blend = [&](double t) {
      std::vector<double> p(k);
      for (std::size_t i = 0; i < k; ++i) {
        p[i] = centroid[i] + t * (x[k][i] - centroid[i]);
      }
      return p;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fx[0]) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        x[k] = xe;
        fx[k] = fe;
      } else {
        x[k] = xr;
        fx[k] = fr;
      }
    } else if (fr < fx[k - 1]) {
      x[k] = xr;
      fx[k] = fr;
    } else {
      bool contracted = false;
      if (fr < fx[k]) {
        const std::vector<double> xc = blend(-0.5);  // outside contraction
        const double fc = f(xc);
        if (fc <= fr) {
          x[k] = xc;
          fx[k] = fc;
          contracted = true;
        }
      } else {
        const std::vector<double> xc = blend(0.5);  // inside contraction
        const double fc = f(xc);
        if (fc < fx[k]) {
          x[k] = xc;
          fx[k] = fc;
          contracted = true;
        }
      }
      if (!contracted) {
        // Shrink the whole simplex toward the best vertex.
        for (std::size_t v = 1; v <= k; ++v) {
          for (std::size_t i = 0; i < k; ++i) {
            x[v][i] = x[0][i] + 0.5 * (x[v][i] - x[0][i]);
          }
          fx[v] = f(x[v]);
        }
      }
    }
  }
  order();
  out.u = x[0];
  out.f = fx[0];
  out.iterations = it;
  return out;
}

// ---------------------------------------------------------------------------
// Observed information (finite-difference Hessian with boundary fallback)
// ---------------------------------------------------------------------------

using NaturalLogLik = std::function<double(const std::vector<double>&)>;

// First-derivative stencil along one coordinate: offsets are in units of h,
// weights already include the direction sign; value = sum w_k f(x + o_k h)/h.
struct DiffOp {
  std::vector<std::pair<int, double>> taps;
};

DiffOp central_op() { return {{{-1, -0.5}, {1, 0.5}}}; }

DiffOp one_sided_op(int d) {
  const double s = static_cast<double>(d);
  return {{{0, -1.5 * s}, {d, 2.0 * s}, {2 * d, -0.5 * s}}};
}

SquareMatrix fd_hessian(const NaturalLogLik& ll, const std::vector<double>& at,
                        double rel_step) {
  const std::size_t k = at.size();
  std::vector<double> h(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(at[i]) < 1e-8) {
      throw std::runtime_error(
          "observed_information: coordinate magnitude below 1e-8 makes the "
          "relative step ill-defined");
    }
    h[i] = rel_step * std::abs(at[i]);
  }

  auto feasible = [&](std::vector<double> c) { return ll(c) > kLogZero; };

  for (int attempt = 0;; ++attempt) {
    // Pick a direction per coordinate: central if both neighbours are
    // feasible, otherwise one-sided away from the boundary.
    std::vector<int> dir(k, 0);
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      std::vector<double> c = at;
      c[i] = at[i] + h[i];
      const bool plus = feasible(c);
      c[i] = at[i] - h[i];
      const bool minus = feasible(c);
      if (plus && minus) {
        dir[i] = 0;
      } else if (plus) {
        dir[i] = 1;
      } else if (minus) {
        dir[i] = -1;
      } else {
        ok = false;
      }
    }
    // One-sided stencils reach out to 3h; make sure that end is feasible too.
    for (std::size_t i = 0; i < k && ok; ++i) {
      if (dir[i] == 0) continue;
      std::vector<double> c = at;
      c[i] = at[i] + 3.0 * dir[i] * h[i];
      ok = feasible(c);
    }

    SquareMatrix hess(k);
    if (ok) {
      const double f0 = ll(at);
      for (std::size_t i = 0; i < k && ok; ++i) {
        double v;
        if (dir[i] == 0) {
          std::vector<double> c = at;
          c[i] = at[i] + h[i];
          const double fp = ll(c);
          c[i] = at[i] - h[i];
          const double fm = ll(c);
          ok = fp > kLogZero && fm > kLogZero;
          v = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        } else {
          double fv[4];
          ok = true;
          for (int t = 0; t < 4 && ok; ++t) {
            std::vector<double> c = at;
            c[i] = at[i] + t * dir[i] * h[i];
            fv[t] = ll(c);
            ok = fv[t] > kLogZero;
          }
          v = (2.0 * fv[0] - 5.0 * fv[1] + 4.0 * fv[2] - fv[3]) /
              (h[i] * h[i]);
        }
        if (ok) hess(i, i) = v;
      }
      for (std::size_t i = 0; i < k && ok; ++i) {
        for (std::size_t j = i + 1; j < k && ok; ++j) {
          const DiffOp oi = dir[i] == 0 ? central_op() : one_sided_op(dir[i]);
          const DiffOp oj = dir[j] == 0 ? central_op() : one_sided_op(dir[j]);
          double acc = 0.0;
          for (const auto& [a, ca] : oi.taps) {
            for (const auto& [b, cb] : oj.taps) {
              std::vector<double> c = at;
              c[i] = at[i] + a * h[i];
              c[j] = at[j] + b * h[j];
              const double fv = ll(c);
              if (fv <= kLogZero) {
                ok = false;
                break;
              }
              acc += ca * cb * fv;
            }
            if (!ok) break;
          }
          if (ok) {
            hess(i, j) = hess(j, i) = acc / (h[i] * h[j]);
          }
        }
      }
    }
    if (ok) {
      hess.symmetrize();
      // Observed information is the negative Hessian.
      SquareMatrix info(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) info(i, j) = -hess(i, j);
      return info;
    }
    if (attempt >= 6) {
      throw std::runtime_error(
          "observed_information: could not place a feasible stencil around "
          "the evaluation point");
    }
    for (double& step : h) step *= 0.2;
  }
}

// ---------------------------------------------------------------------------
// Uncertainty extraction shared by both fit entry points
// ---------------------------------------------------------------------------

// Returns false when the full observed information is not invertible with
// positive variances. For 3-parameter fits the (coordinate 2, coordinate 3)
// sub-block is tried as a fallback (the free-threshold GP likelihood peaks
// on the mu = min(data) boundary where the mu-row of the Hessian is not a
// curvature of an interior optimum).
bool attach_uncertainty(FitResult& r) {
  const std::size_t k = r.estimate.size();
  r.std_errors.assign(k, kNaN);
  r.correlation = SquareMatrix(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) r.correlation(i, j) = kNaN;
  r.cross_correlation = kNaN;

  try {
    const SquareMatrix cov = inverse(r.observed_info.m);
    bool pos = true;
    for (std::size_t i = 0; i < k; ++i) pos = pos && cov(i, i) > 0.0;
    if (pos) {
      for (std::size_t i = 0; i < k; ++i) {
        r.std_errors[i] = std::sqrt(cov(i, i));
      }
      r.correlation = correlation_from_covariance(cov);
      r.cross_correlation =
          k == 2 ? r.correlation(0, 1) : r.correlation(1, 2);
      return true;
    }
  } catch (const std::runtime_error&) {
  }

  if (k == 3) {
    SquareMatrix block(2);
    block(0, 0) = r.observed_info.m(1, 1);
    block(0, 1) = block(1, 0) = r.observed_info.m(1, 2);
    block(1, 1) = r.observed_info.m(2, 2);
    try {
      const SquareMatrix cov = inverse(block);
      if (cov(0, 0) > 0.0 && cov(1, 1) > 0.0) {
        r.std_errors[1] = std::sqrt(cov(0, 0));
        r.std_errors[2] = std::sqrt(cov(1, 1));
        const double cc = cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1));
        r.correlation(1, 1) = r.correlation(2, 2) = 1.0;
        r.correlation(1, 2) = r.correlation(2, 1) = cc;
        r.cross_correlation = cc;
        return true;
      }
    } catch (const std::runtime_error&) {
    }
  }
  return false;
}

FitResult fit_impl(const SearchSpace& space,
                   const std::vector<double>& init_natural,
                   const FitConfig& cfg) {
  auto objective = [&](const std::vector<double>& u) {
    return space.negloglik(space.to_natural(u));
  };
  const std::vector<double> u0 = space.to_unconstrained(init_natural);

  SimplexOutcome best;
  bool have = false;
  for (int start = 0; start < cfg.restarts; ++start) {
    std::vector<double> u = u0;
    if (start > 0) {
      // Deterministic jitter: same sequence for every caller with the same
      // config, so fits are reproducible.
      Rng rng = Rng::substream(0x5eedba5eu, static_cast<std::uint64_t>(start));
      for (double& c : u) {
        c += (rng.uniform01() - 0.5) * 0.5 * (1.0 + std::abs(c));
      }
    }
    SimplexOutcome o =
        nelder_mead(objective, u, cfg.max_iterations, cfg.convergence_tol);
    if (!have || o.f < best.f ||
        (o.f == best.f && o.converged && !best.converged)) {
      best = std::move(o);
      have = true;
    }
  }

  FitResult r;
  r.labels = space.labels;
  r.estimate = space.to_natural(best.u);
  r.loglik = -best.f;
  r.converged = best.converged && best.f < kPenalty;
  r.iterations = best.iterations;
  return r;
}

NaturalLogLik natural_loglik(Family family, const std::vector<double>& data) {
  return [family, &data](const std::vector<double>& coords) {
    try {
      return log_likelihood(ClassicalParams::from_vector(family, coords),
                            data);
    } catch (const std::invalid_argument&) {
      return kLogZero;
    } catch (const std::domain_error&) {
      return kLogZero;
    }
  };
}

NaturalLogLik natural_loglik(Chart chart, const std::vector<double>& data) {
  return [chart, &data](const std::vector<double>& coords) {
    try {
      return ortho_log_likelihood(OrthoParams::from_vector(chart, coords),
                                  data);
    } catch (const std::invalid_argument&) {
      return kLogZero;
    } catch (const std::domain_error&) {
      return kLogZero;
    }
  };
}

}  // namespace

void FitConfig::validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("FitConfig: max_iterations must be >= 1");
  }
  if (!(convergence_tol > 0.0)) {
    throw std::invalid_argument("FitConfig: convergence_tol must be > 0");
  }
  if (restarts < 1) {
    throw std::invalid_argument("FitConfig: restarts must be >= 1");
  }
  if (!(hessian_rel_step > 0.0)) {
    throw std::invalid_argument("FitConfig: hessian_rel_step must be > 0");
  }
}

FitResult fit_classical(Family family, const std::vector<double>& data,
                        const FitConfig& cfg) {
  cfg.validate();
  require_fit_data(family, data);
  FitResult r;
  if (family == Family::gp3) {
    // The log-likelihood is strictly increasing in the threshold over the
    // feasible set (its mu-derivative is sum (1+xi)/(sigma+xi(x_i-mu)) > 0
    // whenever xi > -1), so the maximiser pins mu at min(x) and the
    // remaining (sigma, xi) problem is a regular two-dimensional search.
    const double mu_hat = *std::min_element(data.begin(), data.end());
    SearchSpace s;
    s.labels = {"sigma", "xi"};
    s.to_natural = [](const std::vector<double>& u) {
      return std::vector<double>{std::exp(u[0]), u[1]};
    };
    s.to_unconstrained = [](const std::vector<double>& c) {
      return std::vector<double>{std::log(c[0]), c[1]};
    };
    s.negloglik = [&data, mu_hat](const std::vector<double>& c) {
      try {
        const double ll =
            log_likelihood(ClassicalParams::gp3(mu_hat, c[0], c[1]), data);
        return ll <= kLogZero ? kPenalty : -ll;
      } catch (const std::invalid_argument&) {
        return kPenalty;
      } catch (const std::domain_error&) {
        return kPenalty;
      }
    };
    const double xi0 = 0.1;
    const double sigma0 = (sample_mean(data) - mu_hat) * (1.0 + xi0);
    r = fit_impl(s, {sigma0, xi0}, cfg);
    r.labels = param_names(family);
    r.estimate.insert(r.estimate.begin(), mu_hat);
  } else {
    const SearchSpace space = make_classical_space(family, data);
    r = fit_impl(space, initial_classical(family, data), cfg);
  }
  r.estimate_classical = ClassicalParams::from_vector(family, r.estimate);
  r.observed_info = observed_information(family, r.estimate_classical, data,
                                         cfg.hessian_rel_step);
  const bool ok = attach_uncertainty(r);
  if (!ok && r.estimate.size() == 2) r.converged = false;
  return r;
}

FitResult fit_ortho(Chart chart, const std::vector<double>& data,
                    const FitConfig& cfg) {
  cfg.validate();
  const Family family = chart_family(chart);
  require_fit_data(family, data);
  FitResult r;
  if (chart == Chart::gp3_scale) {
    // Same boundary structure as the classical free-threshold fit: the
    // chart keeps mu as a coordinate, so the maximiser pins mu at min(x)
    // and only (nu, xi) are searched.
    const double mu_hat = *std::min_element(data.begin(), data.end());
    SearchSpace s;
    s.labels = {"nu", "xi"};
    s.to_natural = [](const std::vector<double>& u) {
      return std::vector<double>{std::exp(u[0]), u[1]};
    };
    s.to_unconstrained = [](const std::vector<double>& c) {
      return std::vector<double>{std::log(c[0]), c[1]};
    };
    s.negloglik = [chart, &data, mu_hat](const std::vector<double>& c) {
      try {
        const double ll = ortho_log_likelihood(
            OrthoParams::from_vector(chart, {mu_hat, c[0], c[1]}), data);
        return ll <= kLogZero ? kPenalty : -ll;
      } catch (const std::invalid_argument&) {
        return kPenalty;
      } catch (const std::domain_error&) {
        return kPenalty;
      }
    };
    const double xi0 = 0.1;
    const double nu0 = (sample_mean(data) - mu_hat) * (1.0 + xi0) * (1.0 + xi0);
    r = fit_impl(s, {nu0, xi0}, cfg);
    r.labels = chart_param_names(chart);
    r.estimate.insert(r.estimate.begin(), mu_hat);
  } else {
    const SearchSpace space = make_ortho_space(chart, data);
    const OrthoParams init = from_classical(
        chart,
        ClassicalParams::from_vector(family, initial_classical(family, data)));
    r = fit_impl(space, init.as_vector(), cfg);
  }
  const OrthoParams at = OrthoParams::from_vector(chart, r.estimate);
  r.estimate_classical = to_classical(at);
  r.observed_info =
      observed_information(chart, at, data, cfg.hessian_rel_step);
  const bool ok = attach_uncertainty(r);
  if (!ok && r.estimate.size() == 2) r.converged = false;
  return r;
}

FisherMatrix observed_information(Family family, const ClassicalParams& at,
                                  const std::vector<double>& data,
                                  double rel_step) {
  if (at.family != family) {
    throw std::invalid_argument(
        "observed_information: parameter family mismatch");
  }
  const NaturalLogLik ll = natural_loglik(family, data);
  const std::vector<double> coords = at.as_vector();
  if (ll(coords) <= kLogZero) {
    throw std::invalid_argument(
        "observed_information: some observation has zero density at the "
        "evaluation point");
  }
  return {param_names(family), fd_hessian(ll, coords, rel_step)};
}

FisherMatrix observed_information(Chart chart, const OrthoParams& at,
                                  const std::vector<double>& data,
                                  double rel_step) {
  if (at.chart != chart) {
    throw std::invalid_argument("observed_information: chart mismatch");
  }
  const NaturalLogLik ll = natural_loglik(chart, data);
  const std::vector<double> coords = at.as_vector();
  if (ll(coords) <= kLogZero) {
    throw std::invalid_argument(
        "observed_information: some observation has zero density at the "
        "evaluation point");
  }
  return {chart_param_names(chart), fd_hessian(ll, coords, rel_step)};
}

SquareMatrix estimate_correlation(const FisherMatrix& info) {
  return correlation_from_covariance(inverse(info.m));
}

double estimate_correlation_offdiag(const FisherMatrix& info) {
  if (info.m.dim() != 2) {
    throw std::invalid_argument(
        "estimate_correlation_offdiag: needs a 2x2 information matrix");
  }
  return estimate_correlation(info)(0, 1);
}

}  // namespace evt
