#include "evtortho/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

#include "evtortho/linalg.hpp"
#include "evtortho/rng.hpp"

namespace evt {

namespace {

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

std::vector<double> gumbel_score(const ClassicalParams& p, double x) {
  const double z = (x - p.mu) / p.sigma;
  const double w = 1.0 - std::exp(-z);
  return {w / p.sigma, (z * w - 1.0) / p.sigma};
}

std::vector<double> gev2_score(const ClassicalParams& p, double x) {
  const double t = p.xi * x / p.sigma;
  if (!(t > 0.0)) {
    throw std::domain_error("score: x outside the gev2 support");
  }
  const double log_t = std::log(t);
  const double w = 1.0 - std::exp(-log_t / p.xi);  // 1 - t^(-1/xi)
  const double s_sigma = w / (p.xi * p.sigma);
  const double s_xi = (log_t - 1.0) * w / (p.xi * p.xi) - 1.0 / p.xi;
  return {s_sigma, s_xi};
}

// Central finite differences with one Richardson step:
// (4*D_{h/2} - D_h)/3. The step starts at fd_step * max(1, |theta_i|) and
// shrinks when (a) the stencil leaves the parameter domain or the support, or
// (b) the D_h vs D_{h/2} discrepancy shows the truncation error still
// dominates — near a support boundary the higher log-density derivatives grow
// like (distance to boundary)^{-k} and the starting step is far too coarse.
// The extrapolation with the smallest discrepancy wins, which also stops the
// shrinking once cancellation noise takes over.
std::vector<double> fd_score(const ClassicalParams& p, double x,
                             double fd_step) {
  if (log_density(p, x) <= kLogZero) {
    throw std::domain_error("score: x outside the support");
  }
  const std::vector<double> coords = p.as_vector();
  const std::size_t k = coords.size();
  std::vector<double> s(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double scale = std::max(1.0, std::abs(coords[i]));
    double h = fd_step * scale;
    double best = 0.0;
    double best_disc = std::numeric_limits<double>::infinity();
    bool have_any = false;
    int refinements = 0;
    for (;;) {
      const double offsets[4] = {h, -h, 0.5 * h, -0.5 * h};
      double lf[4];
      bool ok = true;
      for (int t = 0; t < 4 && ok; ++t) {
        std::vector<double> c = coords;
        c[i] += offsets[t];
        try {
          lf[t] = log_density(ClassicalParams::from_vector(p.family, c), x);
        } catch (const std::invalid_argument&) {
          ok = false;
          break;
        }
        if (lf[t] <= kLogZero) ok = false;
      }
      if (!ok) {
        h *= 0.1;
        if (h < 1e-13 * scale) {
          if (have_any) break;
          throw std::runtime_error(
              "score: finite-difference step underflow near a support "
              "boundary");
        }
        continue;
      }
      const double d_h = (lf[0] - lf[1]) / (2.0 * h);
      const double d_half = (lf[2] - lf[3]) / h;
      const double extrap = (4.0 * d_half - d_h) / 3.0;
      const double disc = std::abs(d_half - d_h);
      if (disc < best_disc) {
        best_disc = disc;
        best = extrap;
        have_any = true;
      } else {
        break;  // no longer improving: cancellation noise dominates
      }
      if (disc <= 1e-7 * (std::abs(extrap) + 1e-8)) break;
      if (++refinements >= 8) break;
      h *= 0.2;
      if (h < 1e-13 * scale) break;
    }
    s[i] = best;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7-15 panel rule (nodes/weights as tabulated in QUADPACK)
// ---------------------------------------------------------------------------

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelResult {
  double integral;
  double error;
};

template <typename F>
PanelResult gauss_kronrod_15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = hw * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  kronrod *= hw;
  gauss *= hw;
  return {kronrod, std::abs(kronrod - gauss)};
}

struct Panel {
  double a;
  double b;
  double integral;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
double adaptive_quadrature(const F& f, double rel_tol) {
  std::priority_queue<Panel> heap;
  PanelResult first = gauss_kronrod_15(f, 0.0, 1.0);
  heap.push({0.0, 1.0, first.integral, first.error});
  double total = first.integral;
  double total_err = first.error;
  int splits = 0;
  while (total_err > rel_tol * std::abs(total) + 1e-12) {
    if (++splits > 4000) {
      throw std::runtime_error(
          "fisher_quad: adaptive quadrature did not reach the requested "
          "tolerance");
    }
    const Panel worst = heap.top();
    heap.pop();
    total -= worst.integral;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    for (const auto& [lo, hi] :
         {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      PanelResult r = gauss_kronrod_15(f, lo, hi);
      heap.push({lo, hi, r.integral, r.error});
      total += r.integral;
      total_err += r.error;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Monte-Carlo blocks
// ---------------------------------------------------------------------------

// Fixed block size so the estimate depends only on (seed, sample count),
// never on the worker count: block b always covers draws
// [b*kMcBlock, ...) from sub-stream (seed, b) and blocks are reduced in
// index order.
constexpr std::size_t kMcBlock = 65536;

struct BlockAccum {
  std::array<double, 9> sum{};
  std::array<double, 9> sum_sq{};
};

// The expected information exists only for xi > -1/2 (otherwise the score
// second moments diverge near the finite support endpoint); refuse to
// estimate a divergent integral.
void require_information_exists(const ClassicalParams& params) {
  if (params.family != Family::gumbel && params.xi <= -0.5) {
    throw std::domain_error(
        "information oracle: score second moments diverge for xi <= -0.5");
  }
}

}  // namespace

void OracleConfig::validate() const {
  if (mc_samples < 10000) {
    throw std::invalid_argument("OracleConfig: mc_samples must be >= 10^4");
  }
  if (!(fd_step > 1e-9 && fd_step < 1e-2)) {
    throw std::invalid_argument(
        "OracleConfig: fd_step must lie in (1e-9, 1e-2)");
  }
  if (!(quadrature_rel_tol > 0.0)) {
    throw std::invalid_argument(
        "OracleConfig: quadrature_rel_tol must be > 0");
  }
}

std::vector<double> score(const ClassicalParams& params, double x,
                          double fd_step) {
  switch (params.family) {
    case Family::gumbel:
      return gumbel_score(params, x);
    case Family::gev2:
      return gev2_score(params, x);
    default:
      return fd_score(params, x, fd_step);
  }
}

FisherEstimate fisher_mc(const ClassicalParams& params,
                         const OracleConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  require_information_exists(params);
  const std::size_t k = n_params(params.family);
  const std::size_t total = cfg.mc_samples;
  const std::size_t n_blocks = (total + kMcBlock - 1) / kMcBlock;

  std::vector<BlockAccum> blocks(n_blocks);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::size_t begin = b * kMcBlock;
      const std::size_t end = std::min(total, begin + kMcBlock);
      Rng rng = Rng::substream(seed, b);
      BlockAccum acc;
      for (std::size_t s = begin; s < end; ++s) {
        const double x = quantile(params, rng.uniform01());
        const std::vector<double> sc = score(params, x, cfg.fd_step);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = i; j < k; ++j) {
            const double prod = sc[i] * sc[j];
            acc.sum[i * 3 + j] += prod;
            acc.sum_sq[i * 3 + j] += prod * prod;
          }
        }
      }
      blocks[b] = acc;
    }
  };

  unsigned n_workers = cfg.workers != 0 ? cfg.workers
                                        : std::thread::hardware_concurrency();
  if (n_workers == 0) n_workers = 1;
  n_workers = static_cast<unsigned>(
      std::min<std::size_t>(n_workers, n_blocks));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Ordered reduction: identical result whatever the thread schedule was.
  BlockAccum totals;
  for (const BlockAccum& b : blocks) {
    for (std::size_t e = 0; e < 9; ++e) {
      totals.sum[e] += b.sum[e];
      totals.sum_sq[e] += b.sum_sq[e];
    }
  }

  FisherEstimate est;
  est.value.labels = param_names(params.family);
  est.value.m = SquareMatrix(k);
  est.std_error = SquareMatrix(k);
  est.samples = total;
  const double n = static_cast<double>(total);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double mean = totals.sum[i * 3 + j] / n;
      const double var =
          std::max(0.0, totals.sum_sq[i * 3 + j] / n - mean * mean);
      est.value.m(i, j) = est.value.m(j, i) = mean;
      const double se = std::sqrt(var / n);
      est.std_error(i, j) = est.std_error(j, i) = se;
    }
  }
  return est;
}

FisherMatrix fisher_quad(const ClassicalParams& params,
                         const OracleConfig& cfg) {
  cfg.validate();
  require_information_exists(params);
  const std::size_t k = n_params(params.family);
  FisherMatrix out{param_names(params.family), SquareMatrix(k)};

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      // E[s_i s_j] = \int_0^1 s_i(Q(u)) s_j(Q(u)) du after the probability
      // integral transform (the density cancels). A quintic smoothstep
      // u = v^3 (10 - 15 v + 6 v^2) then flattens the integrand at both
      // endpoints, where the scores of bounded-support members blow up at
      // an integrable rate. The smoothstep is symmetric: 1 - u(v) equals the
      // same polynomial in 1 - v, so the upper tail is evaluated through the
      // complement to keep resolution down to tail mass ~1e-300 (1 - u
      // saturates at ~1e-16 in direct arithmetic, which would truncate the
      // slowly-decaying endpoint integrand and bias bounded-support entries
      // at the 1e-6 level).
      auto integrand = [&](double v) -> double {
        const double w = 1.0 - v;
        const double du = 30.0 * v * v * w * w;
        if (du == 0.0) return 0.0;
        double x;
        if (v < 0.5) {
          const double u = v * v * v * (10.0 + v * (-15.0 + 6.0 * v));
          if (!(u > 0.0)) return 0.0;
          x = quantile(params, u);
        } else {
          const double q = w * w * w * (10.0 + w * (-15.0 + 6.0 * w));
          if (!(q > 0.0)) return 0.0;
          x = quantile_complement(params, q);
        }
        std::vector<double> sc;
        try {
          sc = score(params, x, cfg.fd_step);
        } catch (const std::runtime_error&) {
          // Unreachable finite-difference stencil this close to a support
          // endpoint; the smoothstep weight there vanishes like (1-v)^2.
          return 0.0;
        }
        return sc[i] * sc[j] * du;
      };
      const double value = adaptive_quadrature(integrand, cfg.quadrature_rel_tol);
      out.m(i, j) = out.m(j, i) = value;
    }
  }
  return out;
}

ImpliedChartDerivatives implied_chart_derivatives(
    const ClassicalParams& params) {
  if (params.family != Family::gev3 && params.family != Family::gp3) {
    throw std::invalid_argument(
        "implied_chart_derivatives: needs a three-parameter family (gev3 or "
        "gp3)");
  }
  const FisherMatrix info = fisher_matrix(params);
  // Orthogonality of xi against transformed (mu~, sigma~) requires
  //   [ i_mm  i_ms ] [ d mu~/d xi    ]   [ -i_mx ]
  //   [ i_ms  i_ss ] [ d sigma~/d xi ] = [ -i_sx ]
  SquareMatrix block(2);
  block(0, 0) = info.m(0, 0);
  block(0, 1) = block(1, 0) = info.m(0, 1);
  block(1, 1) = info.m(1, 1);
  const SquareMatrix inv = inverse(block);
  const double r0 = -info.m(0, 2);
  const double r1 = -info.m(1, 2);
  return {inv(0, 0) * r0 + inv(0, 1) * r1, inv(1, 0) * r0 + inv(1, 1) * r1};
}

std::vector<PdeScanPoint> gev3_pde_residual_scan(
    const std::vector<std::array<double, 3>>& grid) {
  std::vector<PdeScanPoint> out;
  out.reserve(grid.size());
  for (const auto& [mu, sigma, xi] : grid) {
    const ImpliedChartDerivatives d =
        implied_chart_derivatives(ClassicalParams::gev3(mu, sigma, xi));
    out.push_back({mu, sigma, xi, d.dmu_dxi, d.dsigma_dxi});
  }
  return out;
}

}  // namespace evt
