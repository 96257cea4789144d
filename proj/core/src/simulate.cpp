#include "evtortho/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "evtortho/rng.hpp"

namespace evt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (hi + v[mid - 1]);
  }
  return hi;
}

ReplicationRecord record_from_fit(std::size_t id, const std::string& name,
                                  const FitResult& fit) {
  return {id, name, fit.labels, fit.estimate, fit.cross_correlation,
          fit.converged};
}

ReplicationRecord failed_record(std::size_t id, const std::string& name,
                                const std::vector<std::string>& labels) {
  return {id, name, labels, std::vector<double>(labels.size(), kNaN), kNaN,
          false};
}

ParametrisationSummary summarize(
    const std::vector<const ReplicationRecord*>& records, std::size_t d) {
  ParametrisationSummary s;
  std::vector<std::array<double, 2>> conv_pairs;
  std::vector<std::array<double, 2>> all_pairs;
  std::vector<double> abs_cc;
  for (const ReplicationRecord* r : records) {
    const bool finite_est = r->estimates.size() == 2 &&
                            std::isfinite(r->estimates[0]) &&
                            std::isfinite(r->estimates[1]);
    if (finite_est) all_pairs.push_back({r->estimates[0], r->estimates[1]});
    if (!r->converged) continue;
    ++s.n_converged;
    if (finite_est) conv_pairs.push_back({r->estimates[0], r->estimates[1]});
    if (std::isfinite(r->cross_correlation)) {
      abs_cc.push_back(std::abs(r->cross_correlation));
    }
  }
  s.convergence_rate =
      static_cast<double>(s.n_converged) / static_cast<double>(d);
  s.across_replication_correlation =
      conv_pairs.size() >= 2 ? across_replication_correlation(conv_pairs)
                             : kNaN;
  s.across_replication_correlation_all =
      all_pairs.size() >= 2 ? across_replication_correlation(all_pairs)
                            : kNaN;
  s.median_abs_cross_correlation = median_of(std::move(abs_cc));
  return s;
}

}  // namespace

void SimulationConfig::validate() const {
  switch (true_params.family) {
    case Family::gev2:
    case Family::gp2:
    case Family::gumbel:
      break;
    default:
      throw std::invalid_argument(
          "SimulationConfig: campaign family must be gev2, gp2 or gumbel");
  }
  if (d < 2) throw std::invalid_argument("SimulationConfig: d must be >= 2");
  if (n < 5) throw std::invalid_argument("SimulationConfig: n must be >= 5");
  for (const Chart chart : charts) {
    if (chart_family(chart) != true_params.family) {
      throw std::invalid_argument("SimulationConfig: chart " +
                                  to_string(chart) +
                                  " does not fit family " +
                                  to_string(true_params.family));
    }
  }
  fit.validate();
}

double across_replication_correlation(
    const std::vector<std::array<double, 2>>& estimates) {
  if (estimates.size() < 2) {
    throw std::invalid_argument(
        "across_replication_correlation: need at least 2 estimate pairs");
  }
  const double n = static_cast<double>(estimates.size());
  double m0 = 0.0, m1 = 0.0;
  for (const auto& e : estimates) {
    m0 += e[0];
    m1 += e[1];
  }
  m0 /= n;
  m1 /= n;
  double v0 = 0.0, v1 = 0.0, cv = 0.0;
  for (const auto& e : estimates) {
    v0 += (e[0] - m0) * (e[0] - m0);
    v1 += (e[1] - m1) * (e[1] - m1);
    cv += (e[0] - m0) * (e[1] - m1);
  }
  if (!(v0 > 0.0) || !(v1 > 0.0)) {
    throw std::invalid_argument(
        "across_replication_correlation: a coordinate has zero variance");
  }
  return cv / std::sqrt(v0 * v1);
}

SimulationOutput run_campaign(const SimulationConfig& cfg) {
  cfg.validate();
  const Family family = cfg.true_params.family;
  const std::size_t slots = 1 + cfg.charts.size();

  std::vector<std::vector<ReplicationRecord>> grid(cfg.d);
  std::atomic<std::size_t> next{0};

  auto job = [&](std::size_t r) {
    Rng rng = Rng::substream(cfg.seed, r);
    const std::vector<double> data = sample(cfg.true_params, cfg.n, rng);
    std::vector<ReplicationRecord> recs;
    recs.reserve(slots);
    try {
      recs.push_back(
          record_from_fit(r, "classical", fit_classical(family, data, cfg.fit)));
    } catch (const std::exception&) {
      recs.push_back(failed_record(r, "classical", param_names(family)));
    }
    for (const Chart chart : cfg.charts) {
      try {
        recs.push_back(record_from_fit(r, to_string(chart),
                                       fit_ortho(chart, data, cfg.fit)));
      } catch (const std::exception&) {
        recs.push_back(
            failed_record(r, to_string(chart), chart_param_names(chart)));
      }
    }
    grid[r] = std::move(recs);
  };

  auto worker = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= cfg.d) return;
      job(r);
    }
  };

  unsigned n_workers = cfg.workers != 0 ? cfg.workers
                                        : std::thread::hardware_concurrency();
  if (n_workers == 0) n_workers = 1;
  n_workers =
      static_cast<unsigned>(std::min<std::size_t>(n_workers, cfg.d));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SimulationOutput out;
  out.config = cfg;
  out.per_replication.reserve(cfg.d * slots);
  for (auto& recs : grid) {
    for (auto& rec : recs) out.per_replication.push_back(std::move(rec));
  }

  // Paired-design diagnostic: a chart fit and the classical fit of the same
  // replication must land on the same classical parameter point.
  for (std::size_t r = 0; r < cfg.d; ++r) {
    const ReplicationRecord& classical = out.per_replication[r * slots];
    if (!classical.converged) continue;
    for (std::size_t c = 0; c < cfg.charts.size(); ++c) {
      const ReplicationRecord& ortho = out.per_replication[r * slots + 1 + c];
      if (!ortho.converged) continue;
      const ClassicalParams mapped = to_classical(
          OrthoParams::from_vector(cfg.charts[c], ortho.estimates));
      const std::vector<double> a = mapped.as_vector();
      const std::vector<double> b = classical.estimates;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-3 * std::max(1.0, std::abs(b[i]))) {
          ++out.paired_mismatch_count;
          break;
        }
      }
    }
  }

  std::vector<std::string> names{"classical"};
  for (const Chart chart : cfg.charts) names.push_back(to_string(chart));
  for (std::size_t s = 0; s < slots; ++s) {
    std::vector<const ReplicationRecord*> records;
    records.reserve(cfg.d);
    for (std::size_t r = 0; r < cfg.d; ++r) {
      records.push_back(&out.per_replication[r * slots + s]);
    }
    out.summaries[names[s]] = summarize(records, cfg.d);
  }
  return out;
}

void write_replications_csv(const SimulationOutput& out,
                            const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("write_replications_csv: cannot open " + path);
  }
  f << "replication_id,family,parametrisation,param1_name,param1_hat,"
       "param2_name,param2_hat,cross_correlation,converged\n";
  const std::string family = to_string(out.config.true_params.family);
  for (const ReplicationRecord& r : out.per_replication) {
    f << r.replication_id << ',' << family << ',' << r.parametrisation << ','
      << r.param_names[0] << ',' << fmt_double(r.estimates[0]) << ','
      << r.param_names[1] << ',' << fmt_double(r.estimates[1]) << ','
      << fmt_double(r.cross_correlation) << ',' << (r.converged ? 1 : 0)
      << '\n';
  }
  if (!f.good()) {
    throw std::runtime_error("write_replications_csv: write failed for " +
                             path);
  }
}

void write_summary_json(const SimulationOutput& out, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = 1;

  nlohmann::json cfg;
  cfg["family"] = to_string(out.config.true_params.family);
  nlohmann::json tp;
  const std::vector<std::string> names =
      param_names(out.config.true_params.family);
  const std::vector<double> values = out.config.true_params.as_vector();
  for (std::size_t i = 0; i < names.size(); ++i) tp[names[i]] = values[i];
  cfg["true_params"] = tp;
  cfg["d"] = out.config.d;
  cfg["n"] = out.config.n;
  cfg["seed"] = out.config.seed;
  nlohmann::json charts = nlohmann::json::array();
  for (const Chart chart : out.config.charts) charts.push_back(to_string(chart));
  cfg["charts"] = charts;
  // The worker count is deliberately not echoed: output bytes must not
  // depend on how the computation was scheduled.
  cfg["fit"] = {{"max_iterations", out.config.fit.max_iterations},
                {"convergence_tol", out.config.fit.convergence_tol},
                {"restarts", out.config.fit.restarts},
                {"hessian_rel_step", out.config.fit.hessian_rel_step}};
  j["config"] = cfg;

  nlohmann::json per;
  for (const auto& [name, s] : out.summaries) {
    per[name] = {
        {"across_replication_correlation", s.across_replication_correlation},
        {"across_replication_correlation_all",
         s.across_replication_correlation_all},
        {"median_abs_cross_correlation", s.median_abs_cross_correlation},
        {"convergence_rate", s.convergence_rate},
        {"n_converged", s.n_converged}};
  }
  j["parametrisations"] = per;
  j["paired_mismatch_count"] = out.paired_mismatch_count;
  const std::size_t pairs = out.config.d * out.config.charts.size();
  j["paired_mismatch_fraction"] =
      pairs == 0 ? 0.0
                 : static_cast<double>(out.paired_mismatch_count) /
                       static_cast<double>(pairs);

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("write_summary_json: cannot open " + path);
  }
  f << j.dump(2) << '\n';
  if (!f.good()) {
    throw std::runtime_error("write_summary_json: write failed for " + path);
  }
}

}  // namespace evt
