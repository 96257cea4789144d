// Command-line front end: Fisher matrices, chart transforms, fitting,
// analytic-vs-oracle verification, replication campaigns and violin reports.
//
// Exit codes: 0 success, 1 verification/convergence failure, 2 usage or
// domain error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evtortho/distributions.hpp"
#include "evtortho/fisher.hpp"
#include "evtortho/mle.hpp"
#include "evtortho/oracle.hpp"
#include "evtortho/report.hpp"
#include "evtortho/reparam.hpp"
#include "evtortho/simulate.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("EVT_ORTHO_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "EVT_ORTHO_WORKERS must be a non-negative integer, got '" +
          std::string(env) + "'");
    }
    throw std::invalid_argument("EVT_ORTHO_WORKERS must be non-negative");
  }
  return 0;  // library default: hardware concurrency
}

json matrix_to_json(const evt::SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json params_to_json(const evt::ClassicalParams& p) {
  json out;
  out["family"] = evt::to_string(p.family);
  const auto names = evt::param_names(p.family);
  const auto values = p.as_vector();
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = values[i];
  return out;
}

evt::ClassicalParams params_from_cli(evt::Family family, double mu,
                                     double sigma, double xi) {
  switch (family) {
    case evt::Family::gev3:
      return evt::ClassicalParams::gev3(mu, sigma, xi);
    case evt::Family::gumbel:
      return evt::ClassicalParams::gumbel(mu, sigma);
    case evt::Family::gev2:
      return evt::ClassicalParams::gev2(sigma, xi);
    case evt::Family::gp2:
      return evt::ClassicalParams::gp2(sigma, xi);
    case evt::Family::gp3:
      return evt::ClassicalParams::gp3(mu, sigma, xi);
  }
  throw std::invalid_argument("unknown family enumerator");
}

std::vector<double> read_data_file(const std::string& path) {
  std::vector<double> data;
  auto read_stream = [&data](std::istream& in) {
    double v = 0.0;
    while (in >> v) data.push_back(v);
    if (!in.eof()) {
      throw std::invalid_argument("data input contains a non-numeric token");
    }
  };
  if (path == "-") {
    read_stream(std::cin);
  } else {
    std::ifstream f(path);
    if (!f) {
      throw std::invalid_argument("cannot open data file: " + path);
    }
    read_stream(f);
  }
  if (data.empty()) {
    throw std::invalid_argument("data input is empty");
  }
  return data;
}

json fit_result_to_json(const evt::FitResult& r) {
  json out;
  out["labels"] = r.labels;
  json est;
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    est[r.labels[i]] = r.estimate[i];
  out["estimate"] = est;
  out["estimate_classical"] = params_to_json(r.estimate_classical);
  out["loglik"] = r.loglik;
  out["converged"] = r.converged;
  out["iterations"] = r.iterations;
  out["observed_info"] = matrix_to_json(r.observed_info.m);
  json ses;
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    ses[r.labels[i]] = r.std_errors[i];
  out["std_errors"] = ses;
  out["correlation"] = matrix_to_json(r.correlation);
  out["cross_correlation"] = r.cross_correlation;
  return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// fisher
// ---------------------------------------------------------------------------

int cmd_fisher(const std::string& family_name, double mu, double sigma,
               double xi) {
  const evt::Family family = evt::family_from_string(family_name);
  const evt::ClassicalParams p = params_from_cli(family, mu, sigma, xi);
  const evt::FisherMatrix info = evt::fisher_matrix(p);
  json out;
  out["config"] = params_to_json(p);
  out["labels"] = info.labels;
  out["matrix"] = matrix_to_json(info.m);
  print_json(out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

int cmd_transform(const std::string& chart_name, const std::string& from,
                  const std::vector<double>& coords) {
  const evt::Chart chart = evt::chart_from_string(chart_name);
  evt::ClassicalParams classical =
      evt::ClassicalParams::gumbel(0.0, 1.0);  // overwritten below
  evt::OrthoParams ortho{chart, 0.0, 0.0, 0.0};
  if (from == "classical") {
    classical = evt::ClassicalParams::from_vector(evt::chart_family(chart),
                                                  coords);
    ortho = evt::from_classical(chart, classical);
  } else if (from == "chart") {
    ortho = evt::OrthoParams::from_vector(chart, coords);
    classical = evt::to_classical(ortho);
  } else {
    throw std::invalid_argument("--from must be 'classical' or 'chart'");
  }

  json out;
  out["config"] = {{"chart", chart_name},
                   {"from", from},
                   {"coords", coords}};
  out["classical"] = params_to_json(classical);
  json chart_json;
  const auto names = evt::chart_param_names(chart);
  const auto values = ortho.as_vector();
  for (std::size_t i = 0; i < names.size(); ++i)
    chart_json[names[i]] = values[i];
  out["chart_coords"] = chart_json;
  out["interest"] = names[evt::interest_index(chart)];
  print_json(out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

int cmd_fit(const std::string& family_name, const std::string& chart_name,
            const std::string& data_path, const evt::FitConfig& fc) {
  if (family_name.empty() == chart_name.empty()) {
    throw std::invalid_argument(
        "fit needs exactly one of --family (classical parametrisation) or "
        "--chart (orthogonal parametrisation)");
  }
  const std::vector<double> data = read_data_file(data_path);
  evt::FitResult result;
  json cfg;
  if (!family_name.empty()) {
    result = evt::fit_classical(evt::family_from_string(family_name), data, fc);
    cfg["family"] = family_name;
  } else {
    result = evt::fit_ortho(evt::chart_from_string(chart_name), data, fc);
    cfg["chart"] = chart_name;
  }
  cfg["data"] = data_path;
  cfg["n"] = data.size();
  cfg["fit"] = {{"max_iterations", fc.max_iterations},
                {"convergence_tol", fc.convergence_tol},
                {"restarts", fc.restarts},
                {"hessian_rel_step", fc.hessian_rel_step}};
  json out = fit_result_to_json(result);
  out["config"] = cfg;
  print_json(out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& family_names,
               std::vector<double> sigma_grid, std::vector<double> xi_grid,
               std::size_t mc_samples, double quad_tol, double max_rel_err,
               std::uint64_t seed, std::optional<unsigned> workers_flag) {
  evt::OracleConfig oc;
  oc.mc_samples = mc_samples;
  oc.quadrature_rel_tol = quad_tol;
  oc.workers = resolve_workers(workers_flag);
  oc.validate();

  json out;
  out["config"] = {{"families", family_names},
                   {"sigma_grid", sigma_grid},
                   {"xi_grid", xi_grid},
                   {"mc_samples", mc_samples},
                   {"quadrature_rel_tol", quad_tol},
                   {"max_rel_err", max_rel_err},
                   {"seed", seed}};
  json points = json::array();
  bool all_pass = true;
  std::uint64_t point_index = 0;

  for (const std::string& fname : family_names) {
    const evt::Family family = evt::family_from_string(fname);
    // Gumbel has no shape parameter: collapse the xi grid to one entry.
    const std::vector<double> xis =
        family == evt::Family::gumbel ? std::vector<double>{0.0} : xi_grid;
    for (const double sigma : sigma_grid) {
      for (const double xi : xis) {
        const evt::ClassicalParams p = params_from_cli(family, 0.0, sigma, xi);
        const evt::FisherMatrix analytic = evt::fisher_matrix(p);
        const evt::FisherMatrix quad = evt::fisher_quad(p, oc);
        // Decorrelate grid points (and nearby seeds) with a golden-ratio
        // multiplier before the per-point Monte-Carlo stream derivation.
        const std::uint64_t point_seed =
            seed ^ (0x9e3779b97f4a7c15ULL * (point_index + 1));
        const evt::FisherEstimate mc = evt::fisher_mc(p, oc, point_seed);
        ++point_index;

        double quad_rel = 0.0;
        double mc_dev_se = 0.0;
        for (std::size_t i = 0; i < analytic.m.dim(); ++i) {
          for (std::size_t j = 0; j < analytic.m.dim(); ++j) {
            quad_rel = std::max(
                quad_rel, std::abs(quad.m(i, j) - analytic.m(i, j)) /
                              std::abs(analytic.m(i, j)));
            const double se = mc.std_error(i, j);
            if (se > 0.0) {
              mc_dev_se = std::max(
                  mc_dev_se,
                  std::abs(mc.value.m(i, j) - analytic.m(i, j)) / se);
            }
          }
        }
        // Monte-Carlo tolerance is 3 standard errors, so it widens itself
        // automatically when mc_samples shrinks.
        const bool pass = quad_rel <= max_rel_err && mc_dev_se <= 3.0;
        all_pass = all_pass && pass;
        json pt;
        pt["family"] = fname;
        pt["sigma"] = sigma;
        if (family != evt::Family::gumbel) pt["xi"] = xi;
        pt["quad_max_rel_err"] = quad_rel;
        pt["mc_max_dev_in_se"] = mc_dev_se;
        pt["pass"] = pass;
        points.push_back(pt);
      }
    }
  }
  out["points"] = points;
  out["pass"] = all_pass;
  print_json(out);
  return all_pass ? kExitOk : kExitVerifyFailure;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

evt::SimulationConfig default_campaign(evt::Family family) {
  evt::SimulationConfig cfg;
  switch (family) {
    case evt::Family::gev2:
      cfg.true_params = evt::ClassicalParams::gev2(1.0, 0.2);
      cfg.charts = {evt::Chart::gev2_scale};
      break;
    case evt::Family::gp2:
      cfg.true_params = evt::ClassicalParams::gp2(1.0, 0.2);
      cfg.charts = {evt::Chart::gp_scale, evt::Chart::gp_shape};
      break;
    case evt::Family::gumbel:
      cfg.true_params = evt::ClassicalParams::gumbel(1.0, 1.0);
      cfg.charts = {evt::Chart::gumbel_loc, evt::Chart::gumbel_scale};
      break;
    default:
      throw std::invalid_argument(
          "simulate supports families gev2, gp2 and gumbel");
  }
  return cfg;
}

void apply_config_file(evt::SimulationConfig& cfg, const std::string& path,
                       bool& family_set) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file is not valid JSON: " +
                                std::string(e.what()));
  }
  if (!j.contains("schema_version") || j["schema_version"] != 1) {
    throw std::invalid_argument(
        "config file must declare \"schema_version\": 1");
  }
  if (j.contains("family")) {
    cfg = default_campaign(
        evt::family_from_string(j["family"].get<std::string>()));
    family_set = true;
  }
  if (j.contains("true_params")) {
    const json& tp = j["true_params"];
    const double mu = tp.value("mu", cfg.true_params.mu);
    const double sigma = tp.value("sigma", cfg.true_params.sigma);
    const double xi = tp.value("xi", cfg.true_params.xi);
    cfg.true_params = params_from_cli(cfg.true_params.family, mu, sigma, xi);
  }
  if (j.contains("d")) cfg.d = j["d"].get<std::size_t>();
  if (j.contains("n")) cfg.n = j["n"].get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("charts")) {
    cfg.charts.clear();
    for (const auto& c : j["charts"])
      cfg.charts.push_back(evt::chart_from_string(c.get<std::string>()));
  }
  if (j.contains("fit")) {
    const json& fj = j["fit"];
    cfg.fit.max_iterations = fj.value("max_iterations", cfg.fit.max_iterations);
    cfg.fit.convergence_tol =
        fj.value("convergence_tol", cfg.fit.convergence_tol);
    cfg.fit.restarts = fj.value("restarts", cfg.fit.restarts);
    cfg.fit.hessian_rel_step =
        fj.value("hessian_rel_step", cfg.fit.hessian_rel_step);
  }
}

int cmd_simulate(const std::string& config_path,
                 const std::string& family_name, std::optional<double> mu,
                 std::optional<double> sigma, std::optional<double> xi,
                 std::optional<std::size_t> d, std::optional<std::size_t> n,
                 std::optional<std::uint64_t> seed,
                 const std::vector<std::string>& chart_names,
                 std::optional<unsigned> workers_flag,
                 const std::string& out_dir) {
  evt::SimulationConfig cfg = default_campaign(evt::Family::gev2);
  bool family_set = false;
  if (!config_path.empty()) {
    apply_config_file(cfg, config_path, family_set);
  }
  if (!family_name.empty()) {
    cfg = default_campaign(evt::family_from_string(family_name));
    family_set = true;
  }
  if (!config_path.empty() && !family_name.empty()) {
    // flags override the file: re-apply everything but the family default
    evt::SimulationConfig flag_defaults = cfg;
    apply_config_file(flag_defaults, config_path, family_set);
    if (flag_defaults.true_params.family == cfg.true_params.family) {
      cfg = flag_defaults;
    }
  }
  if (mu || sigma || xi) {
    const double new_mu = mu.value_or(cfg.true_params.mu);
    const double new_sigma = sigma.value_or(cfg.true_params.sigma);
    const double new_xi = xi.value_or(cfg.true_params.xi);
    cfg.true_params =
        params_from_cli(cfg.true_params.family, new_mu, new_sigma, new_xi);
  }
  if (d) cfg.d = *d;
  if (n) cfg.n = *n;
  if (seed) cfg.seed = *seed;
  if (!chart_names.empty()) {
    cfg.charts.clear();
    for (const std::string& c : chart_names)
      cfg.charts.push_back(evt::chart_from_string(c));
  }
  cfg.workers = resolve_workers(workers_flag);
  cfg.validate();

  // Echo the resolved configuration before running.
  json echo;
  echo["family"] = evt::to_string(cfg.true_params.family);
  echo["true_params"] = params_to_json(cfg.true_params);
  echo["d"] = cfg.d;
  echo["n"] = cfg.n;
  echo["seed"] = cfg.seed;
  json charts = json::array();
  for (const evt::Chart c : cfg.charts) charts.push_back(evt::to_string(c));
  echo["charts"] = charts;
  echo["workers"] = cfg.workers;
  echo["out_dir"] = out_dir;
  std::cout << "config: " << echo.dump() << "\n";

  const evt::SimulationOutput out = evt::run_campaign(cfg);
  const std::string csv_path = out_dir + "/replications.csv";
  const std::string json_path = out_dir + "/summary.json";
  evt::write_replications_csv(out, csv_path);
  evt::write_summary_json(out, json_path);

  std::cout << "\nparametrisation     across_corr  across_all  median|cc|  "
               "conv_rate  n_conv\n";
  auto print_row = [&](const std::string& name) {
    const evt::ParametrisationSummary& s = out.summaries.at(name);
    std::printf("%-18s  %+10.4f  %+10.4f  %10.4f  %9.3f  %6zu\n", name.c_str(),
                s.across_replication_correlation,
                s.across_replication_correlation_all,
                s.median_abs_cross_correlation, s.convergence_rate,
                s.n_converged);
  };
  print_row("classical");
  for (const evt::Chart c : cfg.charts) print_row(evt::to_string(c));
  const double mismatch_fraction =
      static_cast<double>(out.paired_mismatch_count) /
      static_cast<double>(cfg.d);
  std::printf(
      "\npaired classical/chart mismatches: %zu of %zu replications (%.2f%%)\n",
      out.paired_mismatch_count, cfg.d, 100.0 * mismatch_fraction);
  std::cout << "wrote " << csv_path << "\n";
  std::cout << "wrote " << json_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

struct CsvRecord {
  std::string family;
  std::string parametrisation;
  double cross_correlation;
  bool converged;
};

std::vector<CsvRecord> read_replications_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument("cannot open csv file: " + path);
  }
  std::string line;
  if (!std::getline(f, line)) {
    throw std::invalid_argument("csv file is empty: " + path);
  }
  const std::string expected_header =
      "replication_id,family,parametrisation,param1_name,param1_hat,"
      "param2_name,param2_hat,cross_correlation,converged";
  if (line != expected_header) {
    throw std::invalid_argument("unexpected csv header in " + path);
  }
  std::vector<CsvRecord> records;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw std::invalid_argument("malformed csv row: " + line);
    }
    records.push_back({fields[1], fields[2], std::stod(fields[7]),
                       fields[8] == "1"});
  }
  return records;
}

int cmd_plot(const std::string& csv_path, const std::string& summary_path,
             const std::string& out_dir) {
  json echo;
  echo["csv"] = csv_path;
  echo["summary"] = summary_path;
  echo["out_dir"] = out_dir;
  std::cout << "config: " << echo.dump() << "\n";

  const std::vector<CsvRecord> records = read_replications_csv(csv_path);
  std::ifstream sf(summary_path);
  if (!sf) {
    throw std::invalid_argument("cannot open summary file: " + summary_path);
  }
  json summary;
  sf >> summary;

  // Group by family, keeping parametrisations in first-appearance order.
  std::vector<std::string> families;
  std::map<std::string, std::vector<std::string>> parametrisations;
  std::map<std::string, std::map<std::string, std::vector<double>>> values;
  for (const CsvRecord& r : records) {
    if (values.find(r.family) == values.end()) families.push_back(r.family);
    auto& fam_params = parametrisations[r.family];
    if (std::find(fam_params.begin(), fam_params.end(), r.parametrisation) ==
        fam_params.end()) {
      fam_params.push_back(r.parametrisation);
    }
    if (r.converged && std::isfinite(r.cross_correlation)) {
      values[r.family][r.parametrisation].push_back(r.cross_correlation);
    }
  }
  if (families.empty()) {
    throw std::invalid_argument("csv contains no replication rows");
  }

  for (const std::string& family : families) {
    evt::ViolinSpec spec;
    spec.title = family + ": cross-correlation of parameter estimates";
    spec.y_label = "per-replication cross-correlation";
    for (const std::string& pn : parametrisations[family]) {
      evt::ViolinGroup g;
      g.label = pn;
      g.values = values[family][pn];
      const json& ps = summary.at("parametrisations").at(pn);
      g.header_annotation = ps.at("across_replication_correlation");
      spec.groups.push_back(std::move(g));
    }
    const std::string path = out_dir + "/violin_" + family + ".svg";
    evt::render_violins(spec, path);
    std::cout << "wrote " << path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Inference for extreme-value families under orthogonal "
      "reparametrisations: Fisher matrices, chart transforms, maximum "
      "likelihood, oracle verification, replication campaigns and violin "
      "reports.\nExit codes: 0 success, 1 verification/convergence failure, "
      "2 usage or domain error."};
  app.require_subcommand(1);

  // fisher ------------------------------------------------------------------
  auto* fisher = app.add_subcommand(
      "fisher", "Print a family's per-observation Fisher information (JSON)");
  std::string fisher_family;
  double fisher_mu = 0.0, fisher_sigma = 1.0, fisher_xi = 0.0;
  fisher->add_option("--family", fisher_family,
                     "gev3, gumbel, gev2, gp2 or gp3")
      ->required();
  fisher->add_option("--mu", fisher_mu, "location (gev3/gumbel/gp3)");
  fisher->add_option("--sigma", fisher_sigma, "scale, > 0")->required();
  fisher->add_option("--xi", fisher_xi, "shape (ignored for gumbel)");

  // transform ---------------------------------------------------------------
  auto* transform = app.add_subcommand(
      "transform",
      "Map a parameter point between classical and chart coordinates (JSON)");
  std::string tr_chart, tr_from = "classical";
  std::vector<double> tr_coords;
  transform
      ->add_option("--chart", tr_chart,
                   "gumbel-loc, gumbel-scale, gev2-scale, gp-scale, gp-shape "
                   "or gp3-scale")
      ->required();
  transform->add_option("--from", tr_from,
                        "coordinate system of --coords: 'classical' or "
                        "'chart' (default classical)");
  transform
      ->add_option("--coords", tr_coords,
                   "coordinates in label order (2 or 3 values, "
                   "comma- or space-separated)")
      ->required()
      ->delimiter(',')
      ->expected(2, 3);

  // fit ---------------------------------------------------------------------
  auto* fit = app.add_subcommand(
      "fit", "Maximum-likelihood fit of newline-delimited data (JSON)");
  std::string fit_family, fit_chart, fit_data;
  evt::FitConfig fit_cfg;
  fit->add_option("--family", fit_family, "classical parametrisation family");
  fit->add_option("--chart", fit_chart, "orthogonal parametrisation chart");
  fit->add_option("--data", fit_data,
                  "path to newline-delimited numbers ('-' for stdin)")
      ->required();
  fit->add_option("--max-iterations", fit_cfg.max_iterations,
                  "simplex iterations per start");
  fit->add_option("--tol", fit_cfg.convergence_tol, "convergence tolerance");
  fit->add_option("--restarts", fit_cfg.restarts, "total optimizer starts");
  fit->add_option("--hessian-step", fit_cfg.hessian_rel_step,
                  "observed-information relative step");

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify",
      "Compare analytic Fisher matrices against quadrature and Monte-Carlo "
      "oracles over a parameter grid (JSON report; exit 1 on any failure)");
  std::vector<std::string> ver_families = {"gev3", "gumbel", "gev2", "gp2",
                                           "gp3"};
  std::vector<double> ver_sigma = {0.5, 1.0, 2.0};
  std::vector<double> ver_xi = {-0.3, -0.1, 0.1, 0.2, 0.5};
  std::size_t ver_mc = 1000000;
  double ver_quad_tol = 1e-8, ver_max_rel = 1e-6;
  std::uint64_t ver_seed = 60;
  std::optional<unsigned> ver_workers;
  verify->add_option("--families", ver_families, "families to verify")
      ->delimiter(',');
  verify->add_option("--sigma-grid", ver_sigma, "scale grid")->delimiter(',');
  verify->add_option("--xi-grid", ver_xi, "shape grid")->delimiter(',');
  verify->add_option("--mc-samples", ver_mc,
                     "Monte-Carlo sample count (>= 10^4; tolerance is 3 SE "
                     "and widens automatically for small counts)");
  verify->add_option("--quad-tol", ver_quad_tol,
                     "adaptive quadrature relative tolerance");
  verify->add_option("--max-rel-err", ver_max_rel,
                     "acceptance threshold for analytic-vs-quadrature "
                     "relative deviation");
  verify->add_option("--seed", ver_seed, "Monte-Carlo seed");
  verify->add_option("--workers", ver_workers,
                     "worker threads (0 = all cores; EVT_ORTHO_WORKERS env "
                     "var as fallback; never changes results)");

  // simulate ----------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate",
      "Run a replication campaign and write replications.csv + summary.json");
  std::string sim_config, sim_family, sim_out_dir = ".";
  std::optional<double> sim_mu, sim_sigma, sim_xi;
  std::optional<std::size_t> sim_d, sim_n;
  std::optional<std::uint64_t> sim_seed;
  std::vector<std::string> sim_charts;
  std::optional<unsigned> sim_workers;
  simulate->add_option("--config", sim_config,
                       "JSON config file (schema_version 1); flags override");
  simulate->add_option("--family", sim_family, "gev2, gp2 or gumbel");
  simulate->add_option("--mu", sim_mu, "true location (gumbel)");
  simulate->add_option("--sigma", sim_sigma, "true scale");
  simulate->add_option("--xi", sim_xi, "true shape (gev2/gp2)");
  simulate->add_option("--d", sim_d, "number of replications");
  simulate->add_option("--n", sim_n, "sample size per replication");
  simulate->add_option("--seed", sim_seed, "campaign seed");
  simulate
      ->add_option("--charts", sim_charts,
                   "orthogonal charts to fit alongside classical")
      ->delimiter(',');
  simulate->add_option("--workers", sim_workers,
                       "worker threads (0 = all cores; EVT_ORTHO_WORKERS env "
                       "var as fallback; never changes output bytes)");
  simulate->add_option("--out-dir", sim_out_dir, "output directory");

  // plot --------------------------------------------------------------------
  auto* plot = app.add_subcommand(
      "plot",
      "Render violin figures (one per family) from campaign output files");
  std::string plot_csv = "replications.csv";
  std::string plot_summary = "summary.json";
  std::string plot_out_dir = ".";
  plot->add_option("--csv", plot_csv, "replications.csv path");
  plot->add_option("--summary", plot_summary, "summary.json path");
  plot->add_option("--out-dir", plot_out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fisher->parsed()) {
      return cmd_fisher(fisher_family, fisher_mu, fisher_sigma, fisher_xi);
    }
    if (transform->parsed()) {
      return cmd_transform(tr_chart, tr_from, tr_coords);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_family, fit_chart, fit_data, fit_cfg);
    }
    if (verify->parsed()) {
      return cmd_verify(ver_families, ver_sigma, ver_xi, ver_mc, ver_quad_tol,
                        ver_max_rel, ver_seed, ver_workers);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_config, sim_family, sim_mu, sim_sigma, sim_xi,
                          sim_d, sim_n, sim_seed, sim_charts, sim_workers,
                          sim_out_dir);
    }
    if (plot->parsed()) {
      return cmd_plot(plot_csv, plot_summary, plot_out_dir);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailure;
  }
  return kExitUsage;
}
