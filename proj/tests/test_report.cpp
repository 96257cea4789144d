#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evtortho/report.hpp"
#include "evtortho/rng.hpp"

using namespace evt;

namespace {

// Standard-normal draws via the polar method on the deterministic stream.
std::vector<double> normal_draws(std::size_t n, std::uint64_t seed,
                                 double scale) {
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double u = 2.0 * rng.uniform01() - 1.0;
    const double v = 2.0 * rng.uniform01() - 1.0;
    const double s = u * u + v * v;
    if (s <= 0.0 || s >= 1.0) continue;
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    out.push_back(scale * u * m);
    if (out.size() < n) out.push_back(scale * v * m);
  }
  return out;
}

double trapezoid_mass(const DensityCurve& c) {
  double acc = 0.0;
  for (std::size_t i = 1; i < kKdeGridSize; ++i) {
    acc += 0.5 * (c.density[i - 1] + c.density[i]) *
           (c.grid[i] - c.grid[i - 1]);
  }
  return acc;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("density grid spans [-1, 1] with 256 points") {
  const DensityCurve c = kde({-0.5, 0.0, 0.5});
  CHECK(c.grid.front() == doctest::Approx(-1.0));
  CHECK(c.grid.back() == doctest::Approx(1.0));
  CHECK(c.bandwidth > 0.0);
}

TEST_CASE("symmetric data gives a curve symmetric about zero") {
  const DensityCurve c = kde({-0.4, 0.4});
  for (std::size_t i = 0; i < kKdeGridSize; ++i) {
    CAPTURE(i);
    CHECK(c.density[i] ==
          doctest::Approx(c.density[kKdeGridSize - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("standard-normal draws peak near the normal mode") {
  const auto draws = normal_draws(10000, 321, 1.0);
  const DensityCurve c = kde(draws);
  double grid_max = 0.0;
  for (double d : c.density) grid_max = std::max(grid_max, d);
  CHECK(grid_max == doctest::Approx(0.39894228040143268).epsilon(0.10));
}

TEST_CASE("density integrates to one when the data sits inside the grid") {
  // Scaled normal: essentially all kernel mass lies inside [-1, 1].
  const auto draws = normal_draws(10000, 9, 0.15);
  CHECK(trapezoid_mass(kde(draws)) == doctest::Approx(1.0).epsilon(1e-3));

  Rng rng(10);
  std::vector<double> uniform;
  for (int i = 0; i < 5000; ++i) uniform.push_back(0.8 * rng.uniform01() - 0.4);
  CHECK(trapezoid_mass(kde(uniform)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("degenerate samples are rejected") {
  CHECK_THROWS_AS(kde({}), std::invalid_argument);
  CHECK_THROWS_AS(kde({0.3}), std::invalid_argument);
  CHECK_THROWS_AS(kde({0.7, 0.7, 0.7, 0.7}), std::invalid_argument);
  CHECK_NOTHROW(kde({0.7, 0.7, 0.2}));
}

TEST_CASE("violin rendering is a byte-stable pure function") {
  ViolinSpec spec;
  spec.title = "demo";
  spec.y_label = "value";
  spec.groups.push_back({"a", {-0.2, 0.1, 0.3, -0.1, 0.05}, 0.123});
  spec.groups.push_back({"b", {0.9, 0.82, 0.95, 0.88, 0.91}, 0.987});
  const std::string once = render_violins_svg(spec);
  const std::string twice = render_violins_svg(spec);
  CHECK(once == twice);
  CHECK(once.find("<svg") == 0);
  CHECK(once.rfind("</svg>") != std::string::npos);
  CHECK(count_occurrences(once, "<polygon") == 2);
  CHECK(once.find("demo") != std::string::npos);
  CHECK(once.find("0.123") != std::string::npos);
  CHECK(once.find("0.987") != std::string::npos);
  CHECK(once.find("timestamp") == std::string::npos);
}

TEST_CASE("group labels are escaped for markup safety") {
  ViolinSpec spec;
  spec.title = "a<b&c";
  spec.groups.push_back({"g<1>", {-0.2, 0.1, 0.3}, 0.0});
  const std::string svg = render_violins_svg(spec);
  CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
  CHECK(svg.find("g&lt;1&gt;") != std::string::npos);
}

TEST_CASE("invalid specs are rejected rather than silently drawn") {
  ViolinSpec empty;
  CHECK_THROWS_AS(render_violins_svg(empty), std::invalid_argument);

  ViolinSpec bad_range;
  bad_range.groups.push_back({"a", {0.0, 0.1, 0.2}, 0.0});
  bad_range.y_range = {0.5, 0.5};
  CHECK_THROWS_AS(render_violins_svg(bad_range), std::invalid_argument);

  ViolinSpec outside;
  outside.groups.push_back({"a", {0.0, 1.5}, 0.0});
  CHECK_THROWS_WITH_AS(render_violins_svg(outside),
                       doctest::Contains("refusing to clamp"),
                       std::invalid_argument);

  ViolinSpec degenerate;
  degenerate.groups.push_back({"a", {0.25, 0.25}, 0.0});
  CHECK_THROWS_AS(render_violins_svg(degenerate), std::invalid_argument);
}

TEST_CASE("file rendering writes the same bytes the pure function returns") {
  ViolinSpec spec;
  spec.title = "roundtrip";
  spec.groups.push_back({"only", {-0.3, -0.1, 0.0, 0.2, 0.4}, -0.05});
  const std::string path = "test_report_violin.svg";
  render_violins(spec, path);
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f);
  std::ostringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == render_violins_svg(spec));
  std::remove(path.c_str());

  CHECK_THROWS_AS(render_violins(spec, "/nonexistent-dir/x.svg"),
                  std::runtime_error);
}
