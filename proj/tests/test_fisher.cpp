#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evtortho/distributions.hpp"
#include "evtortho/fisher.hpp"

using namespace evt;

namespace {

// Smallest eigenvalue via characteristic polynomial (2x2) or Cholesky (3x3).
bool positive_definite(const SquareMatrix& m) {
  const std::size_t k = m.dim();
  std::vector<std::vector<double>> a(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = m(i, j);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t t = 0; t < j; ++t) s -= a[i][t] * a[j][t];
      if (i == j) {
        if (s <= 0.0) return false;
        a[i][i] = std::sqrt(s);
      } else {
        a[i][j] = s / a[j][j];
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("shape helper functions p and q at xi = 0.2") {
  CHECK(p_of_xi(0.2) == doctest::Approx(1.2776598972044284).epsilon(1e-13));
  CHECK(q_of_xi(0.2) == doctest::Approx(6.2923500672493887).epsilon(1e-13));
}

TEST_CASE("gumbel information matches its closed form") {
  const auto info = fisher_gumbel(0.0, 1.0);
  REQUIRE(info.labels == std::vector<std::string>{"mu", "sigma"});
  CHECK(info.m(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(info.m(0, 1) == doctest::Approx(-0.42278433509846714).epsilon(1e-13));
  CHECK(info.m(1, 1) == doctest::Approx(1.8236806608528794).epsilon(1e-13));
  CHECK(info.m(1, 0) == info.m(0, 1));
}

TEST_CASE("support-bound-zero gev information at (1, 0.2) and (1, -0.2)") {
  const auto pos = fisher_gev2(1.0, 0.2);
  REQUIRE(pos.labels == std::vector<std::string>{"sigma", "xi"});
  CHECK(pos.m(0, 0) == doctest::Approx(25.0).epsilon(1e-13));
  CHECK(pos.m(0, 1) == doctest::Approx(-135.56960837746168).epsilon(1e-13));
  CHECK(pos.m(1, 1) == doctest::Approx(776.28810029593877).epsilon(1e-13));

  const auto neg = fisher_gev2(1.0, -0.2);
  CHECK(neg.m(0, 0) == doctest::Approx(25.0).epsilon(1e-13));
  CHECK(neg.m(0, 1) == doctest::Approx(114.43039162253832).epsilon(1e-13));
  CHECK(neg.m(1, 1) == doctest::Approx(564.89593274670520).epsilon(1e-13));
}

TEST_CASE("generalized pareto information at (1, 0.2), threshold fixed") {
  const auto info = fisher_gp2(1.0, 0.2);
  REQUIRE(info.labels == std::vector<std::string>{"sigma", "xi"});
  CHECK(info.m(0, 0) == doctest::Approx(0.71428571428571429).epsilon(1e-14));
  CHECK(info.m(0, 1) == doctest::Approx(0.59523809523809524).epsilon(1e-14));
  CHECK(info.m(1, 1) == doctest::Approx(1.1904761904761905).epsilon(1e-14));
}

TEST_CASE("three-parameter gev information at (0, 1, 0.2) and (0, 2, -0.3)") {
  // The xi rows combine intermediates of order 1/xi^2..1/xi^4 that nearly
  // cancel, so double evaluation keeps ~12-13 digits there; the other
  // entries are stable to full precision.
  const auto a = fisher_gev3(0.0, 1.0, 0.2);
  REQUIRE(a.labels == std::vector<std::string>{"mu", "sigma", "xi"});
  CHECK(a.m(0, 0) == doctest::Approx(1.2776598972044284).epsilon(1e-12));
  CHECK(a.m(1, 1) == doctest::Approx(1.8513728861250738).epsilon(1e-12));
  CHECK(a.m(2, 2) == doctest::Approx(1.7380192363593447).epsilon(1e-10));
  CHECK(a.m(0, 1) == doctest::Approx(-0.87928703162357842).epsilon(1e-12));
  CHECK(a.m(0, 2) == doctest::Approx(0.47974709386376671).epsilon(1e-10));
  CHECK(a.m(1, 2) == doctest::Approx(-0.24303248681642043).epsilon(1e-10));

  const auto b = fisher_gev3(0.0, 2.0, -0.3);
  CHECK(b.m(0, 0) == doctest::Approx(0.27172454411031681).epsilon(1e-12));
  CHECK(b.m(1, 1) == doctest::Approx(0.74894641870746203).epsilon(1e-12));
  CHECK(b.m(2, 2) == doctest::Approx(7.4232364610350199).epsilon(1e-10));
  CHECK(b.m(0, 1) == doctest::Approx(0.14854953632331398).epsilon(1e-12));
  CHECK(b.m(0, 2) == doctest::Approx(0.65712703710547786).epsilon(1e-10));
  CHECK(b.m(1, 2) == doctest::Approx(1.5334969128917671).epsilon(1e-10));
}

TEST_CASE("free-threshold pareto shares the two-parameter sigma/xi block") {
  const auto three = fisher_gp3(0.7, 1.3, 0.2);
  const auto two = fisher_gp2(1.3, 0.2);
  REQUIRE(three.labels == std::vector<std::string>{"mu", "sigma", "xi"});
  CHECK(three.m(1, 1) == doctest::Approx(two.m(0, 0)).epsilon(1e-14));
  CHECK(three.m(1, 2) == doctest::Approx(two.m(0, 1)).epsilon(1e-14));
  CHECK(three.m(2, 2) == doctest::Approx(two.m(1, 1)).epsilon(1e-14));
  // mu block at sigma=1, xi=0.2 references
  const auto unit = fisher_gp3(0.0, 1.0, 0.2);
  CHECK(unit.m(0, 0) == doctest::Approx(1.0285714285714286).epsilon(1e-14));
  CHECK(unit.m(0, 1) == doctest::Approx(-0.14285714285714286).epsilon(1e-14));
  CHECK(unit.m(0, 2) == doctest::Approx(-0.11904761904761905).epsilon(1e-14));
}

TEST_CASE("information scales as inverse squared scale where expected") {
  for (double s : {0.5, 2.0, 7.0}) {
    CAPTURE(s);
    const auto base = fisher_gp2(1.0, 0.2);
    const auto scaled = fisher_gp2(s, 0.2);
    CHECK(scaled.m(0, 0) == doctest::Approx(base.m(0, 0) / (s * s)).epsilon(1e-13));
    CHECK(scaled.m(0, 1) == doctest::Approx(base.m(0, 1) / s).epsilon(1e-13));
    CHECK(scaled.m(1, 1) == doctest::Approx(base.m(1, 1)).epsilon(1e-13));

    const auto gbase = fisher_gev2(1.0, -0.1);
    const auto gscaled = fisher_gev2(s, -0.1);
    CHECK(gscaled.m(0, 0) ==
          doctest::Approx(gbase.m(0, 0) / (s * s)).epsilon(1e-13));
    CHECK(gscaled.m(0, 1) == doctest::Approx(gbase.m(0, 1) / s).epsilon(1e-13));
    CHECK(gscaled.m(1, 1) == doctest::Approx(gbase.m(1, 1)).epsilon(1e-13));
  }
}

TEST_CASE("information matrices are positive definite across the grid") {
  for (double s : {0.5, 1.0, 2.0}) {
    for (double x : {-0.3, -0.1, 0.1, 0.2, 0.5}) {
      CAPTURE(s);
      CAPTURE(x);
      CHECK(positive_definite(fisher_gev3(0, s, x).m));
      CHECK(positive_definite(fisher_gev2(s, x).m));
      CHECK(positive_definite(fisher_gp2(s, x).m));
      CHECK(positive_definite(fisher_gp3(0, s, x).m));
    }
    CHECK(positive_definite(fisher_gumbel(0, s).m));
  }
}

TEST_CASE("shape values too close to zero are rejected for gev families") {
  CHECK_THROWS_AS(fisher_gev3(0.0, 1.0, 1e-5),
                  std::domain_error);
  CHECK_THROWS_AS(fisher_gev3(0.0, 1.0, 0.0),
                  std::domain_error);
  CHECK_NOTHROW(fisher_gev3(0.0, 1.0, 1e-4));
  // The gumbel matrix is the xi = 0 member's information.
  CHECK_NOTHROW(fisher_gumbel(0.0, 1.0));
}

TEST_CASE("dispatch routes families to their specialised matrices") {
  const auto p = ClassicalParams::gev2(1.0, 0.2);
  const auto via_dispatch = fisher_matrix(p);
  const auto direct = fisher_gev2(1.0, 0.2);
  REQUIRE(via_dispatch.labels == direct.labels);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(via_dispatch.m(i, j) == direct.m(i, j));
}
