#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tfa/weights.hpp"

using namespace tfa;

TEST_CASE("weight evaluation closed forms") {
  CHECK(WeightFunction::log_power(1.0)(0.0) == 0.0);
  CHECK_THAT(WeightFunction::log_power(2.0)(std::exp(1.0) - 1.0),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(WeightFunction::gevrey_root(2.0)(4.0), Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THROWS_AS(WeightFunction::log_power(1.0)(-1.0), std::domain_error);
  CHECK_THROWS_AS(WeightFunction::log_power(1.0, 10.0)(11.0), std::domain_error);
}

TEST_CASE("weight monotone on grid") {
  const auto g = weight_grid(1e6);
  for (auto w : {WeightFunction::log_power(2.0), WeightFunction::gevrey_root(3.0)}) {
    double prev = -1;
    for (double t : g) {
      CHECK(w(t) >= prev - 1e-12);
      prev = w(t);
    }
  }
}

TEST_CASE("custom weight validation") {
  CHECK_THROWS_AS(WeightFunction::custom({{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::custom({{1.0, 0.0}, {2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::custom({{0.0, 1.0}, {1.0, 0.5}}), std::invalid_argument);
  auto w = WeightFunction::custom({{0.0, 0.0}, {2.0, 4.0}});
  CHECK_THAT(w(1.0), Catch::Matchers::WithinAbs(2.0, 1e-12));  // linear interpolation
}

static WeightFunction linear_weight(double slope, double cap) {
  return WeightFunction::custom({{0.0, 0.0}, {cap, slope * cap}});
}

TEST_CASE("certify_alpha") {
  const auto g = weight_grid(1e6);

  SECTION("log_power beta=1 gives L=1") {
    auto w = WeightFunction::log_power(1.0);
    auto cert = certify_alpha(w, g);
    REQUIRE(cert.ok);
    // oracle: log(1+2t) - log(1+t) <= log 2 < 1, so L=1 suffices
    CHECK(cert.L == 1.0);
    CHECK(w.L().has_value());
  }
  SECTION("omega(t)=t approaches L=2") {
    auto w = linear_weight(1.0, 1e6);
    auto cert = certify_alpha(w, g);
    REQUIRE(cert.ok);
    // oracle: sup 2t/(t+1) = 2 as the grid extends
    CHECK(cert.L > 1.9);
    CHECK(cert.L <= 2.0 + 1e-6);
  }
  SECTION("log_power beta=2 certifies a finite L") {
    auto w = WeightFunction::log_power(2.0);
    auto cert = certify_alpha(w, g);
    REQUIRE(cert.ok);
    CHECK(cert.L >= 1.0);
    CHECK(cert.L < 1e6);
    // certificate validity on the grid
    for (double t : g) {
      if (2 * t > w.domain_cap()) continue;
      CHECK(w(2 * t) <= cert.L * (w(t) + 1.0) + 1e-9);
    }
  }
}

TEST_CASE("subadditivity property from certified L") {
  // omega(t1+t2) <= L(omega(t1)+omega(t2)+1) on random pairs
  const auto g = weight_grid(1e6);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 5e5);
  for (auto w : {WeightFunction::log_power(1.0), WeightFunction::log_power(2.0)}) {
    auto cert = certify_alpha(w, g);
    REQUIRE(cert.ok);
    for (int i = 0; i < 500; ++i) {
      const double t1 = U(rng), t2 = U(rng);
      CHECK(w(t1 + t2) <= cert.L * (w(t1) + w(t2) + 1.0) + 1e-9);
    }
  }
}

TEST_CASE("certify_gamma") {
  const auto g = weight_grid(1e6);

  SECTION("log_power beta=1 gives a=0, b=1") {
    auto w = WeightFunction::log_power(1.0);
    auto cert = certify_gamma(w, g);
    REQUIRE(cert.ok);
    CHECK_THAT(cert.b, Catch::Matchers::WithinAbs(1.0, 1e-6));
    CHECK_THAT(cert.a, Catch::Matchers::WithinAbs(0.0, 1e-6));
  }
  SECTION("gevrey_root s=2 admits b >= 1") {
    auto w = WeightFunction::gevrey_root(2.0);
    auto cert = certify_gamma(w, g);
    REQUIRE(cert.ok);
    CHECK(cert.b >= 1.0);
    // certificate validity: omega(t) >= a + b log(1+t) on the grid
    for (double t : g) CHECK(w(t) >= cert.a + cert.b * std::log1p(t) - 1e-9);
  }
  SECTION("omega = log(1+log(1+t)) fails every b>0") {
    std::vector<std::pair<double, double>> samples;
    for (double t : weight_grid(1e8)) samples.emplace_back(t, std::log1p(std::log1p(t)));
    auto w = WeightFunction::custom(std::move(samples));
    auto cert = certify_gamma(w, weight_grid(1e8));
    CHECK_FALSE(cert.ok);
  }
}

TEST_CASE("check_little_o") {
  SECTION("log_power beta=1 passes with tiny tail ratio") {
    auto w = WeightFunction::log_power(1.0);
    auto rep = check_little_o(w, weight_grid(1e6));
    CHECK(rep.verdict == Verdict::Pass);
    // oracle: log(1+1e6)/1e6 ~ 1.4e-5
    CHECK(rep.trace.back().second < 1e-4);
  }
  SECTION("omega(t)=t/2 fails (constant ratio)") {
    auto w = linear_weight(0.5, 1e6);
    CHECK(check_little_o(w, weight_grid(1e6)).verdict == Verdict::Fail);
  }
  SECTION("gevrey_root s=2 passes") {
    auto w = WeightFunction::gevrey_root(2.0);
    CHECK(check_little_o(w, weight_grid(1e6)).verdict == Verdict::Pass);
  }
}

TEST_CASE("compare_weights") {
  const auto g = weight_grid(1e8);
  SECTION("log vs sqrt passes") {
    auto w1 = WeightFunction::log_power(1.0, 1e8);
    auto w2 = WeightFunction::gevrey_root(2.0, 1e8);
    CHECK(compare_weights(w1, w2, g).verdict == Verdict::Pass);
  }
  SECTION("equal weights fail") {
    auto w = WeightFunction::log_power(1.0, 1e8);
    CHECK(compare_weights(w, w, g).verdict == Verdict::Fail);
  }
  SECTION("log^2 vs log fails") {
    auto w1 = WeightFunction::log_power(2.0, 1e8);
    auto w2 = WeightFunction::log_power(1.0, 1e8);
    CHECK(compare_weights(w1, w2, g).verdict == Verdict::Fail);
  }
}

TEST_CASE("young_conjugate closed form for gevrey_root s=2") {
  // phi(t) = e^{t/2}; Legendre oracle phi*(s) = 2s log(2s) - 2s for s >= 1/2
  auto w = WeightFunction::gevrey_root(2.0, 1e8);
  const auto s_grid = linspace(1.0, 50.0, 99);
  const auto tab = young_conjugate(w, s_grid);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    const double exact = 2 * s * std::log(2 * s) - 2 * s;
    CHECK_THAT(tab.values[i], Catch::Matchers::WithinRel(exact, 1e-3));
    CHECK_FALSE(tab.cap_limited[i]);
  }
}

TEST_CASE("young_conjugate at s=0 is -omega(1)") {
  for (auto w : {WeightFunction::log_power(2.0), WeightFunction::gevrey_root(2.0)}) {
    const double s0[1] = {0.0};
    const auto tab = young_conjugate(w, s0);
    CHECK_THAT(tab.values[0], Catch::Matchers::WithinAbs(-w(1.0), 1e-9));
  }
}

TEST_CASE("young_conjugate table invariants") {
  auto w = WeightFunction::log_power(2.0);
  const auto s_grid = linspace(0.0, 30.0, 121);
  const auto tab = young_conjugate(w, s_grid);
  // monotone and convex along s
  for (std::size_t i = 1; i < tab.values.size(); ++i)
    CHECK(tab.values[i] >= tab.values[i - 1] - 1e-9);
  for (std::size_t i = 1; i + 1 < tab.values.size(); ++i)
    CHECK(tab.values[i + 1] - 2 * tab.values[i] + tab.values[i - 1] >= -1e-6);
  // values[s]/s non-decreasing for s > 0
  double prev = -inf;
  for (std::size_t i = 1; i < tab.values.size(); ++i) {
    const double q = tab.values[i] / tab.s_grid[i];
    CHECK(q >= prev - 1e-9);
    prev = q;
  }
}

TEST_CASE("biconjugation recovers phi on the interior grid") {
  auto w = WeightFunction::log_power(2.0);
  // slopes phi'(t) stay below 30 on the interior t range, so the s-grid
  // [0, 30] covers every maximizer; fine spacing keeps the discrete-sup gap
  // below the tolerance
  const auto s_grid = linspace(0.0, 30.0, 4001);
  const auto tab = young_conjugate(w, s_grid);
  const double t_max = std::log(w.domain_cap());
  // interior 80% of the t range
  const auto ts = linspace(0.1 * t_max, 0.8 * t_max, 64);
  for (double t : ts) {
    const double phi = w.phi(t);
    const double bi = tab.conjugate_at(t);
    CHECK(std::abs(bi - phi) <= 1e-3 * (1.0 + std::abs(phi)));
  }
}
