#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sligeo/error.hpp"
#include "sligeo/param_estimation.hpp"

using namespace sligeo;

TEST_CASE("constant data: zero cost and degenerate lambda") {
  const auto pts = fixture::random_points(25, 2, 21);
  const SampleSet s(pts, std::vector<double>(25, -4.0));
  for (auto mode : {BandwidthMode::fast, BandwidthMode::strict})
    CHECK(loo_cost(s, {}, 3, 50.0, 1.5, CostMetric::mae, mode) == 0.0);
  SliParams p;
  p.mean = -4.0;
  const auto ls = lambda_star(s, p);
  CHECK(ls.value == 0.0);
  CHECK(ls.degenerate);

  EstimationConfig cfg;
  cfg.k_values = {2};
  cfg.starts = 2;
  const auto m = fit(s, cfg);
  CHECK(m.cost == 0.0);
  CHECK_FALSE(m.variance_defined);
}

TEST_CASE("lambda star: two-point value and scaling") {
  const SampleSet s(PointSet(1, {0.0, 1.0}), {0.0, 2.0});
  SliParams p;
  p.k = 1;
  p.mu = 2.0;
  p.mean = 1.0;
  const auto ls = lambda_star(s, p);
  CHECK(ls.value == doctest::Approx(0.976190).epsilon(1e-6));
  CHECK_FALSE(ls.degenerate);

  const auto big = fixture::random_samples(40, 2, 22);
  SliParams q;
  q.mean = big.mean();
  q.c1 = 7.0;
  const double base = lambda_star(big, q).value;
  std::vector<double> scaled = big.values;
  for (double& v : scaled) v *= 3.0;
  q.mean *= 3.0;
  CHECK(lambda_star(SampleSet(big.points, scaled), q).value == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("LOO predictions match the reconstruction oracles") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto fam = kAllKernelFamilies[(seed * 3) % kAllKernelFamilies.size()];
    const std::string name(kernel_name(fam));
    CAPTURE(name);
    const auto s = fixture::random_samples(30, 2, 300 + seed);
    const auto pts = fixture::to_pts(s.points);
    const std::size_t k = 1 + seed % 3;
    const double mu = 1.3 + 0.2 * static_cast<double>(seed), c1 = 4.0 * static_cast<double>(seed);
    const auto strict = loo_predictions(s, {fam}, k, c1, mu, BandwidthMode::strict);
    const auto fast = loo_predictions(s, {fam}, k, c1, mu, BandwidthMode::fast);
    const auto ws = oracle::loo_strict(pts, s.values, k, mu, name, c1);
    const auto wf = oracle::loo_fast(pts, s.values, k, mu, name, c1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(strict[i] == doctest::Approx(ws[i]).epsilon(1e-9));
      CHECK(fast[i] == doctest::Approx(wf[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("three-point strict LOO by hand") {
  // Without the point at 0 the remaining pair {1, 3} has h = 2 mu = 4 and
  // the target at 0 is 1 and 3 away, h_p = 2 * 1 = 2 (first neighbor).
  const SampleSet s(PointSet(1, {0.0, 1.0, 3.0}), {0.0, 2.0, 4.0});
  const auto p = loo_predictions(s, {}, 1, 10.0, 2.0, BandwidthMode::strict);
  const auto want = oracle::loo_strict(fixture::to_pts(s.points), s.values, 1, 2.0, "spherical", 10.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(want[i]).epsilon(1e-12));
  // The reduced pair has mean 3, and the LOO value leans towards the nearer sample.
  CHECK(p[0] > 2.0);
  CHECK(p[0] < 3.0);
}

TEST_CASE("residual sign and cost metrics") {
  const auto s = fixture::random_samples(30, 2, 23);
  const auto pred = loo_predictions(s, {}, 3, 10.0, 1.5, BandwidthMode::fast);
  const auto res = loo_residuals(s, {}, 3, 10.0, 1.5, BandwidthMode::fast);
  double mae = 0.0, mse = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(res[i] == s.values[i] - pred[i]);
    mae += std::abs(res[i]);
    mse += res[i] * res[i];
  }
  CHECK(loo_cost(s, {}, 3, 10.0, 1.5, CostMetric::mae, BandwidthMode::fast) ==
        doctest::Approx(mae / 30.0).epsilon(1e-14));
  CHECK(loo_cost(s, {}, 3, 10.0, 1.5, CostMetric::rmse, BandwidthMode::fast) ==
        doctest::Approx(std::sqrt(mse / 30.0)).epsilon(1e-14));
}

TEST_CASE("LOO guards: too few samples and large k") {
  const SampleSet two(PointSet(1, {0.0, 1.0}), {1.0, 2.0});
  CHECK_THROWS_AS(loo_predictions(two, {}, 1, 1.0, 1.0, BandwidthMode::fast), InvalidArgument);
  const auto s = fixture::random_samples(5, 2, 24);
  CHECK_THROWS_AS(loo_predictions(s, {}, 4, 1.0, 1.0, BandwidthMode::strict), InvalidArgument);
  CHECK_NOTHROW(loo_predictions(s, {}, 3, 1.0, 1.0, BandwidthMode::strict));
}

TEST_CASE("worker count does not change LOO results") {
  const auto s = fixture::random_samples(200, 2, 25);
  for (auto mode : {BandwidthMode::fast, BandwidthMode::strict}) {
    const auto a = loo_predictions(s, {}, 3, 30.0, 1.7, mode, 1);
    const auto b = loo_predictions(s, {}, 3, 30.0, 1.7, mode, 5);
    CHECK(a == b);
  }
}

TEST_CASE("zero iterations return the initial parameters") {
  const auto s = fixture::random_samples(30, 2, 26);
  EstimationConfig cfg;
  cfg.k_values = {3};
  cfg.starts = 1;
  cfg.optimizer.max_iterations = 0;
  const auto m = fit(s, cfg);
  CHECK(m.params.c1 == 115.0);
  CHECK(m.params.mu == 1.5);
  CHECK(m.cost == loo_cost(s, {}, 3, 115.0, 1.5, CostMetric::mae, BandwidthMode::fast));
}

TEST_CASE("fit improves on the initial point and beats inverse distance weighting") {
  // Smooth field with mild noise.
  const auto pts = fixture::random_points(120, 2, 27);
  std::vector<double> v(pts.size());
  const auto noise = fixture::random_values(pts.size(), 28, -0.05, 0.05);
  for (std::size_t i = 0; i < pts.size(); ++i)
    v[i] = std::sin(0.6 * pts[i][0]) + std::cos(0.4 * pts[i][1]) + noise[i];
  const SampleSet s(pts, v);
  EstimationConfig cfg;
  cfg.starts = 3;
  const auto m = fit(s, cfg);
  CHECK(m.candidates.size() == 3);
  const double init = loo_cost(s, {}, m.params.k, 115.0, 1.5, CostMetric::mae, BandwidthMode::fast);
  CHECK(m.cost <= init);
  for (const auto& c : m.candidates) {
    CHECK(c.ok);
    CHECK(m.cost <= c.cost);
    CHECK(c.mu >= 0.5);
    CHECK(c.mu <= 5.0);
  }
  const auto idw = oracle::idw_loo(fixture::to_pts(pts), v);
  double idw_mae = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) idw_mae += std::abs(v[i] - idw[i]);
  idw_mae /= static_cast<double>(v.size());
  CHECK(m.cost < idw_mae);
  CHECK(m.params.lambda == doctest::Approx(lambda_star(s, m.params).value).epsilon(1e-12));

  const auto again = fit(s, cfg);
  CHECK(again.params.c1 == m.params.c1);
  CHECK(again.params.mu == m.params.mu);
}

TEST_CASE("configuration validation") {
  EstimationConfig cfg;
  cfg.kernels.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.mu_bounds = {2.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.k_values = {0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK(parse_bandwidth_mode("strict") == BandwidthMode::strict);
  CHECK_THROWS_AS(parse_bandwidth_mode("loose"), InvalidArgument);
}

TEST_CASE("every candidate failing raises a numerical error") {
  const auto s = fixture::random_samples(4, 2, 29);
  EstimationConfig cfg;
  cfg.k_values = {3};
  cfg.starts = 1;
  CHECK_THROWS_AS(fit(s, cfg), NumericalError);
}
