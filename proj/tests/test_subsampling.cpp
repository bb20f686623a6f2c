#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pvthresh/csv_io.hpp"
#include "pvthresh/error.hpp"
#include "pvthresh/models.hpp"
#include "pvthresh/parallel.hpp"
#include "pvthresh/simulation.hpp"
#include "pvthresh/subsampling.hpp"

using namespace pvthresh;

namespace {

DoseResponseData m1_data(std::size_t m, std::size_t n, double sigma, std::uint64_t seed) {
  auto rng = make_stream(seed, stream_key("ci-test"), 0);
  return simulate_data(RegressionModel(ModelName::M1), m, n, sigma, rng);
}

}  // namespace

TEST_CASE("ceiling-rank quantile picks the textbook order statistic") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> v(1000);
  for (auto& x : v) x = nd(rng);
  std::sort(v.begin(), v.end());
  CHECK(type1_quantile(v, 0.025) == v[24]);
  CHECK(type1_quantile(v, 0.975) == v[974]);
  CHECK(type1_quantile(v, 0.0) == v[0]);
  CHECK(type1_quantile(v, 1.0) == v[999]);
  // Oracle: smallest order statistic whose empirical cdf reaches p.
  for (double p : {0.01, 0.05, 0.1, 0.333, 0.5, 0.9, 0.99}) {
    std::size_t k = 0;
    while (static_cast<double>(k + 1) / 1000.0 < p - 1e-12) ++k;
    CAPTURE(p);
    CHECK(type1_quantile(v, p) == v[k]);
  }
  const std::vector<double> none;
  CHECK_THROWS_AS(type1_quantile(none, 0.5), Error);
}

TEST_CASE("interval arithmetic") {
  const auto [lo, hi] = interval_from_quantiles(0.5, 1000, -2.0, 3.0);
  CHECK(lo == doctest::Approx(0.5 - 0.3).epsilon(1e-14));
  CHECK(hi == doctest::Approx(0.5 + 0.2).epsilon(1e-14));
  const auto ci = interval_from_statistics(0.4, 64, 0.95, std::vector<double>(200, 0.0));
  CHECK(ci.lower == 0.4);
  CHECK(ci.upper == 0.4);
  CHECK(ci.lower <= ci.d_hat);
  CHECK(ci.d_hat <= ci.upper);
}

TEST_CASE("config validation") {
  const auto data = m1_data(5, 20, 0.1, 1);
  SubsampleConfig c;
  c.iterations = 100;
  c.block_size = 1;
  CHECK_THROWS_AS(subsample_ci(data, c, VarianceModel::pooled()), Error);
  c.block_size = 20;
  CHECK_THROWS_AS(subsample_ci(data, c, VarianceModel::pooled()), Error);
  c.block_size = 10;
  c.iterations = 99;
  CHECK_THROWS_AS(subsample_ci(data, c, VarianceModel::pooled()), Error);
  c.iterations = 100;
  c.level = 1.0;
  CHECK_THROWS_AS(subsample_ci(data, c, VarianceModel::pooled()), Error);
  CHECK_THROWS_AS(variant_from_name("3"), Error);
  CHECK(variant_from_name("1b") == SubsampleVariant::v1b);
}

TEST_CASE("known baseline makes variants 1a and 1b identical") {
  const auto data = m1_data(10, 60, 0.1, 2);
  SubsampleConfig c;
  c.block_size = 25;
  c.iterations = 200;
  c.known_tau = 0.0;
  c.seed = 11;
  c.variant = SubsampleVariant::v1a;
  const auto a = subsample_ci(data, c, VarianceModel::known(0.1));
  c.variant = SubsampleVariant::v1b;
  const auto b = subsample_ci(data, c, VarianceModel::known(0.1));
  CHECK(a.statistics == b.statistics);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK_FALSE(a.heuristic);
  CHECK(a.lower <= a.d_hat);
  CHECK(a.d_hat <= a.upper);
}

TEST_CASE("variant 2 is flagged heuristic and deterministic across workers") {
  const auto data = m1_data(10, 60, 0.1, 3);
  SubsampleConfig c;
  c.block_size = 25;
  c.iterations = 150;
  c.variant = SubsampleVariant::v2;
  c.workers = 1;
  const auto a = subsample_ci(data, c, VarianceModel::pooled());
  c.workers = 3;
  const auto b = subsample_ci(data, c, VarianceModel::pooled());
  CHECK(a.heuristic);
  CHECK(a.statistics == b.statistics);
  CHECK(a.tau_hat.has_value());
  CHECK(a.statistics.size() == 150);
}

TEST_CASE("too many failed subsample fits abort") {
  // Only the first dose has spread; subsamples without it have zero pooled variance.
  std::vector<Dose> doses;
  for (int i = 1; i <= 10; ++i) {
    const double x = i / 11.0;
    doses.push_back(i == 1 ? Dose{x, {0.0, 1.0}} : Dose{x, {0.2 * i, 0.2 * i}});
  }
  const DoseResponseData data(doses);
  SubsampleConfig c;
  c.block_size = 2;
  c.iterations = 100;
  try {
    subsample_ci(data, c, VarianceModel::pooled());
    FAIL("expected an abort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::subsample_failure);
  }
}

TEST_CASE("queue-like data gives an interval of sensible width") {
  const auto csv = ingest_csv(PVTHRESH_DATA_DIR "/queue_like.csv");
  SubsampleConfig c;
  c.block_size = 50;
  c.iterations = 300;
  c.variant = SubsampleVariant::v1a;
  const auto ci = subsample_ci(csv.data, c, VarianceModel::per_dose());
  const double width = ci.upper - ci.lower;
  CHECK(width > 0.005);
  CHECK(width < 0.3);
  CHECK(ci.lower <= ci.d_hat);
  CHECK(ci.d_hat <= ci.upper);
  CHECK(std::abs(ci.d_hat - 0.15) < 0.1);
}
