#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pvthresh/cli.hpp"
#include "pvthresh/csv_io.hpp"
#include "pvthresh/error.hpp"
#include "pvthresh/pvalues.hpp"

using namespace pvthresh;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "pvthresh_cli_io";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

ErrorCode parse_code(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_csv(in, "mem");
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::estimation_failure;
}

}  // namespace

TEST_CASE("rows are grouped by covariate") {
  std::istringstream in("x,y\n0.2,1\n0.2,3\n0.5,2\n0.2,5\n");
  const auto csv = parse_csv(in);
  REQUIRE(csv.data.size() == 2);
  CHECK(csv.data[0].x == 0.2);
  CHECK(csv.data[0].count() == 3);
  CHECK(csv.data[0].mean() == 3.0);
  CHECK(csv.data[1].count() == 1);
  CHECK(csv.map.identity);
  CHECK(csv.rows.size() == 4);
}

TEST_CASE("out-of-range covariates are rescaled") {
  const auto hours = ingest_csv(PVTHRESH_DATA_DIR "/gene_like_hours.csv");
  const auto unit = ingest_csv(PVTHRESH_DATA_DIR "/gene_like.csv");
  CHECK_FALSE(hours.map.identity);
  CHECK(hours.map.lo == 0.0);
  CHECK(hours.map.hi == 72.0);
  REQUIRE(hours.data.size() == unit.data.size());
  for (std::size_t i = 0; i < unit.data.size(); ++i) {
    CHECK(std::abs(hours.data[i].x - unit.data[i].x) < 1e-12);
    CHECK(hours.data[i].responses == unit.data[i].responses);
    CHECK(std::abs(hours.map.to_original(hours.data[i].x) - 9.0 * static_cast<double>(i)) < 1e-12);
  }
  std::istringstream lone("x,y\n1.5,1\n1.5,2\n");
  CHECK_THROWS_AS(parse_csv(lone), Error);
}

TEST_CASE("malformed input") {
  CHECK(parse_code("x,y\n") == ErrorCode::empty_file);
  CHECK(parse_code("") == ErrorCode::empty_file);
  CHECK(parse_code("a,b\n0.1,2\n") == ErrorCode::parse_error);
  CHECK(parse_code("x,y\n0.1,2\n0.2\n") == ErrorCode::parse_error);
  std::istringstream in("x,y\n0.1,2\n0.2,abc\n");
  try {
    parse_csv(in, "mem");
    FAIL("expected a parse failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_numeric);
    CHECK(std::string(e.what()).find("mem:3") != std::string::npos);
  }
  CHECK_THROWS_AS(ingest_csv(scratch("does-not-exist.csv")), Error);
}

TEST_CASE("binomial counts") {
  std::istringstream ok("x,y,count\n0.1,3,10\n0.5,7,10\n");
  const auto counts = binomial_counts(parse_csv(ok), std::nullopt);
  REQUIRE(counts.size() == 2);
  CHECK(counts[1].successes == 7);
  CHECK(counts[1].trials == 10);
  std::istringstream frac("x,y,count\n0.1,2.5,10\n");
  try {
    binomial_counts(parse_csv(frac), std::nullopt);
    FAIL("expected non-integer rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_integer_count);
  }
  std::istringstream bare("x,y\n0.1,2\n");
  const auto csv = parse_csv(bare);
  CHECK_THROWS_AS(binomial_counts(csv, std::nullopt), Error);
  CHECK(binomial_counts(csv, 5L)[0].trials == 5);
  CHECK_THROWS_AS(binomial_counts(csv, 1L), Error);
}

TEST_CASE("p-value CSV round trip is exact") {
  std::vector<PValuePoint> pts;
  for (int i = 1; i <= 25; ++i) pts.push_back({i / 26.0, std::exp(-i / 3.7) / 2.0});
  pts.push_back({0.999, 1e-300});
  const PValueSeries series(pts);
  const auto path = scratch("roundtrip.csv");
  write_pvalue_csv(path, series);
  const auto back = read_pvalue_series(path);
  REQUIRE(back.size() == series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(back[i].x == series[i].x);
    CHECK(back[i].z == series[i].z);
  }
}

TEST_CASE("estimate on a p-value series") {
  const auto in = write_file("series.csv", "x,z\n0.2,0.6\n0.4,0.5\n0.6,0.1\n0.8,0.0\n");
  const auto r = cli({"estimate", "-i", in.string()});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["d_hat"].get<double>() == 0.4);
  CHECK(j["sse"].get<double>() == doctest::Approx(0.02));
  const auto r3 = cli({"estimate", "-i", in.string(), "--fitter", "stump3"});
  REQUIRE(r3.status == 0);
  const auto j3 = nlohmann::json::parse(r3.out);
  CHECK(j3["left_level"].get<double>() == doctest::Approx(0.55));
  CHECK(j3["right_level"].get<double>() == doctest::Approx(0.05));
}

TEST_CASE("rescaling is transparent to the estimate") {
  const auto unit = cli({"estimate", "-i", PVTHRESH_DATA_DIR "/gene_like.csv"});
  const auto hours = cli({"estimate", "-i", PVTHRESH_DATA_DIR "/gene_like_hours.csv"});
  REQUIRE(unit.status == 0);
  REQUIRE(hours.status == 0);
  const auto a = nlohmann::json::parse(unit.out);
  const auto b = nlohmann::json::parse(hours.out);
  CHECK(std::abs(a["d_hat"].get<double>() - b["d_hat"].get<double>()) < 1e-12);
  CHECK(std::abs(a["tau_hat"].get<double>() - b["tau_hat"].get<double>()) < 1e-12);
  CHECK(std::abs(b["d_hat_original"].get<double>() - 72.0 * a["d_hat"].get<double>()) < 1e-9);
}

TEST_CASE("minmax regions on gene-like data") {
  const auto r = cli({"multi", "-i", PVTHRESH_DATA_DIR "/gene_like_hours.csv", "--min-range", "-1", "0.5",
                      "--max-range", "0.5", "2"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double min_b = j["min"]["b_hat_original"].get<double>();
  const double max_a = j["max"]["a_hat_original"].get<double>();
  CHECK(j["min"]["a_hat_original"].get<double>() == doctest::Approx(0.0));
  CHECK(min_b < max_a);
  CHECK(min_b >= 18.0 - 1e-9);
  CHECK(min_b <= 27.0 + 1e-9);
  CHECK(max_a >= 45.0 - 1e-9);
  CHECK(max_a <= 54.0 + 1e-9);
  CHECK(j["max"]["b_hat_original"].get<double>() == doctest::Approx(72.0));
  const auto bad = cli({"multi", "-i", PVTHRESH_DATA_DIR "/gene_like.csv", "--min-range", "0", "0.6",
                        "--max-range", "0.5", "2"});
  CHECK(bad.status == 2);
  CHECK(bad.err.find("overlapping-ranges") != std::string::npos);
}

TEST_CASE("exit statuses and error JSON") {
  const auto frac = write_file("frac.csv", "x,y,count\n0.1,2.5,10\n0.5,3,10\n");
  const auto r = cli({"estimate", "-i", frac.string(), "--dist", "binomial-exact", "--p0", "0.1"});
  CHECK(r.status == 2);
  const auto e = nlohmann::json::parse(r.err);
  CHECK(e["error"]["code"] == "non-integer-count");
  CHECK(e["error"]["exit_status"] == 2);
  CHECK(r.out.empty());

  const auto missing = cli({"estimate", "-i", scratch("absent.csv").string()});
  CHECK(missing.status == 3);

  const auto flat = write_file("flat.csv", "x,y\n0.1,1\n0.1,1\n0.5,2\n0.5,2\n");
  const auto degenerate = cli({"estimate", "-i", flat.string()});
  CHECK(degenerate.status == 4);
  CHECK(nlohmann::json::parse(degenerate.err)["error"]["code"] == "degenerate-variance");

  CHECK(cli({"simulate", "--model", "M9", "--reps", "10"}).status == 2);
  CHECK(cli({"estimate"}).status == 2);
  CHECK(cli({"frobnicate"}).status == 2);
  CHECK(cli({"--help"}).status == 0);
}

TEST_CASE("simulate writes byte-identical reports for a fixed seed") {
  const auto j1 = scratch("sim1.json"), j2 = scratch("sim2.json");
  const auto c1 = scratch("sim1.csv"), c2 = scratch("sim2.csv");
  const std::vector<std::string> base{"simulate", "--model", "M1", "--m", "5", "--n", "20",
                                      "--estimator", "method2", "--reps", "100", "--seed", "9"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1", "-o", j1.string(), "--csv", c1.string()});
  b.insert(b.end(), {"--threads", "3", "-o", j2.string(), "--csv", c2.string()});
  REQUIRE(cli(a).status == 0);
  REQUIRE(cli(b).status == 0);
  CHECK(slurp(j1) == slurp(j2));
  CHECK(slurp(c1) == slurp(c2));
  const auto j = nlohmann::json::parse(slurp(j1));
  CHECK(j["cells"].size() == 1);
  CHECK_FALSE(j["cells"][0].contains("wall_seconds"));
}

TEST_CASE("ci command reports all variants") {
  const auto r = cli({"ci", "-i", PVTHRESH_DATA_DIR "/queue_like.csv", "--block-size", "50",
                      "--iterations", "100", "--variant", "all", "--variance", "per-dose"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["intervals"].size() == 3);
  CHECK(j["intervals"][2]["heuristic"] == true);
  for (const auto& iv : j["intervals"]) CHECK(iv["lower"].get<double>() <= iv["upper"].get<double>());
  CHECK(cli({"ci", "-i", PVTHRESH_DATA_DIR "/queue_like.csv", "--block-size", "100"}).status == 2);
}
