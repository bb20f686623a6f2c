// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pvthresh/fitters.hpp"
#include "pvthresh/models.hpp"
#include "pvthresh/parallel.hpp"
#include "pvthresh/pvalues.hpp"
#include "pvthresh/simulation.hpp"
#include "pvthresh/subsampling.hpp"

using namespace pvthresh;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kReps = 2000;

int g_failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %2d: %s  %s  [%.1fs]\n", id, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

template <class F>
void criterion(int id, F body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, ok, detail.str(), s);
}

CellResult cell(const std::string& model, std::size_t m, std::size_t n, double sigma, EstimatorKind est) {
  SimulationConfig c;
  c.model = RegressionModel::from_name(model);
  c.m = m;
  c.n = n;
  c.sigma = sigma;
  c.estimator = est;
  c.reps = kReps;
  c.seed = kSeed;
  return run_cell(c);
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * want; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

const std::vector<Allocation> kRows = {{5, 5}, {5, 10}, {10, 10}, {10, 20}, {10, 50}, {20, 50}, {50, 100}};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& cmd) { return std::system((cmd + " 2>&1 >/dev/null").c_str()); }

}  // namespace

int main() {
  criterion(1, [](std::ostream& d) {
    struct Target {
      const char* model;
      std::size_t m, n;
      double want;
    };
    const Target targets[] = {{"M0", 10, 50, 0.030}, {"M0", 50, 100, 0.014}, {"M1", 10, 20, 0.068},
                              {"M1", 50, 100, 0.014}, {"M4", 10, 50, 0.033}};
    bool ok = true;
    for (const auto& t : targets) {
      const auto r = cell(t.model, t.m, t.n, 0.1, EstimatorKind::stump);
      const double tol = std::max(0.006, 0.2 * t.want);
      const bool hit = !r.failed && std::abs(r.rmse_d - t.want) <= tol;
      ok &= hit;
      d << t.model << "(" << t.m << "," << t.n << ")=" << fmt(r.rmse_d) << (hit ? " " : "! ");
    }
    return ok;
  });

  criterion(2, [](std::ostream& d) {
    bool ok = true;
    int worst_row = -1;
    double worst_gap = -1.0;
    for (const char* model : {"M0", "M1"}) {
      for (std::size_t k = 0; k < kRows.size(); ++k) {
        const auto s = cell(model, kRows[k].m, kRows[k].n, 0.1, EstimatorKind::stump);
        const auto g = cell(model, kRows[k].m, kRows[k].n, 0.1, EstimatorKind::sigmoid);
        const bool hit = !s.failed && !g.failed && s.rmse_d <= g.rmse_d;
        if (!hit) d << model << "(" << kRows[k].m << "," << kRows[k].n << ") stump " << fmt(s.rmse_d)
                    << " > sigmoid " << fmt(g.rmse_d) << "; ";
        ok &= hit;
        if (s.rmse_d - g.rmse_d > worst_gap || worst_row < 0) {
          worst_gap = s.rmse_d - g.rmse_d;
          worst_row = static_cast<int>(k);
        }
      }
    }
    d << "closest margin stump-sigmoid " << fmt(worst_gap);
    return ok;
  });

  criterion(3, [](std::ostream& d) {
    struct Target {
      std::size_t m, n;
      EstimatorKind est;
      double want_d, want_tau;
    };
    const Target targets[] = {{10, 50, EstimatorKind::method1, 0.087, 0.009},
                              {10, 50, EstimatorKind::method2, 0.084, 0.006},
                              {50, 100, EstimatorKind::method1, 0.072, 0.003},
                              {50, 100, EstimatorKind::method2, 0.071, 0.002}};
    bool ok = true;
    for (const auto& t : targets) {
      const auto r = cell("M3", t.m, t.n, 0.1, t.est);
      const bool hit = !r.failed && r.rmse_tau && within_rel(r.rmse_d, t.want_d, 0.25) &&
                       within_rel(*r.rmse_tau, t.want_tau, 0.25);
      ok &= hit;
      d << estimator_name(t.est) << "(" << t.m << "," << t.n << ") d=" << fmt(r.rmse_d)
        << " tau=" << fmt(r.rmse_tau.value_or(NAN)) << (hit ? "; " : "!; ");
    }
    return ok;
  });

  criterion(4, [](std::ostream& d) {
    const auto m1 = cell("M1tilde", 5, 5, 0.1, EstimatorKind::method1);
    const auto m2 = cell("M1tilde", 5, 5, 0.1, EstimatorKind::method2);
    d << "method1 " << fmt(m1.rmse_d) << " method2 " << fmt(m2.rmse_d) << " ratio "
      << fmt(m1.rmse_d / m2.rmse_d);
    return !m1.failed && !m2.failed && m1.rmse_d >= 3.0 * m2.rmse_d;
  });

  criterion(5, [](std::ostream& d) {
    const auto p2 = cell("M1", 10, 50, 0.3, EstimatorKind::kink_p2);
    const auto p1 = cell("M1", 10, 50, 0.3, EstimatorKind::stump);
    d << "P2 " << fmt(p2.rmse_d) << " (0.042) P1 " << fmt(p1.rmse_d) << " (0.085)";
    return !p2.failed && !p1.failed && within_rel(p2.rmse_d, 0.042, 0.25) &&
           within_rel(p1.rmse_d, 0.085, 0.25);
  });

  criterion(6, [](std::ostream& d) {
    auto rng = make_stream(kSeed, stream_key("uniformity"), 0);
    std::normal_distribution<double> noise(0.0, 0.4);
    constexpr double tau0 = -1.25, sigma = 0.4;
    std::vector<double> z;
    z.reserve(100000);
    while (z.size() < 100000) {
      std::vector<Dose> doses;
      for (int k = 1; k <= 1000; ++k) {
        Dose dose{k / 1001.0, {}};
        for (int j = 0; j < 4; ++j) dose.responses.push_back(tau0 + noise(rng));
        doses.push_back(std::move(dose));
      }
      for (const auto& p : pvalues_known_sigma(DoseResponseData(std::move(doses)), tau0, sigma).points()) {
        z.push_back(p.z);
      }
    }
    const double ks = oracle::ks_uniform(z);
    const double p = oracle::kolmogorov_sf(std::sqrt(static_cast<double>(z.size())) * ks);
    d << "KS D=" << ks << " p=" << p;
    return p > 1e-4;
  });

  criterion(7, [](std::ostream& d) {
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    double worst_sigmoid = -INFINITY;
    for (int rep = 0; rep < 1000; ++rep) {
      const std::size_t n = size(rng);
      std::vector<double> x;
      while (x.size() < n) {
        const double v = u(rng);
        if (std::find(x.begin(), x.end(), v) == x.end()) x.push_back(v);
      }
      std::sort(x.begin(), x.end());
      std::vector<double> z(n);
      for (auto& v : z) v = u(rng);
      std::vector<PValuePoint> pts;
      for (std::size_t i = 0; i < n; ++i) pts.push_back({x[i], z[i]});
      const PValueSeries s(pts);

      const auto f = fit_stump_fixed(s, 0.5, 0.0);
      const auto of = oracle::stump_min(x, z, 0.5, 0.0);
      const auto a = fit_stump_adaptive(s);
      const auto oa = oracle::adaptive_min(x, z);
      const auto iv = fit_baseline_interval(s, 0.5, 0.0);
      const auto oi = oracle::interval_min(x, z, 0.5, 0.0);
      const bool exact = f.d_hat == of.d && std::abs(f.sse - of.sse) <= 1e-12 && a.d_hat == oa.d &&
                         std::abs(a.sse - oa.sse) <= 1e-12 && iv.empty == oi.empty && iv.a_hat == oi.a &&
                         iv.b_hat == oi.b && std::abs(iv.sse - oi.sse) <= 1e-12;
      if (!exact) ++mismatches;
      const auto g = fit_sigmoid(s);
      const double gap = g.sse - oracle::sigmoid_grid_min(x, z);
      worst_sigmoid = std::max(worst_sigmoid, gap);
      if (gap > 1e-9) ++mismatches;
    }
    d << "mismatches " << mismatches << "/1000, max sigmoid excess over grid " << worst_sigmoid;
    return mismatches == 0;
  });

  criterion(8, [](std::ostream& d) {
    bool ok = true;
    int checked = 0;
    for (const auto& model : {"M0", "M1", "M2", "M3", "M4", "M5"}) {
      for (auto est : {EstimatorKind::stump, EstimatorKind::method1, EstimatorKind::method2}) {
        const auto small = cell(model, 5, 5, 0.1, est);
        const auto big = cell(model, 50, 100, 0.1, est);
        const bool hit = !small.failed && !big.failed && big.rmse_d < small.rmse_d;
        ++checked;
        if (!hit) {
          d << model << "/" << estimator_name(est) << " " << fmt(big.rmse_d) << " >= " << fmt(small.rmse_d)
            << "; ";
        }
        ok &= hit;
      }
    }
    d << checked << " model/estimator pairs";
    return ok;
  });

  criterion(9, [](std::ostream& d) {
    const RegressionModel model(ModelName::M1);
    const double d0 = model.threshold();
    constexpr int outer = 200;
    int covered = 0;
    bool identical = true;
    double width = 0.0;
    for (int r = 0; r < outer; ++r) {
      auto rng = make_stream(kSeed, stream_key("coverage"), static_cast<std::uint64_t>(r));
      const auto data = simulate_data(model, 10, 100, 0.1, rng);
      SubsampleConfig c;
      c.block_size = 50;
      c.iterations = 500;
      c.known_tau = 0.0;
      c.seed = kSeed + static_cast<std::uint64_t>(r);
      c.variant = SubsampleVariant::v1a;
      const auto a = subsample_ci(data, c, VarianceModel::known(0.1));
      if (a.lower <= d0 && d0 <= a.upper) ++covered;
      width += a.upper - a.lower;
      if (r < 10) {
        c.variant = SubsampleVariant::v1b;
        const auto b = subsample_ci(data, c, VarianceModel::known(0.1));
        identical &= a.statistics == b.statistics && a.lower == b.lower && a.upper == b.upper;
      }
    }
    const double coverage = static_cast<double>(covered) / outer;
    d << "coverage " << fmt(coverage) << " mean width " << fmt(width / outer) << ", 1a==1b "
      << (identical ? "yes" : "no");
    return coverage >= 0.85 && coverage <= 1.0 && identical;
  });

  criterion(10, [](std::ostream& d) {
    const fs::path dir = fs::temp_directory_path() / "pvthresh_acceptance";
    fs::create_directories(dir);
    const std::string cli = PVTHRESH_CLI_PATH;
    const std::string data = PVTHRESH_DATA_DIR "/queue_like.csv";
    bool ok = true;
    for (const char* threads : {"1", "2", "4"}) {
      const std::string t = threads;
      const auto sim = cli + " simulate --model M3 --m 10 --n 50 --estimator method2 --reps 300 --seed 5" +
                       " --threads " + t + " -o " + (dir / ("sim" + t + ".json")).string() + " --csv " +
                       (dir / ("sim" + t + ".csv")).string();
      const auto ci = cli + " ci -i " + data + " --block-size 50 --iterations 200 --variant all" +
                      " --variance per-dose --seed 5 --threads " + t + " -o " +
                      (dir / ("ci" + t + ".json")).string() + " --csv " + (dir / ("ci" + t + ".csv")).string();
      ok &= run(sim) == 0 && run(ci) == 0;
    }
    for (const char* stem : {"sim", "ci"}) {
      for (const char* ext : {".json", ".csv"}) {
        const auto ref = slurp(dir / (std::string(stem) + "1" + ext));
        ok &= !ref.empty();
        for (const char* t : {"2", "4"}) ok &= slurp(dir / (std::string(stem) + t + ext)) == ref;
      }
    }
    d << "simulate and ci reports at 1, 2, 4 threads " << (ok ? "byte-identical" : "differ");
    return ok;
  });

  std::printf("%s: %d criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
