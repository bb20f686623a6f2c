#include "pvthresh/fitters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "detail/golden.hpp"
#include "pvthresh/error.hpp"

namespace pvthresh {

namespace {

void require_points(const PValueSeries& series) {
  if (series.empty()) throw Error(ErrorCode::empty_series, "p-value series is empty");
}

void require_level(double level) {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw Error(ErrorCode::invalid_probability, "stump level must lie in [0,1]");
  }
}

double split_at(const PValueSeries& series, std::size_t candidate) {
  return candidate == 0 ? 0.0 : series[candidate - 1].x;
}

// Log-spaced steepness nodes plus zero, shared by the start scan and the
// steepness step.
constexpr int kSteepnessNodes = 41;
constexpr double kLogSteepnessLo = -2.0;  // log10 of the smallest nonzero node
// Steepness values each cell search starts from.
constexpr std::array<double, 5> kStartSteepness = {0.1, 1.0, 10.0, 100.0, 1000.0};

std::array<double, kSteepnessNodes + 1> steepness_nodes() {
  std::array<double, kSteepnessNodes + 1> nodes{};
  const double log_hi = std::log10(kMaxSteepness);
  for (int k = 0; k < kSteepnessNodes; ++k) {
    nodes[k + 1] = std::pow(10.0, kLogSteepnessLo + (log_hi - kLogSteepnessLo) * k / (kSteepnessNodes - 1));
  }
  return nodes;
}

constexpr int kMaxSweeps = 200;
constexpr int kShortIter = 8;
constexpr int kLongIter = 500;
constexpr std::size_t kFinalists = 6;
constexpr double kRelTol = 1e-8;

// Mean squared residual of the sigmoid model on flat arrays.
class SigmoidObjective {
 public:
  explicit SigmoidObjective(const PValueSeries& series) : xs_(series.xs()), zs_(series.zs()) {}

  double operator()(double d, double steepness) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      const double r = zs_[i] - sigmoid_value(xs_[i], d, steepness);
      acc += r * r;
    }
    return acc / static_cast<double>(xs_.size());
  }

  const std::vector<double>& xs() const { return xs_; }

 private:
  std::vector<double> xs_;
  std::vector<double> zs_;
};

struct Point2 {
  double d;
  double a;
  double f;
};

// Scan grid over log-steepness plus zero, then golden refinement around the best node.
Point2 minimize_steepness(const SigmoidObjective& obj, Point2 cur) {
  static const auto nodes = steepness_nodes();
  std::size_t best = 0;
  double best_f = obj(cur.d, nodes[0]);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double f = obj(cur.d, nodes[k]);
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  Point2 out = cur;
  if (best_f < out.f) out = {cur.d, nodes[best], best_f};

  // Refine in log space between the neighbours of the best node; the
  // zero node is bracketed linearly.
  const std::size_t lo = best == 0 ? 0 : best - 1;
  const std::size_t hi = best + 1 < nodes.size() ? best + 1 : best;
  if (lo == 0) {
    auto f = [&](double a) { return obj(cur.d, a); };
    const auto r = detail::golden_section(f, 0.0, nodes[hi], 1e-10, 200);
    if (r.fx < out.f) out = {cur.d, r.x, r.fx};
  } else {
    auto f = [&](double la) { return obj(cur.d, std::pow(10.0, la)); };
    const auto r = detail::golden_section(f, std::log10(nodes[lo]), std::log10(nodes[hi]), 1e-12, 200);
    const double a = std::min(std::pow(10.0, r.x), kMaxSteepness);
    const double fa = obj(cur.d, a);
    if (fa < out.f) out = {cur.d, a, fa};
  }
  return out;
}

// 0, every covariate, cell midpoints and 1.
std::vector<double> split_nodes(const std::vector<double>& xs) {
  std::vector<double> nodes;
  nodes.reserve(2 * xs.size() + 2);
  nodes.push_back(0.0);
  double prev = 0.0;
  for (double x : xs) {
    if (x > prev) nodes.push_back(0.5 * (prev + x));
    if (x > nodes.back()) nodes.push_back(x);
    prev = x;
  }
  if (prev < 1.0) {
    nodes.push_back(0.5 * (prev + 1.0));
    nodes.push_back(1.0);
  }
  return nodes;
}

// Scan d over the split nodes, then golden refinement inside the two cells
// adjacent to the best node.
Point2 minimize_split(const SigmoidObjective& obj, const std::vector<double>& nodes, Point2 cur) {
  std::size_t best = 0;
  double best_f = obj(nodes[0], cur.a);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double f = obj(nodes[k], cur.a);
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  Point2 out = cur;
  if (best_f < out.f) out = {nodes[best], cur.a, best_f};
  auto f = [&](double d) { return obj(d, cur.a); };
  if (best > 0) {
    const auto r = detail::golden_section(f, nodes[best - 1], nodes[best], 1e-12, 200);
    if (r.fx < out.f) out = {r.x, cur.a, r.fx};
  }
  if (best + 1 < nodes.size()) {
    const auto r = detail::golden_section(f, nodes[best], nodes[best + 1], 1e-12, 200);
    if (r.fx < out.f) out = {r.x, cur.a, r.fx};
  }
  return out;
}

double logistic_tail(double t) {
  if (t > 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

// With d confined to [lo, hi] between neighbouring covariates, the points
// right of d are fixed and the model is the logistic curve 1/(1+e^{a x - b})
// with b = a d, smooth in (a, b) under a*lo <= b <= a*hi. Bounded
// Levenberg-Marquardt; on an active bound the step runs along that face.
class CellFit {
 public:
  CellFit(const std::vector<double>& xs, const std::vector<double>& zs, double lo, double hi)
      : lo_(lo), hi_(hi) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] > lo) {
        xr_.push_back(xs[i]);
        zr_.push_back(zs[i]);
      } else {
        left_ += (zs[i] - 0.5) * (zs[i] - 0.5);
      }
    }
  }

  bool trivial() const { return xr_.empty(); }

  // Returns (d, a, sum of squares) after at most max_iter steps.
  Point2 solve(double d, double a, int max_iter) const {
    State cur = eval(a, std::clamp(a * d, a * lo_, a * hi_));
    double lambda = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
      State next;
      if (!try_steps(cur, lambda, next)) {
        lambda *= 4.0;
        if (lambda > 1e12) break;
        continue;
      }
      const bool small = cur.sse - next.sse <= 1e-15 * cur.sse;
      const bool still = std::abs(next.a - cur.a) <= 1e-13 * cur.a &&
                         std::abs(next.b - cur.b) <= 1e-13 * (std::abs(cur.b) + cur.a);
      cur = next;
      lambda = std::max(lambda / 3.0, 1e-12);
      if (small || still) break;
    }
    return {cur.b / cur.a, cur.a, cur.sse};
  }

  static constexpr double kMinSteepness = 1e-4;

 private:
  struct State {
    double a = 0.0, b = 0.0, sse = 0.0;
    double haa = 0.0, hab = 0.0, hbb = 0.0;  // J^T J
    double ga = 0.0, gb = 0.0;               // J^T r
  };

  State eval(double a, double b) const {
    State st;
    st.a = a;
    st.b = b;
    st.sse = left_;
    for (std::size_t i = 0; i < xr_.size(); ++i) {
      const double sig = logistic_tail(a * xr_[i] - b);
      const double r = zr_[i] - sig;
      const double w = sig * (1.0 - sig);
      const double ja = w * xr_[i];  // dr/da
      const double jb = -w;          // dr/db
      st.sse += r * r;
      st.haa += ja * ja;
      st.hab += ja * jb;
      st.hbb += jb * jb;
      st.ga += ja * r;
      st.gb += jb * r;
    }
    return st;
  }

  // Projects (a, b) onto the feasible cone.
  std::pair<double, double> project(double a, double b) const {
    a = std::clamp(a, kMinSteepness, kMaxSteepness);
    return {a, std::clamp(b, a * lo_, a * hi_)};
  }

  // Full damped step, then 1-D steps along the d = lo, d = hi and fixed-a
  // faces; the best point that lowers the criterion wins.
  bool try_steps(const State& cur, double lambda, State& out) const {
    const double daa = cur.haa + lambda * std::max(cur.haa, 1e-300);
    const double dbb = cur.hbb + lambda * std::max(cur.hbb, 1e-300);
    bool found = false;
    auto consider = [&](double a, double b) {
      const auto [pa, pb] = project(a, b);
      if (pa == cur.a && pb == cur.b) return;
      const State st = eval(pa, pb);
      if (st.sse < cur.sse && (!found || st.sse < out.sse)) {
        out = st;
        found = true;
      }
    };
    const double det = daa * dbb - cur.hab * cur.hab;
    if (det > 0.0) {
      consider(cur.a - (dbb * cur.ga - cur.hab * cur.gb) / det,
               cur.b - (daa * cur.gb - cur.hab * cur.ga) / det);
    }
    const double d = cur.b / cur.a;
    const double tol = 1e-12 * (1.0 + std::abs(d));
    for (double edge : {lo_, hi_}) {
      if (std::abs(d - edge) > tol) continue;
      // Along b = a * edge the Jacobian column is ja + edge * jb.
      const double h = cur.haa + 2.0 * edge * cur.hab + edge * edge * cur.hbb;
      const double g = cur.ga + edge * cur.gb;
      if (h > 0.0) {
        const double na = cur.a - g / (h * (1.0 + lambda));
        consider(na, na * edge);
      }
    }
    if (cur.a <= kMinSteepness || cur.a >= kMaxSteepness) consider(cur.a, cur.b - cur.gb / dbb);
    return found;
  }

  double lo_, hi_;
  double left_ = 0.0;
  std::vector<double> xr_, zr_;
};
}  // namespace

double stump_criterion(const PValueSeries& series, double d, double left_level, double right_level) {
  double acc = 0.0;
  for (const PValuePoint& p : series.points()) {
    const double r = p.x <= d ? p.z - left_level : p.z - right_level;
    acc += r * r;
  }
  return acc;
}

StumpFit fit_stump_fixed(const PValueSeries& series, double left_level, double right_level) {
  require_points(series);
  require_level(left_level);
  require_level(right_level);
  StumpFit best;
  best.left_level = left_level;
  best.right_level = right_level;
  for (std::size_t k = 0; k <= series.size(); ++k) {
    const double d = split_at(series, k);
    const double sse = stump_criterion(series, d, left_level, right_level);
    if (k == 0 || sse < best.sse) {
      best.d_hat = d;
      best.sse = sse;
      best.candidate_index = k;
    }
  }
  best.left_identified = series[0].x <= best.d_hat;
  best.right_identified = series[series.size() - 1].x > best.d_hat;
  return best;
}

StumpFit fit_stump_adaptive(const PValueSeries& series) {
  require_points(series);
  double total = 0.0;
  for (const auto& p : series.points()) total += p.z;
  const double overall_mean = total / static_cast<double>(series.size());

  StumpFit best;
  for (std::size_t k = 0; k <= series.size(); ++k) {
    const double d = split_at(series, k);
    double left_sum = 0.0, right_sum = 0.0;
    std::size_t left_n = 0, right_n = 0;
    for (const auto& p : series.points()) {
      if (p.x <= d) {
        left_sum += p.z;
        ++left_n;
      } else {
        right_sum += p.z;
        ++right_n;
      }
    }
    const double alpha = left_n > 0 ? left_sum / static_cast<double>(left_n) : overall_mean;
    const double beta = right_n > 0 ? right_sum / static_cast<double>(right_n) : overall_mean;
    const double sse = stump_criterion(series, d, alpha, beta);
    if (k == 0 || sse < best.sse) {
      best = StumpFit{d, alpha, beta, sse, k, left_n > 0, right_n > 0};
    }
  }
  return best;
}

double sigmoid_value(double x, double d, double steepness) {
  if (x <= d) return 0.5;
  // e^{-a u} / (1 + e^{-a u}) == 1 / (1 + e^{a u}); overflow gives exactly 0.
  return 1.0 / (1.0 + std::exp(steepness * (x - d)));
}

double sigmoid_criterion(const PValueSeries& series, double d, double steepness) {
  require_points(series);
  return SigmoidObjective(series)(d, steepness);
}

SigmoidFit fit_sigmoid(const PValueSeries& series) {
  require_points(series);
  const SigmoidObjective obj(series);

  // Short bounded searches in every cell between neighbouring split nodes,
  // from a few steepness starts; the best few run to convergence and the
  // winner is polished by coordinate steps, which may leave its cell.
  const auto zs = series.zs();
  const auto nodes = split_nodes(obj.xs());
  // Cells run between consecutive covariates; midpoints add nothing there.
  std::vector<double> edges{0.0};
  for (double x : obj.xs()) {
    if (x > edges.back()) edges.push_back(x);
  }
  if (edges.back() < 1.0) edges.push_back(1.0);
  struct Start {
    double sse;
    std::size_t cell;
    double d, a;
  };
  std::vector<Start> starts;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const CellFit cell(obj.xs(), zs, edges[k], edges[k + 1]);
    if (cell.trivial()) continue;
    for (double a0 : kStartSteepness) {
      const Point2 p = cell.solve(0.5 * (edges[k] + edges[k + 1]), a0, kShortIter);
      starts.push_back({p.f, k, p.d, p.a});
      // Steep fits tend to sit just left of the next covariate.
      if (a0 >= 100.0) {
        const Point2 q = cell.solve(edges[k + 1], a0, kShortIter);
        starts.push_back({q.f, k, q.d, q.a});
      }
    }
  }
  const std::size_t keep = std::min(kFinalists, starts.size());
  std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(keep), starts.end(),
                    [](const Start& a, const Start& b) { return a.sse < b.sse; });
  Point2 best{0.0, 0.0, obj(0.0, 0.0)};
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& st = starts[i];
    const CellFit cell(obj.xs(), zs, edges[st.cell], edges[st.cell + 1]);
    const Point2 p = cell.solve(st.d, st.a, kLongIter);
    const double f = obj(p.d, p.a);
    if (f < best.f) best = {p.d, p.a, f};
  }
  for (int sweep = 0; sweep < kMaxSweeps && best.f > 0.0; ++sweep) {
    const double before = best.f;
    best = minimize_steepness(obj, best);
    best = minimize_split(obj, nodes, best);
    if (before - best.f <= kRelTol * before) break;
  }
  return {best.d, best.a, best.f};
}

double interval_criterion(const PValueSeries& series, const IntervalFit& interval,
                          double inside_level, double out_level) {
  double acc = 0.0;
  for (const PValuePoint& p : series.points()) {
    const bool inside = !interval.empty && p.x >= interval.a_hat && p.x <= interval.b_hat;
    const double r = inside ? p.z - inside_level : p.z - out_level;
    acc += r * r;
  }
  return acc;
}

IntervalFit fit_baseline_interval(const PValueSeries& series, double inside_level, double out_level) {
  require_points(series);
  require_level(inside_level);
  require_level(out_level);
  IntervalFit best{0.0, 0.0, true, 0.0};
  best.sse = interval_criterion(series, best, inside_level, out_level);
  const std::size_t n = series.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const IntervalFit cand{series[i].x, series[j].x, false, 0.0};
      const double sse = interval_criterion(series, cand, inside_level, out_level);
      if (sse < best.sse) {
        best = cand;
        best.sse = sse;
      }
    }
  }
  return best;
}

}  // namespace pvthresh
