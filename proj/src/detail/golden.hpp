#pragma once

#include <cmath>
#include <utility>

namespace pvthresh::detail {

struct LineMin {
  double x;
  double fx;
};

// Golden-section search for a local minimum of f on [lo, hi]. Stops when
// the bracket is narrower than rel_tol * (|x| + abs_floor) or after
// max_iter iterations.
template <class F>
LineMin golden_section(F&& f, double lo, double hi, double rel_tol = 1e-10,
                       int max_iter = 200, double abs_floor = 1e-12) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(b - a) <= rel_tol * (std::abs(c) + std::abs(d)) + abs_floor) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? LineMin{c, fc} : LineMin{d, fd};
}

}  // namespace pvthresh::detail
