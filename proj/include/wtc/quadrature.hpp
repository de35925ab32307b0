#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wtc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Adaptive 61-point Gauss-Kronrod integral of `f` over `[a, b]` (b may be
/// +infinity). Interior `breaks` split the range into panels so kinks of the
/// integrand fall on panel boundaries.
template <class F>
double integrate(F&& f, double a, double b, std::initializer_list<double> breaks = {},
                 double rel_tol = 1e-13) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a && c < b && std::isfinite(c)) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(b);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    double err = 0.0;
    total += Rule::integrate(f, cuts[i], cuts[i + 1], 20, rel_tol, &err);
  }
  return total;
}

}  // namespace wtc
