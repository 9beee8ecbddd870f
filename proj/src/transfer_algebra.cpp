#include "splitaztec/transfer_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace splitaztec {

DeformedCoefficients deformed_expansion_coefficients(double eps, double alpha, double beta, double a) {
  if (!(a > 0.0 && a < 1.0) || !(eps > 0.0 && eps <= 1.0))
    throw ValidationError("deformed_expansion_coefficients: need a in (0,1), eps in (0,1]");
  const double e2 = eps * eps, a2 = a * a, a4 = a2 * a2;
  const double ep = (e2 + 1.0) * (e2 + 1.0);
  const double al2 = alpha * alpha, be2 = beta * beta;
  const double split = (al2 - be2) * (al2 - be2) / ((al2 + 1.0) * (al2 + 1.0) * (be2 + 1.0) * (be2 + 1.0));
  DeformedCoefficients c;
  c.c_plus = ep * (a2 + 1.0) * (a2 + 1.0) / e2;
  c.c_minus = ep / (e2 * (a2 - 1.0) * (a2 - 1.0));
  c.d_plus = e2 * (a2 - 1.0) * (a2 - 1.0) / (ep * a4);
  c.d_minus = e2 * a4 / (ep * (a2 + 1.0) * (a2 + 1.0));
  c.b_plus = (a4 - 1.0) * split / ((a * a2 + a) * (a * a2 + a));
  c.b_minus = -a2 * (a2 - 1.0) * split / (a2 + 1.0);
  return c;
}

double richardson_limit(const std::function<cd(double)>& f, double h0, int levels, cd* value) {
  if (levels < 2) throw ValidationError("richardson_limit: need at least two levels");
  // Neville table in h with ratio 2
  std::vector<cd> t(levels);
  for (int j = 0; j < levels; ++j) t[j] = f(h0 / std::ldexp(1.0, j));
  double err = 0.0;
  for (int k = 1; k < levels; ++k) {
    const double fac = std::ldexp(1.0, k);
    for (int j = levels - 1; j >= k; --j) {
      const cd prev = t[j];
      t[j] = (fac * t[j] - t[j - 1]) / (fac - 1.0);
      if (j == levels - 1) err = std::abs(t[j] - prev);
    }
  }
  if (value) *value = t[levels - 1];
  return err;
}

double estimate_pole_order(const std::function<cd(cd)>& f, cd z0, cd dir, double h0, int levels) {
  dir /= std::abs(dir);
  // p(h) = log2 |f(z0 + h/2 dir)| / |f(z0 + h dir)| -> p as h -> 0 with O(h) error
  auto p = [&](double h) {
    const double num = std::log(std::abs(f(z0 + 0.5 * h * dir)));
    const double den = std::log(std::abs(f(z0 + h * dir)));
    return cd((num - den) / std::log(2.0), 0.0);
  };
  cd v;
  richardson_limit(p, h0, levels, &v);
  return v.real();
}

}  // namespace splitaztec
