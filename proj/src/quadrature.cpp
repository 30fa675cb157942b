#include "ldacert/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ldacert/error.hpp"

namespace ldacert {

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::array<GaussRule, 257> rules;
  static std::array<std::once_flag, 257> flags;
  if (n < 1 || n > 256) throw ParamError("gauss_legendre: order out of range");
  std::call_once(flags[n], [n] { rules[n] = build_rule(n); });
  return rules[n];
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, int max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  QuadResult r;
  double l1 = 0.0;
  r.value = gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &r.error, &l1);
  return r;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order) {
  const GaussRule& g = gauss_legendre(order);
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    double ps = 0.0;
    for (int i = 0; i < order; ++i) ps += g.w[i] * f(c + 0.5 * h * g.x[i]);
    s += 0.5 * h * ps;
  }
  return s;
}

}  // namespace ldacert
