#include "ldacert/optimize.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "ldacert/error.hpp"

namespace ldacert {

EpsOptimum optimize_eps(double A, double B, double D, double e1, double e2) {
  for (double c : {A, B, D})
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParamError("optimize_eps needs finite nonnegative coefficients");
  if (!(e1 >= 1.0) || !(e2 > e1)) throw ParamError("optimize_eps needs e2 > e1 >= 1");
  if (A == 0.0 && B == 0.0 && D == 0.0) throw DegenerateError("all coefficients are zero");
  auto g = [&](double e) { return A * e + B / std::pow(e, e1) + D / std::pow(e, e2); };
  if (A == 0.0) return {1.0, g(1.0)};
  if (B == 0.0 && D == 0.0) return {0.0, 0.0};

  // g' as a function of log eps; increasing
  auto dg = [&](double s) {
    const double e = std::exp(s);
    return A - e1 * B / std::pow(e, e1 + 1.0) - e2 * D / std::pow(e, e2 + 1.0);
  };
  double lo = 0.0, hi = 0.0;
  while (dg(lo) > 0.0) lo -= 1.0;
  while (dg(hi) < 0.0) hi += 1.0;
  if (lo == hi) return {1.0, g(1.0)};
  // relative tolerance 1e-10 on eps is an absolute tolerance on log eps
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10; };
  const auto [a, b] = boost::math::tools::bisect(dg, lo, hi, tol);
  const double eps = std::exp(0.5 * (a + b));
  return {eps, g(eps)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 2) throw ParamError("log grid needs 0 < lo <= hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw ParamError("slope fit needs at least 3 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ParamError("slope fit needs positive data");
    const double u = std::log(x[i]), v = std::log(y[i]);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ldacert
