#pragma once

#include <functional>
#include <vector>

namespace ldacert {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with n points, 1 <= n <= 256; cached.
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

// Adaptive Gauss-Kronrod on [a, b] (b may be +inf).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-10, int max_depth = 18);

// Fixed composite Gauss-Legendre with `panels` equal panels of `order` nodes.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order);

}  // namespace ldacert
