#pragma once

#include <vector>

namespace ldacert {

struct EpsOptimum {
  double eps = 0.0;
  double value = 0.0;
};

// Minimizes g(eps) = A eps + B / eps^e1 + D / eps^e2 over eps > 0.
EpsOptimum optimize_eps(double A, double B, double D, double e1, double e2);

// n logarithmically spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ldacert
