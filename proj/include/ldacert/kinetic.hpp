#pragma once

#include "ldacert/field.hpp"

namespace ldacert {

// Piecewise-quadratic radial profile: two parabolic lobes of width eps,
// c (t - a)^2 on [a, a + eps] and c (a + 2 eps - t)^2 on [a + eps, a + 2 eps],
// c = 3 / (2 eps^3), a = 1 - eps b.  b = 0 is the basic profile.
struct Envelope {
  double eps = 0.1;
  double b = 0.0;
  bool shifted = false;

  double lo() const { return 1.0 - eps * b; }
  double hi() const { return lo() + 2.0 * eps; }
  double height() const { return 1.5 / (eps * eps * eps); }
  double operator()(double t) const;
  double derivative(double t) const;
};

Envelope eta_basic(double eps);
Envelope eta_shifted(double eps, double b);

struct Moments {
  double m0 = 0.0;
  double minv = 0.0;     // int eta / t
  double m2d = 0.0;      // int eta t^{2/d}
  double m2d_minus_1 = 0.0;
  double fisher = 0.0;   // int t^2 eta'^2 / eta
  double fisher0 = 0.0;  // int eta'^2 / eta
};

Moments moments(const Envelope& env, int d);
double envelope_minv(const Envelope& env);

// b with int eta_{eps,b} / t = 1, eps <= 1/2.
double solve_b(double eps, int d = 3);

// Remark profile shift 1 - eps/10 - 4 eps^3 / 350.
double remark_shift(double eps);

struct KineticConstants {
  double kappa1 = 1.0;
  double kappa2 = 48.0;
  double kappa_nam = 1.0;
  double c_lt = 0.0;  // <= 0 selects the conjectured value c_TF
};

enum class UpperVariant { general, small_eps_3d };

double t_upper(const FunctionalSet& F, double eps, int d, double q, UpperVariant variant,
               const KineticConstants& k = {});
double t_lower_lt(const FunctionalSet& F, double q, double c);
double t_lower_nam(const FunctionalSet& F, double eps, double q, double kappa = 1.0);
double t_lower_ho(const FunctionalSet& F);

struct KineticBand {
  double lower = 0.0;
  double upper = 0.0;
  double eps_lower = 0.0;
  double eps_upper = 0.0;
};

KineticBand kinetic_band(const FunctionalSet& F, double q, int d = 3, const KineticConstants& k = {},
                         int grid_points = 200);

}  // namespace ldacert
