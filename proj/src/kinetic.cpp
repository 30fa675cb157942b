#include "ldacert/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "ldacert/bounds.hpp"
#include "ldacert/error.hpp"
#include "ldacert/optimize.hpp"
#include "ldacert/quadrature.hpp"

namespace ldacert {

namespace {

// int_0^1 u^2 / (1 + x u) du, x > -1
double psi(double x) {
  if (std::abs(x) < 0.1) {
    double sum = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
      sum += term / (k + 3);
      term *= -x;
    }
    return sum;
  }
  return (0.5 * x * x - x + std::log1p(x)) / (x * x * x);
}

void check(const Envelope& e) {
  if (!(e.eps > 0.0 && e.eps <= 1.0)) throw ParamError("envelope needs 0 < eps <= 1");
  if (!(e.lo() > 0.0)) throw ParamError("envelope support must stay in t > 0");
}

}  // namespace

double Envelope::operator()(double t) const {
  const double a = lo();
  if (t <= a || t >= hi()) return 0.0;
  const double s = t - a;
  return s <= eps ? height() * s * s : height() * (2.0 * eps - s) * (2.0 * eps - s);
}

double Envelope::derivative(double t) const {
  const double a = lo();
  if (t <= a || t >= hi()) return 0.0;
  const double s = t - a;
  return s <= eps ? 2.0 * height() * s : -2.0 * height() * (2.0 * eps - s);
}

Envelope eta_basic(double eps) {
  Envelope e{eps, 0.0, false};
  check(e);
  return e;
}

Envelope eta_shifted(double eps, double b) {
  Envelope e{eps, b, true};
  check(e);
  return e;
}

double envelope_minv(const Envelope& env) {
  check(env);
  const double a = env.lo(), c = env.hi(), e = env.eps;
  return 1.5 * (psi(e / a) / a + psi(-e / c) / c);
}

Moments moments(const Envelope& env, int d) {
  check(env);
  if (d < 1) throw ParamError("dimension must be at least 1");
  Moments m;
  const double e = env.eps, a = env.lo(), c = env.hi(), h = env.height();
  m.m0 = 1.0;
  m.minv = envelope_minv(env);
  const double power = 2.0 / d;
  auto weight = [&](double t) { return std::expm1(power * std::log(t)); };
  const auto left = integrate_adaptive([&](double s) { return h * s * s * weight(a + s); }, 0.0, e, 1e-10);
  const auto right = integrate_adaptive([&](double w) { return h * w * w * weight(c - w); }, 0.0, e, 1e-10);
  m.m2d_minus_1 = left.value + right.value;
  m.m2d = 1.0 + m.m2d_minus_1;
  // eta'^2 / eta = 4 h on the support
  m.fisher = 4.0 * h * (c * c * c - a * a * a) / 3.0;
  m.fisher0 = 12.0 / (e * e);
  return m;
}

double solve_b(double eps, int d) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ParamError("solve_b needs 0 < eps <= 1/2");
  if (d < 1) throw ParamError("dimension must be at least 1");
  auto f = [eps](double b) { return envelope_minv(Envelope{eps, b, true}) - 1.0; };
  double lo = 0.0, hi = 1.5;
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw SolverError("solve_b: no sign change on [0, 1.5]");
  std::uintmax_t iters = 200;
  const auto [x0, x1] =
      boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  double b = 0.5 * (x0 + x1);
  if (std::abs(f(x0)) < std::abs(f(b))) b = x0;
  if (std::abs(f(x1)) < std::abs(f(b))) b = x1;
  if (!(std::abs(f(b)) <= 1e-12)) throw SolverError("solve_b did not reach |minv - 1| <= 1e-12");
  return b;
}

double remark_shift(double eps) { return 1.0 - eps / 10.0 - 4.0 * eps * eps * eps / 350.0; }

double t_upper(const FunctionalSet& F, double eps, int d, double q, UpperVariant variant,
               const KineticConstants& k) {
  if (d != 3) throw ParamError("kinetic bounds are evaluated in dimension 3 only");
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  const double tf = std::pow(q, -2.0 / 3.0) * c_tf(3) * F.l53;
  if (variant == UpperVariant::small_eps_3d) {
    if (eps > 1.0) throw ParamError("the small-eps variant needs eps <= 1");
    return tf * (1.0 + eps * eps / 15.0) + 19.0 / (eps * eps) * F.kin;
  }
  const double s = 1.0 + std::sqrt(eps);
  return tf * (1.0 + k.kappa1 * eps) + k.kappa2 * s * s / eps * F.kin;
}

double t_lower_lt(const FunctionalSet& F, double q, double c) {
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  return std::pow(q, -2.0 / 3.0) * c * F.l53;
}

double t_lower_nam(const FunctionalSet& F, double eps, double q, double kappa) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParamError("Nam bound needs 0 < eps < 1");
  if (!(kappa > 0.0)) throw ParamError("kappa must be positive");
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  return std::pow(q, -2.0 / 3.0) * c_tf(3) * (1.0 - eps) * F.l53 - kappa / std::pow(eps, 3.0 + 4.0 / 3.0) * F.kin;
}

double t_lower_ho(const FunctionalSet& F) { return F.kin; }

KineticBand kinetic_band(const FunctionalSet& F, double q, int d, const KineticConstants& k, int grid_points) {
  if (d != 3) throw ParamError("kinetic bounds are evaluated in dimension 3 only");
  KineticBand band;
  const auto grid = log_grid(1e-4, 1.0, grid_points);
  double nam = -std::numeric_limits<double>::infinity();
  band.upper = std::numeric_limits<double>::infinity();
  for (double e : grid) {
    if (e < 1.0) {
      const double v = t_lower_nam(F, e, q, k.kappa_nam);
      if (v > nam) {
        nam = v;
        band.eps_lower = e;
      }
    }
    const double u = t_upper(F, e, d, q, UpperVariant::general, k);
    if (u < band.upper) {
      band.upper = u;
      band.eps_upper = e;
    }
  }
  const double c = k.c_lt > 0.0 ? k.c_lt : c_tf(3);
  band.lower = std::max({nam, t_lower_lt(F, q, c), t_lower_ho(F)});
  return band;
}

}  // namespace ldacert
