#include "ldacert/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "ldacert/error.hpp"
#include "ldacert/optimize.hpp"
#include "ldacert/reduce.hpp"

namespace ldacert {

namespace {
constexpr double kPi = std::numbers::pi;
}

double c_tf(int d) {
  if (d < 1) throw ParamError("dimension must be at least 1");
  const double sphere = 2.0 * std::pow(kPi, 0.5 * d) / boost::math::tgamma(0.5 * d);
  return 4.0 * kPi * kPi * d / (d + 2.0) * std::pow(d / sphere, 2.0 / d);
}

double c_tf3_closed() { return std::pow(3.0, 5.0 / 3.0) * std::cbrt(4.0) * std::pow(kPi, 4.0 / 3.0) / 5.0; }

double lieb_oxford_gradient_constant() { return 0.6 * std::cbrt(4.5 * kPi); }

double dirac_exchange() { return -0.75 * std::cbrt(3.0 / kPi); }

double UegModel::operator()(double rho) const {
  if (eval) return eval(rho);
  if (rho <= 0.0) return 0.0;
  const double c = std::cbrt(rho);
  return A * rho * c * c + B * rho * c;
}

UegModel make_model(const std::string& spec, double q) {
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  const double A = std::pow(q, -2.0 / 3.0) * c_tf(3);
  if (spec == "tf-dirac") return {spec, A, dirac_exchange(), {}};
  if (spec == "tf-only") return {spec, A, 0.0, {}};
  if (spec.rfind("custom:", 0) == 0) {
    const std::string body = spec.substr(7);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw ParamError("custom model needs custom:<A>,<B>");
    try {
      std::size_t ia = 0, ib = 0;
      const std::string sa = body.substr(0, comma), sb = body.substr(comma + 1);
      const double a = std::stod(sa, &ia), b = std::stod(sb, &ib);
      if (ia != sa.size() || ib != sb.size() || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("");
      return {spec, a, b, {}};
    } catch (const std::logic_error&) {
      throw ParamError("cannot parse custom model '" + spec + "'");
    }
  }
  throw ParamError("unknown model '" + spec + "' (tf-dirac, tf-only, custom:<A>,<B>)");
}

double lda_energy(const FunctionalSet& F, const UegModel& model) {
  if (!model.power_law()) throw ParamError("closed-form LDA energy needs a power-law model");
  return model.A * F.l53 + model.B * F.l43;
}

double lda_energy(const Density& rho, const UegModel& model, const QuadOptions& opt) {
  if (model.power_law()) return lda_energy(functionals(rho, 0.5, 4.0, opt), model);
  const ScalarField f = std::holds_alternative<ScalarField>(rho) ? std::get<ScalarField>(rho)
                                                                   : sample(rho, default_grid(rho, opt.grid_n));
  const auto s = det_sum_n<1>(f.values.size(), [&](std::size_t i) { return std::array<double, 1>{model(f.values[i])}; });
  const double v = s[0] * f.spec.cell_volume();
  if (!std::isfinite(v)) throw AccuracyError("LDA energy quadrature is not finite", v);
  return v;
}

EnergyRange e_envelope(double rho0, double q) {
  if (!(rho0 >= 0.0)) throw ParamError("density value must be nonnegative");
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  const double c = std::cbrt(rho0);
  return {-kLiebOxford * rho0 * c, std::pow(q, -2.0 / 3.0) * c_tf(3) * rho0 * c * c};
}

DensityPairs sample_density_pairs(int n, unsigned long long seed, double lo, double hi) {
  if (n < 1 || !(lo > 0.0) || !(hi > lo)) throw ParamError("bad density pair sampling range");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  DensityPairs out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = std::exp(u(gen));
    const double b = std::exp(u(gen));
    out.emplace_back(a, b);
  }
  return out;
}

double model_lipschitz_probe(const UegModel& model, const DensityPairs& pairs) {
  double sup = 0.0;
  std::size_t used = 0;
  for (const auto& [a, b] : pairs) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw ParamError("densities must be nonnegative");
    if (a == b) continue;
    const double m = std::max(a, b);
    const double r = std::abs(model(a) - model(b)) / ((std::cbrt(m) + std::cbrt(m * m)) * std::abs(a - b));
    sup = std::max(sup, r);
    ++used;
  }
  if (used == 0) throw ParamError("Lipschitz probe needs at least one pair with distinct densities");
  return sup;
}

ContinuityConstants model_continuity_probe(const UegModel& model, const DensityPairs& pairs) {
  ContinuityConstants c;
  std::size_t used = 0;
  for (auto [a, b] : pairs) {
    const double rho = std::max(a, b), dr = std::min(a, b);
    if (!(dr > 0.0)) continue;
    const double e0 = model(rho), e1 = model(rho - dr);
    const double cr = std::cbrt(rho);
    c.upper = std::max(c.upper, (e1 - e0) / (dr * cr));
    c.lower = std::max(c.lower, (e0 - e1) / ((cr + cr * cr) * dr));
    ++used;
  }
  if (used == 0) throw ParamError("continuity probe needs pairs with 0 < rho' <= rho");
  return c;
}

double E_lower(const FunctionalSet& F, double q, double c_lt) {
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  return std::pow(q, -2.0 / 3.0) * c_lt * F.l53 - kLiebOxford * F.l43;
}

double E_upper(const FunctionalSet& F, double eps, double q, double kappa1, double kappa2) {
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  const double s = 1.0 + std::sqrt(eps);
  return std::pow(q, -2.0 / 3.0) * c_tf(3) * (1.0 + kappa1 * eps) * F.l53 + kappa2 * s * s / eps * F.kin;
}

double E_upper_min(const FunctionalSet& F, double q, double kappa1, double kappa2) {
  double best = std::numeric_limits<double>::infinity();
  for (double e : log_grid(1e-4, 1.0, 200)) best = std::min(best, E_upper(F, e, q, kappa1, kappa2));
  return best;
}

double lieb_oxford_gradient_bound(const FunctionalSet& F, double eps) {
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  return (lieb_oxford_gradient_constant() + eps) * F.l43 + kLiebOxfordGradientCoef / (eps * eps * eps) * F.tv;
}

LiebOxfordComparison lieb_oxford_gradient_optimum(const FunctionalSet& F) {
  LiebOxfordComparison c;
  c.plain = kLiebOxford * F.l43;
  const double B = kLiebOxfordGradientCoef * F.tv;
  if (F.l43 == 0.0 && B == 0.0) return c;
  const auto opt = optimize_eps(F.l43, B, 0.0, 3.0, 4.0);
  c.eps = opt.eps;
  c.value = lieb_oxford_gradient_constant() * F.l43 + opt.value;
  c.improves = c.value < c.plain;
  return c;
}

}  // namespace ldacert
