#include "ldacert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "ldacert/bounds.hpp"
#include "ldacert/certificate.hpp"
#include "ldacert/coulomb.hpp"
#include "ldacert/error.hpp"
#include "ldacert/kinetic.hpp"
#include "ldacert/quadrature.hpp"
#include "ldacert/tiling.hpp"

namespace ldacert {

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult check_le(const std::string& suite, const std::string& name, double residual, const std::string& tol,
                     std::string detail = {}) {
  const double t = tolerance(tol);
  return {suite, name, residual <= t, residual, t, std::move(detail)};
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

double lobe_integral(const Envelope& e, const std::function<double(double)>& f) {
  const double a = e.lo(), m = a + e.eps, b = e.hi();
  return integrate_adaptive(f, a, m, 1e-13).value + integrate_adaptive(f, m, b, 1e-13).value;
}

std::vector<CheckResult> kinetic_suite() {
  const std::string s = "kinetic";
  std::vector<CheckResult> out;
  double mass = 0.0, fisher = 0.0;
  for (double eps : {0.5, 0.1, 0.01}) {
    const Envelope e = eta_basic(eps);
    mass = std::max(mass, std::abs(lobe_integral(e, [&](double t) { return e(t); }) - 1.0));
    const double f0 = lobe_integral(e, [&](double t) {
      const double v = e(t);
      return v > 0.0 ? e.derivative(t) * e.derivative(t) / v : 0.0;
    });
    fisher = std::max(fisher, std::abs(f0 * eps * eps / 12.0 - 1.0));
  }
  out.push_back(check_le(s, "envelope_mass", mass, "envelope_mass_abs"));
  out.push_back(check_le(s, "envelope_fisher", fisher, "envelope_fisher_rel"));

  const std::vector<double> eps_b{0.1, 0.05, 0.025};
  std::vector<double> resid;
  double worst = 0.0;
  for (double eps : eps_b) {
    const double b = solve_b(eps);
    const double r = std::abs(b - (1.0 - eps / 10.0 - 3.0 * eps * eps * eps / 350.0));
    resid.push_back(r);
    worst = std::max(worst, r / (5.0 * std::pow(eps, 4)));
  }
  out.push_back(check_le(s, "b_expansion", worst, "unit_ratio", "max |b - expansion| / (5 eps^4)"));
  out.push_back(check_le(s, "b_residual_slope", std::abs(loglog_slope(eps_b, resid) - 4.0), "richardson_slope"));

  std::vector<double> coef;
  for (double eps : eps_b) coef.push_back(moments(eta_shifted(eps, solve_b(eps)), 3).m2d_minus_1 / (eps * eps));
  const double r1 = (4.0 * coef[1] - coef[0]) / 3.0, r2 = (4.0 * coef[2] - coef[1]) / 3.0;
  const double extrap = (16.0 * r2 - r1) / 15.0;
  out.push_back(check_le(s, "moment_coefficient", std::abs(extrap * 18.0 - 1.0), "moment_rel",
                         fmt::format("extrapolated {:.10g}", extrap)));

  int bad = 0;
  for (int i = 1; i <= 20; ++i) {
    const double eps = i / 20.0;
    const Moments m = moments(eta_shifted(eps, remark_shift(eps)), 3);
    if (m.minv > 1.0 || m.m2d > 1.0 + eps * eps / 15.0 || m.fisher > 19.0 / (eps * eps)) ++bad;
  }
  out.push_back(check_le(s, "remark_constants", bad, "zero", "violations over 20 eps"));
  return out;
}

std::vector<CheckResult> tiling_suite() {
  const std::string s = "tiling";
  std::vector<CheckResult> out;
  const auto& tiles = unit_cube_tetrahedra();
  double vol = 0.0;
  for (const auto& T : tiles) vol = std::max(vol, std::abs(T.volume() - 1.0 / 24.0));
  out.push_back(check_le(s, "tile_volumes", vol, "volume_abs"));

  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const int n = 20000;
  int good = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 x(u(gen), u(gen), u(gen));
    int hits = 0;
    for (const auto& T : tiles) hits += T.contains(x);
    good += hits == 1;
  }
  out.push_back(check_le(s, "exact_cover", 1.0 - static_cast<double>(good) / n, "cover_miss"));

  const TilingConfig cfg{4.0, 0.5};
  out.push_back(check_le(s, "partition_residual", partition_residual(cfg, 16, {Vec3::Zero()}), "partition"));

  double sum = 0.0;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const Vec3 k = 2.0 * kPi * Vec3(a, b, c);
        std::complex<double> z = 0.0;
        for (const auto& T : tiles) z += tetra_fourier(T, k);
        sum = std::max(sum, std::abs(z));
      }
  out.push_back(check_le(s, "transform_sum", sum, "transform_abs"));

  std::vector<double> sup;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    double m = 0.0;
    for (int a = -1; a <= 2; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          if (a || b || c) m = std::max(m, lemma_ratio(eps, 2.0 * kPi * Vec3(a, b, c)));
    sup.push_back(m);
  }
  double step = 0.0;
  for (std::size_t i = 1; i < sup.size(); ++i) step = std::max({step, sup[i] / sup[i - 1], sup[i - 1] / sup[i]});
  out.push_back(check_le(s, "lemma_ratio_stability", step, "factor_two", "largest change as eps halves"));
  return out;
}

std::vector<CheckResult> coulomb_suite() {
  const std::string s = "coulomb";
  std::vector<CheckResult> out;
  const double D = hartree(Density{Gaussian{1.0, 1.0}}, 64);
  out.push_back(check_le(s, "gaussian_hartree", std::abs(D * 2.0 * std::sqrt(kPi) - 1.0), "hartree_rel"));

  const ScalarField g = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, 32));
  PeriodicCoeffs f;
  f[{1, 0, 0}] = 0.5;
  f[{-1, 0, 0}] = 0.5;
  const auto id = periodic_localization_identity(g, f, 4.0, 8);
  out.push_back(check_le(s, "periodic_identity", std::abs(id.lhs / id.rhs - 1.0), "identity_rel"));

  std::vector<double> ratios;
  for (double a : {0.5, 0.25, 0.1, 0.05}) ratios.push_back(annulus_sup(a, annulus_default_grid()).ratio);
  out.push_back(check_le(s, "annulus_sup_stability", spread(ratios), "factor_two"));
  return out;
}

std::vector<CheckResult> lemmas_suite() {
  const std::string s = "lemmas";
  std::vector<CheckResult> out;
  int gates = 0;
  CertParams P;
  gates += !validate_params(P).accepted;
  P.theta = 0.9;
  gates += validate_params(P).accepted;
  P.theta = 0.5;
  P.p = 3.0;
  gates += validate_params(P).accepted;
  P.p = 4.0;
  P.theta = 0.3;
  P.variant = Variant::classical;
  gates += validate_params(P).accepted;
  P.theta = 0.5;
  gates += theta_exponent(P) != 7.0;
  out.push_back(check_le(s, "parameter_gates", gates, "zero"));

  const auto o = optimize_eps(1.0, 0.0, 1.0, 1.0, 15.0);
  out.push_back(check_le(s, "optimize_eps", std::abs(o.eps / std::pow(15.0, 1.0 / 16.0) - 1.0), "optimizer_rel"));

  SandwichViolations total;
  for (const auto& rho : density_corpus()) {
    const auto v = sandwich_check(functionals(rho, 0.5, 4.0));
    total.energy += v.energy;
    total.kinetic += v.kinetic;
    total.t_band += v.t_band;
  }
  out.push_back(check_le(s, "sandwich", total.energy + total.kinetic + total.t_band, "zero",
                         fmt::format("energy {} kinetic {} t_band {}", total.energy, total.kinetic, total.t_band)));

  const ScalarField g = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, 32));
  const double l2 = functionals(Density{Gaussian{1.0, 1.0}}, 0.5, 4.0).l2;
  std::vector<double> K;
  for (double delta : {0.4, 0.2, 0.1}) {
    const auto de = tiling_direct_error(g, TilingConfig{4.0, delta}, 3);
    K.push_back(de.value / (delta * delta * l2));
  }
  out.push_back(check_le(s, "direct_error_scaling", spread(K), "factor_two"));

  const auto up = scaling_sweep(FunctionalSet{1, 1, 1, 1, 1, 1, 1, 0.5, 4.0, {}}, CertParams{},
                                log_grid(1e4, 1e12, 6));
  out.push_back(check_le(s, "quantum_rate", std::abs(up.slope - 11.0 / 12.0), "slope_abs"));
  CertParams cl;
  cl.variant = Variant::classical;
  const auto uc = scaling_sweep(FunctionalSet{1, 1, 1, 1, 1, 1, 1, 0.5, 4.0, {}}, cl, log_grid(1e4, 1e12, 6));
  out.push_back(check_le(s, "classical_rate", std::abs(uc.slope - 5.0 / 6.0), "slope_abs"));
  return out;
}

}  // namespace

const std::vector<ToleranceEntry>& tolerance_table() {
  static const std::vector<ToleranceEntry> t{
      {"envelope_mass_abs", 1e-10, "|int eta_eps - 1|"},
      {"envelope_fisher_rel", 1e-8, "int eta'^2/eta against 12/eps^2"},
      {"unit_ratio", 1.0, "residual measured in units of its bound"},
      {"richardson_slope", 0.3, "|slope - 4| of the b_eps expansion residual"},
      {"moment_rel", 0.02, "extrapolated m2d coefficient against 1/18"},
      {"zero", 0.0, "count of violations"},
      {"volume_abs", 1e-14, "|tile volume - 1/24|"},
      {"cover_miss", 1e-3, "fraction of random points not in exactly one tile"},
      {"partition", 1e-4, "translation-averaged partition of unity residual"},
      {"transform_abs", 1e-10, "|sum of tile transforms| at nonzero reciprocal vectors"},
      {"factor_two", 2.0, "max/min ratio of a quantity expected to be stable"},
      {"hartree_rel", 5e-3, "Gaussian Hartree energy against 1/(2 sqrt pi)"},
      {"identity_rel", 1e-2, "periodic localization identity lhs/rhs - 1"},
      {"annulus_rel", 1e-3, "annulus closed form against quadrature"},
      {"kin_rel", 5e-3, "Gaussian grid kinetic term against 3/(4 sigma^2)"},
      {"grid_order_ratio", 3.0, "minimum error ratio per grid halving"},
      {"slope_abs", 1e-2, "|fitted rate - exact rate|"},
      {"optimizer_rel", 1e-9, "optimize_eps against closed-form stationarity"},
      {"c_tf_abs", 1e-12, "general-d c_TF against the closed form at d = 3"},
      {"c_lo_grad_abs", 5e-5, "(3/5)(9 pi/2)^{1/3} against 1.4508"},
  };
  return t;
}

double tolerance(const std::string& name) {
  for (const auto& e : tolerance_table())
    if (e.name == name) return e.value;
  throw ParamError("unknown tolerance '" + name + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"kinetic", "tiling", "coulomb", "lemmas"};
  return n;
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite == "kinetic") return kinetic_suite();
  if (suite == "tiling") return tiling_suite();
  if (suite == "coulomb") return coulomb_suite();
  if (suite == "lemmas") return lemmas_suite();
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& n : suite_names()) {
      auto part = run_suite(n);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw ParamError("unknown suite '" + suite + "' (kinetic, tiling, coulomb, lemmas, all)");
}

std::string format_check(const CheckResult& c) {
  std::string line = fmt::format("{} {}/{} residual={:.6g} tol={:.6g}", c.pass ? "PASS" : "FAIL", c.suite, c.name,
                                 c.residual, c.tolerance);
  if (!c.detail.empty()) line += " (" + c.detail + ")";
  return line;
}

std::vector<Density> density_corpus() {
  return {Gaussian{1.0, 1.0},      Gaussian{0.5, 1.0},     Gaussian{2.0, 1.0},       Gaussian{1.0, 10.0},
          Gaussian{0.3, 0.5},      Gaussian{3.0, 100.0},   CompactBump{1.0, 1.0},    CompactBump{2.0, 5.0},
          CompactBump{0.5, 0.2},   SmearedTetra{1.0, 2.0, 0.5}};
}

SandwichViolations sandwich_check(const FunctionalSet& F, double q) {
  SandwichViolations v;
  const double c = c_tf(3);
  ++v.checked;
  if (E_lower(F, q, c) > E_upper_min(F, q)) ++v.energy;

  const KineticBand band = kinetic_band(F, q);
  const double slack = 1e-12 * std::max(1.0, std::abs(band.upper));
  for (double e : log_grid(1e-4, 1.0, 200)) {
    ++v.checked;
    if (e < 1.0 && t_lower_nam(F, e, q) > band.upper + slack) ++v.kinetic;
    const EnergyRange t = t_band_estimate(F, e, q, 1.0);
    if (t.hi < band.lower - slack || t.lo > band.upper + slack) ++v.t_band;
  }
  if (t_lower_lt(F, q, c) > band.upper + slack) ++v.kinetic;
  if (t_lower_ho(F) > band.upper + slack) ++v.kinetic;
  return v;
}

}  // namespace ldacert
