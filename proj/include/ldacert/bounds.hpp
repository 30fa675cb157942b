#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ldacert/field.hpp"

namespace ldacert {

// Semiclassical kinetic constant in dimension d.
double c_tf(int d);
// 3^{5/3} 4^{1/3} pi^{4/3} / 5
double c_tf3_closed();

inline constexpr double kLiebOxford = 1.64;
inline constexpr double kLiebOxfordGradientCoef = 0.001206;
// (3/5)(9 pi / 2)^{1/3}
double lieb_oxford_gradient_constant();
// -(3/4)(3/pi)^{1/3}
double dirac_exchange();

// e(rho) = A rho^{5/3} + B rho^{4/3}, or an arbitrary evaluator.
struct UegModel {
  std::string name;
  double A = 0.0;
  double B = 0.0;
  std::function<double(double)> eval;  // empty for the power-law family

  double operator()(double rho) const;
  bool power_law() const { return !eval; }
};

// "tf-dirac", "tf-only" or "custom:A,B".
UegModel make_model(const std::string& spec, double q);

double lda_energy(const FunctionalSet& F, const UegModel& model);
double lda_energy(const Density& rho, const UegModel& model, const QuadOptions& opt = {});

struct EnergyRange {
  double lo = 0.0;
  double hi = 0.0;
};
EnergyRange e_envelope(double rho0, double q);

using DensityPairs = std::vector<std::pair<double, double>>;
// n pairs log-uniform on [lo, hi]
DensityPairs sample_density_pairs(int n, unsigned long long seed, double lo = 1e-3, double hi = 1e3);
double model_lipschitz_probe(const UegModel& model, const DensityPairs& pairs);

// Smallest constants in e(rho) - C(rho^{1/3} + rho^{2/3}) rho' <= e(rho - rho') <= e(rho) + C rho' rho^{1/3}
// over pairs (rho, rho') with 0 <= rho' <= rho.
struct ContinuityConstants {
  double lower = 0.0;
  double upper = 0.0;
};
ContinuityConstants model_continuity_probe(const UegModel& model, const DensityPairs& pairs);

double E_lower(const FunctionalSet& F, double q, double c_lt);
double E_upper(const FunctionalSet& F, double eps, double q, double kappa1 = 1.0, double kappa2 = 48.0);
// minimum over the default 200-point log grid on [1e-4, 1]
double E_upper_min(const FunctionalSet& F, double q, double kappa1 = 1.0, double kappa2 = 48.0);

double lieb_oxford_gradient_bound(const FunctionalSet& F, double eps);

struct LiebOxfordComparison {
  double eps = 0.0;
  double value = 0.0;  // gradient bound at the optimum
  double plain = 0.0;  // 1.64 int rho^{4/3}
  bool improves = false;
};
LiebOxfordComparison lieb_oxford_gradient_optimum(const FunctionalSet& F);

}  // namespace ldacert
