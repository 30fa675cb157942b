#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldacert/bounds.hpp"
#include "ldacert/field.hpp"
#include "ldacert/kinetic.hpp"
#include "ldacert/optimize.hpp"
#include "ldacert/tiling.hpp"

namespace ldacert {

enum class Variant { quantum, xc, classical };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct CertParams {
  double p = 4.0;
  double theta = 0.5;
  double C = 1.0;
  double q = 1.0;
  Variant variant = Variant::quantum;
  KineticConstants kinetic;
};

struct Validation {
  bool accepted = true;
  std::string reason;
};

Validation validate_params(const CertParams& params);
// throws ParamError with the rejection reason
void require_valid(const CertParams& params);

// 4p - 1 for quantum and xc, max{2p - 1, (1 + 3 theta) p - 4} for classical
double theta_exponent(const CertParams& params);

struct RhsBreakdown {
  double bulk = 0.0;
  double kin = 0.0;
  double theta = 0.0;
  double total = 0.0;
};

RhsBreakdown rhs(const FunctionalSet& F, double eps, const CertParams& params);
// q^{-2/3} c_TF int rho^{5/3}, subtracted from the LDA value for the xc band
double tf_subtraction(const FunctionalSet& F, double q);

struct Certificate {
  CertParams params;
  std::string model_name;
  double model_A = 0.0;
  double model_B = 0.0;
  double c_lt = 0.0;
  std::string density;
  FunctionalSet functionals;
  double lda = 0.0;
  double center = 0.0;  // lda, or lda minus the Thomas-Fermi term for xc
  double eps_star = 0.0;
  RhsBreakdown rhs;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double envelope_lo = 0.0;
  double envelope_hi = 0.0;
  std::vector<std::string> flags;
};

Certificate certify(const FunctionalSet& F, const CertParams& params, const UegModel& model);
Certificate certify(const Density& rho, const CertParams& params, const UegModel& model,
                    const QuadOptions& opt = {});

struct ScalingPoint {
  double N = 0.0;
  double eps = 0.0;
  double total = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  double slope = 0.0;
};

// With eps_exponent set, eps = N^{-eps_exponent} instead of the optimum.
ScalingResult scaling_sweep(const FunctionalSet& base, const CertParams& params, const std::vector<double>& N,
                            std::optional<double> eps_exponent = std::nullopt);

struct TetraBand {
  double e_model = 0.0;
  double upper_margin = 0.0;
  double avg_lower_margin = 0.0;
  double pointwise_lower_margin = 0.0;
  double pointwise_layer = 0.0;  // C delta (rho0^{5/3} + rho0^{4/3}) / ell
  double pointwise_bulk = 0.0;   // C (rho0^{23/15} + rho0^{18/15}) / ell^{2/5}
};

// The unnamed constant in the regime conditions is taken as 1.
TetraBand tetra_band(double rho0, double ell, double delta, double alpha, double C, const UegModel& model);

struct FlatnessError {
  double rho_min = 0.0;
  double rho_max = 0.0;
  double theta_coefficient = 0.0;
  std::map<std::string, double> upper;
  std::map<std::string, double> lower;
};

// Error terms for replacing rho on the smeared tile 1_{ell Delta_j} * eta_delta by its
// extreme values.  rho_min and rho_max come from a scan_n^3 grid over the support.
FlatnessError flatness_error(const Density& rho, const TilingConfig& cfg, int tile, double eps,
                             const CertParams& params, int scan_n = 32);

double subadditivity_gap(const FunctionalSet& F1, const FunctionalSet& F2, double D2, double eps, double C = 1.0);

EnergyRange t_band_estimate(const FunctionalSet& F, double eps, double q, double C = 1.0);

struct EllDelta {
  double delta = 0.0;
  double ell = 0.0;
  double coefficient = 0.0;  // delta^2 + 1 / (ell delta)
};
EllDelta tiling_scales(double eps);

}  // namespace ldacert
