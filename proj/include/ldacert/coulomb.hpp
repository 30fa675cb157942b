#pragma once

#include <complex>
#include <map>
#include <vector>

#include "ldacert/field.hpp"

namespace ldacert {

// Discrete transform of a zero-padded real field: coefficients
// c_m ~ int f(x) e^{-i p_m . x} dx on the reciprocal lattice of the padded box.
struct SpectralField {
  GridSpec padded;  // padded grid (same spacing, pad times the extent)
  int pad = 2;
  double cutoff = 0.0;  // truncation radius of the Coulomb kernel
  std::vector<std::complex<double>> coeffs;

  Vec3 wavevector(std::size_t id) const;
  double max_hermitian_asymmetry() const;
};

// Fraction of mass allowed in the outermost cell layer before the support is
// considered to touch the boundary.
inline constexpr double kSupportTolerance = 1e-6;

// cutoff <= 0 picks the diagonal of the support bounding box.
SpectralField spectral(const ScalarField& f, int pad = 2, double cutoff = 0.0);

// 4 pi (1 - cos(R |p|)) / |p|^2, with the limit 2 pi R^2 at p = 0.
double truncated_kernel(double p, double R);

// D(rho) = 1/2 int int rho(x) rho(y) / |x - y|.
double hartree(const ScalarField& rho);
double hartree(const Density& rho, int grid_n = 64);
double hartree(const SpectralField& s);

// int |rho^(p)|^2 / |p - q|^2 dp with rho^ the unitary transform.
double shifted_coulomb_integral(const SpectralField& s, const Vec3& q);

// (1_{A_alpha} * |.|^{-2})(x) at |x| = r, A_alpha = {1/(1+alpha) <= |y| <= 1/(1-alpha)}.
double annulus_conv(double r, double alpha);

struct AnnulusSup {
  double sup = 0.0;
  double ratio = 0.0;  // sup / (alpha log(1/alpha))
  double argmax = 0.0;
};
AnnulusSup annulus_sup(double alpha, const std::vector<double>& r_grid);
std::vector<double> annulus_default_grid();

struct LatticeKey {
  long i, j, k;
  auto operator<=>(const LatticeKey&) const = default;
};

// f(x) = sum_k c_k e^{i k.x}, k = (2 pi / ell) n.
using PeriodicCoeffs = std::map<LatticeKey, std::complex<double>>;

struct IdentityResult {
  double lhs = 0.0;
  double rhs = 0.0;
};

// (1/ell^3) int_{C_ell} D(f(. - tau) rho) dtau against 2 pi sum |c_k|^2 int |rho^|^2/|p-k|^2.
IdentityResult periodic_localization_identity(const ScalarField& rho, const PeriodicCoeffs& f,
                                              double ell, int n_tau = 8);

namespace serial {
double hartree(const SpectralField& s);
double shifted_coulomb_integral(const SpectralField& s, const Vec3& q);
}  // namespace serial

}  // namespace ldacert
