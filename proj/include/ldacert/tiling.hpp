#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ldacert/field.hpp"
#include "ldacert/geometry.hpp"
#include "ldacert/mollifier.hpp"

namespace ldacert {

using Vec3c = Eigen::Vector3cd;

// The 24 tiles of (-1/2, 1/2)^3 spanned by the cube center, a face center
// and the endpoints of one edge of that face.  Tile 0 uses the face x = 1/2
// and its edge at y = 1/2; tile j is R_j applied to tile 0, and mu_j maps
// the reference tile (tile 0 centred at its centroid) onto tile j.
const std::array<Tetra, 24>& unit_cube_tetrahedra();

struct TilingConfig {
  double ell = 4.0;
  double delta = 0.5;

  void validate() const;  // 0 < delta < ell / 2
  double smear_radius() const { return delta / 10.0; }
  double shrink() const { return 1.0 - delta / ell; }
  double chi_height() const;  // (1 - delta/ell)^{-3}
};

// Tiles carrying chi (scaled by ell, shrunk about the centroid) and xi.
Tetra chi_tile(int j, const TilingConfig& cfg);
Tetra xi_tile(int j, const TilingConfig& cfg);

double chi(int j, const TilingConfig& cfg, const Vec3& x);
double xi(int j, const TilingConfig& cfg, const Vec3& x);
SmearSample chi_sample(int j, const TilingConfig& cfg, const Vec3& x);

// sum over lattice translates and tiles of xi at x (equals 1 everywhere)
double xi_partition_sum(const TilingConfig& cfg, const Vec3& x);
// same for chi, without translation averaging
double chi_partition_sum(const TilingConfig& cfg, const Vec3& x);

// Cubature of g(x, (1_T * eta_r)(x), grad) over R^3.  The bounding cube of
// T + B_r is split into boxes classified as core (value 1), outside (dropped)
// or mixed; mixed boxes are refined to `leaf * r` and integrated with an
// order-`order` tensor Gauss rule, with an order-(order-1) rule for the error
// estimate.  With rel_tol > 0 the boxes carrying most of the estimated error
// are bisected until every component meets rel_tol or max_passes is reached.
struct CubatureOptions {
  int order = 5;
  double leaf = 2.0;
  bool core_constant = true;  // g does not depend on x in the core
  int core_order = 4;
  double core_max = 0.0;  // largest core box when !core_constant (0: no limit)
  double rel_tol = 0.0;
  int max_passes = 8;
};

using SmearIntegrand = std::function<void(const Vec3& x, const SmearSample& s, double* out)>;

struct CubatureResult {
  std::vector<double> value;
  std::vector<double> error;
  std::size_t leaves = 0;
};

CubatureResult smeared_cubature(const Tetra& T, double r, int m, const SmearIntegrand& g,
                                const CubatureOptions& opt = {});

double chi_integral(int j, const TilingConfig& cfg, double* error = nullptr);
// int |grad sqrt chi_j|^2
double chi_gradient_energy(int j, const TilingConfig& cfg);

// max over x of |(1/ell^3) int_{C_ell} sum_{z,j} chi_j(x - ell z - tau) dtau - 1|.
// The lattice sum is unfolded so the tau-integral becomes sum_j int chi_j,
// integrated with n_tau / 4 Gauss points per axis on boxes of n_tau r / 8.
double partition_residual(const TilingConfig& cfg, int n_tau, const std::vector<Vec3>& points);

// (2 pi)^{-3/2} int_T e^{-i k.x} dx
std::complex<double> tetra_fourier(const Tetra& T, const Vec3& k);
// int_T x e^{-i k.x} dx
Vec3c tetra_moment(const Tetra& T, const Vec3& k);

// Divided difference of exp at up to five (possibly repeated) nodes.
std::complex<double> divided_difference_exp(const std::vector<std::complex<double>>& z);

// (1 - eps)^{-3} sum_j (1_{mu_j (1 - eps) Delta})^(k)
std::complex<double> reduced_sum(double eps, const Vec3& k);
// int_{C_1} (x - sum_j z_j 1_{Delta_j}) e^{-i k.x} dx
Vec3c moment_M(const Vec3& k);
// |S(eps, k)|^2 / (eps^4 + eps^2 |k|^2 |M(k)|^2)
double lemma_ratio(double eps, const Vec3& k);

// int_{C_1} f_eps with f_eps = sum_j (1_{Delta_j} - (1-eps)^{-3} 1_{mu_j (1-eps) Delta} * eta_eps)
double f_eps_mean(double eps);

struct DirectError {
  double value = 0.0;
  double tail = 0.0;  // contribution of the outermost shell |n|_inf = k_max
  std::size_t terms = 0;
};

// (2 pi)^7 sum_{k in 2 pi Z^3, 0 < |k/2pi|_inf <= k_max}
//   |eta1^(eps k / 10)|^2 |S(eps, k)|^2 int |rho^(p)|^2 / |p - k/ell|^2 dp,  eps = delta / ell
DirectError tiling_direct_error(const ScalarField& rho, const TilingConfig& cfg, int k_max);
DirectError tiling_direct_error(const Density& rho, const TilingConfig& cfg, int k_max, int grid_n = 32);

FunctionalSet smeared_tetra_functionals(const SmearedTetra& s, double theta, double p,
                                        const QuadOptions& opt = {});

namespace serial {
DirectError tiling_direct_error(const ScalarField& rho, const TilingConfig& cfg, int k_max);
CubatureResult smeared_cubature(const Tetra& T, double r, int m, const SmearIntegrand& g,
                                const CubatureOptions& opt = {});
}  // namespace serial

}  // namespace ldacert
