#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ldacert/geometry.hpp"

namespace ldacert {

struct GridSpec {
  std::array<int, 3> n{2, 2, 2};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  double cell_volume() const { return h[0] * h[1] * h[2]; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * n[1] + j) * n[0] + i;
  }
  Vec3 point(int i, int j, int k) const {
    return {origin[0] + i * h[0], origin[1] + j * h[1], origin[2] + k * h[2]};
  }
  void validate() const;
};

// Cubic box [-half, half]^3 sampled at n points per axis, cell centred.
GridSpec centered_grid(double half, int n);

struct ScalarField {
  GridSpec spec;
  std::vector<double> values;  // x fastest

  double at(int i, int j, int k) const { return values[spec.index(i, j, k)]; }
  void validate(bool density = true) const;
};

struct Gaussian {
  double sigma = 1.0;
  double mass = 1.0;
};

// mass * eta_1(|x| / radius) / radius^3, eta_1 the unit bump
struct CompactBump {
  double radius = 1.0;
  double mass = 1.0;
};

// rho0 * (1_{ell T} * eta_delta), T the first tile of the unit cube
struct SmearedTetra {
  double rho0 = 1.0;
  double ell = 4.0;
  double delta = 0.5;
};

using Density = std::variant<Gaussian, CompactBump, SmearedTetra, ScalarField>;

struct FunctionalSet {
  double mass = 0.0;
  double l2 = 0.0;
  double l43 = 0.0;
  double l53 = 0.0;
  double kin = 0.0;  // int |grad sqrt rho|^2
  double tv = 0.0;   // int |grad rho|
  double thg = 0.0;  // int |grad rho^theta|^p
  double theta = 0.5;
  double p = 4.0;
  std::optional<double> hartree;
};

struct QuadOptions {
  double rel_tol = 1e-3;  // accuracy target for adaptive quadrature
  int grid_n = 64;        // sampling for analytic families when a grid is needed
};

double integrate(const ScalarField& f);

FunctionalSet functionals(const Density& rho, double theta, double p, const QuadOptions& opt = {});

// Central differences, one-sided second-order stencils at the boundary.
FunctionalSet grid_functionals(const ScalarField& rho, double theta, double p);

FunctionalSet scale_functionals(const FunctionalSet& F, double N);

// ||u||_inf^p / (ell^{p-3} int_T |grad u|^p) over the grid points inside T.
double sobolev_ratio(const ScalarField& u, const Tetra& domain, double p, double ell);

// Point evaluation for analytic families (and trilinear for grids).
double density_value(const Density& rho, const Vec3& x);
Vec3 density_gradient(const Density& rho, const Vec3& x);

ScalarField sample(const Density& rho, const GridSpec& spec);
GridSpec default_grid(const Density& rho, int n);

// The tetrahedron carrying a SmearedTetra density.
Tetra smeared_tetra_tile(const SmearedTetra& s);

// "builtin:gaussian,sigma=1,mass=1" or a path to an LDA-GRID file.
Density parse_density(const std::string& spec);
std::string describe(const Density& rho);

ScalarField read_grid(std::istream& in);
void write_grid(std::ostream& out, const ScalarField& f);
ScalarField read_grid_file(const std::string& path);
void write_grid_file(const std::string& path, const ScalarField& f);

namespace serial {
double integrate(const ScalarField& f);
FunctionalSet grid_functionals(const ScalarField& rho, double theta, double p);
}  // namespace serial

}  // namespace ldacert
