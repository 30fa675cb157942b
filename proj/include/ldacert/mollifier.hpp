#pragma once

#include <vector>

#include "ldacert/geometry.hpp"

namespace ldacert {

// Radial bump eta_1(x) = exp(-1/(1-|x|^2)) / Z on the unit ball, with
// normalization and the radial primitives needed to integrate it over
// half-spaces and polyhedra.  Tables are built once and shared.
class Mollifier {
public:
  static const Mollifier& unit();

  double norm_const() const { return z_; }
  double density(double r) const;  // eta_1 at radius r

  double H(double u) const;  // int_0^u eta s^2 ds
  double J(double u) const;  // int_0^u H(s)/s^2 ds
  double L(double u) const;  // int_0^u eta s ds

  double plane_mass(double t) const;  // int over the plane {y.n = t} of eta
  double half_space(double d) const;  // mass of eta in {y.n <= d}

  // (2 pi)^{-3/2} int eta_1(x) e^{-i k.x} dx, |k| = k; tabulated on [0, 64]
  double fourier(double k) const;
  double fourier_direct(double k) const;

private:
  Mollifier();
  double interp(const std::vector<double>& f, const std::vector<double>& df, double u) const;

  double z_ = 1.0;
  int n_ = 0;
  double h_ = 0.0;
  std::vector<double> H_, dH_, L_, dL_, Lc_, dLc_, Sc_, dSc_;
  double k_step_ = 1e-3;
};

struct SmearSample {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
};

// (1_T * eta_r)(x) and its gradient, eta_r(y) = r^{-3} eta_1(y / r).
SmearSample smeared_indicator(const Tetra& T, double r, const Vec3& x);
// with the face planes of T precomputed
SmearSample smeared_indicator(const Tetra& T, const std::array<Plane, 4>& planes, double r,
                              const Vec3& x);

// Same, but always through the face-flux representation (no shortcuts);
// used to cross-check the half-space profile.
SmearSample smeared_indicator_flux(const Tetra& T, double r, const Vec3& x);

}  // namespace ldacert
