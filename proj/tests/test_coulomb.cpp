#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "ldacert/coulomb.hpp"
#include "ldacert/error.hpp"
#include "ldacert/field.hpp"
#include "ldacert/mollifier.hpp"

using namespace ldacert;
constexpr double kPi = std::numbers::pi;

namespace {

// (1_A * |.|^{-2})(r e_z) as a double integral over radius s and polar angle.  With
// d = s - r and v = 1 - cos, the kernel is 1 / (d^2 + 2 r s v); the v-integral is split
// at the crossover v0 = d^2 / (2 r s) and taken in log v beyond it.
double annulus_oracle(double r, double alpha) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double s0 = 1.0 / (1.0 + alpha), s1 = 1.0 / (1.0 - alpha);
  auto shell = [&](double s, double d) {
    if (r == 0.0) return 4.0 * kPi;
    if (d < 1e-140) return 0.0;  // O(d log d) contribution
    const double k = 2.0 * r * s, v0 = std::min(2.0, d * d / k);
    auto near = [&](double v) { return 1.0 / (d * d + k * v); };
    auto far = [&](double w) {
      const double v = v0 * std::exp(w);
      return v / (d * d + k * v);
    };
    double inner = ts.integrate(near, 0.0, v0, 1e-12);
    if (v0 < 2.0) inner += ts.integrate(far, 0.0, std::log(2.0 / v0), 1e-12);
    return 2.0 * kPi * s * s * inner;
  };
  auto below = [&](double t) { return shell(r - t, t); };
  auto above = [&](double t) { return shell(r + t, t); };
  if (r > s0 && r < s1) return ts.integrate(below, 0.0, r - s0, 1e-10) + ts.integrate(above, 0.0, s1 - r, 1e-10);
  if (r <= s0) return ts.integrate(above, s0 - r, s1 - r, 1e-10);
  return ts.integrate(below, r - s1, r - s0, 1e-10);
}

// D of a radial density from its enclosed charge.
template <class Rho>
double radial_hartree(Rho rho, double rmax) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto potential = [&](double r) {
    const double inner = r > 0 ? ts.integrate([&](double s) { return rho(s) * s * s; }, 0.0, r) / r : 0.0;
    const double outer = r < rmax ? ts.integrate([&](double s) { return rho(s) * s; }, r, rmax) : 0.0;
    return 4.0 * kPi * (inner + outer);
  };
  return 0.5 * ts.integrate([&](double r) { return 4.0 * kPi * r * r * rho(r) * potential(r); }, 0.0, rmax, 1e-9);
}

}  // namespace

TEST_CASE("Hartree energy of a Gaussian on a 64^3 grid") {
  for (double sigma : {1.0, 0.6}) {
    const double D = hartree(Density{Gaussian{sigma, 2.0}}, 64);
    CHECK(std::abs(D / (4.0 / (2.0 * sigma * std::sqrt(kPi))) - 1.0) <= 5e-3);
  }
}

TEST_CASE("Hartree energy of a compact bump against the radial potential") {
  const double R = 1.5, mass = 1.0;
  const auto& M = Mollifier::unit();
  auto rho = [&](double r) { return mass * M.density(r / R) / (R * R * R); };
  const double ref = radial_hartree(rho, R);
  CHECK(hartree(Density{CompactBump{R, mass}}, 64) == doctest::Approx(ref).epsilon(5e-3));
}

TEST_CASE("Hartree energy scales as N^{5/3} under dilation") {
  const ScalarField a = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, 48));
  const ScalarField b = sample(Density{Gaussian{2.0, 8.0}}, centered_grid(16.0, 48));
  CHECK(hartree(b) / hartree(a) == doctest::Approx(std::pow(8.0, 5.0 / 3.0)).epsilon(1e-2));
}

TEST_CASE("Hartree energy is bilinear-quadratic and serial-identical") {
  const ScalarField a = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, 32));
  ScalarField b = a;
  for (auto& v : b.values) v *= 3.0;
  CHECK(hartree(b) == doctest::Approx(9.0 * hartree(a)).epsilon(1e-12));
  const SpectralField s = spectral(a);
  CHECK(hartree(s) == serial::hartree(s));
  CHECK(s.max_hermitian_asymmetry() <= 1e-12);
  const Vec3 q(0.7, -0.2, 0.4);
  CHECK(shifted_coulomb_integral(s, q) == serial::shifted_coulomb_integral(s, q));
}

TEST_CASE("densities touching the grid boundary are rejected") {
  const ScalarField f = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(2.0, 32));
  CHECK_THROWS_AS(hartree(f), SupportError);
}

TEST_CASE("truncated Coulomb kernel") {
  const double R = 3.0;
  CHECK(truncated_kernel(0.0, R) == doctest::Approx(2.0 * kPi * R * R));
  CHECK(truncated_kernel(1e-6, R) == doctest::Approx(2.0 * kPi * R * R).epsilon(1e-8));
  const double p = 2.3;
  CHECK(truncated_kernel(p, R) == doctest::Approx(4.0 * kPi * (1.0 - std::cos(R * p)) / (p * p)).epsilon(1e-14));
}

TEST_CASE("shifted Coulomb integral of a Gaussian") {
  // rho^(p) = (2 pi)^{-3/2} e^{-p^2/2}; int e^{-p^2} / |p - q|^2 dp reduced to one radial integral
  const ScalarField g = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, 48));
  const SpectralField s = spectral(g);
  boost::math::quadrature::exp_sinh<double> es;
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double qn : {0.0, 0.8, 2.0}) {
    double ref;
    if (qn == 0.0) {
      ref = 4.0 * kPi * es.integrate([](double p) { return std::exp(-p * p); }, 0.0,
                                      std::numeric_limits<double>::infinity());
    } else {
      // t is the distance of |p| from |q|
      auto lo = [&](double t) {
        const double p = qn - t;
        return 2.0 * kPi * p * std::exp(-p * p) * std::log((2.0 * qn - t) / t) / qn;
      };
      auto hi = [&](double t) {
        const double p = qn + t;
        return 2.0 * kPi * p * std::exp(-p * p) * std::log((2.0 * qn + t) / t) / qn;
      };
      ref = ts.integrate(lo, 0.0, qn) + es.integrate(hi, 0.0, std::numeric_limits<double>::infinity());
    }
    ref /= std::pow(2.0 * kPi, 3.0);
    CAPTURE(qn);
    CHECK(shifted_coulomb_integral(s, Vec3(qn, 0.0, 0.0)) == doctest::Approx(ref).epsilon(1e-2));
  }
}

TEST_CASE("periodic localization identity with one Fourier mode") {
  const ScalarField g = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, 32));
  PeriodicCoeffs f;
  f[{1, 0, 0}] = 0.5;
  f[{-1, 0, 0}] = 0.5;
  const auto id = periodic_localization_identity(g, f, 4.0, 8);
  CHECK(std::abs(id.lhs / id.rhs - 1.0) <= 1e-2);
  CHECK_THROWS_AS(periodic_localization_identity(g, f, 4.0, 4), ParamError);
}

TEST_CASE("annulus convolution against a direct quadrature") {
  for (double alpha : {0.5, 0.3, 0.2, 0.1, 0.05})
    for (double r : {0.0, 0.4, 0.97, 1.1, 2.5}) {
      CAPTURE(alpha);
      CAPTURE(r);
      const double ref = annulus_oracle(r, alpha);
      CHECK(std::abs(annulus_conv(r, alpha) / ref - 1.0) <= 1e-3);
    }
  CHECK_THROWS_AS(annulus_conv(1.0, 0.6), ParamError);
  CHECK_THROWS_AS(annulus_conv(-1.0, 0.2), ParamError);
}

TEST_CASE("annulus convolution properties") {
  // at r = 0 every point of the annulus is at distance |y|
  CHECK(annulus_conv(0.0, 0.25) == doctest::Approx(4.0 * kPi * (1.0 / 0.75 - 1.0 / 1.25)).epsilon(1e-14));
  // far field approaches |A| / r^2
  const double a = 0.2, vol = 4.0 * kPi / 3.0 * (std::pow(1.0 / (1 - a), 3) - std::pow(1.0 / (1 + a), 3));
  CHECK(annulus_conv(200.0, a) * 4e4 == doctest::Approx(vol).epsilon(1e-4));
  // the supremum bound with a universal constant: ratio stays bounded as alpha shrinks
  double prev = 1e300;
  for (double alpha : {0.5, 0.25, 0.1, 0.05}) {
    const auto s = annulus_sup(alpha, annulus_default_grid());
    CHECK(s.ratio > 0.0);
    CHECK(s.ratio < prev);
    CHECK(s.sup >= annulus_conv(1.0, alpha));
    prev = s.ratio;
  }
}
