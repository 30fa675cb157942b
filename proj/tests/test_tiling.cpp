#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <doctest.h>

#include "ldacert/error.hpp"
#include "ldacert/field.hpp"
#include "ldacert/tiling.hpp"

using namespace ldacert;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

// (2 pi)^{-3/2} int_T w(x) e^{-i k.x} dx through collapsed coordinates and a 30-point product rule.
template <class W>
cplx simplex_quadrature(const Tetra& T, const Vec3& k, W w) {
  using G = boost::math::quadrature::gauss<double, 30>;
  const Vec3 e1 = T.v[1] - T.v[0], e2 = T.v[2] - T.v[0], e3 = T.v[3] - T.v[0];
  const double jac = std::abs(e1.dot(e2.cross(e3)));
  auto on01 = [](auto f) { return G::integrate([&](double t) { return f(t); }, 0.0, 1.0); };
  auto part = [&](bool imag) {
    return on01([&](double a) {
      return on01([&](double b) {
        return on01([&](double c) {
          const double u = a, v = (1 - a) * b, s = (1 - a) * (1 - b) * c;
          const Vec3 x = T.v[0] + u * e1 + v * e2 + s * e3;
          const double ph = -k.dot(x);
          return (imag ? std::sin(ph) : std::cos(ph)) * w(x) * (1 - a) * (1 - a) * (1 - b);
        });
      });
    });
  };
  return cplx(part(false), part(true)) * jac * std::pow(2.0 * kPi, -1.5);
}

Vec3 random_vector(std::mt19937_64& g, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(g), u(g), u(g)};
}

}  // namespace

TEST_CASE("unit cube decomposition") {
  const auto& tiles = unit_cube_tetrahedra();
  double total = 0.0;
  for (const auto& T : tiles) {
    CHECK(std::abs(T.volume() - 1.0 / 24.0) <= 1e-14);
    CHECK(is_rotation(T.mu.rotation));
    CHECK((T.mu.apply(tiles[0].v[0] - tiles[0].centroid()) - T.v[0]).norm() <= 1e-12);
    total += T.volume();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  int miss = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vec3 x(u(gen), u(gen), u(gen));
    int hits = 0;
    for (const auto& T : tiles) hits += T.contains(x);
    miss += hits != 1;
  }
  CHECK(miss < n / 1000);
}

TEST_CASE("chi and xi values") {
  const TilingConfig cfg{4.0, 0.5};
  const Tetra T = chi_tile(3, cfg);
  const double h = cfg.chi_height();
  CHECK(h == doctest::Approx(std::pow(1.0 - 0.125, -3.0)));
  CHECK(chi(3, cfg, T.centroid()) == doctest::Approx(h).epsilon(1e-14));
  CHECK(xi(3, cfg, xi_tile(3, cfg).centroid()) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 gen(5);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = random_vector(gen, 2.5);
    const double c = chi(3, cfg, x), s = xi(3, cfg, x);
    CHECK(c >= 0.0);
    CHECK(c <= h * (1 + 1e-14));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-14);
    if (xi_tile(3, cfg).distance(x) > cfg.smear_radius()) {
      CHECK(c == 0.0);
      CHECK(s == 0.0);
    }
  }
  CHECK_THROWS_AS(TilingConfig({1.0, 0.5}).validate(), ParamError);
}

TEST_CASE("partitions of unity") {
  const TilingConfig cfg{4.0, 0.5};
  std::mt19937_64 gen(17);
  for (int i = 0; i < 25; ++i) CHECK(xi_partition_sum(cfg, random_vector(gen, 1.9)) == doctest::Approx(1.0).epsilon(1e-6));
  // before translation averaging chi has holes
  const Vec3 c = chi_tile(0, cfg).centroid();
  CHECK(chi_partition_sum(cfg, c) == doctest::Approx(cfg.chi_height()).epsilon(1e-12));
  CHECK(partition_residual(cfg, 8, {Vec3::Zero(), Vec3(0.3, -1.1, 0.7)}) <= 1e-3);
  CHECK_THROWS_AS(partition_residual(cfg, 4, {Vec3::Zero()}), ParamError);
}

TEST_CASE("chi integrates to the tile volume") {
  const TilingConfig cfg{4.0, 0.5};
  double err = -1.0;
  for (int j : {0, 7, 23}) {
    const double v = chi_integral(j, cfg, &err);
    CHECK(std::abs(v / (64.0 / 24.0) - 1.0) <= 1e-5);
    CHECK(err >= 0.0);
  }
}

TEST_CASE("smeared cubature reproduces moments of the tetrahedron") {
  const Tetra T = unit_cube_tetrahedra()[5].scaled(3.0);
  const double r = 0.2;
  auto g = [](const Vec3& x, const SmearSample& s, double* o) {
    o[0] = s.value;
    o[1] = s.value * x.x();
    o[2] = s.value * x.z();
  };
  CubatureOptions opt;
  opt.rel_tol = 1e-5;
  const auto res = smeared_cubature(T, r, 3, g, opt);
  // the radial mollifier preserves mass and first moments
  CHECK(res.value[0] == doctest::Approx(T.volume()).epsilon(1e-6));
  CHECK(res.value[1] == doctest::Approx(T.volume() * T.centroid().x()).epsilon(1e-6));
  CHECK(res.value[2] == doctest::Approx(T.volume() * T.centroid().z()).epsilon(1e-6));
  const auto ser = serial::smeared_cubature(T, r, 3, g, opt);
  CHECK(ser.value == res.value);
  CHECK_THROWS_AS(smeared_cubature(T, 0.0, 1, g), ParamError);
}

TEST_CASE("transition layer energy scales as ell^2 / delta") {
  std::vector<double> K;
  for (auto [ell, delta] : {std::pair{4.0, 0.5}, std::pair{8.0, 1.0}, std::pair{4.0, 0.25}}) {
    const double e = chi_gradient_energy(0, TilingConfig{ell, delta});
    CHECK(e > 0.0);
    K.push_back(e * delta / (ell * ell));
  }
  // exact dilation covariance
  CHECK(K[1] == doctest::Approx(K[0]).epsilon(1e-3));
  CHECK(std::max(K[0], K[2]) / std::min(K[0], K[2]) <= 2.0);
}

TEST_CASE("tetrahedron Fourier transform") {
  const Tetra T = unit_cube_tetrahedra()[0];
  CHECK(std::abs(tetra_fourier(T, Vec3::Zero()) - std::pow(2.0 * kPi, -1.5) / 24.0) <= 1e-15);
  CHECK(std::abs(tetra_fourier(T, Vec3::Zero())) == doctest::Approx(0.0026455).epsilon(1e-4));

  std::mt19937_64 gen(23);
  for (int i = 0; i < 8; ++i) {
    const Vec3 k = random_vector(gen, 12.0);
    const cplx ref = simplex_quadrature(T, k, [](const Vec3&) { return 1.0; });
    CHECK(std::abs(tetra_fourier(T, k) - ref) <= 1e-8 * std::abs(ref) + 1e-15);
    const Vec3c m = tetra_moment(T, k);
    for (int a = 0; a < 3; ++a) {
      const cplx mref = simplex_quadrature(T, k, [a](const Vec3& x) { return x[a]; }) * std::pow(2.0 * kPi, 1.5);
      CHECK(std::abs(m[a] - mref) <= 1e-8 * std::abs(mref) + 1e-14);
    }
  }

  SUBCASE("degenerate directions use the series branch") {
    const Vec3 k(1e-7, 3.0, 0.0);  // nearly orthogonal to an edge
    const cplx ref = simplex_quadrature(T, k, [](const Vec3&) { return 1.0; });
    CHECK(std::abs(tetra_fourier(T, k) - ref) <= 1e-8 * std::abs(ref));
  }

  SUBCASE("relabeling and isometries") {
    const Vec3 k = random_vector(gen, 8.0);
    Tetra P = T;
    std::swap(P.v[0], P.v[2]);
    std::swap(P.v[1], P.v[3]);
    CHECK(std::abs(tetra_fourier(P, k) - tetra_fourier(T, k)) <= 1e-12);
    const Mat3 R = Eigen::AngleAxisd(0.7, Vec3(1, 2, -1).normalized()).toRotationMatrix();
    const Vec3 a(0.3, -0.4, 1.1);
    const cplx lhs = tetra_fourier(T.transformed(R, a), k);
    const cplx rhs = std::exp(cplx(0.0, -k.dot(a))) * tetra_fourier(T, R.transpose() * k);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }

  Tetra flat{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}, {}};
  CHECK_THROWS_AS(tetra_fourier(flat, Vec3(1, 1, 1)), GeometryError);
}

TEST_CASE("tile transforms sum to the cube transform") {
  const auto& tiles = unit_cube_tetrahedra();
  std::mt19937_64 gen(31);
  for (int i = 0; i < 5; ++i) {
    const Vec3 k = random_vector(gen, 9.0);
    cplx s = 0.0;
    for (const auto& T : tiles) s += tetra_fourier(T, k);
    double cube = std::pow(2.0 * kPi, -1.5);
    for (int a = 0; a < 3; ++a) cube *= std::sin(k[a] / 2) / (k[a] / 2);
    CHECK(std::abs(s - cube) <= 1e-12);
  }
  for (const Vec3 n : {Vec3(1, 0, 0), Vec3(1, -2, 0), Vec3(2, 1, 3)}) {
    cplx s = 0.0;
    for (const auto& T : tiles) s += tetra_fourier(T, 2 * kPi * n);
    CHECK(std::abs(s) <= 1e-10);
  }
}

TEST_CASE("divided differences of exp") {
  using V = std::vector<cplx>;
  const cplx a(0.3, 1.2), b(-0.4, 0.5), c(1.1, -0.2);
  CHECK(std::abs(divided_difference_exp(V{a}) - std::exp(a)) <= 1e-15);
  CHECK(std::abs(divided_difference_exp(V{a, b}) - (std::exp(a) - std::exp(b)) / (a - b)) <= 1e-14);
  const cplx ab = (std::exp(a) - std::exp(b)) / (a - b), bc = (std::exp(b) - std::exp(c)) / (b - c);
  CHECK(std::abs(divided_difference_exp(V{a, b, c}) - (ab - bc) / (a - c)) <= 1e-13);
  // confluent nodes give Taylor coefficients
  CHECK(std::abs(divided_difference_exp(V{a, a}) - std::exp(a)) <= 1e-14);
  CHECK(std::abs(divided_difference_exp(V{a, a, a, a}) - std::exp(a) / 6.0) <= 1e-14);
  // nearly coincident nodes stay accurate
  const cplx d = a + cplx(1e-9, 0.0);
  CHECK(std::abs(divided_difference_exp(V{a, d}) - std::exp(a) * std::expm1(1e-9) / 1e-9) <= 1e-12);
  CHECK_THROWS_AS(divided_difference_exp(V{}), ParamError);
}

TEST_CASE("reduced tetrahedra sums") {
  const Vec3 k(2 * kPi, 0, 0);
  CHECK(std::abs(reduced_sum(0.0, k)) <= 1e-10);
  std::vector<double> mag;
  for (double eps : {0.2, 0.1, 0.05}) mag.push_back(std::abs(reduced_sum(eps, k)));
  for (std::size_t i = 1; i < mag.size(); ++i) CHECK(mag[i - 1] / mag[i] == doctest::Approx(2.0).epsilon(0.25));
  CHECK_THROWS_AS(reduced_sum(0.1, Vec3::Zero()), ParamError);
  CHECK_THROWS_AS(reduced_sum(0.1, Vec3(1.0, 0, 0)), ParamError);
  CHECK(moment_M(k).norm() > 0.0);
  for (double eps : {0.2, 0.05}) CHECK(std::abs(f_eps_mean(eps)) <= 1e-10);
  for (double eps : {0.02, 0.2}) {
    const double r = lemma_ratio(eps, 2 * kPi * Vec3(1, 1, 0));
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
  }
}

TEST_CASE("direct localization error") {
  const ScalarField g = sample(Density{Gaussian{1.0, 1.0}}, centered_grid(7.0, 20));
  double prev = 1e300;
  for (double delta : {0.4, 0.2, 0.1}) {
    const auto e = tiling_direct_error(g, TilingConfig{4.0, delta}, 3);
    CHECK(e.value >= 0.0);
    CHECK(e.value < prev);
    CHECK(e.tail <= e.value);
    prev = e.value;
  }
  const auto a = tiling_direct_error(g, TilingConfig{4.0, 0.4}, 3);
  const auto b = serial::tiling_direct_error(g, TilingConfig{4.0, 0.4}, 3);
  CHECK(a.value == b.value);

  ScalarField zero = g;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK(tiling_direct_error(zero, TilingConfig{4.0, 0.4}, 3).value == 0.0);
  CHECK_THROWS_AS(tiling_direct_error(g, TilingConfig{4.0, 0.4}, 2), ParamError);
}
