#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <doctest.h>

#include "ldacert/bounds.hpp"
#include "ldacert/error.hpp"
#include "ldacert/field.hpp"
#include "ldacert/optimize.hpp"

using namespace ldacert;
constexpr double kPi = std::numbers::pi;

namespace {
FunctionalSet gaussian_unit() { return functionals(Density{Gaussian{1.0, 1.0}}, 0.5, 4.0); }
}  // namespace

TEST_CASE("semiclassical constants") {
  CHECK(std::abs(c_tf(3) - c_tf3_closed()) <= 1e-12);
  CHECK(c_tf(3) == doctest::Approx(9.1156).epsilon(1e-5));
  CHECK(c_tf(1) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-14));
  CHECK(c_tf(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(c_tf(0), ParamError);
  CHECK(std::abs(lieb_oxford_gradient_constant() - 1.4508) <= 5e-5);
  CHECK(dirac_exchange() == doctest::Approx(-0.7386).epsilon(1e-4));
}

TEST_CASE("model construction") {
  const UegModel m = make_model("tf-dirac", 1.0);
  CHECK(m.A == c_tf(3));
  CHECK(m.B == dirac_exchange());
  CHECK(m.power_law());
  CHECK(m(0.0) == 0.0);
  CHECK(m(8.0) == doctest::Approx(m.A * 32.0 + m.B * 16.0).epsilon(1e-14));
  CHECK(make_model("tf-dirac", 2.0).A == doctest::Approx(std::pow(2.0, -2.0 / 3.0) * c_tf(3)));
  CHECK(make_model("tf-only", 1.0).B == 0.0);
  const UegModel c = make_model("custom:2.5,-1e-1", 1.0);
  CHECK(c.A == 2.5);
  CHECK(c.B == -0.1);
  CHECK_THROWS_AS(make_model("custom:2.5", 1.0), ParamError);
  CHECK_THROWS_AS(make_model("custom:2.5,x", 1.0), ParamError);
  CHECK_THROWS_AS(make_model("pbe", 1.0), ParamError);
  CHECK_THROWS_AS(make_model("tf-dirac", 0.5), ParamError);

  // continuity of the default model near zero
  for (double r : {1e-12, 1e-9, 1e-6}) CHECK(std::abs(m(r)) <= 1e-3 * std::cbrt(r));
}

TEST_CASE("LDA energy") {
  const UegModel m = make_model("tf-dirac", 1.0);
  const double e = lda_energy(Density{Gaussian{1.0, 1.0}}, m);
  CHECK(e == doctest::Approx(0.4828).epsilon(1e-2));
  CHECK(e == doctest::Approx(9.1156 * 0.073968 - 0.7386 * 0.25911).epsilon(2e-4));
  CHECK(lda_energy(FunctionalSet{}, m) == 0.0);

  // an evaluator-backed copy of the same model goes through grid quadrature
  UegModel g = m;
  g.eval = [A = m.A, B = m.B](double r) { return r > 0 ? A * std::pow(r, 5.0 / 3.0) + B * std::pow(r, 4.0 / 3.0) : 0.0; };
  QuadOptions opt;
  opt.grid_n = 96;
  CHECK(lda_energy(Density{Gaussian{1.0, 1.0}}, g, opt) == doctest::Approx(e).epsilon(1e-4));
  CHECK_THROWS_AS(lda_energy(FunctionalSet{}, g), ParamError);

  // constant density on a large smeared tile: bulk value plus a thin boundary layer
  const SmearedTetra s{2.0, 8.0, 0.2};
  const double vol = 512.0 / 24.0;
  const double bulk = vol * m(s.rho0);
  CHECK(std::abs(lda_energy(Density{s}, g, opt) / bulk - 1.0) <= 0.05);
}

TEST_CASE("energy envelope") {
  CHECK(e_envelope(0.0, 1.0).lo == 0.0);
  CHECK(e_envelope(0.0, 1.0).hi == 0.0);
  const auto one = e_envelope(1.0, 1.0);
  CHECK(one.lo == doctest::Approx(-1.64));
  CHECK(one.hi == doctest::Approx(c_tf(3)));
  const auto eight = e_envelope(8.0, 1.0);
  CHECK(eight.lo == doctest::Approx(16.0 * one.lo).epsilon(1e-14));
  CHECK(eight.hi == doctest::Approx(32.0 * one.hi).epsilon(1e-14));
  const UegModel m = make_model("tf-dirac", 1.0);
  double prev_lo = 1.0, prev_hi = -1.0;
  for (double r : log_grid(1e-6, 1e3, 100)) {
    const auto env = e_envelope(r, 1.0);
    CHECK(env.lo <= m(r));
    CHECK(m(r) <= env.hi);
    CHECK(env.lo < prev_lo);
    CHECK(env.hi > prev_hi);
    prev_lo = env.lo;
    prev_hi = env.hi;
  }
  CHECK_THROWS_AS(e_envelope(-1.0, 1.0), ParamError);
}

TEST_CASE("Lipschitz probe") {
  const UegModel m = make_model("tf-dirac", 1.0);
  std::vector<double> fits;
  for (unsigned long long seed : {1ull, 2ull, 3ull, 4ull}) fits.push_back(model_lipschitz_probe(m, sample_density_pairs(400, seed)));
  for (double c : fits) {
    CHECK(std::isfinite(c));
    CHECK(c == doctest::Approx(fits[0]).epsilon(0.2));
  }
  // |e'(r)| <= (5/3) A r^{2/3} + (4/3)|B| r^{1/3} bounds the difference quotient
  CHECK(fits[0] <= 5.0 / 3.0 * m.A + 4.0 / 3.0 * std::abs(m.B));

  UegModel linear{"linear", 0, 0, [](double r) { return r; }};
  const double wide = model_lipschitz_probe(linear, sample_density_pairs(400, 1, 1e-6, 1e3));
  const double narrow = model_lipschitz_probe(linear, sample_density_pairs(400, 1, 1e-3, 1e3));
  CHECK(wide > 5.0 * narrow);

  CHECK_THROWS_AS(model_lipschitz_probe(m, DensityPairs{{1.0, 1.0}}), ParamError);
  CHECK_THROWS_AS(sample_density_pairs(10, 1, 1.0, 0.5), ParamError);
  const auto a = sample_density_pairs(5, 9), b = sample_density_pairs(5, 9);
  CHECK(a == b);
}

TEST_CASE("continuity constants of the default model") {
  const UegModel m = make_model("tf-dirac", 1.0);
  const auto c = model_continuity_probe(m, sample_density_pairs(500, 11));
  CHECK(std::isfinite(c.lower));
  CHECK(std::isfinite(c.upper));
  CHECK(c.lower > 0.0);
  // check the two inequalities directly with the fitted constants
  for (auto [a, b] : sample_density_pairs(200, 12)) {
    const double rho = std::max(a, b), dr = std::min(a, b), cr = std::cbrt(rho);
    CHECK(m(rho - dr) <= m(rho) + c.upper * dr * cr + 1e-12 * std::abs(m(rho)));
    CHECK(m(rho) - c.lower * (cr + cr * cr) * dr <= m(rho - dr) + 1e-12 * std::abs(m(rho)));
  }
}

TEST_CASE("energy bounds") {
  const FunctionalSet F = gaussian_unit();
  CHECK(E_lower(F, 1.0, c_tf(3)) == doctest::Approx(0.2493).epsilon(1e-3));
  CHECK(E_lower(F, 1.0, c_tf(3)) == doctest::Approx(c_tf(3) * F.l53 - 1.64 * F.l43).epsilon(1e-14));
  CHECK(E_lower(FunctionalSet{}, 1.0, c_tf(3)) == 0.0);
  CHECK(E_upper(FunctionalSet{}, 0.3, 1.0) == 0.0);
  CHECK(E_upper(F, 0.25, 1.0) == doctest::Approx(c_tf(3) * 1.25 * F.l53 + 48 * 2.25 / 0.25 * F.kin).epsilon(1e-14));
  CHECK(E_upper_min(F, 1.0) >= E_lower(F, 1.0, c_tf(3)));

  // grid minimum against a Brent refinement
  const auto r = boost::math::tools::brent_find_minima([&](double le) { return E_upper(F, std::exp(le), 1.0); },
                                                       std::log(1e-4), 0.0, 40);
  CHECK(E_upper_min(F, 1.0) >= r.second * (1 - 1e-12));
  CHECK(E_upper_min(F, 1.0) <= r.second * 1.001);

  const auto grid = log_grid(0.01, 1.0, 50);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
    const double f0 = E_upper(F, x0, 1.0), f1 = E_upper(F, x1, 1.0), f2 = E_upper(F, x2, 1.0);
    CHECK(f1 <= (f0 + (f2 - f0) * (x1 - x0) / (x2 - x0)) * (1 + 1e-14));
  }
  CHECK_THROWS_AS(E_upper(F, 0.0, 1.0), ParamError);
}

TEST_CASE("gradient-corrected Lieb-Oxford bound") {
  const FunctionalSet F = gaussian_unit();
  const double eps = 0.2;
  CHECK(lieb_oxford_gradient_bound(F, eps) ==
        doctest::Approx((1.4508 + eps) * F.l43 + 0.001206 / (eps * eps * eps) * F.tv).epsilon(1e-4));
  FunctionalSet flat = F;
  flat.tv = 0.0;
  CHECK(lieb_oxford_gradient_bound(flat, 1e-10) == doctest::Approx(lieb_oxford_gradient_constant() * F.l43).epsilon(1e-9));

  const auto c = lieb_oxford_gradient_optimum(F);
  CHECK(c.plain == doctest::Approx(1.64 * F.l43));
  // stationarity: l43 = 3 * 0.001206 tv / eps^4
  CHECK(F.l43 == doctest::Approx(3.0 * 0.001206 * F.tv / std::pow(c.eps, 4)).epsilon(1e-8));
  CHECK(c.value == doctest::Approx(lieb_oxford_gradient_bound(F, c.eps)).epsilon(1e-12));
  for (double f : {0.8, 1.25}) CHECK(c.value <= lieb_oxford_gradient_bound(F, c.eps * f));
  CHECK(c.improves == (c.value < c.plain));
}
