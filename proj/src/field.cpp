#include "ldacert/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "ldacert/error.hpp"
#include "ldacert/mollifier.hpp"
#include "ldacert/quadrature.hpp"
#include "ldacert/reduce.hpp"
#include "ldacert/tiling.hpp"

namespace ldacert {

namespace {

constexpr double kPi = std::numbers::pi;

void check_theta_p(double theta, double p) {
  if (!(theta > 0.0 && theta < 1.0)) throw ParamError("theta must lie in (0, 1)");
  if (!(p > 1.0)) throw ParamError("p must exceed 1");
}

// derivative of samples along one axis at position i of n
inline double diff(const double* u, std::ptrdiff_t stride, int i, int n, double h) {
  if (n == 2) return (u[stride] - u[0]) / h;
  if (i == 0) return (-3.0 * u[0] + 4.0 * u[stride] - u[2 * stride]) / (2.0 * h);
  if (i == n - 1) return (3.0 * u[0] - 4.0 * u[-stride] + u[-2 * stride]) / (2.0 * h);
  return (u[stride] - u[-stride]) / (2.0 * h);
}

inline double grad_norm2(const std::vector<double>& u, const GridSpec& s, int i, int j, int k) {
  const std::size_t id = s.index(i, j, k);
  const double* c = u.data() + id;
  const std::ptrdiff_t sx = 1, sy = s.n[0], sz = static_cast<std::ptrdiff_t>(s.n[0]) * s.n[1];
  // at n == 2 the forward difference is taken from the lower node
  const double* cx = (s.n[0] == 2 && i == 1) ? c - sx : c;
  const double* cy = (s.n[1] == 2 && j == 1) ? c - sy : c;
  const double* cz = (s.n[2] == 2 && k == 1) ? c - sz : c;
  const double gx = diff(cx, sx, i, s.n[0], s.h[0]);
  const double gy = diff(cy, sy, j, s.n[1], s.h[1]);
  const double gz = diff(cz, sz, k, s.n[2], s.h[2]);
  return gx * gx + gy * gy + gz * gz;
}

template <bool Parallel>
FunctionalSet grid_functionals_impl(const ScalarField& rho, double theta, double p) {
  check_theta_p(theta, p);
  rho.validate(true);
  const GridSpec& s = rho.spec;
  const std::size_t n = s.size();
  std::vector<double> sq(n), pw(n);
#pragma omp parallel for schedule(static) if (Parallel)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    sq[i] = std::sqrt(rho.values[i]);
    pw[i] = std::pow(rho.values[i], theta);
  }
  const int nx = s.n[0], ny = s.n[1];
  auto term = [&](std::size_t id) {
    const int i = static_cast<int>(id % nx);
    const int j = static_cast<int>((id / nx) % ny);
    const int k = static_cast<int>(id / (static_cast<std::size_t>(nx) * ny));
    const double r = rho.values[id];
    std::array<double, 7> t{};
    if (r <= 0.0) return t;
    const double c = std::cbrt(r);
    t[0] = r;
    t[1] = r * r;
    t[2] = r * c;
    t[3] = r * c * c;
    t[4] = grad_norm2(sq, s, i, j, k);
    t[5] = std::sqrt(grad_norm2(rho.values, s, i, j, k));
    t[6] = std::pow(grad_norm2(pw, s, i, j, k), 0.5 * p);
    return t;
  };
  std::array<double, 7> acc;
  if constexpr (Parallel)
    acc = det_sum_n<7>(n, term);
  else
    acc = serial::det_sum_n<7>(n, term);
  const double dv = s.cell_volume();
  FunctionalSet F;
  F.mass = acc[0] * dv;
  F.l2 = acc[1] * dv;
  F.l43 = acc[2] * dv;
  F.l53 = acc[3] * dv;
  F.kin = acc[4] * dv;
  F.tv = acc[5] * dv;
  F.thg = acc[6] * dv;
  F.theta = theta;
  F.p = p;
  return F;
}

template <bool Parallel>
double integrate_impl(const ScalarField& f) {
  if (f.values.size() != f.spec.size()) throw InvalidField("value count does not match grid");
  for (double v : f.values)
    if (!std::isfinite(v)) throw InvalidField("field contains a non-finite value");
  auto g = [&](std::size_t i) { return f.values[i]; };
  const double s = Parallel ? det_sum(f.values.size(), g) : serial::det_sum(f.values.size(), g);
  return s * f.spec.cell_volume();
}

FunctionalSet gaussian_functionals(const Gaussian& g, double theta, double p) {
  if (!(g.sigma > 0.0) || !(g.mass >= 0.0)) throw ParamError("gaussian needs sigma > 0, mass >= 0");
  FunctionalSet F;
  F.theta = theta;
  F.p = p;
  if (g.mass == 0.0) return F;
  const double s2 = g.sigma * g.sigma;
  auto power = [&](double a) {
    return std::pow(g.mass, a) * std::pow(2.0 * kPi * s2, 1.5 * (1.0 - a)) * std::pow(a, -1.5);
  };
  F.mass = g.mass;
  F.l2 = power(2.0);
  F.l43 = power(4.0 / 3.0);
  F.l53 = power(5.0 / 3.0);
  F.kin = 3.0 * g.mass / (4.0 * s2);
  F.tv = g.mass * 2.0 * std::sqrt(2.0 / kPi) / g.sigma;
  const double c = g.mass * std::pow(2.0 * kPi * s2, -1.5);
  const double a = theta * p / (2.0 * s2);
  F.thg = std::pow(theta / s2, p) * std::pow(c, theta * p) * 4.0 * kPi *
          std::tgamma(0.5 * (p + 3.0)) / (2.0 * std::pow(a, 0.5 * (p + 3.0)));
  return F;
}

FunctionalSet bump_functionals(const CompactBump& b, double theta, double p, const QuadOptions& opt) {
  if (!(b.radius > 0.0) || !(b.mass >= 0.0)) throw ParamError("bump needs radius > 0, mass >= 0");
  FunctionalSet F;
  F.theta = theta;
  F.p = p;
  if (b.mass == 0.0) return F;
  const Mollifier& m = Mollifier::unit();
  const double R = b.radius;
  const double scale = b.mass / (R * R * R);
  // log-derivative of the bump profile in s = r / R
  auto dlog = [](double s) { return 2.0 * s / ((1.0 - s * s) * (1.0 - s * s)); };
  auto radial = [&](auto&& g) {
    auto f = [&](double s) {
      if (s >= 1.0) return 0.0;
      const double r = scale * m.density(s);
      if (r <= 0.0) return 0.0;
      return 4.0 * kPi * g(r, s) * s * s * R * R * R;
    };
    QuadResult q = integrate_adaptive(f, 0.0, 1.0, 1e-10);
    if (q.value != 0.0 && q.error > opt.rel_tol * std::abs(q.value))
      throw AccuracyError("radial quadrature did not converge", q.error / std::abs(q.value));
    return q.value;
  };
  F.mass = b.mass;
  F.l2 = radial([](double r, double) { return r * r; });
  F.l43 = radial([](double r, double) { return r * std::cbrt(r); });
  F.l53 = radial([](double r, double) { return r * std::cbrt(r * r); });
  F.kin = radial([&](double r, double s) { const double d = dlog(s) / R; return 0.25 * r * d * d; });
  F.tv = radial([&](double r, double s) { return r * dlog(s) / R; });
  F.thg = radial([&](double r, double s) {
    return std::pow(theta * std::pow(r, theta) * dlog(s) / R, p);
  });
  return F;
}

double trilinear(const ScalarField& f, const Vec3& x, Vec3* grad) {
  const GridSpec& s = f.spec;
  int idx[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (x[a] - s.origin[a]) / s.h[a];
    if (u < 0.0 || u > s.n[a] - 1) {
      if (grad) grad->setZero();
      return 0.0;
    }
    idx[a] = std::min(static_cast<int>(u), s.n[a] - 2);
    t[a] = u - idx[a];
  }
  double v = 0.0;
  Vec3 g = Vec3::Zero();
  for (int c = 0; c < 8; ++c) {
    const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
    const double val = f.at(idx[0] + dx, idx[1] + dy, idx[2] + dz);
    const double wx = dx ? t[0] : 1 - t[0], wy = dy ? t[1] : 1 - t[1], wz = dz ? t[2] : 1 - t[2];
    v += val * wx * wy * wz;
    g[0] += val * (dx ? 1 : -1) * wy * wz / s.h[0];
    g[1] += val * wx * (dy ? 1 : -1) * wz / s.h[1];
    g[2] += val * wx * wy * (dz ? 1 : -1) / s.h[2];
  }
  if (grad) *grad = g;
  return v;
}

}  // namespace

void GridSpec::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (n[a] < 2) throw InvalidField("grid extents must be at least 2");
    if (!(h[a] > 0.0) || !std::isfinite(h[a])) throw InvalidField("grid spacings must be positive");
    if (!std::isfinite(origin[a])) throw InvalidField("grid origin must be finite");
  }
}

GridSpec centered_grid(double half, int n) {
  GridSpec s;
  const double h = 2.0 * half / n;
  s.n = {n, n, n};
  s.h = {h, h, h};
  s.origin = {-half + 0.5 * h, -half + 0.5 * h, -half + 0.5 * h};
  return s;
}

void ScalarField::validate(bool density) const {
  spec.validate();
  if (values.size() != spec.size()) throw InvalidField("value count does not match grid");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidField("field contains a non-finite value");
    if (density && v < 0.0) throw InvalidField("density has a negative value");
  }
}

double integrate(const ScalarField& f) { return integrate_impl<true>(f); }

FunctionalSet grid_functionals(const ScalarField& rho, double theta, double p) {
  return grid_functionals_impl<true>(rho, theta, p);
}

namespace serial {
double integrate(const ScalarField& f) { return integrate_impl<false>(f); }
FunctionalSet grid_functionals(const ScalarField& rho, double theta, double p) {
  return grid_functionals_impl<false>(rho, theta, p);
}
}  // namespace serial

FunctionalSet functionals(const Density& rho, double theta, double p, const QuadOptions& opt) {
  check_theta_p(theta, p);
  return std::visit(
      [&](const auto& d) -> FunctionalSet {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return gaussian_functionals(d, theta, p);
        else if constexpr (std::is_same_v<T, CompactBump>)
          return bump_functionals(d, theta, p, opt);
        else if constexpr (std::is_same_v<T, SmearedTetra>)
          return smeared_tetra_functionals(d, theta, p, opt);
        else
          return grid_functionals(d, theta, p);
      },
      rho);
}

FunctionalSet scale_functionals(const FunctionalSet& F, double N) {
  if (!(N >= 1.0)) throw ParamError("scaling factor N must be >= 1");
  FunctionalSet G = F;
  const double c13 = std::cbrt(N);
  G.mass *= N;
  G.l2 *= N;
  G.l43 *= N;
  G.l53 *= N;
  G.kin *= c13;
  G.tv *= c13 * c13;
  G.thg *= std::pow(N, 1.0 - F.p / 3.0);
  if (G.hartree) *G.hartree *= N * c13 * c13;
  return G;
}

double sobolev_ratio(const ScalarField& u, const Tetra& domain, double p, double ell) {
  if (!(p > 3.0)) throw ParamError("sobolev_ratio needs p > 3");
  if (!(ell > 0.0)) throw ParamError("sobolev_ratio needs ell > 0");
  u.validate(false);
  const GridSpec& s = u.spec;
  double umax = 0.0, umin_abs = INFINITY;
  bool pos = false, neg = false, any = false;
  std::vector<std::size_t> inside;
  for (int k = 0; k < s.n[2]; ++k)
    for (int j = 0; j < s.n[1]; ++j)
      for (int i = 0; i < s.n[0]; ++i) {
        if (!domain.contains(s.point(i, j, k), 1e-12)) continue;
        const double v = u.at(i, j, k);
        any = true;
        inside.push_back(s.index(i, j, k));
        umax = std::max(umax, std::abs(v));
        umin_abs = std::min(umin_abs, std::abs(v));
        pos = pos || v > 0.0;
        neg = neg || v < 0.0;
      }
  if (!any) throw PreconditionError("no grid point inside the domain");
  if (umax == 0.0) return 0.0;
  if (!(umin_abs <= 1e-12 * umax || (pos && neg)))
    throw PreconditionError("field does not vanish anywhere in the domain");
  const int nx = s.n[0], ny = s.n[1];
  const double g = det_sum(inside.size(), [&](std::size_t m) {
    const std::size_t id = inside[m];
    const int i = static_cast<int>(id % nx);
    const int j = static_cast<int>((id / nx) % ny);
    const int k = static_cast<int>(id / (static_cast<std::size_t>(nx) * ny));
    return std::pow(grad_norm2(u.values, s, i, j, k), 0.5 * p);
  }) * s.cell_volume();
  return std::pow(umax, p) / (std::pow(ell, p - 3.0) * g);
}

Tetra smeared_tetra_tile(const SmearedTetra& s) { return unit_cube_tetrahedra()[0].scaled(s.ell); }

double density_value(const Density& rho, const Vec3& x) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          const double s2 = d.sigma * d.sigma;
          return d.mass * std::pow(2.0 * kPi * s2, -1.5) * std::exp(-0.5 * x.squaredNorm() / s2);
        } else if constexpr (std::is_same_v<T, CompactBump>) {
          const double R = d.radius;
          return d.mass * Mollifier::unit().density(x.norm() / R) / (R * R * R);
        } else if constexpr (std::is_same_v<T, SmearedTetra>) {
          return d.rho0 * smeared_indicator(smeared_tetra_tile(d), d.delta / 10.0, x).value;
        } else {
          return trilinear(d, x, nullptr);
        }
      },
      rho);
}

Vec3 density_gradient(const Density& rho, const Vec3& x) {
  return std::visit(
      [&](const auto& d) -> Vec3 {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return -density_value(rho, x) * x / (d.sigma * d.sigma);
        } else if constexpr (std::is_same_v<T, CompactBump>) {
          const double r = x.norm(), s = r / d.radius;
          if (s >= 1.0 || r == 0.0) return Vec3::Zero();
          const double dl = 2.0 * s / ((1 - s * s) * (1 - s * s));
          return -density_value(rho, x) * dl / d.radius * x / r;
        } else if constexpr (std::is_same_v<T, SmearedTetra>) {
          return d.rho0 * smeared_indicator(smeared_tetra_tile(d), d.delta / 10.0, x).grad;
        } else {
          Vec3 g;
          trilinear(d, x, &g);
          return g;
        }
      },
      rho);
}

GridSpec default_grid(const Density& rho, int n) {
  return std::visit(
      [&](const auto& d) -> GridSpec {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return centered_grid(8.0 * d.sigma, n);
        } else if constexpr (std::is_same_v<T, CompactBump>) {
          return centered_grid(1.25 * d.radius, n);
        } else if constexpr (std::is_same_v<T, SmearedTetra>) {
          Vec3 lo, hi;
          smeared_tetra_tile(d).bounds(lo, hi);
          const Vec3 c = 0.5 * (lo + hi);
          const double half = 0.5 * (hi - lo).maxCoeff() + 0.1 * d.delta;
          GridSpec s = centered_grid(half * (1.0 + 4.0 / n), n);
          for (int a = 0; a < 3; ++a) s.origin[a] += c[a];
          return s;
        } else {
          return d.spec;
        }
      },
      rho);
}

ScalarField sample(const Density& rho, const GridSpec& spec) {
  spec.validate();
  if (const auto* f = std::get_if<ScalarField>(&rho)) {
    if (f->spec.n == spec.n && f->spec.h == spec.h && f->spec.origin == spec.origin) return *f;
  }
  ScalarField out;
  out.spec = spec;
  out.values.resize(spec.size());
  const int nx = spec.n[0], ny = spec.n[1];
#pragma omp parallel for schedule(dynamic, 256)
  for (long id = 0; id < static_cast<long>(spec.size()); ++id) {
    const int i = static_cast<int>(id % nx);
    const int j = static_cast<int>((id / nx) % ny);
    const int k = static_cast<int>(id / (static_cast<long>(nx) * ny));
    out.values[id] = std::max(0.0, density_value(rho, spec.point(i, j, k)));
  }
  return out;
}

namespace {

std::map<std::string, double> parse_kv(const std::string& body, std::string& name) {
  std::map<std::string, double> kv;
  std::stringstream ss(body);
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ',')) {
    if (first) {
      name = item;
      first = false;
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParamError("builtin density: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
      kv[key] = v;
    } catch (const std::exception&) {
      throw ParamError("builtin density: bad number in '" + item + "'");
    }
  }
  return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, double def) {
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  const double v = it->second;
  kv.erase(it);
  return v;
}

}  // namespace

Density parse_density(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) != 0) return read_grid_file(spec);
  std::string name;
  auto kv = parse_kv(spec.substr(prefix.size()), name);
  Density out;
  if (name == "gaussian") {
    Gaussian g{take(kv, "sigma", 1.0), take(kv, "mass", 1.0)};
    if (!(g.sigma > 0) || !(g.mass >= 0)) throw ParamError("gaussian needs sigma > 0, mass >= 0");
    out = g;
  } else if (name == "bump" || name == "compact-bump") {
    CompactBump b{take(kv, "radius", 1.0), take(kv, "mass", 1.0)};
    if (!(b.radius > 0) || !(b.mass >= 0)) throw ParamError("bump needs radius > 0, mass >= 0");
    out = b;
  } else if (name == "smeared-tetra") {
    SmearedTetra s{take(kv, "rho0", 1.0), take(kv, "ell", 4.0), take(kv, "delta", 0.5)};
    if (!(s.rho0 >= 0) || !(s.ell > 0) || !(s.delta > 0) || !(s.delta < s.ell / 2))
      throw ParamError("smeared-tetra needs rho0 >= 0 and 0 < delta < ell/2");
    out = s;
  } else {
    throw ParamError("unknown builtin density '" + name + "'");
  }
  if (!kv.empty()) throw ParamError("unknown key '" + kv.begin()->first + "' for builtin " + name);
  return out;
}

std::string describe(const Density& rho) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return fmt::format("gaussian,sigma={:.17g},mass={:.17g}", d.sigma, d.mass);
        else if constexpr (std::is_same_v<T, CompactBump>)
          return fmt::format("compact-bump,radius={:.17g},mass={:.17g}", d.radius, d.mass);
        else if constexpr (std::is_same_v<T, SmearedTetra>)
          return fmt::format("smeared-tetra,rho0={:.17g},ell={:.17g},delta={:.17g}", d.rho0, d.ell,
                             d.delta);
        else
          return fmt::format("grid,{}x{}x{}", d.spec.n[0], d.spec.n[1], d.spec.n[2]);
      },
      rho);
}

}  // namespace ldacert
