#include "ldacert/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "ldacert/coulomb.hpp"
#include "ldacert/error.hpp"
#include "ldacert/reduce.hpp"

namespace ldacert {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::quantum: return "quantum";
    case Variant::xc: return "xc";
    case Variant::classical: return "classical";
  }
  return "quantum";
}

Variant parse_variant(const std::string& s) {
  if (s == "quantum") return Variant::quantum;
  if (s == "xc") return Variant::xc;
  if (s == "classical") return Variant::classical;
  throw ParamError("unknown variant '" + s + "' (quantum, xc, classical)");
}

Validation validate_params(const CertParams& P) {
  auto reject = [](std::string r) { return Validation{false, std::move(r)}; };
  if (!(P.p > 3.0)) return reject(fmt::format("p = {} violates p > 3", P.p));
  if (!(P.theta > 0.0 && P.theta < 1.0)) return reject(fmt::format("theta = {} violates 0 < theta < 1", P.theta));
  if (!(P.C > 0.0) || !std::isfinite(P.C)) return reject(fmt::format("C = {} must be positive", P.C));
  if (!(P.q >= 1.0) || !std::isfinite(P.q)) return reject(fmt::format("q = {} must be at least 1", P.q));
  const double pt = P.p * P.theta;
  if (P.variant == Variant::classical) {
    if (!(pt >= 4.0 / 3.0)) return reject(fmt::format("p*theta = {} violates p*theta >= 4/3", pt));
  } else {
    if (!(pt >= 2.0)) return reject(fmt::format("p*theta = {} violates 2 <= p*theta", pt));
    if (!(pt <= 1.0 + P.p / 2.0))
      return reject(fmt::format("p*theta = {} violates p*theta <= 1 + p/2 = {}", pt, 1.0 + P.p / 2.0));
  }
  return {};
}

void require_valid(const CertParams& params) {
  const auto v = validate_params(params);
  if (!v.accepted) throw ParamError("parameters rejected: " + v.reason);
}

double theta_exponent(const CertParams& P) {
  if (P.variant == Variant::classical) return std::max(2.0 * P.p - 1.0, (1.0 + 3.0 * P.theta) * P.p - 4.0);
  return 4.0 * P.p - 1.0;
}

RhsBreakdown rhs(const FunctionalSet& F, double eps, const CertParams& P) {
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  RhsBreakdown r;
  if (P.variant == Variant::classical) {
    r.bulk = eps * (F.mass + F.l43);
  } else {
    r.bulk = eps * (F.mass + F.l2);
    r.kin = P.C * (1.0 + eps) / eps * F.kin;
  }
  r.theta = P.C / std::pow(eps, theta_exponent(P)) * F.thg;
  r.total = r.bulk + r.kin + r.theta;
  return r;
}

double tf_subtraction(const FunctionalSet& F, double q) { return std::pow(q, -2.0 / 3.0) * c_tf(3) * F.l53; }

Certificate certify(const FunctionalSet& F, const CertParams& P, const UegModel& model) {
  require_valid(P);
  Certificate c;
  c.params = P;
  c.model_name = model.name;
  c.model_A = model.A;
  c.model_B = model.B;
  c.functionals = F;
  c.flags.push_back("C-relative");
  c.c_lt = P.kinetic.c_lt > 0.0 ? P.kinetic.c_lt : c_tf(3);
  if (!(P.kinetic.c_lt > 0.0)) c.flags.push_back("conjectured-constant");
  c.lda = lda_energy(F, model);
  c.center = P.variant == Variant::xc ? c.lda - tf_subtraction(F, P.q) : c.lda;

  const bool classical = P.variant == Variant::classical;
  const double A = classical ? F.mass + F.l43 : F.mass + F.l2;
  const double B = classical ? 0.0 : P.C * F.kin;
  const double D = P.C * F.thg;
  if (A == 0.0 && B == 0.0 && D == 0.0) {
    c.eps_star = 1.0;
    c.flags.push_back("zero-density");
  } else if (B == 0.0 && D == 0.0) {
    c.eps_star = 0.0;
    c.flags.push_back("exactly-flat");
  } else {
    c.eps_star = optimize_eps(A, B, D, 1.0, theta_exponent(P)).eps;
    c.rhs = rhs(F, c.eps_star, P);
    if (c.eps_star > 0.5) c.flags.push_back("eps-star-above-half");
  }
  c.band_lo = c.center - c.rhs.total;
  c.band_hi = c.center + c.rhs.total;
  c.envelope_lo = E_lower(F, P.q, c.c_lt);
  c.envelope_hi = E_upper_min(F, P.q, P.kinetic.kappa1, P.kinetic.kappa2);
  return c;
}

Certificate certify(const Density& rho, const CertParams& P, const UegModel& model, const QuadOptions& opt) {
  require_valid(P);
  FunctionalSet F = functionals(rho, P.theta, P.p, opt);
  bool skipped = false;
  try {
    F.hartree = hartree(rho, opt.grid_n);
  } catch (const SupportError&) {
    skipped = true;
  }
  Certificate c = certify(F, P, model);
  c.density = describe(rho);
  if (skipped) c.flags.push_back("hartree-skipped");
  return c;
}

ScalingResult scaling_sweep(const FunctionalSet& base, const CertParams& P, const std::vector<double>& N,
                            std::optional<double> eps_exponent) {
  require_valid(P);
  if (N.size() < 3) throw ParamError("scaling sweep needs at least 3 values of N");
  ScalingResult out;
  std::vector<double> xs, ys;
  for (double n : N) {
    const FunctionalSet F = scale_functionals(base, n);
    ScalingPoint pt;
    pt.N = n;
    if (eps_exponent) {
      pt.eps = std::pow(n, -*eps_exponent);
    } else {
      const bool classical = P.variant == Variant::classical;
      const double A = classical ? F.mass + F.l43 : F.mass + F.l2;
      const double B = classical ? 0.0 : P.C * F.kin;
      pt.eps = optimize_eps(A, B, P.C * F.thg, 1.0, theta_exponent(P)).eps;
    }
    if (!(pt.eps > 0.0)) throw DegenerateError("scaling sweep needs nonzero gradient terms");
    pt.total = rhs(F, pt.eps, P).total;
    out.points.push_back(pt);
    xs.push_back(n);
    ys.push_back(pt.total);
  }
  out.slope = loglog_slope(xs, ys);
  return out;
}

TetraBand tetra_band(double rho0, double ell, double delta, double alpha, double C, const UegModel& model) {
  if (!(rho0 > 0.0)) throw ParamError("tetra_band needs rho0 > 0");
  if (!(C > 0.0)) throw ParamError("tetra_band needs C > 0");
  if (!(delta > 0.0 && delta <= ell)) throw ParamError("tetra_band regime violated: need 0 < delta <= ell");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ParamError("tetra_band regime violated: need 0 < alpha < 1/2");
  if (!(std::cbrt(rho0) * ell >= 1.0))
    throw ParamError("tetra_band regime violated: pointwise bound needs rho0^{1/3} ell >= 1");
  TetraBand t;
  t.e_model = model(rho0);
  const double c = std::cbrt(rho0);
  t.upper_margin = C * rho0 / ell * (1.0 + 1.0 / delta + delta * delta * delta * rho0 + delta * c * c);
  t.avg_lower_margin = C * delta * delta * rho0 * rho0 * std::log(1.0 / alpha);
  t.pointwise_layer = C * delta * (rho0 * c * c + rho0 * c) / ell;
  t.pointwise_bulk = C * (std::pow(rho0, 23.0 / 15.0) + std::pow(rho0, 18.0 / 15.0)) / std::pow(ell, 0.4);
  t.pointwise_lower_margin = t.pointwise_layer + t.pointwise_bulk;
  return t;
}

namespace {

// Unit directions on a Fibonacci sphere.
std::vector<Vec3> sphere_directions(int n) {
  std::vector<Vec3> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double s = std::sqrt(1.0 - z * z);
    out.emplace_back(s * std::cos(golden * i), s * std::sin(golden * i), z);
  }
  return out;
}

}  // namespace

FlatnessError flatness_error(const Density& rho, const TilingConfig& cfg, int tile, double eps,
                             const CertParams& P, int scan_n) {
  require_valid(P);
  cfg.validate();
  if (!(eps > 0.0 && eps <= 0.5)) throw ParamError("flatness_error needs 0 < eps <= 1/2");
  if (tile < 0 || tile >= 24) throw ParamError("tile index must be in [0, 24)");
  if (scan_n < 4) throw ParamError("scan_n must be at least 4");
  const Tetra T = xi_tile(tile, cfg);
  const double r = cfg.smear_radius(), ell = cfg.ell, delta = cfg.delta, C = P.C;

  FlatnessError out;
  out.rho_min = std::numeric_limits<double>::infinity();
  out.rho_max = -std::numeric_limits<double>::infinity();
  auto visit = [&](const Vec3& x) {
    const double v = density_value(rho, x);
    out.rho_min = std::min(out.rho_min, v);
    out.rho_max = std::max(out.rho_max, v);
  };
  Vec3 lo, hi;
  T.bounds(lo, hi);
  lo.array() -= r;
  hi.array() += r;
  for (int k = 0; k < scan_n; ++k)
    for (int j = 0; j < scan_n; ++j)
      for (int i = 0; i < scan_n; ++i) {
        const Vec3 t(i, j, k);
        const Vec3 x = lo + (hi - lo).cwiseProduct(t / (scan_n - 1));
        if (T.distance(x) <= r) visit(x);
      }
  for (const Vec3& d : sphere_directions(256))
    for (const Vec3& v : T.v) visit(v + r * d);

  auto rho_grad = [&](const Vec3& x, double& v, Vec3& g) {
    v = density_value(rho, x);
    g = density_gradient(rho, x);
  };
  CubatureOptions co;
  co.core_constant = false;
  co.core_max = ell / 16.0;
  co.rel_tol = 1e-3;
  const auto res = smeared_cubature(T, r, 3, [&](const Vec3& x, const SmearSample& s, double* o) {
    double v;
    Vec3 g;
    rho_grad(x, v, g);
    o[0] = (v + v * v) * s.value;
    if (s.value > 0.0) o[1] = v * s.grad.squaredNorm() / (4.0 * s.value);
    if (v > 0.0) o[2] = g.squaredNorm() / (4.0 * v) * s.value;
  }, co);

  // int over ell Delta + B_delta of |grad rho^theta|^p, midpoint rule
  const int nt = 2 * scan_n;
  Vec3 blo, bhi;
  T.bounds(blo, bhi);
  blo.array() -= delta;
  bhi.array() += delta;
  const Vec3 h = (bhi - blo) / nt;
  std::vector<double> col(static_cast<std::size_t>(nt) * nt * nt, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nt; ++k)
    for (int j = 0; j < nt; ++j)
      for (int i = 0; i < nt; ++i) {
        const Vec3 x = blo + h.cwiseProduct(Vec3(i + 0.5, j + 0.5, k + 0.5));
        if (T.distance(x) > delta) continue;
        double v;
        Vec3 g;
        rho_grad(x, v, g);
        const double gn = g.norm();
        double f = 0.0;
        if (gn > 0.0) f = std::pow(P.theta * std::pow(v, P.theta - 1.0) * gn, P.p);
        col[(static_cast<std::size_t>(k) * nt + j) * nt + i] = f;
      }
  for (double f : col)
    if (!std::isfinite(f))
      throw PreconditionError("grad rho^theta is not p-integrable near the tile (rho vanishes with nonzero gradient)");
  const double thg = pairwise_sum(col.data(), col.size()) * h.prod();

  const double p = P.p;
  out.theta_coefficient = C * (std::pow(ell, 2.0 * p) / std::pow(eps, p - 1.0) +
                               std::pow(ell, p) / std::pow(eps, 1.25 * p - 1.0));
  const double kin = C / eps * res.value[2];
  out.upper = {{"bulk", C * eps * res.value[0]},
               {"transition", C * res.value[1]},
               {"kin", kin},
               {"theta", out.theta_coefficient * thg}};
  const double m = out.rho_max;
  out.lower = {{"bulk", C * eps * ell * ell * ell * (m + m * m)},
               {"transition", C * ell * ell / delta * m},
               {"kin", kin},
               {"theta", out.theta_coefficient * thg}};
  return out;
}

double subadditivity_gap(const FunctionalSet& F1, const FunctionalSet& F2, double D2, double eps, double C) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ParamError("subadditivity_gap needs 0 < eps <= 1");
  return C * eps * (F1.l53 + F1.l43) + C * std::pow(eps, -2.0 / 3.0) * F2.l53 + C * (F2.kin + eps * F1.kin) +
         (1.0 - eps) / eps * D2;
}

EnergyRange t_band_estimate(const FunctionalSet& F, double eps, double q, double C) {
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  if (!(q >= 1.0)) throw ParamError("q must be at least 1");
  const double w = std::pow(q, -2.0 / 3.0);
  const double center = w * c_tf(3) * F.l53;
  const double half = eps * w * F.l53 + C / std::pow(eps, 13.0 / 3.0) * F.kin;
  return {center - half, center + half};
}

EllDelta tiling_scales(double eps) {
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  EllDelta s;
  s.delta = std::sqrt(eps);
  s.ell = std::pow(eps, -1.5);
  s.coefficient = s.delta * s.delta + 1.0 / (s.ell * s.delta);
  return s;
}

}  // namespace ldacert
