#include "ldacert/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldacert/coulomb.hpp"
#include "ldacert/error.hpp"
#include "ldacert/quadrature.hpp"
#include "ldacert/reduce.hpp"

namespace ldacert {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

std::array<Tetra, 24> build_tiles() {
  Tetra base;
  base.v = {Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(0.5, 0.5, 0.5), Vec3(0.5, 0.5, -0.5)};
  const Vec3 c0 = base.centroid();

  std::vector<Mat3> rots;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int s = 0; s < 8; ++s) {
      Mat3 R = Mat3::Zero();
      for (int i = 0; i < 3; ++i) R(i, perm[i]) = (s >> i) & 1 ? -1.0 : 1.0;
      if (R.determinant() > 0) rots.push_back(R);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::array<Tetra, 24> out;
  for (int j = 0; j < 24; ++j) {
    const Mat3& R = rots[j];
    Tetra t;
    for (int k = 0; k < 4; ++k) t.v[k] = R * base.v[k];
    t.mu.rotation = R;
    t.mu.translation = R * c0;
    out[j] = t;
  }
  return out;
}

// Divided difference of exp by a Taylor series about the node mean.
cplx dd_taylor(const cplx* z, int n) {
  cplx m = 0.0;
  for (int i = 0; i < n; ++i) m += z[i];
  m /= static_cast<double>(n);
  constexpr int K = 28;
  std::array<cplx, K + 1> h{};
  h[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const cplx w = z[i] - m;
    if (i == 0) {
      for (int k = 1; k <= K; ++k) h[k] = h[k - 1] * w;
    } else {
      for (int k = 1; k <= K; ++k) h[k] += w * h[k - 1];
    }
  }
  // sum_k h_k / (k + n - 1)!
  double fact = 1.0;
  for (int i = 2; i <= n - 1; ++i) fact *= i;
  cplx s = 0.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) fact *= (k + n - 1);
    s += h[k] / fact;
  }
  return std::exp(m) * s;
}

cplx dd_rec(const cplx* z, int n) {
  double spread = 0.0;
  int bi = 0, bj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(z[i] - z[j]);
      if (d > spread) {
        spread = d;
        bi = i;
        bj = j;
      }
    }
  if (spread <= 1.0) return dd_taylor(z, n);
  std::array<cplx, 5> wo_i{}, wo_j{};
  int a = 0, b = 0;
  for (int k = 0; k < n; ++k) {
    if (k != bi) wo_i[a++] = z[k];
    if (k != bj) wo_j[b++] = z[k];
  }
  return (dd_rec(wo_j.data(), n - 1) - dd_rec(wo_i.data(), n - 1)) / (z[bi] - z[bj]);
}

double check_volume(const Tetra& T) {
  const double v6 = std::abs(6.0 * signed_volume(T.v[0], T.v[1], T.v[2], T.v[3]));
  if (!(v6 / 6.0 >= 1e-14)) throw GeometryError("degenerate tetrahedron");
  return v6;
}

void check_lattice(const Vec3& k) {
  bool zero = true;
  for (int a = 0; a < 3; ++a) {
    const double n = k[a] / (2.0 * kPi);
    if (std::abs(n - std::round(n)) > 1e-9) throw ParamError("k must lie on 2 pi Z^3");
    zero = zero && std::round(n) == 0.0;
  }
  if (zero) throw ParamError("k must be nonzero");
}

struct Box {
  Vec3 lo;
  double size;
  bool core;
};

struct Planner {
  const std::array<Plane, 4>& pl;
  double r, leaf, core_max;
  std::vector<Box>& out;

  void run(const Vec3& lo, double size) {
    const Vec3 c = lo + Vec3::Constant(0.5 * size);
    const double hd = 0.5 * std::sqrt(3.0) * size;
    bool core = true;
    for (const Plane& p : pl) {
      const double d = p.c - p.n.dot(c);
      if (d < -(r + hd)) return;
      if (d < r + hd) core = false;
    }
    const bool split = core ? (core_max > 0.0 && size > core_max) : size > leaf;
    if (!split) {
      out.push_back({lo, size, core});
      return;
    }
    const double h = 0.5 * size;
    for (int o = 0; o < 8; ++o) run(lo + Vec3(o & 1 ? h : 0, o & 2 ? h : 0, o & 4 ? h : 0), h);
  }
};

template <bool Parallel>
CubatureResult cubature_impl(const Tetra& T, double r, int m, const SmearIntegrand& g,
                             const CubatureOptions& opt) {
  if (!(r > 0.0)) throw ParamError("smearing radius must be positive");
  if (opt.order < 2 || opt.core_order < 1) throw ParamError("cubature order too small");
  const auto pl = T.planes();
  Vec3 lo, hi;
  T.bounds(lo, hi);
  lo.array() -= r;
  hi.array() += r;
  const double size = (hi - lo).maxCoeff();
  std::vector<Box> boxes;
  Planner{pl, r, opt.leaf * r, opt.core_constant ? 0.0 : opt.core_max, boxes}.run(lo, size);

  const GaussRule& g_hi = gauss_legendre(opt.order);
  const GaussRule& g_lo = gauss_legendre(opt.order - 1);
  const GaussRule& g_core = gauss_legendre(opt.core_order);

  auto tensor = [&](const Box& b, const GaussRule& rule, bool core, double* acc) {
    std::vector<double> tmp(m);
    const int q = static_cast<int>(rule.x.size());
    const double h = 0.5 * b.size;
    for (int k = 0; k < q; ++k)
      for (int j = 0; j < q; ++j)
        for (int i = 0; i < q; ++i) {
          const Vec3 x = b.lo + Vec3(h * (1 + rule.x[i]), h * (1 + rule.x[j]), h * (1 + rule.x[k]));
          SmearSample s;
          if (core)
            s.value = 1.0;
          else
            s = smeared_indicator(T, pl, r, x);
          std::fill(tmp.begin(), tmp.end(), 0.0);
          g(x, s, tmp.data());
          const double w = rule.w[i] * rule.w[j] * rule.w[k] * h * h * h;
          for (int a = 0; a < m; ++a) acc[a] += w * tmp[a];
        }
  };

  // values and error estimates of boxes[first..]
  std::vector<double> vals, errs;
  auto evaluate = [&](std::size_t first) {
    const std::size_t nb = boxes.size();
    vals.resize(nb * m, 0.0);
    errs.resize(nb * m, 0.0);
#pragma omp parallel for schedule(dynamic, 8) if (Parallel)
    for (long ib = static_cast<long>(first); ib < static_cast<long>(nb); ++ib) {
      const Box& b = boxes[ib];
      double* v = &vals[ib * m];
      double* e = &errs[ib * m];
      if (b.core && opt.core_constant) {
        std::vector<double> tmp(m, 0.0);
        SmearSample s;
        s.value = 1.0;
        g(b.lo + Vec3::Constant(0.5 * b.size), s, tmp.data());
        const double vol = b.size * b.size * b.size;
        for (int a = 0; a < m; ++a) v[a] = vol * tmp[a];
      } else if (b.core) {
        tensor(b, g_core, true, v);
      } else {
        tensor(b, g_hi, false, v);
        std::vector<double> low(m, 0.0);
        tensor(b, g_lo, false, low.data());
        for (int a = 0; a < m; ++a) e[a] = std::abs(v[a] - low[a]);
      }
    }
  };

  CubatureResult res;
  res.value.resize(m);
  res.error.resize(m);
  auto totals = [&] {
    const std::size_t nb = boxes.size();
    std::vector<double> col(nb);
    for (int a = 0; a < m; ++a) {
      for (std::size_t ib = 0; ib < nb; ++ib) col[ib] = vals[ib * m + a];
      res.value[a] = pairwise_sum(col.data(), nb);
      for (std::size_t ib = 0; ib < nb; ++ib) col[ib] = errs[ib * m + a];
      res.error[a] = pairwise_sum(col.data(), nb);
    }
  };

  evaluate(0);
  totals();
  const double min_size = opt.leaf * r / 16.0;
  for (int pass = 0; opt.rel_tol > 0.0 && pass < opt.max_passes; ++pass) {
    // mark the largest-error boxes carrying most of the error of each unconverged component
    std::vector<char> mark(boxes.size(), 0);
    bool any = false;
    for (int a = 0; a < m; ++a) {
      if (!(res.error[a] > opt.rel_tol * std::abs(res.value[a]))) continue;
      std::vector<std::size_t> order;
      for (std::size_t ib = 0; ib < boxes.size(); ++ib)
        if (!boxes[ib].core && boxes[ib].size > min_size && errs[ib * m + a] > 0.0) order.push_back(ib);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return errs[x * m + a] > errs[y * m + a]; });
      double acc = 0.0;
      for (std::size_t ib : order) {
        if (acc >= 0.7 * res.error[a]) break;
        acc += errs[ib * m + a];
        mark[ib] = 1;
        any = true;
      }
    }
    if (!any) break;
    std::vector<Box> next;
    std::vector<double> nv, ne;
    std::vector<Box> fresh;
    for (std::size_t ib = 0; ib < boxes.size(); ++ib) {
      if (mark[ib]) {
        Planner{pl, r, 0.5 * boxes[ib].size, opt.core_constant ? 0.0 : opt.core_max, fresh}.run(boxes[ib].lo, boxes[ib].size);
        continue;
      }
      next.push_back(boxes[ib]);
      nv.insert(nv.end(), vals.begin() + ib * m, vals.begin() + (ib + 1) * m);
      ne.insert(ne.end(), errs.begin() + ib * m, errs.begin() + (ib + 1) * m);
    }
    const std::size_t first = next.size();
    next.insert(next.end(), fresh.begin(), fresh.end());
    boxes = std::move(next);
    vals = std::move(nv);
    errs = std::move(ne);
    evaluate(first);
    totals();
  }
  res.leaves = boxes.size();
  return res;
}

template <bool Parallel>
DirectError direct_error_impl(const ScalarField& rho, const TilingConfig& cfg, int k_max) {
  cfg.validate();
  if (k_max < 3) throw ParamError("k_max must be at least 3");
  rho.validate(true);
  DirectError out;
  const bool zero = std::all_of(rho.values.begin(), rho.values.end(), [](double v) { return v == 0.0; });
  const int side = 2 * k_max + 1;
  std::vector<Vec3> ns;
  for (int c = 0; c < side; ++c)
    for (int b = 0; b < side; ++b)
      for (int a = 0; a < side; ++a) {
        const Vec3 n(a - k_max, b - k_max, c - k_max);
        if (n.cwiseAbs().maxCoeff() > 0) ns.push_back(n);
      }
  out.terms = ns.size();
  if (zero) return out;
  const SpectralField base = spectral(rho);
  const double eps = cfg.delta / cfg.ell;
  const Mollifier& mol = Mollifier::unit();
  const double pref = std::pow(2.0 * kPi, 7);
  auto term = [&](std::size_t i) {
    const Vec3 k = 2.0 * kPi * ns[i];
    const double eh = mol.fourier(eps * k.norm() / 10.0);
    const double s2 = std::norm(reduced_sum(eps, k));
    const double I = Parallel ? shifted_coulomb_integral(base, k / cfg.ell)
                              : serial::shifted_coulomb_integral(base, k / cfg.ell);
    const double t = pref * eh * eh * s2 * I;
    const bool outer = ns[i].cwiseAbs().maxCoeff() == k_max;
    return std::array<double, 2>{t, outer ? t : 0.0};
  };
  const auto s = Parallel ? det_sum_n<2>(ns.size(), term) : serial::det_sum_n<2>(ns.size(), term);
  out.value = s[0];
  out.tail = s[1];
  return out;
}

}  // namespace

const std::array<Tetra, 24>& unit_cube_tetrahedra() {
  static const std::array<Tetra, 24> tiles = build_tiles();
  return tiles;
}

void TilingConfig::validate() const {
  if (!(ell > 0.0)) throw ParamError("tile scale ell must be positive");
  if (!(delta > 0.0 && delta < 0.5 * ell)) throw ParamError("smearing delta must lie in (0, ell/2)");
}

double TilingConfig::chi_height() const {
  const double s = shrink();
  return 1.0 / (s * s * s);
}

Tetra chi_tile(int j, const TilingConfig& cfg) {
  return unit_cube_tetrahedra().at(j).scaled(cfg.ell).shrunk(cfg.shrink());
}

Tetra xi_tile(int j, const TilingConfig& cfg) { return unit_cube_tetrahedra().at(j).scaled(cfg.ell); }

SmearSample chi_sample(int j, const TilingConfig& cfg, const Vec3& x) {
  cfg.validate();
  SmearSample s = smeared_indicator(chi_tile(j, cfg), cfg.smear_radius(), x);
  const double h = cfg.chi_height();
  s.value *= h;
  s.grad *= h;
  return s;
}

double chi(int j, const TilingConfig& cfg, const Vec3& x) { return chi_sample(j, cfg, x).value; }

double xi(int j, const TilingConfig& cfg, const Vec3& x) {
  cfg.validate();
  return smeared_indicator(xi_tile(j, cfg), cfg.smear_radius(), x).value;
}

namespace {

template <class F>
double lattice_tile_sum(const TilingConfig& cfg, const Vec3& x, F&& tile_of) {
  cfg.validate();
  const double r = cfg.smear_radius();
  double s = 0.0;
  for (int c = -1; c <= 1; ++c)
    for (int b = -1; b <= 1; ++b)
      for (int a = -1; a <= 1; ++a) {
        const Vec3 y = x - cfg.ell * Vec3(a, b, c);
        if ((y.cwiseAbs().array() > 0.5 * cfg.ell + r).any()) continue;
        for (int j = 0; j < 24; ++j) {
          const Tetra T = tile_of(j);
          Vec3 lo, hi;
          T.bounds(lo, hi);
          if (((y - lo).array() < -r).any() || ((y - hi).array() > r).any()) continue;
          s += smeared_indicator(T, r, y).value;
        }
      }
  return s;
}

}  // namespace

double xi_partition_sum(const TilingConfig& cfg, const Vec3& x) {
  return lattice_tile_sum(cfg, x, [&](int j) { return xi_tile(j, cfg); });
}

double chi_partition_sum(const TilingConfig& cfg, const Vec3& x) {
  return cfg.chi_height() * lattice_tile_sum(cfg, x, [&](int j) { return chi_tile(j, cfg); });
}

CubatureResult smeared_cubature(const Tetra& T, double r, int m, const SmearIntegrand& g,
                                const CubatureOptions& opt) {
  return cubature_impl<true>(T, r, m, g, opt);
}

namespace serial {
CubatureResult smeared_cubature(const Tetra& T, double r, int m, const SmearIntegrand& g,
                                const CubatureOptions& opt) {
  return cubature_impl<false>(T, r, m, g, opt);
}
DirectError tiling_direct_error(const ScalarField& rho, const TilingConfig& cfg, int k_max) {
  return direct_error_impl<false>(rho, cfg, k_max);
}
}  // namespace serial

double chi_integral(int j, const TilingConfig& cfg, double* error) {
  cfg.validate();
  const double h = cfg.chi_height();
  const auto res = smeared_cubature(chi_tile(j, cfg), cfg.smear_radius(), 1,
                                    [h](const Vec3&, const SmearSample& s, double* o) { o[0] = h * s.value; });
  if (error) *error = res.error[0];
  return res.value[0];
}

double chi_gradient_energy(int j, const TilingConfig& cfg) {
  cfg.validate();
  const double h = cfg.chi_height();
  const auto res = smeared_cubature(chi_tile(j, cfg), cfg.smear_radius(), 1,
                                    [h](const Vec3&, const SmearSample& s, double* o) {
                                      if (s.value > 0.0) o[0] = h * s.grad.squaredNorm() / (4.0 * s.value);
                                    });
  return res.value[0];
}

double partition_residual(const TilingConfig& cfg, int n_tau, const std::vector<Vec3>& points) {
  cfg.validate();
  if (n_tau < 8) throw ParamError("translation quadrature needs n_tau >= 8");
  CubatureOptions opt;
  opt.order = n_tau / 4;
  opt.leaf = n_tau / 8.0;
  const double h = cfg.chi_height();
  std::array<double, 24> parts{};
  for (int j = 0; j < 24; ++j)
    parts[j] = smeared_cubature(chi_tile(j, cfg), cfg.smear_radius(), 1,
                                [h](const Vec3&, const SmearSample& s, double* o) { o[0] = h * s.value; }, opt)
                   .value[0];
  const double avg = pairwise_sum(parts.data(), parts.size()) / std::pow(cfg.ell, 3);
  if (points.empty()) throw ParamError("partition_residual needs sample points");
  // after unfolding, the average is the same at every sample point
  return std::abs(avg - 1.0);
}

std::complex<double> divided_difference_exp(const std::vector<std::complex<double>>& z) {
  if (z.empty() || z.size() > 5) throw ParamError("divided difference needs 1 to 5 nodes");
  return dd_rec(z.data(), static_cast<int>(z.size()));
}

std::complex<double> tetra_fourier(const Tetra& T, const Vec3& k) {
  const double v6 = check_volume(T);
  std::array<cplx, 4> a;
  for (int j = 0; j < 4; ++j) a[j] = cplx(0.0, -k.dot(T.v[j]));
  return std::pow(2.0 * kPi, -1.5) * v6 * dd_rec(a.data(), 4);
}

Vec3c tetra_moment(const Tetra& T, const Vec3& k) {
  const double v6 = check_volume(T);
  std::array<cplx, 5> a;
  for (int j = 0; j < 4; ++j) a[j] = cplx(0.0, -k.dot(T.v[j]));
  Vec3c out = Vec3c::Zero();
  for (int j = 0; j < 4; ++j) {
    a[4] = a[j];
    out += T.v[j].cast<cplx>() * dd_rec(a.data(), 5);
  }
  return v6 * out;
}

std::complex<double> reduced_sum(double eps, const Vec3& k) {
  if (!(eps >= 0.0 && eps < 0.5)) throw ParamError("eps must lie in [0, 1/2)");
  check_lattice(k);
  const double s = 1.0 - eps;
  std::array<cplx, 24> parts;
  const auto& tiles = unit_cube_tetrahedra();
  for (int j = 0; j < 24; ++j) parts[j] = tetra_fourier(tiles[j].shrunk(s), k);
  cplx sum = 0.0;
  for (const auto& p : parts) sum += p;
  return sum / (s * s * s);
}

Vec3c moment_M(const Vec3& k) {
  check_lattice(k);
  Vec3c out = Vec3c::Zero();
  for (const Tetra& T : unit_cube_tetrahedra())
    out += tetra_moment(T, k) - T.centroid().cast<cplx>() * (std::pow(2.0 * kPi, 1.5) * tetra_fourier(T, k));
  return out;
}

double lemma_ratio(double eps, const Vec3& k) {
  const double s2 = std::norm(reduced_sum(eps, k));
  const double m2 = moment_M(k).squaredNorm();
  return s2 / (std::pow(eps, 4) + eps * eps * k.squaredNorm() * m2);
}

double f_eps_mean(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ParamError("eps must lie in (0, 1/2)");
  const double eta_mass = 4.0 * kPi * Mollifier::unit().H(1.0);
  const double s = 1.0 - eps;
  std::array<double, 24> parts;
  const auto& tiles = unit_cube_tetrahedra();
  for (int j = 0; j < 24; ++j) {
    const double v = tiles[j].volume();
    parts[j] = v - tiles[j].shrunk(s).volume() / (s * s * s) * eta_mass;
  }
  return pairwise_sum(parts.data(), parts.size());
}

DirectError tiling_direct_error(const ScalarField& rho, const TilingConfig& cfg, int k_max) {
  return direct_error_impl<true>(rho, cfg, k_max);
}

DirectError tiling_direct_error(const Density& rho, const TilingConfig& cfg, int k_max, int grid_n) {
  if (const auto* f = std::get_if<ScalarField>(&rho)) return tiling_direct_error(*f, cfg, k_max);
  return tiling_direct_error(sample(rho, default_grid(rho, grid_n)), cfg, k_max);
}

FunctionalSet smeared_tetra_functionals(const SmearedTetra& st, double theta, double p,
                                        const QuadOptions& opt) {
  if (!(st.rho0 >= 0.0) || !(st.ell > 0.0) || !(st.delta > 0.0 && st.delta < 0.5 * st.ell))
    throw ParamError("smeared-tetra needs rho0 >= 0 and 0 < delta < ell/2");
  FunctionalSet F;
  F.theta = theta;
  F.p = p;
  if (st.rho0 == 0.0) return F;
  const double r0 = st.rho0;
  auto g = [&](const Vec3&, const SmearSample& s, double* o) {
    if (!(s.value > 0.0)) return;
    const double v = r0 * s.value;
    const double gn = r0 * s.grad.norm();
    const double c = std::cbrt(v);
    o[0] = v;
    o[1] = v * v;
    o[2] = v * c;
    o[3] = v * c * c;
    o[4] = gn * gn / (4.0 * v);
    o[5] = gn;
    o[6] = gn > 0.0 ? std::pow(theta * std::pow(v, theta - 1.0) * gn, p) : 0.0;
  };
  CubatureOptions co;
  co.rel_tol = opt.rel_tol;
  const auto res = smeared_cubature(smeared_tetra_tile(st), st.delta / 10.0, 7, g, co);
  for (int a = 0; a < 7; ++a) {
    const double v = res.value[a];
    if (v != 0.0 && res.error[a] > opt.rel_tol * std::abs(v))
      throw AccuracyError("smeared tetrahedron cubature did not converge", res.error[a] / std::abs(v));
  }
  F.mass = res.value[0];
  F.l2 = res.value[1];
  F.l43 = res.value[2];
  F.l53 = res.value[3];
  F.kin = res.value[4];
  F.tv = res.value[5];
  F.thg = res.value[6];
  return F;
}

}  // namespace ldacert
