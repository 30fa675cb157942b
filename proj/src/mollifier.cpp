#include "ldacert/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "ldacert/quadrature.hpp"

namespace ldacert {

namespace {

constexpr double kPi = std::numbers::pi;

double bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

std::once_flag ft_once;
std::vector<double> ft_table;

}  // namespace

const Mollifier& Mollifier::unit() {
  static const Mollifier m;
  return m;
}

Mollifier::Mollifier() {
  const GaussRule& g = gauss_legendre(16);
  auto panel = [&](auto&& f, double a, double b) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += g.w[i] * f(0.5 * (a + b) + 0.5 * (b - a) * g.x[i]);
    return 0.5 * (b - a) * s;
  };

  double zz = 0.0;
  for (int p = 0; p < 256; ++p)
    zz += panel([](double r) { return bump(r) * r * r; }, p / 256.0, (p + 1) / 256.0);
  z_ = 4.0 * kPi * zz;

  n_ = 4096;
  h_ = 1.0 / n_;
  H_.assign(n_ + 1, 0.0);
  L_.assign(n_ + 1, 0.0);
  dH_.resize(n_ + 1);
  dL_.resize(n_ + 1);
  for (int i = 0; i < n_; ++i) {
    const double a = i * h_, b = (i + 1) * h_;
    H_[i + 1] = H_[i] + panel([&](double s) { return density(s) * s * s; }, a, b);
    L_[i + 1] = L_[i] + panel([&](double s) { return density(s) * s; }, a, b);
  }
  for (int i = 0; i <= n_; ++i) {
    const double u = i * h_;
    dH_[i] = density(u) * u * u;
    dL_[i] = density(u) * u;
  }

  // tails accumulated from the edge of the support inwards
  Lc_.assign(n_ + 1, 0.0);
  Sc_.assign(n_ + 1, 0.0);
  dLc_.resize(n_ + 1);
  dSc_.resize(n_ + 1);
  for (int i = n_ - 1; i >= 0; --i) {
    const double a = i * h_, b = (i + 1) * h_;
    Lc_[i] = Lc_[i + 1] + panel([&](double s) { return density(s) * s; }, a, b);
  }
  for (int i = 0; i <= n_; ++i) dLc_[i] = -dL_[i];
  for (int i = n_ - 1; i >= 0; --i) {
    const double a = i * h_, b = (i + 1) * h_;
    Sc_[i] = Sc_[i + 1] + panel([&](double t) { return plane_mass(t); }, a, b);
  }
  for (int i = 0; i <= n_; ++i) dSc_[i] = -plane_mass(i * h_);
}

double Mollifier::density(double r) const { return bump(r) / z_; }

double Mollifier::interp(const std::vector<double>& f, const std::vector<double>& df,
                         double u) const {
  if (u <= 0.0) return f.front();
  if (u >= 1.0) return f.back();
  const double x = u / h_;
  int i = static_cast<int>(x);
  if (i >= n_) i = n_ - 1;
  const double t = x - i;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * f[i] + h10 * h_ * df[i] + h01 * f[i + 1] + h11 * h_ * df[i + 1];
}

double Mollifier::H(double u) const { return interp(H_, dH_, u); }

double Mollifier::L(double u) const { return interp(L_, dL_, u); }

double Mollifier::J(double u) const {
  if (u <= 0.0) return 0.0;
  return L(u) - H(u) / u;
}

double Mollifier::plane_mass(double t) const {
  t = std::abs(t);
  if (t >= 1.0) return 0.0;
  return 2.0 * kPi * interp(Lc_, dLc_, t);
}

double Mollifier::half_space(double d) const {
  if (d >= 1.0) return 1.0;
  if (d <= -1.0) return 0.0;
  if (d < 0.0) return interp(Sc_, dSc_, -d);
  return 1.0 - interp(Sc_, dSc_, d);
}

double Mollifier::fourier_direct(double k) const {
  const GaussRule& g = gauss_legendre(16);
  double s = 0.0;
  for (int p = 0; p < 32; ++p) {
    const double a = p / 32.0, b = (p + 1) / 32.0;
    double ps = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * g.x[i];
      const double kr = k * r;
      const double sinc = std::abs(kr) < 1e-8 ? 1.0 - kr * kr / 6.0 : std::sin(kr) / kr;
      ps += g.w[i] * density(r) * r * r * sinc;
    }
    s += 0.5 * (b - a) * ps;
  }
  return 4.0 * kPi * s / std::pow(2.0 * kPi, 1.5);
}

double Mollifier::fourier(double k) const {
  k = std::abs(k);
  constexpr double kmax = 64.0;
  if (k >= kmax - 4 * k_step_) return fourier_direct(k);
  std::call_once(ft_once, [this] {
    const int m = static_cast<int>(kmax / k_step_) + 1;
    const GaussRule& g = gauss_legendre(16);
    std::vector<double> r, w;
    for (int p = 0; p < 32; ++p) {
      const double a = p / 32.0, b = (p + 1) / 32.0;
      for (int i = 0; i < 16; ++i) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * g.x[i];
        r.push_back(x);
        w.push_back(0.5 * (b - a) * g.w[i] * density(x) * x * x);
      }
    }
    const double pref = 4.0 * kPi / std::pow(2.0 * kPi, 1.5);
    ft_table.resize(m);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
      const double kk = i * k_step_;
      double s = 0.0;
      for (std::size_t j = 0; j < r.size(); ++j) {
        const double kr = kk * r[j];
        s += w[j] * (std::abs(kr) < 1e-8 ? 1.0 - kr * kr / 6.0 : std::sin(kr) / kr);
      }
      ft_table[i] = pref * s;
    }
  });
  // cubic Lagrange on four neighbours
  const double x = k / k_step_;
  int i = static_cast<int>(x) - 1;
  if (i < 0) i = 0;
  const double t = x - i;
  const double f0 = ft_table[i], f1 = ft_table[i + 1], f2 = ft_table[i + 2], f3 = ft_table[i + 3];
  return f0 * (t - 1) * (t - 2) * (t - 3) / -6.0 + f1 * t * (t - 2) * (t - 3) / 2.0 +
         f2 * t * (t - 1) * (t - 3) / -2.0 + f3 * t * (t - 1) * (t - 2) / 6.0;
}

namespace {

// Integrals over a face triangle (a, b, c), oriented counter-clockwise about
// n, of the radial primitives J and L evaluated at sqrt(D^2 + rho^2) minus
// their value at |D|, in polar coordinates around the foot point f.  Each
// edge is parametrized by s = h sinh(v) so the angular weight becomes
// dv / cosh(v).  Outside the unit ball both primitives have closed forms, so
// only the part of an edge inside the ball is integrated numerically.
struct FacePolar {
  double j = 0.0;
  double l = 0.0;
};

FacePolar face_polar(const Vec3& n, const Vec3& f, double D, const std::array<Vec3, 3>& tri) {
  const Mollifier& m = Mollifier::unit();
  const GaussRule& g = gauss_legendre(8);
  const double ad = std::abs(D);
  const double L1 = m.L(1.0), H1 = m.H(1.0);
  const double jd = m.J(ad), ld = m.L(ad);
  const double rho1 = std::sqrt(std::max(0.0, 1.0 - D * D));
  FacePolar total;
  for (int e = 0; e < 3; ++e) {
    const Vec3& a = tri[e];
    const Vec3& b = tri[(e + 1) % 3];
    const Vec3 ev = b - a;
    const double len = ev.norm();
    if (len == 0.0) continue;
    const Vec3 eu = ev / len;
    const Vec3 p0 = a + (f - a).dot(eu) * eu;
    const Vec3 perp = p0 - f;
    const double h = perp.norm();
    if (h < 1e-10) continue;
    const double kappa = n.dot(perp.cross(eu)) >= 0.0 ? 1.0 : -1.0;
    const double va = std::asinh((a - p0).dot(eu) / h);
    const double vb = std::asinh((b - p0).dot(eu) / h);
    const double a2 = D * D + h * h;

    auto outer = [&](double v1, double v2) {
      if (v2 <= v1) return;
      const double gdv = std::atan(std::sinh(v2)) - std::atan(std::sinh(v1));
      auto phi = [&](double v) {
        const double sv = std::sinh(v);
        const double q = sv / std::sqrt(a2 + h * h * sv * sv);
        return ad < 1e-7 ? q : std::atan(ad * q) / ad;
      };
      total.l += kappa * (L1 - ld) * gdv;
      total.j += kappa * ((L1 - jd) * gdv - H1 * (phi(v2) - phi(v1)));
    };

    double lo = va, hi = vb;
    if (h < rho1) {
      const double vs = std::acosh(rho1 / h);
      lo = std::max(va, -vs);
      hi = std::min(vb, vs);
      outer(va, std::min(vb, -vs));
      outer(std::max(va, vs), vb);
    } else {
      outer(va, vb);
      continue;
    }
    if (hi <= lo) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(1.0 * (hi - lo))));
    const double w = (hi - lo) / panels;
    double sj = 0.0, sl = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double c = lo + (p + 0.5) * w;
      double pj = 0.0, pl = 0.0;
      for (int i = 0; i < 8; ++i) {
        const double v = c + 0.5 * w * g.x[i];
        const double ch = std::cosh(v);
        const double rho = h * ch;
        const double u = std::min(1.0, std::sqrt(D * D + rho * rho));
        pj += g.w[i] * (m.J(u) - jd) / ch;
        pl += g.w[i] * (m.L(u) - ld) / ch;
      }
      sj += 0.5 * w * pj;
      sl += 0.5 * w * pl;
    }
    total.j += kappa * sj;
    total.l += kappa * sl;
  }
  return total;
}

SmearSample flux_eval(const Tetra& T, const std::array<Plane, 4>& pl, const Vec3& y, double r) {
  SmearSample out;
  for (int k = 0; k < 4; ++k) {
    std::array<Vec3, 3> tri{T.v[(k + 1) % 4] / r, T.v[(k + 2) % 4] / r, T.v[(k + 3) % 4] / r};
    const Vec3& n = pl[k].n;
    if ((tri[1] - tri[0]).cross(tri[2] - tri[0]).dot(n) < 0) std::swap(tri[1], tri[2]);
    const double D = pl[k].c / r - n.dot(y);
    if (std::abs(D) >= 1.0) {
      out.value += solid_angle(tri[0] - y, tri[1] - y, tri[2] - y) / (4.0 * std::numbers::pi);
      continue;
    }
    const FacePolar fp = face_polar(n, y + D * n, D, tri);
    out.value += D * fp.j;
    out.grad -= n * fp.l / r;
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

}  // namespace

SmearSample smeared_indicator_flux(const Tetra& T, double r, const Vec3& x) {
  return flux_eval(T, T.planes(), x / r, r);
}

SmearSample smeared_indicator(const Tetra& T, double r, const Vec3& x) {
  return smeared_indicator(T, T.planes(), r, x);
}

SmearSample smeared_indicator(const Tetra& T, const std::array<Plane, 4>& pl, double r, const Vec3& x) {
  std::array<double, 4> D;
  int near = 0, which = -1;
  for (int k = 0; k < 4; ++k) {
    D[k] = (pl[k].c - pl[k].n.dot(x)) / r;
    if (D[k] <= -1.0) return {};
    if (D[k] < 1.0) {
      ++near;
      which = k;
    }
  }
  SmearSample out;
  if (near == 0) {
    out.value = 1.0;
    return out;
  }
  if (near == 1) {
    const Mollifier& m = Mollifier::unit();
    out.value = m.half_space(D[which]);
    out.grad = -pl[which].n * m.plane_mass(D[which]) / r;
    return out;
  }
  return flux_eval(T, pl, x / r, r);
}

}  // namespace ldacert
