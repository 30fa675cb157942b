#include "ldacert/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fftw3.h>

#include "ldacert/error.hpp"
#include "ldacert/quadrature.hpp"
#include "ldacert/reduce.hpp"

namespace ldacert {

namespace {

constexpr double kPi = std::numbers::pi;

void check_support(const ScalarField& f) {
  const GridSpec& s = f.spec;
  double total = 0.0, edge = 0.0;
  for (int k = 0; k < s.n[2]; ++k)
    for (int j = 0; j < s.n[1]; ++j)
      for (int i = 0; i < s.n[0]; ++i) {
        const double v = std::abs(f.at(i, j, k));
        total += v;
        if (i == 0 || j == 0 || k == 0 || i == s.n[0] - 1 || j == s.n[1] - 1 || k == s.n[2] - 1)
          edge += v;
      }
  if (total > 0.0 && edge > kSupportTolerance * total)
    throw SupportError("density support touches the grid boundary");
}

double support_diagonal(const ScalarField& f) {
  const GridSpec& s = f.spec;
  std::array<int, 3> lo{s.n[0], s.n[1], s.n[2]}, hi{-1, -1, -1};
  for (int k = 0; k < s.n[2]; ++k)
    for (int j = 0; j < s.n[1]; ++j)
      for (int i = 0; i < s.n[0]; ++i) {
        if (f.at(i, j, k) == 0.0) continue;
        const int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], idx[a]);
          hi[a] = std::max(hi[a], idx[a]);
        }
      }
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double ext = hi[a] >= lo[a] ? (hi[a] - lo[a] + 1) * s.h[a] : s.h[a];
    d2 += ext * ext;
  }
  return std::sqrt(d2);
}

template <bool Parallel, class K>
double spectral_sum(const SpectralField& s, K&& kernel) {
  auto term = [&](std::size_t id) { return std::norm(s.coeffs[id]) * kernel(s.wavevector(id)); };
  return Parallel ? det_sum(s.coeffs.size(), term) : serial::det_sum(s.coeffs.size(), term);
}

double padded_volume(const SpectralField& s) {
  return s.padded.n[0] * s.padded.h[0] * s.padded.n[1] * s.padded.h[1] * s.padded.n[2] * s.padded.h[2];
}

template <bool Parallel>
double hartree_impl(const SpectralField& s) {
  const double R = s.cutoff;
  const double sum = spectral_sum<Parallel>(s, [R](const Vec3& p) { return truncated_kernel(p.norm(), R); });
  return std::max(0.0, sum / (2.0 * padded_volume(s)));
}

template <bool Parallel>
double shifted_impl(const SpectralField& s, const Vec3& q) {
  const double R = s.cutoff;
  const double sum =
      spectral_sum<Parallel>(s, [&](const Vec3& p) { return truncated_kernel((p - q).norm(), R); });
  return sum / (4.0 * kPi * padded_volume(s));
}

// t log((t+1)/|t-1|) integrated over [a, b] on one side of t = 1, in the
// variable u = -log|t-1|.
double annulus_side(double a, double b, bool above) {
  if (b <= a) return 0.0;
  const double s0 = above ? a - 1.0 : 1.0 - b;
  const double s1 = above ? b - 1.0 : 1.0 - a;
  const double u_lo = -std::log(s1);
  const double u_hi = s0 > 0.0 ? -std::log(s0) : std::numeric_limits<double>::infinity();
  auto g = [above](double u) {
    const double s = std::exp(-u);
    const double t = above ? 1.0 + s : 1.0 - s;
    return t * (std::log(t + 1.0) + u) * s;
  };
  return integrate_adaptive(g, u_lo, u_hi, 1e-12).value;
}

}  // namespace

Vec3 SpectralField::wavevector(std::size_t id) const {
  const std::size_t nx = padded.n[0], ny = padded.n[1];
  const long idx[3] = {static_cast<long>(id % nx), static_cast<long>((id / nx) % ny),
                       static_cast<long>(id / (nx * ny))};
  Vec3 p;
  for (int a = 0; a < 3; ++a) {
    const long n = padded.n[a];
    const long m = idx[a] < (n + 1) / 2 ? idx[a] : idx[a] - n;
    p[a] = 2.0 * kPi * m / (n * padded.h[a]);
  }
  return p;
}

double SpectralField::max_hermitian_asymmetry() const {
  double scale = 0.0, worst = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  const int nx = padded.n[0], ny = padded.n[1], nz = padded.n[2];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t a = padded.index(i, j, k);
        const std::size_t b = padded.index((nx - i) % nx, (ny - j) % ny, (nz - k) % nz);
        worst = std::max(worst, std::abs(coeffs[a] - std::conj(coeffs[b])));
      }
  return worst / scale;
}

double truncated_kernel(double p, double R) {
  const double x = p * R;
  if (x < 1e-4) return 2.0 * kPi * R * R * (1.0 - x * x / 12.0);
  const double s = std::sin(0.5 * x);
  return 8.0 * kPi * s * s / (p * p);
}

SpectralField spectral(const ScalarField& f, int pad, double cutoff) {
  f.validate(false);
  if (pad < 1) throw ParamError("padding factor must be >= 1");
  check_support(f);
  SpectralField s;
  s.pad = pad;
  s.padded.n = {pad * f.spec.n[0], pad * f.spec.n[1], pad * f.spec.n[2]};
  s.padded.h = f.spec.h;
  s.padded.origin = f.spec.origin;
  s.cutoff = cutoff > 0.0 ? cutoff : support_diagonal(f);
  const std::size_t n = s.padded.size();
  fftw_complex* buf = fftw_alloc_complex(n);
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * n, 0.0);
  for (int k = 0; k < f.spec.n[2]; ++k)
    for (int j = 0; j < f.spec.n[1]; ++j)
      for (int i = 0; i < f.spec.n[0]; ++i) buf[s.padded.index(i, j, k)][0] = f.at(i, j, k);
  fftw_plan plan;
#pragma omp critical(fftw_planner)
  plan = fftw_plan_dft_3d(s.padded.n[2], s.padded.n[1], s.padded.n[0], buf, buf, FFTW_FORWARD,
                          FFTW_ESTIMATE);
  fftw_execute(plan);
#pragma omp critical(fftw_planner)
  fftw_destroy_plan(plan);
  const double dv = f.spec.cell_volume();
  s.coeffs.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.coeffs[i] = {buf[i][0] * dv, buf[i][1] * dv};
  fftw_free(buf);
  return s;
}

double hartree(const SpectralField& s) { return hartree_impl<true>(s); }

double hartree(const ScalarField& rho) {
  rho.validate(true);
  if (std::all_of(rho.values.begin(), rho.values.end(), [](double v) { return v == 0.0; })) return 0.0;
  return hartree(spectral(rho));
}

double hartree(const Density& rho, int grid_n) {
  if (const auto* f = std::get_if<ScalarField>(&rho)) return hartree(*f);
  return hartree(sample(rho, default_grid(rho, grid_n)));
}

double shifted_coulomb_integral(const SpectralField& s, const Vec3& q) { return shifted_impl<true>(s, q); }

namespace serial {
double hartree(const SpectralField& s) { return hartree_impl<false>(s); }
double shifted_coulomb_integral(const SpectralField& s, const Vec3& q) {
  return shifted_impl<false>(s, q);
}
}  // namespace serial

double annulus_conv(double r, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ParamError("annulus width alpha must lie in (0, 1/2]");
  if (!(r >= 0.0)) throw ParamError("annulus radius must be >= 0");
  if (r == 0.0) return 8.0 * kPi * alpha / (1.0 - alpha * alpha);
  const double a = 1.0 / (r * (1.0 + alpha));
  const double b = 1.0 / (r * (1.0 - alpha));
  double v = 0.0;
  if (a < 1.0) v += annulus_side(a, std::min(b, 1.0), false);
  if (b > 1.0) v += annulus_side(std::max(a, 1.0), b, true);
  return 2.0 * kPi * r * v;
}

AnnulusSup annulus_sup(double alpha, const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw ParamError("annulus_sup needs a nonempty radius grid");
  std::vector<double> vals(r_grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < static_cast<long>(r_grid.size()); ++i) vals[i] = annulus_conv(r_grid[i], alpha);
  AnnulusSup out;
  const auto it = std::max_element(vals.begin(), vals.end());
  out.sup = *it;
  out.argmax = r_grid[it - vals.begin()];
  out.ratio = out.sup / (alpha * std::log(1.0 / alpha));
  return out;
}

std::vector<double> annulus_default_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 1600; ++i) g.push_back(i * 0.005);
  return g;
}

IdentityResult periodic_localization_identity(const ScalarField& rho, const PeriodicCoeffs& f,
                                              double ell, int n_tau) {
  if (!(ell > 0.0)) throw ParamError("period ell must be positive");
  if (n_tau < 8) throw ParamError("translation quadrature needs at least 8 nodes per axis");
  rho.validate(true);
  double cmax = 0.0;
  for (const auto& [k, c] : f) cmax = std::max(cmax, std::abs(c));
  for (const auto& [k, c] : f) {
    const auto it = f.find({-k.i, -k.j, -k.k});
    const std::complex<double> partner = it == f.end() ? 0.0 : it->second;
    if (std::abs(c - std::conj(partner)) > 1e-12 * cmax)
      throw ParamError("periodic coefficients are not Hermitian symmetric");
  }

  const SpectralField base = spectral(rho);
  std::vector<std::pair<Vec3, std::complex<double>>> modes;
  for (const auto& [k, c] : f)
    if (c != 0.0) modes.push_back({Vec3(k.i, k.j, k.k) * (2.0 * kPi / ell), c});

  IdentityResult out;
  for (const auto& [k, c] : modes) out.rhs += 2.0 * kPi * std::norm(c) * shifted_coulomb_integral(base, k);

  const GridSpec& s = rho.spec;
  const std::size_t n = s.size();
  std::vector<std::vector<std::complex<double>>> phase(modes.size(), std::vector<std::complex<double>>(n));
  for (std::size_t m = 0; m < modes.size(); ++m)
    for (int k = 0; k < s.n[2]; ++k)
      for (int j = 0; j < s.n[1]; ++j)
        for (int i = 0; i < s.n[0]; ++i)
          phase[m][s.index(i, j, k)] = modes[m].second * std::exp(std::complex<double>(0, modes[m].first.dot(s.point(i, j, k))));

  const GaussRule& g = gauss_legendre(n_tau);
  const std::size_t nodes = static_cast<std::size_t>(n_tau) * n_tau * n_tau;
  std::vector<double> contrib(nodes);
#pragma omp parallel for schedule(dynamic, 1)
  for (long id = 0; id < static_cast<long>(nodes); ++id) {
    const int a = id % n_tau, b = (id / n_tau) % n_tau, c = id / (n_tau * n_tau);
    const Vec3 tau(0.5 * ell * (1 + g.x[a]), 0.5 * ell * (1 + g.x[b]), 0.5 * ell * (1 + g.x[c]));
    std::vector<std::complex<double>> shift(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m)
      shift[m] = std::exp(std::complex<double>(0, -modes[m].first.dot(tau)));
    ScalarField h{s, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      double fv = 0.0;
      for (std::size_t m = 0; m < modes.size(); ++m) fv += (phase[m][i] * shift[m]).real();
      h.values[i] = fv * rho.values[i];
    }
    const double w = g.w[a] * g.w[b] * g.w[c] / 8.0;
    contrib[id] = w * hartree(spectral(h, 2, base.cutoff));
  }
  out.lhs = pairwise_sum(contrib.data(), contrib.size());
  return out;
}

}  // namespace ldacert
