#include "ldacert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ldacert {

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

double Tetra::volume() const { return std::abs(signed_volume(v[0], v[1], v[2], v[3])); }

Vec3 Tetra::centroid() const { return 0.25 * (v[0] + v[1] + v[2] + v[3]); }

std::array<Plane, 4> Tetra::planes() const {
  std::array<Plane, 4> out;
  for (int k = 0; k < 4; ++k) {
    const Vec3& a = v[(k + 1) % 4];
    const Vec3& b = v[(k + 2) % 4];
    const Vec3& c = v[(k + 3) % 4];
    Vec3 n = (b - a).cross(c - a).normalized();
    if (n.dot(v[k] - a) > 0) n = -n;
    out[k] = {n, n.dot(a)};
  }
  return out;
}

bool Tetra::contains(const Vec3& x, double tol) const {
  for (const Plane& p : planes())
    if (p.n.dot(x) > p.c + tol) return false;
  return true;
}

Tetra Tetra::scaled(double s) const {
  Tetra t = *this;
  for (auto& p : t.v) p *= s;
  t.mu.translation *= s;
  return t;
}

Tetra Tetra::shrunk(double s) const {
  Tetra t = *this;
  const Vec3 g = centroid();
  for (auto& p : t.v) p = g + s * (p - g);
  return t;
}

Tetra Tetra::transformed(const Mat3& R, const Vec3& a) const {
  Tetra t = *this;
  for (auto& p : t.v) p = R * p + a;
  t.mu.rotation = R * mu.rotation;
  t.mu.translation = R * mu.translation + a;
  return t;
}

void Tetra::bounds(Vec3& lo, Vec3& hi) const {
  lo = v[0];
  hi = v[0];
  for (const auto& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double la = a.norm(), lb = b.norm(), lc = c.norm();
  const double num = a.dot(b.cross(c));
  const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
  return 2.0 * std::atan2(num, den);
}

bool is_rotation(const Mat3& R, double tol) {
  return (R.transpose() * R - Mat3::Identity()).norm() <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  const double den = 1.0 / (va + vb + vc);
  return a + ab * (vb * den) + ac * (vc * den);
}

double Tetra::distance(const Vec3& x) const {
  if (contains(x)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const Vec3& a = v[(k + 1) % 4];
    const Vec3& b = v[(k + 2) % 4];
    const Vec3& c = v[(k + 3) % 4];
    best = std::min(best, (x - closest_on_triangle(x, a, b, c)).norm());
  }
  return best;
}

}  // namespace ldacert
