#pragma once

#include <array>

#include <Eigen/Dense>

namespace ldacert {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Isometry {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

struct Plane {
  Vec3 n;    // outward unit normal
  double c;  // inside: n.x <= c
};

struct Tetra {
  std::array<Vec3, 4> v;
  Isometry mu;  // maps the reference tetrahedron onto this one

  double volume() const;
  Vec3 centroid() const;
  std::array<Plane, 4> planes() const;  // face k is opposite vertex k
  bool contains(const Vec3& x, double tol = 0.0) const;
  Tetra scaled(double s) const;                         // about the origin
  Tetra shrunk(double s) const;                         // about the centroid
  Tetra transformed(const Mat3& R, const Vec3& a) const;  // R x + a
  void bounds(Vec3& lo, Vec3& hi) const;
  double distance(const Vec3& x) const;  // 0 inside
};

// Closest point to p on triangle (a, b, c).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Signed solid angle subtended at the origin by triangle (a, b, c).
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c);

bool is_rotation(const Mat3& R, double tol = 1e-12);

}  // namespace ldacert
