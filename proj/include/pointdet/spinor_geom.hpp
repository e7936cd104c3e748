#pragma once

// Elementary geometry of S^2, CP^1 and spinor lifts in C^2.
//
// Every type is templated on the real scalar so the whole direction
// pipeline can be re-run in software quad precision.

#include <array>
#include <cmath>
#include <ostream>

#include "pointdet/errors.hpp"
#include "pointdet/scalar.hpp"

namespace pointdet {

template <class Real>
struct Vec3 {
  Real x{0}, y{0}, z{0};

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(const Real& s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator/(const Vec3& a, const Real& s) { return {a.x / s, a.y / s, a.z / s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  template <class Other>
  Vec3<Other> cast() const {
    return {Other(x), Other(y), Other(z)};
  }
};

template <class Real>
Real dot(const Vec3<Real>& a, const Vec3<Real>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class Real>
Vec3<Real> cross(const Vec3<Real>& a, const Vec3<Real>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class Real>
Real norm(const Vec3<Real>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <class Real>
Real max_norm_distance(const Vec3<Real>& a, const Vec3<Real>& b) {
  using std::abs;
  using std::max;
  return max({Real(abs(a.x - b.x)), Real(abs(a.y - b.y)), Real(abs(a.z - b.z))});
}

using Point3 = Vec3<double>;

/// Rotation of R^3 by a unit quaternion (w; x, y, z).
struct Rotation {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  /// Normalizes an arbitrary nonzero quaternion.
  static Rotation from_quaternion(double w, double x, double y, double z) {
    const double r = std::sqrt(w * w + x * x + y * y + z * z);
    return {w / r, x / r, y / r, z / r};
  }

  Rotation inverse() const { return {w, -x, -y, -z}; }

  Point3 operator()(const Point3& p) const {
    const Point3 u{x, y, z};
    return 2.0 * dot(u, p) * u + (w * w - dot(u, u)) * p + 2.0 * w * cross(u, p);
  }
};

/// A unit vector on S^2.
template <class Real>
struct SpherePoint {
  Real x{0}, y{0}, z{1};

  /// Normalizes an arbitrary nonzero vector onto the sphere.
  static SpherePoint from_direction(const Vec3<Real>& d) {
    const Real r = norm(d);
    return {d.x / r, d.y / r, d.z / r};
  }

  Vec3<Real> vec() const { return {x, y, z}; }
};

/// A point [U : V] of CP^1. The affine coordinate is u = U / V, with V = 0 at infinity.
template <class Real>
struct ProjectivePoint {
  using complex = complex_t<Real>;
  complex U{1}, V{0};

  static ProjectivePoint affine(const complex& u) { return {u, complex(1)}; }
  static ProjectivePoint infinity() { return {complex(1), complex(0)}; }

  bool is_infinity(const Real& tol = Real(0)) const {
    using std::abs;
    return abs(V) <= tol * abs(U);
  }
};

/// A concrete representative (c0, c1) in C^2 of a projective point.
template <class Real>
struct Spinor {
  using complex = complex_t<Real>;
  complex c0{1}, c1{0};

  friend Spinor operator*(const complex& s, const Spinor& a) { return {s * a.c0, s * a.c1}; }
  ProjectivePoint<Real> project() const { return {c0, c1}; }
};

/// Symplectic pairing a ^ b = a0 b1 - a1 b0.
template <class Real>
complex_t<Real> wedge(const Spinor<Real>& a, const Spinor<Real>& b) {
  return a.c0 * b.c1 - a.c1 * b.c0;
}

template <class Real>
Real spinor_norm(const Spinor<Real>& s) {
  using std::sqrt;
  return sqrt(squared_modulus<Real>(s.c0) + squared_modulus<Real>(s.c1));
}

/// Chordal distance between two points of CP^1: |U1 V2 - V1 U2| / (|q1| |q2|).
///
/// Equals half the Euclidean chord between the corresponding sphere points,
/// so it is 0 for equal points and 1 for antipodes.
template <class Real>
Real projective_distance(const ProjectivePoint<Real>& a, const ProjectivePoint<Real>& b) {
  using std::abs;
  using std::sqrt;
  const Real na = sqrt(squared_modulus<Real>(a.U) + squared_modulus<Real>(a.V));
  const Real nb = sqrt(squared_modulus<Real>(b.U) + squared_modulus<Real>(b.V));
  return Real(abs(a.U * b.V - a.V * b.U)) / (na * nb);
}

/// Stereographic projection from the north pole (0,0,1): u = (x + iy) / (1 - z).
///
/// The homogeneous pair [x + iy : 1 - z] equals [1 + z : x - iy] on the
/// sphere; the second form is used on the northern hemisphere, where 1 - z
/// loses digits.
template <class Real>
ProjectivePoint<Real> stereographic_to_cp1(const SpherePoint<Real>& p) {
  using complex = complex_t<Real>;
  if (p.z <= Real(0)) return {complex(p.x, p.y), complex(Real(1) - p.z)};
  return {complex(Real(1) + p.z), complex(p.x, -p.y)};
}

/// Inverse stereographic projection.
template <class Real>
SpherePoint<Real> cp1_to_sphere(const ProjectivePoint<Real>& q) {
  const Real uu = squared_modulus<Real>(q.U);
  const Real vv = squared_modulus<Real>(q.V);
  const Real s = uu + vv;
  const complex_t<Real> w = q.U * complex_t<Real>(q.V.real(), -q.V.imag());
  return {Real(2) * w.real() / s, Real(2) * w.imag() / s, (uu - vv) / s};
}

template <class Real>
SpherePoint<Real> antipode(const SpherePoint<Real>& p) {
  return {-p.x, -p.y, -p.z};
}

/// The antipodal map on CP^1: u -> -1 / conj(u).
template <class Real>
ProjectivePoint<Real> antipode_cp1(const ProjectivePoint<Real>& q) {
  using complex = complex_t<Real>;
  return {complex(-q.V.real(), q.V.imag()), complex(q.U.real(), -q.U.imag())};
}

/// Unit-norm representative of q.
template <class Real>
Spinor<Real> lift(const ProjectivePoint<Real>& q) {
  using std::sqrt;
  const Real r = sqrt(squared_modulus<Real>(q.U) + squared_modulus<Real>(q.V));
  return {q.U / r, q.V / r};
}

/// Unimodular map [[a, b], [c, d]] acting on CP^1 and on C^2.
template <class Real>
class MobiusMap {
 public:
  using complex = complex_t<Real>;

  MobiusMap() = default;

  /// Rescales (a, b, c, d) so that ad - bc = 1. Throws on a singular matrix.
  MobiusMap(complex a, complex b, complex c, complex d) : a_(a), b_(b), c_(c), d_(d) {
    using std::sqrt;
    using std::abs;
    const complex det = a_ * d_ - b_ * c_;
    if (abs(det) == Real(0)) throw Error("singular Mobius matrix");
    const complex s = sqrt(det);
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
  }

  static MobiusMap identity() { return {}; }

  const complex& a() const { return a_; }
  const complex& b() const { return b_; }
  const complex& c() const { return c_; }
  const complex& d() const { return d_; }
  complex determinant() const { return a_ * d_ - b_ * c_; }

  ProjectivePoint<Real> operator()(const ProjectivePoint<Real>& q) const {
    return {a_ * q.U + b_ * q.V, c_ * q.U + d_ * q.V};
  }

  Spinor<Real> operator()(const Spinor<Real>& s) const {
    return {a_ * s.c0 + b_ * s.c1, c_ * s.c0 + d_ * s.c1};
  }

 private:
  complex a_{1}, b_{0}, c_{0}, d_{1};
};

template <class Real>
ProjectivePoint<Real> mobius_apply(const MobiusMap<Real>& m, const ProjectivePoint<Real>& q) {
  return m(q);
}

template <class Real>
Spinor<Real> mobius_apply_spinor(const MobiusMap<Real>& m, const Spinor<Real>& s) {
  return m(s);
}

template <class Real>
std::ostream& operator<<(std::ostream& os, const Vec3<Real>& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

}  // namespace pointdet
