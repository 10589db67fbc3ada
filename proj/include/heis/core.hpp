#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

// First Heisenberg group with the Koranyi gauge.
//
// A point (x, y, t) is stored as a dense 3-vector with t in the z() slot.
// The group law is
//   (x,y,t) * (x',y',t') = (x+x', y+y', t+t' + (x*y' - y*x')/2),
// the gauge is |(x,y,t)| = ((x^2+y^2)^2 + 16 t^2)^(1/4), and the metric
// d(p,q) = |q^{-1} p| is left invariant. Dilations scale t quadratically.

namespace heis {

template <class S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S> using Vec2 = Eigen::Matrix<S, 2, 1>;

using Point = Vec3<double>;       // (x, y, t), t stored in z()
using PlanarPoint = Vec2<double>; // (x, y)

template <class S>
inline Vec3<S> group_id() {
  return Vec3<S>::Zero();
}

template <class S>
inline Vec3<S> group_mul(const Vec3<S>& p, const Vec3<S>& q) {
  return Vec3<S>(p.x() + q.x(), p.y() + q.y(),
                 p.z() + q.z() + (p.x() * q.y() - p.y() * q.x()) / S(2));
}

// (x,y,t)^{-1} = (-x,-y,-t); the cross term vanishes on p * p^{-1}.
template <class S>
inline Vec3<S> group_inv(const Vec3<S>& p) {
  return -p;
}

template <class S>
inline S koranyi_norm(const Vec3<S>& p) {
  const S zz = p.x() * p.x() + p.y() * p.y();
  using std::pow;
  return pow(zz * zz + S(16) * p.z() * p.z(), S(0.25));
}

template <class S>
inline S heis_dist(const Vec3<S>& p, const Vec3<S>& q) {
  return koranyi_norm<S>(group_mul<S>(group_inv<S>(q), p));
}

// delta_r(x,y,t) = (r x, r y, r^2 t). Group automorphism for r > 0 and
// |delta_r p| = r |p|. Nonpositive r is rejected.
template <class S>
inline Vec3<S> dilate(const Vec3<S>& p, S r) {
  if (!(r > S(0))) throw std::invalid_argument("dilate: factor must be positive");
  return Vec3<S>(r * p.x(), r * p.y(), r * r * p.z());
}

// (x,y,t) -> (-x,-y,t). Group isomorphism and a gauge isometry.
template <class S>
inline Vec3<S> bar_involution(const Vec3<S>& p) {
  return Vec3<S>(-p.x(), -p.y(), p.z());
}

// Homomorphism onto (R^2, +).
template <class S>
inline Vec2<S> project(const Vec3<S>& p) {
  return Vec2<S>(p.x(), p.y());
}

// Lift of a planar point z onto the horizontal plane through p:
// z|_p = p * (z - pi(p), 0). Satisfies pi(z|_p) = z and d(p, z|_p) = |z - pi(p)|.
template <class S>
inline Vec3<S> lift_planar(const Vec2<S>& z, const Vec3<S>& p) {
  const S dx = z.x() - p.x();
  const S dy = z.y() - p.y();
  return Vec3<S>(z.x(), z.y(), p.z() + (p.x() * dy - p.y() * dx) / S(2));
}

template <class S>
inline Vec3<S> lift_point(const Vec3<S>& q, const Vec3<S>& p) {
  return lift_planar<S>(project<S>(q), p);
}

// Iterated lift: p_1 = z_1|_base, p_{j+1} = z_{j+1}|_{p_j}.
// A closed planar polygon lifts to a path whose endpoints differ only in t,
// by twice the signed area enclosed.
template <class S>
inline std::vector<Vec3<S>> lift_sequence(std::span<const Vec2<S>> zs,
                                          const Vec3<S>& base) {
  std::vector<Vec3<S>> out;
  out.reserve(zs.size());
  Vec3<S> cur = base;
  for (const auto& z : zs) {
    cur = lift_planar<S>(z, cur);
    out.push_back(cur);
  }
  return out;
}

inline std::vector<Point> lift_sequence(std::span<const PlanarPoint> zs,
                                        const Point& base) {
  return lift_sequence<double>(zs, base);
}

// Symmetric point of q with respect to p:
//   Sigma_p(q) = p * bar(p^{-1} q) = (2a - x, 2b - y, t - a y + b x)
// for p = (a,b,c), q = (x,y,t). Equals the lift of the planar mirror
// 2 pi(p) - pi(q) onto the horizontal plane through q. Involution in q,
// preserves d(p, .), commutes with left translation and dilation.
template <class S>
inline Vec3<S> sigma(const Vec3<S>& p, const Vec3<S>& q) {
  return Vec3<S>(S(2) * p.x() - q.x(), S(2) * p.y() - q.y(),
                 q.z() - p.x() * q.y() + p.y() * q.x());
}

// Planar mirror S_x(y) = 2x - y.
template <class S>
inline Vec2<S> planar_mirror(const Vec2<S>& x, const Vec2<S>& y) {
  return S(2) * x - y;
}

}  // namespace heis
