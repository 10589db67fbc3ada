#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

#include "heis/core.hpp"

// Exact integer model of the group. The t coordinate is stored doubled
// (t2 = 2t) so that the group law's half-integer cross term stays integral:
//   (x,y,t2) * (x',y',t2') = (x+x', y+y', t2+t2' + x y' - y x').
// All closure arithmetic runs on this type; no rounding anywhere.

namespace heis {

using ExactPoint = Eigen::Matrix<std::int64_t, 3, 1>;  // (x, y, t2)
using LatticePoint = Eigen::Matrix<std::int64_t, 2, 1>;

inline ExactPoint exact_mul(const ExactPoint& p, const ExactPoint& q) {
  return ExactPoint(p.x() + q.x(), p.y() + q.y(),
                    p.z() + q.z() + p.x() * q.y() - p.y() * q.x());
}

inline ExactPoint exact_inv(const ExactPoint& p) { return -p; }

inline ExactPoint exact_bar(const ExactPoint& p) {
  return ExactPoint(-p.x(), -p.y(), p.z());
}

// Sigma_p(q) in doubled-t coordinates: (2a-x, 2b-y, t2 + 2(b x - a y)).
inline ExactPoint exact_sigma(const ExactPoint& p, const ExactPoint& q) {
  return ExactPoint(2 * p.x() - q.x(), 2 * p.y() - q.y(),
                    q.z() + 2 * (p.y() * q.x() - p.x() * q.y()));
}

// z|_p for a planar integer point z; t2 gains x_p dy - y_p dx.
inline ExactPoint exact_lift_planar(const LatticePoint& z, const ExactPoint& p) {
  const std::int64_t dx = z.x() - p.x();
  const std::int64_t dy = z.y() - p.y();
  return ExactPoint(z.x(), z.y(), p.z() + p.x() * dy - p.y() * dx);
}

// Exact for |t2| < 2^53.
inline Point to_point(const ExactPoint& e) {
  return Point(double(e.x()), double(e.y()), double(e.z()) / 2.0);
}

inline ExactPoint exact_point(std::int64_t x, std::int64_t y, std::int64_t t2) {
  return ExactPoint(x, y, t2);
}

struct ExactPointHash {
  std::size_t operator()(const ExactPoint& p) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < 3; ++i) {
      std::uint64_t v = std::uint64_t(p[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h ^= v * 0xbf58476d1ce4e5b9ull;
      h ^= h >> 31;
    }
    return std::size_t(h);
  }
};

struct ExactPointEq {
  bool operator()(const ExactPoint& a, const ExactPoint& b) const {
    return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
  }
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const {
    std::uint64_t h = std::uint64_t(p.x()) * 0x9e3779b97f4a7c15ull;
    h ^= (std::uint64_t(p.y()) + (h << 13)) * 0xbf58476d1ce4e5b9ull;
    h ^= h >> 29;
    return std::size_t(h);
  }
};

struct LatticePointEq {
  bool operator()(const LatticePoint& a, const LatticePoint& b) const {
    return a.x() == b.x() && a.y() == b.y();
  }
};

}  // namespace heis
