#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "heis/core.hpp"
#include "heis/sampled_set.hpp"

namespace heis {

// Vertical plane {p : <pi(p), (cos theta, sin theta)> = c}; theta canonical
// in [0, pi), with (theta + pi, c) identified to (theta, -c).
struct VerticalPlane {
  double theta = 0;
  double c = 0;
};

VerticalPlane make_vplane(double theta, double c);

// |<pi(p), n_theta> - c|; equals the metric distance inf_w d(p, w).
double dist_to_vplane(const Point& p, const VerticalPlane& W);

struct BetaResult {
  double value = 0;
  VerticalPlane argmin;
  std::size_t n_support = 0;
};

// Scale-normalized min-max flatness of B(p, r) against vertical planes:
// min over theta of half the projection width, divided by r. The offset c
// is solved exactly by the midrange; the angle by the convex hull of the
// projected support (the minimum is attained at an edge normal). Ties pick
// the smallest theta. Throws std::invalid_argument on an empty ball.
BetaResult beta(const SampledSet& S, const Point& p, double r);

struct BetaCell {
  Point center{0, 0, 0};
  double r = 0;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double theta_star = 0;
  double c_star = 0;
  std::size_t n_support = 0;
  bool ok = false;
  std::string error;
};

// Beta at every (center, scale) pair; per-cell failures are recorded in the
// cell, never thrown. Cells are written by index, so results are identical
// at any thread count.
std::vector<BetaCell> beta_profile(const SampledSet& S,
                                   std::span<const Point> centers,
                                   std::span<const double> scales,
                                   unsigned threads = 1);

// Columns: center_x,center_y,center_t,r,beta,theta_star,c_star.
std::string beta_profile_csv(std::span<const BetaCell> cells);

struct CarlesonReport {
  std::vector<double> scales;
  std::vector<double> masses;
  std::vector<double> clamped_scales;
  double energy = 0;
  double normalizer = 0;
  double ratio = 0;
  double r_lo = 0;
  double r_hi = 0;
};

// Dyadic Carleson energy of the flat-defect set: at each kept scale
// r = 2^{-k} R, the bad mass is the weight of sample points q in B(p0, R)
// with beta(q, r) >= eps; energy = ln2 * sum of masses, ratio = energy/R^3.
// Scales outside [max(8h, r_min), r_hi] are listed in clamped_scales and
// skipped. Masses use a fixed chunked pairwise sum, so the result is
// identical at any thread count.
CarlesonReport wgl_energy(const SampledSet& S, const Point& p0, double R,
                          double eps, double r_min, unsigned threads = 1);

}  // namespace heis
