#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heis/core.hpp"

namespace heis {

// Generator metadata. When plane_grid is set the samples form the full
// in-plane grid s_i = s0 + (i+1/2)h, t_j = t0 + (j+1/2)h^2 of a vertical
// plane <z, n_theta> = c, in row-major s-then-t order.
struct SetDescriptor {
  std::string kind;
  double theta = 0, c = 0, extent = 0, h = 0;
  bool plane_grid = false;
  double s0 = 0, t0 = 0;
  std::size_t s_count = 0, t_count = 0;
};

// A finite sample of a 3-regular set: points with cell masses approximating
// the 3-dimensional Hausdorff measure, plus a parabolic-box spatial index.
// Immutable after construction; queries are read-only.
class SampledSet {
 public:
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  double h() const { return h_; }
  const SetDescriptor& descriptor() const { return desc_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
  double h_ = 0;
  SetDescriptor desc_;

  // Uniform anisotropic grid: cells of size (g, g, g^2), CSR over the
  // occupied cells sorted by packed key.
  double g_ = 0;
  double x0_ = 0, y0_ = 0, t0_ = 0;
  std::int64_t nx_ = 0, ny_ = 0, nt_ = 0;
  std::vector<std::uint64_t> cell_keys_;   // sorted, one per occupied cell
  std::vector<std::uint32_t> cell_off_;    // size cell_keys_+1
  std::vector<std::uint32_t> cell_pts_;    // point indices grouped by cell

  friend SampledSet make_sampled_set(std::vector<Point> points,
                                     std::vector<double> weights, double h,
                                     SetDescriptor desc);
  friend std::vector<std::size_t> ball_query(const SampledSet& S,
                                             const Point& p, double r);
  friend double nearest_dist(const SampledSet& S, const Point& p);
};

// Builds the spatial index and validates the size/positivity invariants.
SampledSet make_sampled_set(std::vector<Point> points,
                            std::vector<double> weights, double h,
                            SetDescriptor desc);

// Grid sample of the vertical plane {<z, n_theta> = c} with in-plane
// coordinate s in [-extent, extent] and t in [-extent^2, extent^2]; the
// t-spacing is h^2 and each sample carries mass h^3.
SampledSet gen_vertical_plane(double theta, double c, double extent, double h);

// Two half vertical planes {x = 0, y > 0} and {y = 0, x > 0} meeting along
// the t-axis, weighted like gen_vertical_plane.
SampledSet gen_corner(double extent, double h);

// Sample of the horizontal-line family {t in union of t_intervals} inside
// the vertical plane through the origin with normal angle theta. Intervals
// must be disjoint and contained in [-extent^2, extent^2].
SampledSet gen_horizontal_lines(double theta,
                                std::span<const std::array<double, 2>>
                                    t_intervals,
                                double extent, double h);

// Sample of the surface {x = phi(y, t)} over the same (y, t) grid as the
// theta = 0 plane, with the same cell masses.
SampledSet gen_graph(const std::function<double(double, double)>& phi,
                     double extent, double h);

// Indices of exactly the samples with d(point, p) < r, in index order.
std::vector<std::size_t> ball_query(const SampledSet& S, const Point& p,
                                    double r);

// Minimum metric distance from p to the sample set.
double nearest_dist(const SampledSet& S, const Point& p);

// Per-(center, scale) mass ratios mu(B(p, r))/r^3 and the implied
// regularity constant.
struct RegularityReport {
  std::vector<Point> centers;
  std::vector<double> scales;
  std::vector<double> ratios;      // centers-major: [ci * |scales| + si]
  double r_min = 0, r_max = 0;     // requested scale range
  double constant = 1;             // A >= 1 with all in-band ratios in [1/A, A]
  std::vector<int> out_of_band;    // scale indices outside [8h, extent/4]
  bool degenerate = false;         // too few samples or empty balls
};

RegularityReport regularity_estimate(const SampledSet& S,
                                     std::size_t n_centers,
                                     std::span<const double> scales);

}  // namespace heis
