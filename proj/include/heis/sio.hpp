#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heis/core.hpp"
#include "heis/flatness.hpp"
#include "heis/sampled_set.hpp"
#include "heis/symmetry.hpp"

namespace heis {

// A pointwise kernel with self-declared structure. Factories verify the
// claims on random points before returning, so a constructed Kernel's
// metadata can be trusted. support_lo/support_hi bound the Koranyi norms of
// the support when known (0/inf otherwise).
struct Kernel {
  std::function<double(const Point&)> eval;
  int homogeneity = 0;
  bool claims_horizontal_antisymmetry = false;
  std::string name;
  double support_lo = 0;
  double support_hi = std::numeric_limits<double>::infinity();
};

// Central differences along the horizontal left-invariant flows
// p*(+-s,0,0) and p*(0,+-s,0); O(step^2) accurate.
std::pair<double, double> horizontal_grad(
    const std::function<double(const Point&)>& f, const Point& p,
    double step);

// component 'x' -> (-2x(x^2+y^2) + 8ty) / norm^6,
// component 'y' -> (-2y(x^2+y^2) - 8tx) / norm^6.
// Homogeneous of degree -3, horizontally antisymmetric, singular at 0.
Kernel riesz_kernel(char component);

struct BumpSpec {
  Point center{0, 0, 0};
  double radius = 0;
};

// One-signed C^2 bump: quintic smoothstep in the metric distance from the
// center, 1 inside half the radius, 0 outside the radius. Validates the
// margins shared with bump_psi.
Kernel bump_raw(const BumpSpec& spec);

// Horizontally antisymmetrized bump psi(p) = raw(p) - raw(bar p). Requires
// the support ball and its bar image to be disjoint (2|pi(center)| - 2r >=
// r/4) and to avoid the origin (|center| - r >= r/8).
Kernel bump_psi(const BumpSpec& spec);

// K(p) = sum_{k=-n}^{n} signs[k+n] * r_k^-3 psi(delta_{1/r_k} p) with
// r_k = 2^-k. Requires psi antisymmetric with support bounded away from 0;
// signs.size() must be 2n+1.
Kernel stacked_kernel(const Kernel& psi, std::span<const int> signs, int n);

// Names: "riesz-x", "riesz-y", "bump:cx,cy,ct,r",
// "stacked:n,alt|plus,cx,cy,ct,r".
Kernel kernel_from_name(const std::string& name);

// Truncated singular integral sum_{d(p,q) > eps} K(q^-1 p) f(q) w(q),
// accumulated in sample-index order. Requires eps >= 2h and
// f.size() == S.size().
double t_eps(const Kernel& K, const SampledSet& S, std::span<const double> f,
             double eps, const Point& p);

struct SioReport {
  std::vector<double> eps;
  std::vector<double> norms;
  double h = 0;
  std::string f_desc;
};

// Discrete L2(mu) norms of T_{K,eps}f per eps (descending, min >= 2h).
// Plane-grid sets go through an exact FFT convolution; other sets sum
// directly per sample.
SioReport l2_uniformity(const Kernel& K, const SampledSet& S,
                        std::span<const double> f,
                        std::span<const double> eps_list,
                        std::string f_desc = {}, unsigned threads = 1);

// Multiscale pairing energy sum_k sum_{p in B(p0,R)} w_p F_k(p)^2 with
// F_k(p) = sum_q w_q r_k^-3 psi(delta_{1/r_k}(q^-1 p)), r_k = 2^-k <= R,
// k <= k_max. Scales under 8h are reported in clamped_scales. energy is the
// plain total and ratio = energy / R^3.
CarlesonReport c2_energy(const SampledSet& S, const Kernel& psi,
                         const Point& p0, double R, int k_max,
                         unsigned threads = 1);

struct WitnessBound {
  bool valid = false;
  double value = 0;
  std::size_t n_centers = 0;
  std::size_t n_rejected = 0;
  double integrand_min = 0;
};

// For each base point q1' near q1, rescales q2 into unit coordinates,
// snaps it to a net ball, verifies the bar image of that ball clears the
// set, and integrates the antisymmetrized bump over the samples. Returns
// the minimum integral over admissible base points; valid stays false when
// every base point is rejected (the pair does not violate symmetry).
WitnessBound witness_lower_bound(const SampledSet& S, const Point& q1,
                                 const Point& q2, double r, double tau);

}  // namespace heis
