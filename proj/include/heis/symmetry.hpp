#pragma once

#include <cstdint>
#include <span>

#include "heis/core.hpp"
#include "heis/flatness.hpp"
#include "heis/sampled_set.hpp"

namespace heis {

struct SymmetryVerdict {
  bool symmetric = true;
  bool has_witness = false;
  Point witness_q1{0, 0, 0};
  Point witness_q2{0, 0, 0};
  std::size_t checked_pairs = 0;
  // max over checked pairs of (min over q1' of the mirror defect) - tau*r.
  // Passing pairs stop the q1' search early, so their contribution is an
  // upper bound; the failing pair's defect is exact.
  double margin = 0;
};

// Approximate mirror closure of S inside B(p, r): every sampled pair
// (q1, q2) must admit q1' in S within tau*r of q1 whose mirror image of q2
// stays within tau*r + 2h of the set. Pairs are all of (ball x ball) up to
// pair_cap, then a seeded subsample. Image distances go to the generator's
// continuum model (infinite plane or corner) when the descriptor names one,
// else to the sample itself, so window truncation cannot fake asymmetry.
SymmetryVerdict tau_symmetric(const SampledSet& S, const Point& p, double r,
                              double tau, std::size_t pair_cap = 20000,
                              std::uint64_t seed = 0);

// Dyadic Carleson energy of non-symmetric balls; skeleton identical to
// wgl_energy with badness = failed tau_symmetric. Per-ball seeds derive
// from (seed, scale, candidate), so results are identical at any thread
// count.
CarlesonReport lsc_energy(const SampledSet& S, const Point& p0, double R,
                          double tau, double r_min,
                          std::size_t pair_cap = 300, std::uint64_t seed = 0,
                          unsigned threads = 1);

struct ProbeResult {
  bool found = false;
  double tau = 0;
  Point ball_center{0, 0, 0};
  double ball_radius = 0;
  SymmetryVerdict verdict;
};

// Scans tau_grid (descending; default {2^-1..2^-6}) and returns the first
// tau whose enlarged ball B(p, r/tau) fails tau^2-symmetry. Requires
// beta(S, p, r) >= eps.
ProbeResult beta_implies_nonsymmetric_probe(
    const SampledSet& S, const Point& p, double r, double eps,
    std::span<const double> tau_grid = {}, std::uint64_t seed = 0);

struct NonlipResult {
  double planar_dist = 0;
  double heis_dist = 0;
  double ratio = 0;
};

// Distance blowup of the horizontal projection against the group metric for
// p = (x,0,0) and its vertical-shear partner q = (x,y,xy/2): d(p,q) = |y|
// while the projections sit (y^4 + 4 x^2 y^2)^{1/4} apart.
NonlipResult nonlip_ratio(double x, double y);

}  // namespace heis
