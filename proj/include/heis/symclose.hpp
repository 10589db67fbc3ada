#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "heis/core.hpp"
#include "heis/exact.hpp"

// Mirror closures. A planar set is symmetric when it is closed under
// S_x(y) = 2x - y for all member pairs; the group analogue closes under
// Sigma_p(q). Both closures here are window restricted fixed points: a
// generated point is kept only if it lies inside the window, and iteration
// proceeds in bulk synchronous rounds so partial results are reproducible.

namespace heis {

struct PlanarClosureOptions {
  int max_iter = 256;
  // Quantization for non-integer seeds. Seeds that are all integer valued
  // take the exact int64 path and ignore this.
  double snap = 1e-9;
};

struct PlanarClosure {
  std::vector<PlanarPoint> points;  // sorted lexicographically
  bool converged = false;
  int rounds = 0;
  bool exact = false;  // integer path used
};

// Closure of the seeds under planar mirrors inside the box |x|,|y| <= window.
PlanarClosure planar_closure(std::span<const PlanarPoint> seeds, double window,
                             const PlanarClosureOptions& opts = {});

// {m a + n b : |m|,|n| <= window, m,n not both odd}. Throws when a, b are
// linearly dependent.
std::vector<PlanarPoint> lattice_prediction(const PlanarPoint& a,
                                            const PlanarPoint& b, int window);

// x_{j+1} = 2 y_j - x_j with every witness y_j drawn from the ambient set.
struct CheckersSequence {
  std::vector<PlanarPoint> points;
  std::vector<PlanarPoint> witnesses;  // size = points.size() - 1
};

// Exact arithmetic: mirror identities must hold bit for bit and witnesses
// must equal ambient members exactly (-0.0 is normalized first).
bool validate_checkers(const CheckersSequence& seq,
                       std::span<const PlanarPoint> ambient);

// The two square loops through z with side vectors 2a, 2b. Their witnesses
// are the edge midpoints, so both are checkers sequences whenever the
// ambient set contains the relevant lattice translates. The first loop
// walks the a edge first and its lift climbs 4 det(a,b) in t; the second
// walks the same square in reverse and descends by the same amount.
std::pair<CheckersSequence, CheckersSequence> loop_sequences(
    const PlanarPoint& z, const PlanarPoint& a, const PlanarPoint& b);

// One maximal arithmetic progression of t2 values: {lo, lo+gap, ..., hi}.
struct FiberRun {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t gap = 1;
  std::int64_t count() const { return (hi - lo) / gap + 1; }
};

// Value-disjoint runs sorted by lo. The full fiber over a column is their
// union.
using Fiber = std::vector<FiberRun>;

// Window restricted fixed point of closure under Sigma. Points live in the
// box |x|,|y| <= window, |t2| <= 2 window^2. Stored per planar column as
// run-compressed t2 fibers, which keeps the representation linear in the
// number of columns rather than points.
class HClosureSet {
 public:
  HClosureSet() = default;

  bool contains(const ExactPoint& p) const;
  const Fiber* fiber(std::int64_t x, std::int64_t y) const;
  std::int64_t size() const;  // total point count
  // Points inside the Koranyi ball B(0, r), counted exactly per run.
  std::int64_t count_in_ball(double r) const;
  std::vector<ExactPoint> points() const;  // canonical order, materialized
  void enumerate(const std::function<void(const ExactPoint&)>& fn) const;
  std::vector<LatticePoint> columns() const;  // sorted lexicographically

  std::span<const ExactPoint> seeds() const { return seeds_; }
  std::int64_t window() const { return window_; }
  bool converged() const { return converged_; }
  int rounds() const { return rounds_; }

 private:
  friend HClosureSet h_closure(std::span<const ExactPoint>, std::int64_t, int);
  std::unordered_map<LatticePoint, Fiber, LatticePointHash, LatticePointEq> fibers_;
  std::vector<ExactPoint> seeds_;
  std::int64_t window_ = 0;
  bool converged_ = false;
  int rounds_ = 0;
};

HClosureSet h_closure(std::span<const ExactPoint> seeds, std::int64_t window,
                      int max_iter = 256);

// Reference engine: literal pairwise iteration over materialized points.
// Quadratic in the output, only usable at small windows; kept as an oracle
// for the run-compressed engine.
std::vector<ExactPoint> h_closure_naive(std::span<const ExactPoint> seeds,
                                        std::int64_t window, int max_iter = 256);

struct GrowthFit {
  double exponent = 0;
  std::vector<double> radii;
  std::vector<std::int64_t> counts;
};

// Least squares slope of log count(B(0,r)) against log r on the closure of
// the seeds. The window must cover the largest radius.
GrowthFit growth_exponent(std::span<const ExactPoint> seeds, std::int64_t window,
                          std::span<const double> radii, int max_iter = 256);

struct LiftedSequence {
  std::vector<ExactPoint> points;
  bool escaped = false;  // some lifted point left the window
};

// Lift a checkers sequence of integer planar points into the closure,
// starting from the member q with pi(q) = zs[0]. Each step reflects through
// an arbitrary fiber point over the witness column, so every lifted point
// that stays inside the window must be a member.
LiftedSequence lift_checkers_into_closure(const HClosureSet& E,
                                          std::span<const LatticePoint> zs,
                                          std::span<const LatticePoint> witnesses,
                                          const ExactPoint& q);

}  // namespace heis
