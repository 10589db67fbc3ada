#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "heis/exact.hpp"
#include "heis/rng.hpp"
#include "heis/symclose.hpp"

using namespace heis;

namespace {

std::vector<ExactPoint> axis_seeds() {
  return {exact_point(0, 0, 0), exact_point(1, 0, 0), exact_point(0, 1, 0)};
}

bool same_points(const std::vector<ExactPoint>& a,
                 const std::vector<ExactPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].x() != b[i].x() || a[i].y() != b[i].y() || a[i].z() != b[i].z())
      return false;
  return true;
}

}  // namespace

TEST_CASE("planar closure of the unit generators excludes odd-odd") {
  std::vector<PlanarPoint> seeds = {PlanarPoint(0, 0), PlanarPoint(1, 0),
                                    PlanarPoint(0, 1)};
  auto cl = planar_closure(seeds, 5.0);
  CHECK(cl.converged);
  CHECK(cl.exact);
  auto pred = lattice_prediction(PlanarPoint(1, 0), PlanarPoint(0, 1), 5);
  REQUIRE(cl.points.size() == pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    CHECK(cl.points[i].x() == pred[i].x());
    CHECK(cl.points[i].y() == pred[i].y());
  }
  // 11x11 box minus the 6x6 odd-odd pairs.
  CHECK(cl.points.size() == 121 - 36);
}

TEST_CASE("planar closure with skew generators stays inside the sublattice") {
  PlanarPoint a(1, 1), b(2, -1);  // det -3
  std::vector<PlanarPoint> seeds = {PlanarPoint(0, 0), a, b};
  auto cl = planar_closure(seeds, 14.0);
  CHECK(cl.converged);
  auto pred = lattice_prediction(a, b, 4);
  std::set<std::pair<double, double>> got;
  for (const auto& p : cl.points) got.insert({p.x(), p.y()});
  for (const auto& p : pred)
    if (std::abs(p.x()) <= 14 && std::abs(p.y()) <= 14)
      CHECK(got.count({p.x(), p.y()}) == 1);
  // Every closure point solves m a + n b with integer m, n not both odd.
  for (const auto& p : cl.points) {
    double det = a.x() * b.y() - a.y() * b.x();
    double m = (p.x() * b.y() - p.y() * b.x()) / det;
    double n = (a.x() * p.y() - a.y() * p.x()) / det;
    CHECK(std::abs(m - std::rint(m)) < 1e-9);
    CHECK(std::abs(n - std::rint(n)) < 1e-9);
    long mi = std::lround(m), ni = std::lround(n);
    CHECK(!((mi & 1) && (ni & 1)));
  }
}

TEST_CASE("planar closure takes the quantized path for fractional seeds") {
  std::vector<PlanarPoint> seeds = {PlanarPoint(0, 0), PlanarPoint(0.5, 0),
                                    PlanarPoint(0, 0.5)};
  auto cl = planar_closure(seeds, 2.5);
  CHECK(!cl.exact);
  CHECK(cl.converged);
  auto pred = lattice_prediction(PlanarPoint(0.5, 0), PlanarPoint(0, 0.5), 5);
  REQUIRE(cl.points.size() == pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    CHECK((cl.points[i] - pred[i]).norm() < 1e-6);
}

TEST_CASE("planar closure reports non-convergence under an iteration cap") {
  std::vector<PlanarPoint> seeds = {PlanarPoint(0, 0), PlanarPoint(1, 0),
                                    PlanarPoint(0, 1)};
  PlanarClosureOptions opts;
  opts.max_iter = 2;
  auto cl = planar_closure(seeds, 60.0, opts);
  CHECK(!cl.converged);
  CHECK(cl.rounds == 2);
}

TEST_CASE("planar closure input validation") {
  std::vector<PlanarPoint> none;
  CHECK_THROWS_AS(planar_closure(none, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(lattice_prediction(PlanarPoint(1, 2), PlanarPoint(2, 4), 3),
                  std::invalid_argument);
}

TEST_CASE("checkers validation on the square loops") {
  std::vector<PlanarPoint> seeds = {PlanarPoint(0, 0), PlanarPoint(1, 0),
                                    PlanarPoint(0, 1)};
  auto ambient = planar_closure(seeds, 5.0).points;
  auto [plus, minus] = loop_sequences(PlanarPoint(0, 0), PlanarPoint(1, 0),
                                      PlanarPoint(0, 1));
  CHECK(validate_checkers(plus, ambient));
  CHECK(validate_checkers(minus, ambient));

  // Removing one witness from the ambient set invalidates the loop.
  std::vector<PlanarPoint> pruned;
  for (const auto& p : ambient)
    if (!(p.x() == 2 && p.y() == 1)) pruned.push_back(p);
  CHECK(!validate_checkers(plus, pruned));

  CheckersSequence broken = plus;
  broken.witnesses.pop_back();
  CHECK_THROWS_AS(validate_checkers(broken, ambient), std::invalid_argument);
}

TEST_CASE("run engine matches the pairwise engine on pinned seeds") {
  auto seeds = axis_seeds();
  for (std::int64_t w : {3, 4, 6}) {
    auto fast = h_closure(seeds, w);
    CHECK(fast.converged());
    CHECK(same_points(fast.points(), h_closure_naive(seeds, w)));
  }
}

TEST_CASE("run engine matches the pairwise engine on seeds with offsets") {
  std::vector<ExactPoint> seeds = {exact_point(0, 0, 0), exact_point(1, 0, 2),
                                   exact_point(0, 1, -2)};
  for (std::int64_t w : {3, 5}) {
    auto fast = h_closure(seeds, w);
    CHECK(same_points(fast.points(), h_closure_naive(seeds, w)));
  }
  std::vector<ExactPoint> pair = {exact_point(1, 1, 0), exact_point(-1, 0, 4)};
  auto fast = h_closure(pair, 5);
  CHECK(same_points(fast.points(), h_closure_naive(pair, 5)));
}

TEST_CASE("run engine matches the pairwise engine on random seeds") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    std::int64_t w = 3 + static_cast<std::int64_t>(rng.index(3));  // 3..5
    int n = 2 + static_cast<int>(rng.index(3));
    std::vector<ExactPoint> seeds;
    for (int i = 0; i < n; ++i)
      seeds.push_back(exact_point(rng.integer(-w, w), rng.integer(-w, w),
                                  rng.integer(-2 * w * w, 2 * w * w)));
    CAPTURE(trial);
    auto fast = h_closure(seeds, w);
    auto slow = h_closure_naive(seeds, w);
    CHECK(same_points(fast.points(), slow));
    CHECK(fast.size() == static_cast<std::int64_t>(slow.size()));
  }
}

TEST_CASE("closure fibers advance in steps of four in t") {
  auto E = h_closure(axis_seeds(), 8);
  // Over the origin: t2 multiples of 8, nothing in between.
  for (std::int64_t k = -16; k <= 16; ++k)
    CHECK(E.contains(exact_point(0, 0, 8 * k)));
  CHECK(!E.contains(exact_point(0, 0, 4)));
  CHECK(!E.contains(exact_point(0, 0, 2)));
  CHECK(!E.contains(exact_point(0, 0, 1)));
  // Odd-odd columns stay empty.
  CHECK(E.fiber(1, 1) == nullptr);
  CHECK(E.fiber(3, -5) == nullptr);
  CHECK(E.fiber(2, 1) != nullptr);
  // Interior fibers are a single arithmetic progression of gap 8.
  const Fiber* f = E.fiber(2, 1);
  REQUIRE(f != nullptr);
  REQUIRE(f->size() == 1);
  CHECK((*f)[0].gap == 8);
}

TEST_CASE("ball counts agree with direct enumeration") {
  auto E = h_closure(axis_seeds(), 6);
  auto pts = E.points();
  for (double r : {1.0, 2.0, 3.0, 5.0}) {
    std::int64_t direct = 0;
    for (const auto& p : pts) {
      long double q2 = static_cast<long double>(p.x()) * p.x() +
                       static_cast<long double>(p.y()) * p.y();
      if (q2 * q2 + 4.0L * p.z() * p.z() <= static_cast<long double>(r) * r * r * r)
        ++direct;
    }
    CHECK(E.count_in_ball(r) == direct);
  }
  CHECK(E.count_in_ball(0.5) == 1);  // only the origin
}

TEST_CASE("window restriction is monotone") {
  auto small = h_closure(axis_seeds(), 4);
  auto big = h_closure(axis_seeds(), 6);
  small.enumerate([&](const ExactPoint& p) { CHECK(big.contains(p)); });
  CHECK(big.size() > small.size());
}

TEST_CASE("closure engine is deterministic") {
  std::vector<ExactPoint> seeds = {exact_point(0, 0, 0), exact_point(1, 0, 2),
                                   exact_point(0, 1, -2)};
  auto a = h_closure(seeds, 6);
  auto b = h_closure(seeds, 6);
  CHECK(a.rounds() == b.rounds());
  CHECK(same_points(a.points(), b.points()));
}

TEST_CASE("square loop lifts into the closure and climbs one fiber step") {
  auto E = h_closure(axis_seeds(), 6);
  std::vector<LatticePoint> zs = {LatticePoint(0, 0), LatticePoint(2, 0),
                                  LatticePoint(2, 2), LatticePoint(0, 2),
                                  LatticePoint(0, 0)};
  std::vector<LatticePoint> ws = {LatticePoint(1, 0), LatticePoint(2, 1),
                                  LatticePoint(1, 2), LatticePoint(0, 1)};
  auto lifted = lift_checkers_into_closure(E, zs, ws, exact_point(0, 0, 0));
  CHECK(!lifted.escaped);
  REQUIRE(lifted.points.size() == 5);
  CHECK(lifted.points[2].z() == 4);
  CHECK(lifted.points[4].x() == 0);
  CHECK(lifted.points[4].y() == 0);
  CHECK(lifted.points[4].z() == 8);  // t2 = 8, one loop of area 4
  for (const auto& p : lifted.points) CHECK(E.contains(p));

  // Reversed orientation descends.
  std::vector<LatticePoint> zs2 = {LatticePoint(0, 0), LatticePoint(0, 2),
                                   LatticePoint(2, 2), LatticePoint(2, 0),
                                   LatticePoint(0, 0)};
  std::vector<LatticePoint> ws2 = {LatticePoint(0, 1), LatticePoint(1, 2),
                                   LatticePoint(2, 1), LatticePoint(1, 0)};
  auto down = lift_checkers_into_closure(E, zs2, ws2, exact_point(0, 0, 0));
  CHECK(down.points[4].z() == -8);
}

TEST_CASE("lifting marks escapes from the window") {
  auto E = h_closure(axis_seeds(), 4);
  std::vector<LatticePoint> zs = {LatticePoint(0, 0), LatticePoint(6, 0)};
  std::vector<LatticePoint> ws = {LatticePoint(3, 0)};
  auto lifted = lift_checkers_into_closure(E, zs, ws, exact_point(0, 0, 0));
  CHECK(lifted.escaped);
  CHECK(lifted.points[1].x() == 6);
}

TEST_CASE("lift validation") {
  auto E = h_closure(axis_seeds(), 4);
  std::vector<LatticePoint> zs = {LatticePoint(0, 0), LatticePoint(2, 2)};
  std::vector<LatticePoint> bad_w = {LatticePoint(1, 0)};  // mirror mismatch
  CHECK_THROWS_AS(
      lift_checkers_into_closure(E, zs, bad_w, exact_point(0, 0, 0)),
      std::invalid_argument);
  std::vector<LatticePoint> w11 = {LatticePoint(1, 1)};  // empty column
  CHECK_THROWS_AS(lift_checkers_into_closure(E, zs, w11, exact_point(0, 0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      lift_checkers_into_closure(E, zs, w11, exact_point(0, 0, 2)),
      std::invalid_argument);  // start not a member
}

TEST_CASE("growth exponent of the full closure is four") {
  std::vector<double> radii = {4, 8, 16};
  auto fit = growth_exponent(axis_seeds(), 16, radii);
  CHECK(fit.counts.size() == 3);
  CHECK(fit.counts[2] > fit.counts[1]);
  CHECK(fit.exponent == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("collinear seeds grow like a line times the fiber") {
  // Seeds on the y axis: mirrors never leave the column line and every
  // sigma preserves t2 there, so the set stays two dimensional in effect.
  std::vector<ExactPoint> seeds = {exact_point(0, 0, 0), exact_point(0, 1, 0),
                                   exact_point(0, 2, 0)};
  auto E = h_closure(seeds, 16);
  CHECK(E.converged());
  // Fibers never grow: D = 2(b x - a y) vanishes when all x = 0.
  E.enumerate([](const ExactPoint& p) {
    CHECK(p.x() == 0);
    CHECK(p.z() == 0);
  });
  std::vector<double> radii = {4, 8, 16};
  auto fit = growth_exponent(seeds, 16, radii);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("closure rejects bad inputs") {
  std::vector<ExactPoint> none;
  CHECK_THROWS_AS(h_closure(none, 4), std::invalid_argument);
  CHECK_THROWS_AS(h_closure(axis_seeds(), 0), std::invalid_argument);
  std::vector<double> radii = {4.0, 32.0};
  CHECK_THROWS_AS(growth_exponent(axis_seeds(), 16, radii),
                  std::invalid_argument);
  std::vector<double> one = {4.0};
  CHECK_THROWS_AS(growth_exponent(axis_seeds(), 16, one),
                  std::invalid_argument);
}
