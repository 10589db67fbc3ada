#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "heis/core.hpp"
#include "heis/flatness.hpp"
#include "heis/rng.hpp"
#include "heis/sampled_set.hpp"

using namespace heis;

namespace {

// Exhaustive angle scan: width of the projected point cloud over a uniform
// theta grid. Upper-bounds the true minimum width from above.
double scan_beta(const std::vector<std::array<double, 2>>& xy, double r,
                 int n_angles) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_angles; ++k) {
    double th = std::numbers::pi * k / n_angles;
    double nx = std::cos(th), ny = std::sin(th);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& q : xy) {
      double s = nx * q[0] + ny * q[1];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    best = std::min(best, (hi - lo) / (2 * r));
  }
  return best;
}

std::vector<std::array<double, 2>> unique_xy(const SampledSet& S,
                                             const std::vector<std::size_t>& idx) {
  std::vector<std::array<double, 2>> xy;
  xy.reserve(idx.size());
  for (std::size_t i : idx)
    xy.push_back({S.points()[i].x(), S.points()[i].y()});
  std::sort(xy.begin(), xy.end());
  xy.erase(std::unique(xy.begin(), xy.end()), xy.end());
  return xy;
}

}  // namespace

TEST_CASE("plane distance closed form matches brute force minimization") {
  VerticalPlane W = make_vplane(0.0, 0.0);
  CHECK(dist_to_vplane(Point{3, 0, 5}, W) == 3.0);
  CHECK(dist_to_vplane(Point{0, 7, -2}, W) == 0.0);

  VerticalPlane W2 = make_vplane(0.5, 0.3);
  SampledSet dense = gen_vertical_plane(0.5, 0.3, 2.0, 1.0 / 64);
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double d = dist_to_vplane(p, W2);
    if (d < 0.1) continue;
    double brute = std::numeric_limits<double>::infinity();
    for (const auto& w : dense.points()) brute = std::min(brute, heis_dist(p, w));
    CAPTURE(trial);
    CHECK(std::abs(brute - d) / d <= 1e-3);
  }
}

TEST_CASE("plane distance is invariant under left translation") {
  Rng rng(42);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    double th = rng.uniform(0, std::numbers::pi);
    double c = rng.uniform(-2, 2);
    Point p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    Point g{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    VerticalPlane W = make_vplane(th, c);
    // g maps {<pi(q),n>=c} to {<pi(q),n> = c + <pi(g),n>}.
    double cg = c + g.x() * std::cos(th) + g.y() * std::sin(th);
    VerticalPlane gW = make_vplane(th, cg);
    worst = std::max(worst, std::abs(dist_to_vplane(group_mul(g, p), gW) -
                                     dist_to_vplane(p, W)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("plane canonicalization folds theta and offset together") {
  VerticalPlane a = make_vplane(3.5, 0.7);
  CHECK(a.theta == doctest::Approx(3.5 - std::numbers::pi).epsilon(1e-12));
  CHECK(a.c == doctest::Approx(-0.7).epsilon(1e-12));
  Rng rng(43);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    double th = rng.uniform(-10, 10);
    double c = rng.uniform(-2, 2);
    Point p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    VerticalPlane w1 = make_vplane(th, c);
    VerticalPlane w2 = make_vplane(th + std::numbers::pi, -c);
    CHECK(w1.theta >= 0.0);
    CHECK(w1.theta < std::numbers::pi);
    worst = std::max(worst,
                     std::abs(dist_to_vplane(p, w1) - dist_to_vplane(p, w2)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("midrange offset is optimal for fixed angle") {
  Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    double th = rng.uniform(0, std::numbers::pi);
    double nx = std::cos(th), ny = std::sin(th);
    std::vector<double> proj;
    for (int i = 0; i < 30; ++i)
      proj.push_back(nx * rng.uniform(-2, 2) + ny * rng.uniform(-2, 2));
    auto [mn, mx] = std::minmax_element(proj.begin(), proj.end());
    double mid = (*mn + *mx) / 2;
    auto sup = [&](double c) {
      double s = 0;
      for (double v : proj) s = std::max(s, std::abs(v - c));
      return s;
    };
    double best_grid = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 10000; ++k)
      best_grid = std::min(best_grid, sup(*mn + (*mx - *mn) * k / 10000.0));
    CAPTURE(trial);
    CHECK(sup(mid) <= best_grid + 1e-12);
  }
}

TEST_CASE("beta of an exact plane sample is at most discretization") {
  double h = 1.0 / 32;
  SampledSet S = gen_vertical_plane(0.7, -0.2, 2.0, h);
  std::vector<double> radii{0.25, 0.35, 0.5};
  for (double r : radii) {
    Point p = S.points()[S.size() / 2];
    BetaResult b = beta(S, p, r);
    CAPTURE(r);
    CHECK(b.value <= 2 * h / r);
    CHECK(b.value <= 1e-10);
    CHECK(b.n_support > 0);
    CHECK(b.argmin.theta >= 0.0);
    CHECK(b.argmin.theta < std::numbers::pi);
  }
}

TEST_CASE("corner ball at the apex has the known flatness defect") {
  double h = 1.0 / 64;
  SampledSet S = gen_corner(1.25, h);
  BetaResult b = beta(S, Point{0, 0, 0}, 1.0);
  CHECK(std::abs(b.value - 0.354) <= 0.01);
  CHECK(std::abs(b.argmin.theta - std::numbers::pi / 4) <= 0.05);
  auto idx = ball_query(S, Point{0, 0, 0}, 1.0);
  auto xy = unique_xy(S, idx);
  double oracle = scan_beta(xy, 1.0, 10000);
  CHECK(b.value <= oracle + 1e-12);
  CHECK(oracle - b.value <= 1e-3);
}

TEST_CASE("beta commutes with dilation") {
  double h = 1.0 / 16;
  SampledSet S = gen_corner(2.0, h);
  double s = 0.5;
  std::vector<Point> dil;
  dil.reserve(S.size());
  for (const auto& q : S.points()) dil.push_back(dilate(q, s));
  SampledSet D = make_sampled_set(dil, S.weights(), h * s, {});
  Point p{0, 0.5, 0.1};
  double r = 0.5;
  BetaResult b1 = beta(S, p, r);
  BetaResult b2 = beta(D, dilate(p, s), s * r);
  CHECK(b1.n_support == b2.n_support);
  CHECK(std::abs(b1.value - b2.value) <= 1e-6);
}

TEST_CASE("beta value survives left translation") {
  double h = 1.0 / 16;
  SampledSet S = gen_corner(2.0, h);
  Point g{0.3, -0.2, 0.15};
  std::vector<Point> moved;
  moved.reserve(S.size());
  for (const auto& q : S.points()) moved.push_back(group_mul(g, q));
  SampledSet M = make_sampled_set(moved, S.weights(), h, {});
  for (Point p : {Point{0, 0.5, 0.1}, Point{0.4, 0, -0.2}, Point{0, 0, 0}}) {
    double r = 0.5;
    BetaResult b1 = beta(S, p, r);
    BetaResult b2 = beta(M, group_mul(g, p), r);
    CHECK(b1.n_support == b2.n_support);
    CHECK(std::abs(b1.value - b2.value) <= 1e-6);
  }
}

TEST_CASE("caliper minimum matches the exhaustive angle scan") {
  Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 30 + static_cast<std::size_t>(rng.uniform(0, 170));
    std::vector<Point> pts;
    std::vector<double> ws;
    std::vector<std::array<double, 2>> xy;
    for (std::size_t i = 0; i < n; ++i) {
      Point p{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
              rng.uniform(-0.2, 0.2)};
      pts.push_back(p);
      ws.push_back(1.0);
      xy.push_back({p.x(), p.y()});
    }
    SampledSet S = make_sampled_set(pts, ws, 0.05, {});
    BetaResult b = beta(S, Point{0, 0, 0}, 2.0);
    REQUIRE(b.n_support == n);
    double oracle = scan_beta(xy, 2.0, 10000);
    CAPTURE(trial);
    CHECK(b.value <= oracle + 1e-12);
    CHECK(oracle - b.value <= 1e-3);
  }
}

TEST_CASE("beta rejects balls with no samples") {
  SampledSet S = gen_vertical_plane(0.0, 0.0, 1.0, 1.0 / 16);
  CHECK_THROWS_AS(static_cast<void>(beta(S, Point{50, 50, 0}, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("beta profile is monotone under graph growth") {
  double h = 1.0 / 16;
  double r = 0.4;
  std::vector<double> betas;
  for (double eps : {0.01, 0.02, 0.04}) {
    SampledSet S = gen_graph(
        [eps](double y, double) { return eps * std::sin(y); }, 2.0, h);
    BetaResult b = beta(S, S.points()[S.size() / 2], r);
    betas.push_back(b.value);
  }
  CHECK(betas[1] >= betas[0]);
  CHECK(betas[2] >= betas[1]);
  CHECK(betas[2] > betas[0]);
}

TEST_CASE("beta profile emits fixed csv columns and records cell errors") {
  SampledSet S = gen_vertical_plane(0.3, 0.0, 2.0, 1.0 / 16);
  std::vector<Point> centers{S.points()[S.size() / 2], Point{100, 100, 0}};
  std::vector<double> scales{0.5};
  auto cells = beta_profile(S, centers, scales);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].ok);
  CHECK(cells[0].beta <= 2 * (1.0 / 16) / 0.5);
  CHECK(!cells[1].ok);
  CHECK(!cells[1].error.empty());
  std::string csv = beta_profile_csv(cells);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "center_x,center_y,center_t,r,beta,theta_star,c_star");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("beta profile parallel run matches serial bitwise") {
  SampledSet S = gen_corner(2.0, 1.0 / 16);
  std::vector<Point> centers;
  for (int i = 0; i < 8; ++i)
    centers.push_back(S.points()[S.size() * i / 8 + S.size() / 16]);
  std::vector<double> scales{0.25, 0.5};
  auto a = beta_profile(S, centers, scales, 1);
  auto b = beta_profile(S, centers, scales, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ok == b[i].ok);
    if (a[i].ok) {
      CHECK(a[i].beta == b[i].beta);
      CHECK(a[i].theta_star == b[i].theta_star);
    }
  }
}

TEST_CASE("plane carleson energy vanishes") {
  SampledSet S = gen_vertical_plane(0.2, 0.0, 2.0, 1.0 / 16);
  Point p0 = S.points()[S.size() / 2];
  CarlesonReport rep = wgl_energy(S, p0, 1.0, 0.1, 1.0 / 8);
  CHECK(!rep.scales.empty());
  CHECK(rep.energy == 0.0);
  CHECK(rep.ratio == 0.0);
}

TEST_CASE("corner carleson energy concentrates near the axis") {
  double h = 1.0 / 16;
  SampledSet S = gen_corner(2.0, h);
  Point p0{0, 0, 0};
  CarlesonReport rep = wgl_energy(S, p0, 1.0, 0.1, 1.0 / 8);
  REQUIRE(rep.scales.size() == 2);
  CHECK(rep.scales[0] == 1.0);
  CHECK(rep.scales[1] == 0.5);
  CHECK(rep.masses[0] > 0.0);
  CHECK(rep.masses[1] > 0.0);
  // Strip law: bad mass at scale r grows like r.
  double q0 = rep.masses[0] / rep.scales[0];
  double q1 = rep.masses[1] / rep.scales[1];
  CHECK(std::max(q0, q1) / std::min(q0, q1) <= 2.0);
  // Identity is exact by construction.
  double sum = std::accumulate(rep.masses.begin(), rep.masses.end(), 0.0);
  CHECK(rep.energy == std::numbers::ln2 * sum);
  CHECK(rep.normalizer == 1.0);
  CHECK(rep.ratio == rep.energy);

  // Badness localizes: far from the axis every ball sits on one wall.
  auto idx = ball_query(S, p0, 1.0);
  Rng rng(46);
  int checked = 0;
  for (int attempt = 0; attempt < 400 && checked < 60; ++attempt) {
    std::size_t i = idx[static_cast<std::size_t>(
        rng.uniform(0, static_cast<double>(idx.size())))];
    const Point& q = S.points()[i];
    double axis = std::max(std::abs(q.x()), std::abs(q.y()));
    for (double r : {1.0, 0.5}) {
      if (axis <= 1.5 * r) continue;
      CHECK(beta(S, q, r).value < 0.1);
      ++checked;
    }
  }
  CHECK(checked > 0);

  CarlesonReport quiet = wgl_energy(S, p0, 1.0, 1.0, 1.0 / 8);
  CHECK(quiet.energy == 0.0);
}

TEST_CASE("carleson band clamping is reported") {
  double h = 1.0 / 16;
  SampledSet S = gen_vertical_plane(0.0, 0.0, 2.0, h);
  Point p0 = S.points()[S.size() / 2];
  CarlesonReport rep = wgl_energy(S, p0, 1.0, 0.1, 1.0 / 8);
  CHECK(rep.r_lo == 8 * h);
  CHECK(rep.scales.size() == 2);
  REQUIRE(rep.clamped_scales.size() == 2);
  CHECK(rep.clamped_scales[0] == 0.25);
  CHECK(rep.clamped_scales[1] == 0.125);
}

TEST_CASE("carleson parallel run matches serial bitwise") {
  SampledSet S = gen_corner(2.0, 1.0 / 16);
  CarlesonReport a = wgl_energy(S, Point{0, 0, 0}, 1.0, 0.1, 0.5, 1);
  CarlesonReport b = wgl_energy(S, Point{0, 0, 0}, 1.0, 0.1, 0.5, 4);
  REQUIRE(a.masses.size() == b.masses.size());
  for (std::size_t i = 0; i < a.masses.size(); ++i)
    CHECK(a.masses[i] == b.masses[i]);
  CHECK(a.energy == b.energy);
}
