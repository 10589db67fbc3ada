#include "heis/checks.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "heis/core.hpp"
#include "heis/exact.hpp"
#include "heis/flatness.hpp"
#include "heis/rng.hpp"
#include "heis/sampled_set.hpp"
#include "heis/sio.hpp"
#include "heis/symclose.hpp"
#include "heis/symmetry.hpp"

namespace heis {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects pass/fail conjunctions and keeps the first failing label.
struct Gate {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& label) {
    if (!cond) {
      if (why.empty()) why = label;
      ok = false;
    }
  }
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

Point rand_point(Rng& rng, double lo, double hi) {
  return Point{rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

std::vector<double> ball_indicator(const SampledSet& S, const Point& c,
                                   double r) {
  std::vector<double> f(S.size(), 0.0);
  for (std::size_t i : ball_query(S, c, r)) f[i] = 1.0;
  return f;
}

// Width of the projected support over a uniform angle grid; upper-bounds
// the exact minimum from above.
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

std::pair<double, double> grad_richardson(
    const std::function<double(const Point&)>& f, const Point& p, double s) {
  auto [x1, y1] = horizontal_grad(f, p, s);
  auto [x2, y2] = horizontal_grad(f, p, s / 10);
  return {(100 * x2 - x1) / 99, (100 * y2 - y1) / 99};
}

// --- criterion 1: group, gauge, dilation, bar, lift identities ------------

CheckResult run_algebra(unsigned) {
  auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0;
  auto note = [&](double r) { worst = std::max(worst, r); };
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Point p = rand_point(rng, -5, 5);
    Point q = rand_point(rng, -5, 5);
    Point g = rand_point(rng, -5, 5);
    note((group_mul(group_mul(p, q), g) - group_mul(p, group_mul(q, g)))
             .cwiseAbs()
             .maxCoeff());
    note(group_mul(p, group_inv(p)).cwiseAbs().maxCoeff());
    note((group_mul(p, group_id<double>()) - p).cwiseAbs().maxCoeff());
    note((project(group_mul(p, q)) - (project(p) + project(q))).norm());
    note(std::abs(heis_dist(group_mul(g, p), group_mul(g, q)) -
                  heis_dist(p, q)));
    double r = rng.uniform(0.25, 4.0);
    note((dilate(group_mul(p, q), r) - group_mul(dilate(p, r), dilate(q, r)))
             .cwiseAbs()
             .maxCoeff());
    note(std::abs(koranyi_norm(dilate(p, r)) - r * koranyi_norm(p)));
    note((bar_involution(group_mul(p, q)) -
          group_mul(bar_involution(p), bar_involution(q)))
             .cwiseAbs()
             .maxCoeff());
    note(std::abs(koranyi_norm(bar_involution(p)) - koranyi_norm(p)));
    note((bar_involution(bar_involution(p)) - p).cwiseAbs().maxCoeff());
    PlanarPoint z = project(q);
    Point L = lift_planar(z, p);
    note((project(L) - z).norm());
    note(std::abs(heis_dist(L, p) - (z - project(p)).norm()));
  }
  double dt = since(t0);
  Gate gate;
  gate.require(worst <= 1e-10, "identity residual above 1e-10");
  gate.require(dt < 5.0, "over the 5 s budget");
  std::string detail = "max residual " + fmt(worst) + " over " +
                       std::to_string(n) + " point triples";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 2: mirror map against the lift construction ----------------

CheckResult run_mirror(unsigned) {
  auto t0 = Clock::now();
  Rng rng(102);
  double worst = 0;
  auto note = [&](double r) { worst = std::max(worst, r); };
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Point p = rand_point(rng, -2, 2);
    Point q = rand_point(rng, -2, 2);
    Point s = sigma(p, q);
    std::vector<PlanarPoint> zs = {project(q),
                                   planar_mirror(project(p), project(q))};
    auto L = lift_sequence(zs, q);
    note((L[0] - q).cwiseAbs().maxCoeff());
    note((L[1] - s).cwiseAbs().maxCoeff());
    note((sigma(p, s) - q).cwiseAbs().maxCoeff());
    note((sigma(p, p) - p).cwiseAbs().maxCoeff());
    note(std::abs(heis_dist(s, p) - heis_dist(q, p)));
    Point q2 = rand_point(rng, -2, 2);
    note(std::abs(heis_dist(s, sigma(p, q2)) - heis_dist(q, q2)));
    Point g = rand_point(rng, -2, 2);
    note((sigma(group_mul(g, p), group_mul(g, q)) - group_mul(g, s))
             .cwiseAbs()
             .maxCoeff());
    double r = rng.uniform(0.5, 2.0);
    note((sigma(dilate(p, r), dilate(q, r)) - dilate(s, r))
             .cwiseAbs()
             .maxCoeff());
    note((sigma(group_id<double>(), q) - bar_involution(q))
             .cwiseAbs()
             .maxCoeff());
  }
  double dt = since(t0);
  Gate gate;
  gate.require(worst <= 1e-12, "mirror residual above 1e-12");
  gate.require(dt < 5.0, "over the 5 s budget");
  std::string detail = "max residual " + fmt(worst) + " over " +
                       std::to_string(n) + " pairs";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 3: planar closure contains the lattice prediction ----------

CheckResult run_planar_closure(unsigned) {
  auto t0 = Clock::now();
  struct Cfg {
    PlanarPoint a, b;
    double window;
  };
  const std::vector<Cfg> cfgs = {
      {PlanarPoint(1, 0), PlanarPoint(0, 1), 8},
      {PlanarPoint(1, 0), PlanarPoint(0, 2), 16},
      {PlanarPoint(1, 0), PlanarPoint(0, 3), 24},
      {PlanarPoint(1, 1), PlanarPoint(1, -1), 16},
      {PlanarPoint(2, 1), PlanarPoint(1, 2), 24},
  };
  Gate gate;
  std::size_t contained = 0, members = 0;
  for (const auto& cfg : cfgs) {
    std::vector<PlanarPoint> seeds = {PlanarPoint(0, 0), cfg.a, cfg.b};
    PlanarClosure cl = planar_closure(seeds, cfg.window);
    gate.require(cl.converged, "closure did not converge");
    gate.require(cl.exact, "integer path not taken");
    std::set<std::pair<std::int64_t, std::int64_t>> got;
    for (const auto& p : cl.points)
      got.insert({std::llround(p.x()), std::llround(p.y())});
    auto pred = lattice_prediction(cfg.a, cfg.b, 8);
    for (const auto& p : pred) {
      bool in = got.count({std::llround(p.x()), std::llround(p.y())}) == 1;
      gate.require(in, "predicted point missing from the closure");
      contained += in;
    }
    // Every member solves m a + n b with integers not both odd.
    std::int64_t ax = std::llround(cfg.a.x()), ay = std::llround(cfg.a.y());
    std::int64_t bx = std::llround(cfg.b.x()), by = std::llround(cfg.b.y());
    std::int64_t det = ax * by - ay * bx;
    for (const auto& p : cl.points) {
      std::int64_t x = std::llround(p.x()), y = std::llround(p.y());
      std::int64_t mn = x * by - y * bx, nn = ax * y - ay * x;
      gate.require(mn % det == 0 && nn % det == 0,
                   "closure point off the generated lattice");
      std::int64_t m = mn / det, nv = nn / det;
      gate.require(!((m % 2 != 0) && (nv % 2 != 0)),
                   "odd-odd point present in the closure");
    }
    members += cl.points.size();
  }
  double dt = since(t0);
  gate.require(dt < 30.0, "over the 30 s budget");
  std::string detail = std::to_string(contained) +
                       " predicted points contained, " +
                       std::to_string(members) + " members all admissible, " +
                       std::to_string(cfgs.size()) + " generator pairs";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 4: loop lifts and random checkers walks --------------------

CheckResult run_loops_checkers(unsigned) {
  auto t0 = Clock::now();
  Gate gate;
  struct Cfg {
    PlanarPoint a, b;
    double det;
  };
  const std::vector<Cfg> loops = {
      {PlanarPoint(1, 0), PlanarPoint(0, 1), 1},
      {PlanarPoint(1, 1), PlanarPoint(1, -1), -2},
      {PlanarPoint(2, 1), PlanarPoint(1, 2), 3},
  };
  for (const auto& cfg : loops) {
    auto [plus, minus] = loop_sequences(PlanarPoint(0, 0), cfg.a, cfg.b);
    auto amb = lattice_prediction(cfg.a, cfg.b, 4);
    gate.require(validate_checkers(plus, amb), "ascending loop not validated");
    gate.require(validate_checkers(minus, amb), "descending loop not validated");
    auto up = lift_sequence(plus.points, Point{0, 0, 0});
    auto dn = lift_sequence(minus.points, Point{0, 0, 0});
    gate.require(up.back().x() == 0.0 && up.back().y() == 0.0 &&
                     up.back().z() == 4 * cfg.det,
                 "ascending lift endpoint is not exactly 4 det");
    gate.require(dn.back().x() == 0.0 && dn.back().y() == 0.0 &&
                     dn.back().z() == -4 * cfg.det,
                 "descending lift endpoint is not exactly -4 det");
  }

  std::vector<ExactPoint> seeds = {exact_point(0, 0, 0), exact_point(1, 0, 0),
                                   exact_point(0, 1, 0)};
  HClosureSet E = h_closure(seeds, 24);
  gate.require(E.converged(), "closure did not converge");
  Rng rng(104);
  int steps_total = 0;
  for (int walk = 0; walk < 10; ++walk) {
    int len = 1 + static_cast<int>(rng.index(10));
    std::vector<LatticePoint> zs = {LatticePoint(0, 0)};
    std::vector<LatticePoint> ws;
    for (int j = 0; j < len; ++j) {
      LatticePoint z = zs.back();
      int dir = static_cast<int>(rng.index(4));
      LatticePoint e = dir == 0   ? LatticePoint(1, 0)
                       : dir == 1 ? LatticePoint(-1, 0)
                       : dir == 2 ? LatticePoint(0, 1)
                                  : LatticePoint(0, -1);
      LatticePoint w = z + e;
      ws.push_back(w);
      zs.push_back(LatticePoint(2 * w.x() - z.x(), 2 * w.y() - z.y()));
    }
    auto lifted = lift_checkers_into_closure(E, zs, ws, exact_point(0, 0, 0));
    gate.require(!lifted.escaped, "lifted walk escaped the window");
    for (const auto& pt : lifted.points)
      gate.require(E.contains(pt), "lifted walk left the closure");
    // The horizontal lift of the same walk also stays inside.
    std::vector<PlanarPoint> zd;
    for (const auto& z : zs)
      zd.emplace_back(static_cast<double>(z.x()), static_cast<double>(z.y()));
    auto L = lift_sequence(zd, Point{0, 0, 0});
    for (const auto& P : L)
      gate.require(E.contains(exact_point(std::llround(P.x()),
                                          std::llround(P.y()),
                                          std::llround(2 * P.z()))),
                   "horizontal lift left the closure");
    steps_total += len;
  }
  double dt = since(t0);
  gate.require(dt < 30.0, "over the 30 s budget");
  std::string detail = "3 loops end at 4 det exactly, 10 walks (" +
                       std::to_string(steps_total) +
                       " steps) lift inside the closure";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 5: fiber structure and quartic growth ----------------------

CheckResult run_fibers_growth(unsigned) {
  auto t0 = Clock::now();
  Gate gate;
  std::vector<ExactPoint> seeds = {exact_point(0, 0, 0), exact_point(1, 0, 0),
                                   exact_point(0, 1, 0)};
  HClosureSet E = h_closure(seeds, 64);
  gate.require(E.converged(), "closure did not converge");
  int fibers_checked = 0;
  for (std::int64_t x = -8; x <= 8; ++x) {
    for (std::int64_t y = -8; y <= 8; ++y) {
      const Fiber* f = E.fiber(x, y);
      if ((x % 2 != 0) && (y % 2 != 0)) {
        gate.require(f == nullptr, "odd-odd column is populated");
        continue;
      }
      gate.require(f != nullptr, "admissible column is empty");
      if (f == nullptr) continue;
      gate.require(f->size() == 1, "fiber is not a single progression");
      const FiberRun& run = f->front();
      gate.require(run.gap == 8, "fiber gap is not 8 in doubled t");
      gate.require(run.count() >= 1000, "fiber does not span the window");
      gate.require(E.contains(exact_point(x, y, run.lo + 8)),
                   "progression member missing");
      gate.require(!E.contains(exact_point(x, y, run.lo + 4)),
                   "progression midpoint present");
      ++fibers_checked;
    }
  }
  const double radii[4] = {8, 16, 32, 64};
  std::int64_t counts[4];
  for (int i = 0; i < 4; ++i) counts[i] = E.count_in_ball(radii[i]);
  // Least squares slope of log count against log r over {8, 16, 32}.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 3; ++i) {
    double lx = std::log(radii[i]), ly = std::log(double(counts[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  gate.require(slope >= 3.7 && slope <= 4.3,
               "growth exponent outside 4 +- 0.3");
  // A surface bound count <= C M^3 calibrated at M = 8 fails by 4x at 64,
  // while quartic growth persists at every doubling.
  double dens8 = double(counts[0]) / std::pow(8.0, 3);
  double dens64 = double(counts[3]) / std::pow(64.0, 3);
  gate.require(dens64 >= 4 * dens8, "cubic bound not violated at M = 64");
  for (int i = 1; i < 4; ++i)
    gate.require(double(counts[i]) >=
                     0.5 * double(counts[0]) * std::pow(radii[i] / 8.0, 4),
                 "quartic lower leg fails");
  double dt = since(t0);
  gate.require(dt < 120.0, "over the 120 s budget");
  std::string detail =
      std::to_string(fibers_checked) + " fibers of gap 8, exponent " +
      fmt(slope) + ", count/M^3 grows " + fmt(dens64 / dens8) + "x from 8 to 64";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 6: flatness certificates ------------------------------------

CheckResult run_flatness(unsigned threads) {
  auto t0 = Clock::now();
  Gate gate;
  // Plane certificate: beta is bounded by the sampling error at all scales.
  double h = 1.0 / 32;
  SampledSet S = gen_vertical_plane(0.3, 0.1, 2.0, h);
  std::vector<Point> centers;
  {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const Point& q = S.points()[i];
      if (std::abs(q.x()) <= 1.0 && std::abs(q.y()) <= 1.0 &&
          std::abs(q.z()) <= 1.0)
        pool.push_back(i);
    }
    for (std::size_t k = 0; k < 64; ++k)
      centers.push_back(S.points()[pool[k * pool.size() / 64]]);
  }
  std::vector<double> scales;
  for (int j = 1; j <= 6; ++j) scales.push_back(std::pow(2.0, -j));
  auto cells = beta_profile(S, centers, scales, threads);
  double worst_margin = -1;
  for (const auto& cell : cells) {
    gate.require(cell.ok, "beta cell failed: " + cell.error);
    if (!cell.ok) continue;
    double bound = 2 * h / cell.r;
    gate.require(cell.beta <= bound, "plane beta above 2h/r");
    worst_margin = std::max(worst_margin, cell.beta - bound);
  }
  // Corner defect at the apex against a dense angle scan.
  double hc = 1.0 / 64;
  SampledSet C = gen_corner(1.25, hc);
  BetaResult b = beta(C, Point{0, 0, 0}, 1.0);
  gate.require(std::abs(b.value - 0.354) <= 0.01,
               "corner defect off the pinned value");
  auto idx = ball_query(C, Point{0, 0, 0}, 1.0);
  double oracle = scan_beta(unique_xy(C, idx), 1.0, 10000);
  gate.require(b.value <= oracle + 1e-12, "caliper above the angle scan");
  gate.require(oracle - b.value <= 1e-3, "caliper not within 1e-3 of the scan");
  // Closed-form plane distance against brute-force minimization.
  VerticalPlane W = make_vplane(0.5, 0.3);
  SampledSet dense = gen_vertical_plane(0.5, 0.3, 2.0, 1.0 / 64);
  Rng rng(106);
  int dist_trials = 0;
  double worst_rel = 0;
  for (int trial = 0; trial < 8 && dist_trials < 5; ++trial) {
    Point p = rand_point(rng, -1, 1);
    double d = dist_to_vplane(p, W);
    if (d < 0.1) continue;
    double brute = std::numeric_limits<double>::infinity();
    for (const auto& w : dense.points()) brute = std::min(brute, heis_dist(p, w));
    worst_rel = std::max(worst_rel, std::abs(brute - d) / d);
    ++dist_trials;
  }
  gate.require(dist_trials >= 3, "too few usable distance trials");
  gate.require(worst_rel <= 1e-3, "closed-form distance off by over 1e-3");
  double dt = since(t0);
  gate.require(dt < 120.0, "over the 120 s budget");
  std::string detail = "384 plane cells under 2h/r, corner defect " +
                       fmt(b.value) + " vs scan " + fmt(oracle) +
                       ", distance rel err " + fmt(worst_rel);
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 7: symmetry energies and localization -----------------------

CheckResult run_carleson(unsigned threads) {
  auto t0 = Clock::now();
  Gate gate;
  // Planes carry zero energy in both square functions.
  SampledSet P = gen_vertical_plane(0.3, 0.1, 2.0, 1.0 / 16);
  Point p0 = P.points()[P.size() / 2];
  CarlesonReport plsc = lsc_energy(P, p0, 1.0, 0.05, 1.0 / 8, 300, 9, threads);
  CarlesonReport pwgl = wgl_energy(P, p0, 1.0, 0.1, 1.0 / 8, threads);
  gate.require(plsc.energy == 0.0, "plane symmetry energy is nonzero");
  gate.require(pwgl.energy == 0.0, "plane flatness energy is nonzero");
  // Corner energies scale like R^3 across self-similar windows.
  double lsc_ratio[3], wgl_ratio[3];
  const double Rs[3] = {1, 2, 4};
  for (int i = 0; i < 3; ++i) {
    double R = Rs[i];
    SampledSet S = gen_corner(2 * R, R / 16);
    CarlesonReport cl =
        lsc_energy(S, Point{0, 0, 0}, R, 0.05, R / 8, 300, 9, threads);
    CarlesonReport cw = wgl_energy(S, Point{0, 0, 0}, R, 0.1, R / 8, threads);
    gate.require(cl.energy > 0, "corner symmetry energy vanished");
    gate.require(cw.energy > 0, "corner flatness energy vanished");
    lsc_ratio[i] = cl.ratio;
    wgl_ratio[i] = cw.ratio;
  }
  auto spread = [](const double* v) {
    return *std::max_element(v, v + 3) / *std::min_element(v, v + 3);
  };
  gate.require(spread(lsc_ratio) <= 2.0,
               "symmetry energy / R^3 varies by over 2x");
  gate.require(spread(wgl_ratio) <= 2.0,
               "flatness energy / R^3 varies by over 2x");
  // Asymmetric balls concentrate near the edge of the corner.
  SampledSet S = gen_corner(2.0, 1.0 / 16);
  double r = 0.25;
  SymmetryVerdict bad =
      tau_symmetric(S, Point{0, 1.0 / 32, 0}, r, 0.05, 5000, 3);
  gate.require(!bad.symmetric, "apex ball passed the symmetry test");
  auto idx = ball_query(S, Point{0, 0, 0}, 1.5);
  Rng rng(31);
  int checked = 0;
  for (int attempt = 0; attempt < 500 && checked < 12; ++attempt) {
    const Point& q = S.points()[idx[rng.index(idx.size())]];
    if (std::max(std::abs(q.x()), std::abs(q.y())) <= 4 * r) continue;
    SymmetryVerdict v = tau_symmetric(S, q, r, 0.05, 2000, 17);
    gate.require(v.symmetric, "ball far from the edge failed symmetry");
    ++checked;
  }
  gate.require(checked == 12, "too few far centers sampled");
  double dt = since(t0);
  gate.require(dt < 300.0, "over the 300 s budget");
  std::string detail = "corner energy/R^3 spreads " + fmt(spread(lsc_ratio)) +
                       "x (symmetry) " + fmt(spread(wgl_ratio)) +
                       "x (flatness), 12 far balls symmetric";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 8: the projection lift is not Lipschitz ---------------------

CheckResult run_nonlip(unsigned) {
  auto t0 = Clock::now();
  Gate gate;
  NonlipResult r = nonlip_ratio(100.0, 1.0);
  double want = std::pow(40001.0, 0.25);
  gate.require(std::abs(r.planar_dist - want) <= 1e-12 * want,
               "projected distance off the closed form");
  gate.require(std::abs(r.heis_dist - 1.0) <= 1e-12,
               "group distance is not 1");
  gate.require(std::abs(r.ratio - 14.14) <= 0.01, "ratio off 14.14");
  NonlipResult big = nonlip_ratio(10000.0, 1.0);
  double growth = big.ratio / r.ratio;
  gate.require(growth >= 8.0 && growth <= 12.0,
               "ratio did not scale by ~10 under x100");
  double dt = since(t0);
  gate.require(dt < 1.0, "over the 1 s budget");
  std::string detail = "ratio " + fmt(r.ratio, 6) + " at (100,1), grows " +
                       fmt(growth, 4) + "x at (10000,1)";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 9: kernel structure, decay, stacking -------------------------

CheckResult run_kernels(unsigned) {
  auto t0 = Clock::now();
  Gate gate;
  Kernel k1 = riesz_kernel('x');
  Kernel k2 = riesz_kernel('y');
  auto inv_sq_norm = [](const Point& p) {
    double nn = koranyi_norm(p);
    return 1.0 / (nn * nn);
  };
  Rng rng(47);
  double worst_grad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Point p = rand_point(rng, -1.5, 1.5);
    double nn = koranyi_norm(p);
    if (nn < 0.5 || nn > 2.0) continue;
    auto [gx, gy] = grad_richardson(inv_sq_norm, p, 1e-3);
    double s = std::max({1.0, std::abs(gx), std::abs(gy)});
    worst_grad = std::max({worst_grad, std::abs(gx - k1.eval(p)) / s,
                           std::abs(gy - k2.eval(p)) / s});
  }
  gate.require(worst_grad <= 1e-6, "closed form off the derivative oracle");
  Rng rng2(53);
  double worst_sym = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Point p = rand_point(rng2, -2, 2);
    if (koranyi_norm(p) < 0.1) continue;
    double v = k1.eval(p);
    worst_sym = std::max(worst_sym, std::abs(k1.eval(bar_involution(p)) + v) /
                                        std::max(1.0, std::abs(v)));
    double r = rng2.uniform(0.5, 2.0);
    double rhs = v / (r * r * r);
    worst_sym = std::max(worst_sym, std::abs(k1.eval(dilate(p, r)) - rhs) /
                                        std::max(1.0, std::abs(rhs)));
  }
  gate.require(worst_sym <= 1e-10, "antisymmetry or homogeneity residual");
  // Decay constants on a quarter-octave grid spanning four decades.
  std::vector<Point> dirs;
  Rng rng3(59);
  for (int i = 0; i < 8; ++i) {
    Point u = rand_point(rng3, -1, 1);
    dirs.push_back(dilate(u, 1.0 / koranyi_norm(u)));
  }
  double c0 = 0, c1 = 0;
  for (int m = -27; m <= 27; ++m) {
    double s = std::pow(2.0, m / 4.0);
    for (const Point& u : dirs) {
      Point p = dilate(u, s);
      double nn = koranyi_norm(p);
      c0 = std::max(c0, std::abs(k1.eval(p)) * nn * nn * nn);
      auto [gx, gy] = horizontal_grad(k1.eval, p, 1e-4 * nn);
      c1 = std::max(c1, std::hypot(gx, gy) * nn * nn * nn * nn);
    }
  }
  gate.require(c0 > 0 && c0 <= 4.0, "size decay constant above 4");
  gate.require(c1 > 0 && c1 <= 30.0, "gradient decay constant above 30");
  // Stacked sup is depth independent.
  Kernel psi = bump_psi({Point{1.2, 0, 0}, 0.3});
  std::vector<Point> rays;
  Rng rng4(71);
  for (int i = 0; i < 8; ++i) {
    Point u = Point{1.2, 0, 0} + 0.01 * rand_point(rng4, -1, 1);
    rays.push_back(dilate(u, 1.0 / koranyi_norm(u)));
  }
  auto sup_product = [&](int n) {
    std::vector<int> signs;
    for (int k = -n; k <= n; ++k) signs.push_back(k % 2 == 0 ? 1 : -1);
    Kernel K = stacked_kernel(psi, signs, n);
    double m = 0;
    for (int j = -27; j <= 27; ++j) {
      double s = std::pow(2.0, j / 4.0);
      for (const Point& u : rays) {
        Point p = dilate(u, s);
        double nn = koranyi_norm(p);
        m = std::max(m, std::abs(K.eval(p)) * nn * nn * nn);
      }
    }
    return m;
  };
  double m4 = sup_product(4);
  double m8 = sup_product(8);
  gate.require(m4 > 0, "stacked sup vanished");
  gate.require(std::abs(m8 - m4) <= 0.05 * m4,
               "stacked sup moves by over 5% with depth");
  double dt = since(t0);
  gate.require(dt < 30.0, "over the 30 s budget");
  std::string detail = "grad oracle " + fmt(worst_grad) + ", C0 " + fmt(c0) +
                       ", C1 " + fmt(c1) + ", stacked sup " + fmt(m4, 6) +
                       " at both depths";
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

// --- criterion 10: truncated integrals, uniformity, pairing, witness -------

CheckResult run_sio_suite(unsigned threads) {
  auto t0 = Clock::now();
  Gate gate;
  std::ostringstream log;
  log << std::setprecision(3);
  double h = 1.0 / 64;
  Kernel k1 = riesz_kernel('x');
  // Truncations through a bar-symmetric window cancel to quadrature noise.
  {
    SampledSet S = gen_vertical_plane(0.0, 0.0, 1.0, h);
    std::vector<double> one(S.size(), 1.0);
    double worst = 0;
    for (double eps : {0.5, 0.25})
      worst = std::max(worst, std::abs(t_eps(k1, S, one, eps, Point{0, 0, 0})));
    gate.require(worst <= h, "truncation at a symmetric center above O(h)");
    log << "sym-center sup " << worst;
  }
  // L2 norms stay within 10% across a 16x range of truncations.
  {
    SampledSet S = gen_vertical_plane(0.0, 0.0, 2.0, h);
    std::vector<double> f = ball_indicator(S, Point{0, 0, 0}, 1.0);
    std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
    SioReport rep = l2_uniformity(k1, S, f, eps, "unit-ball", threads);
    double lo = *std::min_element(rep.norms.begin(), rep.norms.end());
    double hi = *std::max_element(rep.norms.begin(), rep.norms.end());
    gate.require(lo > 0, "l2 norms vanished");
    double spr = (hi - lo) / lo;
    gate.require(spr <= 0.10, "l2 norms spread by over 10%");
    log << "; l2 spread " << 100 * spr << "%";
  }
  // Pairing energy on an exact plane should halve with the grid step.
  {
    double th = 0.4, cc = 0.1, alpha = 0.2;
    double nx = std::cos(th), ny = std::sin(th);
    double vx = -std::sin(th), vy = std::cos(th);
    Point ctr{1.2 * (std::cos(alpha) * vx + std::sin(alpha) * nx),
              1.2 * (std::cos(alpha) * vy + std::sin(alpha) * ny), 0};
    Kernel psi = bump_psi({ctr, 0.3});
    Point p0{cc * nx, cc * ny, 0};
    double e[2];
    int i = 0;
    for (double hh : {1.0 / 32, 1.0 / 64}) {
      SampledSet S = gen_vertical_plane(th, cc, 1.25, hh);
      e[i++] = c2_energy(S, psi, p0, 0.5, 2, threads).energy;
    }
    double ratio = e[0] / e[1];
    gate.require(ratio >= 1.6 && ratio <= 2.4,
                 "pairing energy does not halve under refinement");
    log << "; pairing energies " << e[0] << " / " << e[1] << " ratio " << ratio;
  }
  // A genuine symmetry violation certifies a positive lower bound.
  {
    SampledSet S = gen_corner(2.0, 1.0 / 16);
    SymmetryVerdict v = tau_symmetric(S, Point{0, 0, 0}, 2.0, 0.25, 20000, 7);
    gate.require(!v.symmetric && v.has_witness, "no witness pair found");
    if (v.has_witness) {
      WitnessBound wb =
          witness_lower_bound(S, v.witness_q1, v.witness_q2, 2.0, 0.25);
      gate.require(wb.valid && wb.value > 0, "witness bound not positive");
      gate.require(wb.integrand_min >= 0.0, "witness integrand dips negative");
      log << "; witness " << wb.value << " over " << wb.n_centers << " centers";
    }
  }
  double dt = since(t0);
  gate.require(dt < 300.0, "over the 300 s budget");
  std::string detail = log.str();
  if (!gate.ok) detail = gate.why + "; " + detail;
  return {gate.ok, detail, dt};
}

}  // namespace

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks = {
      {"group-algebra-axioms", "core", 1, 5, run_algebra},
      {"mirror-map-identities", "core", 2, 5, run_mirror},
      {"planar-closure-contains-lattice", "closure", 3, 30, run_planar_closure},
      {"loop-lifts-and-checkers", "closure", 4, 30, run_loops_checkers},
      {"closure-fibers-and-growth", "closure", 5, 120, run_fibers_growth},
      {"flatness-certificates", "beta", 6, 120, run_flatness},
      {"carleson-energies-and-localization", "symmetry", 7, 300, run_carleson},
      {"vertical-pair-stretch-ratio", "core", 8, 1, run_nonlip},
      {"kernel-decay-and-stacking", "sio", 9, 30, run_kernels},
      {"truncated-integrals-and-witness", "sio", 10, 300, run_sio_suite},
  };
  return checks;
}

std::vector<Check> checks_for_suite(const std::string& suite) {
  if (suite == "all") return all_checks();
  std::vector<Check> out;
  for (const auto& c : all_checks())
    if (suite == c.suite) out.push_back(c);
  if (out.empty()) throw std::invalid_argument("unknown suite: " + suite);
  return out;
}

}  // namespace heis
