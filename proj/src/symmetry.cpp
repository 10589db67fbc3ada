#include "heis/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {

namespace {

// Distance to the generator's continuum model when the descriptor names one
// with a closed form, else to the sample itself. Keeps mirror images that
// leave the sampling window from reading as asymmetry.
std::function<double(const Point&)> model_dist(const SampledSet& S) {
  const SetDescriptor& d = S.descriptor();
  if (d.kind == "vertical-plane") {
    double nx = std::cos(d.theta), ny = std::sin(d.theta), c = d.c;
    return [nx, ny, c](const Point& g) {
      return std::abs(nx * g.x() + ny * g.y() - c);
    };
  }
  if (d.kind == "corner") {
    // Walls {x=0, y>=0} and {y=0, x>=0}; t is free on each, so the metric
    // distance reduces to the planar distance to the half-line.
    return [](const Point& g) {
      double d1 = g.y() >= 0 ? std::abs(g.x()) : std::hypot(g.x(), g.y());
      double d2 = g.x() >= 0 ? std::abs(g.y()) : std::hypot(g.x(), g.y());
      return std::min(d1, d2);
    };
  }
  return [&S](const Point& g) { return nearest_dist(S, g); };
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t x = a * 0x9E3779B97F4A7C15ull + b * 0xBF58476D1CE4E5B9ull +
                    c * 0x94D049BB133111EBull + 1;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace

SymmetryVerdict tau_symmetric(const SampledSet& S, const Point& p, double r,
                              double tau, std::size_t pair_cap,
                              std::uint64_t seed) {
  if (!(tau > 0) || !(tau < 1))
    throw std::invalid_argument("tau_symmetric: tau must be in (0, 1)");
  if (pair_cap == 0)
    throw std::invalid_argument("tau_symmetric: pair_cap must be >= 1");
  auto idx = ball_query(S, p, r);
  if (idx.empty())
    throw std::invalid_argument("tau_symmetric: empty ball");
  const auto& pts = S.points();
  const std::size_t n = idx.size();
  const double tr = tau * r;
  const double thresh = tr + 2 * S.h();
  auto dist = model_dist(S);

  // Best achievable mirror defect for one pair; stops once good enough.
  auto defect = [&](const Point& q1, const Point& q2) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j : ball_query(S, q1, tr)) {
      best = std::min(best, dist(sigma(pts[j], q2)));
      if (best <= thresh) break;
    }
    return best;
  };

  SymmetryVerdict v;
  v.margin = -std::numeric_limits<double>::infinity();
  std::uint64_t total = std::uint64_t(n) * std::uint64_t(n);
  bool exhaustive = total <= pair_cap;
  std::size_t n_pairs = exhaustive ? std::size_t(total) : pair_cap;
  Rng rng(seed);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    std::size_t i = exhaustive ? std::size_t(k / n) : rng.index(n);
    std::size_t j = exhaustive ? std::size_t(k % n) : rng.index(n);
    const Point& q1 = pts[idx[i]];
    const Point& q2 = pts[idx[j]];
    double d = defect(q1, q2);
    ++v.checked_pairs;
    v.margin = std::max(v.margin, d - tr);
    if (d > thresh) {
      v.symmetric = false;
      v.has_witness = true;
      v.witness_q1 = q1;
      v.witness_q2 = q2;
      break;
    }
  }
  return v;
}

CarlesonReport lsc_energy(const SampledSet& S, const Point& p0, double R,
                          double tau, double r_min, std::size_t pair_cap,
                          std::uint64_t seed, unsigned threads) {
  if (!(R > 0) || !(r_min > 0))
    throw std::invalid_argument("lsc_energy: R, r_min must be > 0");
  if (!(tau > 0) || !(tau < 1))
    throw std::invalid_argument("lsc_energy: tau must be in (0, 1)");
  if (pair_cap == 0)
    throw std::invalid_argument("lsc_energy: pair_cap must be >= 1");
  CarlesonReport rep;
  rep.normalizer = R * R * R;
  rep.r_lo = std::max(8 * S.h(), r_min);
  // Sub-ball samples must sit inside the window. When the defect target is
  // the sample itself, mirror images of B(q, r) reach 3r from q in the
  // plane projection, so the window must hold B(p0, R + 3r) as well.
  const std::string& kind = S.descriptor().kind;
  bool modeled = kind == "vertical-plane" || kind == "corner";
  double e = S.descriptor().extent;
  rep.r_hi = e > 0 ? std::min(R, modeled ? e - R : (e - R) / 3) : R;
  for (double r = R; r >= r_min * (1 - 1e-9); r /= 2) {
    if (r < rep.r_lo * (1 - 1e-9) || r > rep.r_hi * (1 + 1e-9))
      rep.clamped_scales.push_back(r);
    else
      rep.scales.push_back(r);
  }
  auto idx = ball_query(S, p0, R);
  rep.masses.assign(rep.scales.size(), 0.0);
  constexpr std::size_t chunk = 16;
  for (std::size_t si = 0; si < rep.scales.size(); ++si) {
    double r = rep.scales[si];
    std::size_t n_chunks = (idx.size() + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0);
    parallel_for(n_chunks, threads, [&](std::size_t c) {
      double s = 0;
      std::size_t lo = c * chunk, hi = std::min(idx.size(), lo + chunk);
      for (std::size_t k = lo; k < hi; ++k) {
        std::uint64_t sk = mix_seed(seed, si, k);
        if (!tau_symmetric(S, S.points()[idx[k]], r, tau, pair_cap, sk)
                 .symmetric)
          s += S.weights()[idx[k]];
      }
      sums[c] = s;
    });
    rep.masses[si] = pairwise_sum(std::move(sums));
  }
  double total = 0;
  for (double m : rep.masses) total += m;
  rep.energy = std::numbers::ln2 * total;
  rep.ratio = rep.energy / rep.normalizer;
  return rep;
}

ProbeResult beta_implies_nonsymmetric_probe(const SampledSet& S,
                                            const Point& p, double r,
                                            double eps,
                                            std::span<const double> tau_grid,
                                            std::uint64_t seed) {
  if (!(eps > 0))
    throw std::invalid_argument(
        "beta_implies_nonsymmetric_probe: eps must be > 0");
  BetaResult b = beta(S, p, r);
  if (b.value < eps)
    throw std::invalid_argument(
        "beta_implies_nonsymmetric_probe: beta below eps");
  std::vector<double> grid(tau_grid.begin(), tau_grid.end());
  if (grid.empty())
    for (int k = 1; k <= 6; ++k) grid.push_back(std::ldexp(1.0, -k));
  std::sort(grid.begin(), grid.end(), std::greater<>());
  ProbeResult res;
  res.ball_center = p;
  for (double tau : grid) {
    SymmetryVerdict v =
        tau_symmetric(S, p, r / tau, tau * tau, 20000, seed);
    if (!v.symmetric) {
      res.found = true;
      res.tau = tau;
      res.ball_radius = r / tau;
      res.verdict = v;
      return res;
    }
  }
  return res;
}

NonlipResult nonlip_ratio(double x, double y) {
  if (x == 0 || y == 0)
    throw std::invalid_argument("nonlip_ratio: x and y must be nonzero");
  Point p(x, 0, 0);
  Point q(x, y, x * y / 2);
  NonlipResult res;
  res.heis_dist = heis_dist(p, q);
  res.planar_dist = heis_dist(Point(x, 0, 0), Point(x, y, 0));
  res.ratio = res.planar_dist / res.heis_dist;
  return res;
}

}  // namespace heis
