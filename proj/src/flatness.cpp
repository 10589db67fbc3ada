#include "heis/flatness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "heis/parallel.hpp"

namespace heis {

namespace {

using P2 = std::array<double, 2>;

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain on sorted unique points; strict turns, so collinear
// boundary points are dropped and the vertex set is minimal.
std::vector<P2> hull2d(const std::vector<P2>& pts) {
  std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<P2> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

VerticalPlane make_vplane(double theta, double c) {
  constexpr double pi = std::numbers::pi;
  double k = std::floor(theta / pi);
  double th = theta - k * pi;
  if (th >= pi) {
    th -= pi;
    k += 1;
  }
  if (th < 0) {
    th += pi;
    k -= 1;
  }
  bool flip = std::fmod(k, 2.0) != 0.0;
  return {th, flip ? -c : c};
}

double dist_to_vplane(const Point& p, const VerticalPlane& W) {
  return std::abs(std::cos(W.theta) * p.x() + std::sin(W.theta) * p.y() -
                  W.c);
}

BetaResult beta(const SampledSet& S, const Point& p, double r) {
  auto idx = ball_query(S, p, r);
  if (idx.empty()) throw std::invalid_argument("beta: empty ball");
  BetaResult res;
  res.n_support = idx.size();

  // Projection widths depend only on the horizontal footprint; many samples
  // share one, so dedupe before the hull.
  std::vector<P2> xy;
  xy.reserve(idx.size());
  for (std::size_t i : idx)
    xy.push_back({S.points()[i].x(), S.points()[i].y()});
  std::sort(xy.begin(), xy.end());
  xy.erase(std::unique(xy.begin(), xy.end()), xy.end());
  std::vector<P2> h = hull2d(xy);

  if (h.size() == 1) {
    res.value = 0;
    res.argmin = VerticalPlane{0.0, h[0][0]};
    return res;
  }

  // The min width of a convex polygon is attained flush with an edge, so
  // scanning edge normals is exact. Ties pick the smallest angle.
  constexpr double pi = std::numbers::pi;
  double bw = std::numeric_limits<double>::infinity(), bth = 0, bc = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const P2& a = h[i];
    const P2& b = h[(i + 1) % h.size()];
    double dx = b[0] - a[0], dy = b[1] - a[1];
    double len = std::hypot(dx, dy);
    if (len == 0) continue;
    double nx = -dy / len, ny = dx / len;
    if (ny < 0 || (ny == 0 && nx < 0)) {
      nx = -nx;
      ny = -ny;
    }
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (const P2& v : h) {
      double s = nx * v[0] + ny * v[1];
      mn = std::min(mn, s);
      mx = std::max(mx, s);
    }
    double w = mx - mn;
    double th = std::atan2(ny, nx);
    if (th >= pi) th -= pi;
    if (w < bw || (w == bw && th < bth)) {
      bw = w;
      bth = th;
      bc = (mn + mx) / 2;
    }
  }
  res.value = bw / (2 * r);
  res.argmin = VerticalPlane{bth, bc};
  return res;
}

std::vector<BetaCell> beta_profile(const SampledSet& S,
                                   std::span<const Point> centers,
                                   std::span<const double> scales,
                                   unsigned threads) {
  std::vector<BetaCell> cells(centers.size() * scales.size());
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    std::size_t ci = k / scales.size(), si = k % scales.size();
    BetaCell& cell = cells[k];
    cell.center = centers[ci];
    cell.r = scales[si];
    try {
      BetaResult b = beta(S, centers[ci], scales[si]);
      cell.beta = b.value;
      cell.theta_star = b.argmin.theta;
      cell.c_star = b.argmin.c;
      cell.n_support = b.n_support;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
  });
  return cells;
}

std::string beta_profile_csv(std::span<const BetaCell> cells) {
  std::string out = "center_x,center_y,center_t,r,beta,theta_star,c_star\n";
  char buf[256];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  c.center.x(), c.center.y(), c.center.z(), c.r, c.beta,
                  c.theta_star, c.c_star);
    out += buf;
  }
  return out;
}

CarlesonReport wgl_energy(const SampledSet& S, const Point& p0, double R,
                          double eps, double r_min, unsigned threads) {
  if (!(R > 0) || !(eps > 0) || !(r_min > 0))
    throw std::invalid_argument("wgl_energy: R, eps, r_min must be > 0");
  CarlesonReport rep;
  rep.normalizer = R * R * R;
  rep.r_lo = std::max(8 * S.h(), r_min);
  // Window slack for sub-balls anchored inside B(p0, R); assumes p0 sits
  // near the window center, which `pre: p0 within S support` provides for
  // the generated families.
  double e = S.descriptor().extent;
  rep.r_hi = e > 0 ? std::min(R, e - R) : R;
  for (double r = R; r >= r_min * (1 - 1e-9); r /= 2) {
    if (r < rep.r_lo * (1 - 1e-9) || r > rep.r_hi * (1 + 1e-9))
      rep.clamped_scales.push_back(r);
    else
      rep.scales.push_back(r);
  }
  auto idx = ball_query(S, p0, R);
  rep.masses.assign(rep.scales.size(), 0.0);
  constexpr std::size_t chunk = 512;
  for (std::size_t si = 0; si < rep.scales.size(); ++si) {
    double r = rep.scales[si];
    std::size_t n_chunks = (idx.size() + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0);
    parallel_for(n_chunks, threads, [&](std::size_t c) {
      double s = 0;
      std::size_t lo = c * chunk, hi = std::min(idx.size(), lo + chunk);
      for (std::size_t k = lo; k < hi; ++k)
        if (beta(S, S.points()[idx[k]], r).value >= eps)
          s += S.weights()[idx[k]];
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

}  // namespace heis
