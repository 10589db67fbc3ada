#include "heis/sampled_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heis {

namespace {

void validate_spacing(double extent, double h, const char* who) {
  if (!(h > 0)) throw std::invalid_argument(std::string(who) + ": h must be > 0");
  if (!(extent >= 8 * h))
    throw std::invalid_argument(std::string(who) + ": extent must be >= 8h");
}

// Half-width of the t-extent of B(p, r): |dt| <= r^2/4 from the gauge plus
// |pi(p)| r / 2 from the group twist.
double ball_t_halfwidth(const Point& p, double r) {
  return r * r / 4 + std::hypot(p.x(), p.y()) * r / 2;
}

}  // namespace

SampledSet make_sampled_set(std::vector<Point> points,
                            std::vector<double> weights, double h,
                            SetDescriptor desc) {
  if (points.size() != weights.size())
    throw std::invalid_argument("make_sampled_set: points/weights mismatch");
  if (!(h > 0)) throw std::invalid_argument("make_sampled_set: h must be > 0");
  for (double w : weights)
    if (!(w > 0))
      throw std::invalid_argument("make_sampled_set: weights must be > 0");

  SampledSet S;
  S.points_ = std::move(points);
  S.weights_ = std::move(weights);
  S.h_ = h;
  S.desc_ = std::move(desc);
  if (S.points_.empty()) return S;

  double xlo = S.points_[0].x(), xhi = xlo;
  double ylo = S.points_[0].y(), yhi = ylo;
  double tlo = S.points_[0].z(), thi = tlo;
  for (const auto& p : S.points_) {
    xlo = std::min(xlo, p.x());
    xhi = std::max(xhi, p.x());
    ylo = std::min(ylo, p.y());
    yhi = std::max(yhi, p.y());
    tlo = std::min(tlo, p.z());
    thi = std::max(thi, p.z());
  }
  S.x0_ = xlo;
  S.y0_ = ylo;
  S.t0_ = tlo;
  // Cell dims (g, g, g^2); grow g until the cell-count product is safe.
  double g = 8 * h;
  auto dims_ok = [&](double gg) {
    double n = (std::floor((xhi - xlo) / gg) + 1) *
               (std::floor((yhi - ylo) / gg) + 1) *
               (std::floor((thi - tlo) / (gg * gg)) + 1);
    return n < 9e15;
  };
  while (!dims_ok(g)) g *= 2;
  S.g_ = g;
  S.nx_ = static_cast<std::int64_t>(std::floor((xhi - xlo) / g)) + 1;
  S.ny_ = static_cast<std::int64_t>(std::floor((yhi - ylo) / g)) + 1;
  S.nt_ = static_cast<std::int64_t>(std::floor((thi - tlo) / (g * g))) + 1;

  std::vector<std::pair<std::uint64_t, std::uint32_t>> tagged;
  tagged.reserve(S.points_.size());
  for (std::size_t i = 0; i < S.points_.size(); ++i) {
    const auto& p = S.points_[i];
    auto clampi = [](std::int64_t v, std::int64_t n) {
      return std::min(std::max<std::int64_t>(v, 0), n - 1);
    };
    std::int64_t ix = clampi(
        static_cast<std::int64_t>(std::floor((p.x() - xlo) / g)), S.nx_);
    std::int64_t iy = clampi(
        static_cast<std::int64_t>(std::floor((p.y() - ylo) / g)), S.ny_);
    std::int64_t it = clampi(
        static_cast<std::int64_t>(std::floor((p.z() - tlo) / (g * g))), S.nt_);
    std::uint64_t key = (static_cast<std::uint64_t>(ix) *
                             static_cast<std::uint64_t>(S.ny_) +
                         static_cast<std::uint64_t>(iy)) *
                            static_cast<std::uint64_t>(S.nt_) +
                        static_cast<std::uint64_t>(it);
    tagged.emplace_back(key, static_cast<std::uint32_t>(i));
  }
  std::sort(tagged.begin(), tagged.end());
  S.cell_pts_.reserve(tagged.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (i == 0 || tagged[i].first != tagged[i - 1].first) {
      S.cell_keys_.push_back(tagged[i].first);
      S.cell_off_.push_back(static_cast<std::uint32_t>(i));
    }
    S.cell_pts_.push_back(tagged[i].second);
  }
  S.cell_off_.push_back(static_cast<std::uint32_t>(tagged.size()));
  return S;
}

namespace {

// Visits every indexed point whose cell meets the bounding box of B(p, r).
// Returns true when the box covers the whole grid (nothing was missed).
template <class Fn>
bool visit_ball_box(const SampledSet& S, const std::vector<std::uint64_t>& keys,
                    const std::vector<std::uint32_t>& off,
                    const std::vector<std::uint32_t>& pts, double g,
                    double x0, double y0, double t0, std::int64_t nx,
                    std::int64_t ny, std::int64_t nt, const Point& p, double r,
                    Fn&& fn) {
  double tb = ball_t_halfwidth(p, r);
  auto lo_cell = [](double v, double origin, double size) {
    return static_cast<std::int64_t>(std::floor((v - origin) / size));
  };
  std::int64_t ixl = lo_cell(p.x() - r, x0, g), ixh = lo_cell(p.x() + r, x0, g);
  std::int64_t iyl = lo_cell(p.y() - r, y0, g), iyh = lo_cell(p.y() + r, y0, g);
  std::int64_t itl = lo_cell(p.z() - tb, t0, g * g);
  std::int64_t ith = lo_cell(p.z() + tb, t0, g * g);
  bool whole = ixl <= 0 && ixh >= nx - 1 && iyl <= 0 && iyh >= ny - 1 &&
               itl <= 0 && ith >= nt - 1;
  ixl = std::max<std::int64_t>(ixl, 0);
  iyl = std::max<std::int64_t>(iyl, 0);
  itl = std::max<std::int64_t>(itl, 0);
  ixh = std::min(ixh, nx - 1);
  iyh = std::min(iyh, ny - 1);
  ith = std::min(ith, nt - 1);
  for (std::int64_t ix = ixl; ix <= ixh; ++ix)
    for (std::int64_t iy = iyl; iy <= iyh; ++iy) {
      std::uint64_t row = (static_cast<std::uint64_t>(ix) *
                               static_cast<std::uint64_t>(ny) +
                           static_cast<std::uint64_t>(iy)) *
                          static_cast<std::uint64_t>(nt);
      auto it0 = std::lower_bound(keys.begin(), keys.end(),
                                  row + static_cast<std::uint64_t>(itl));
      auto it1 = std::upper_bound(it0, keys.end(),
                                  row + static_cast<std::uint64_t>(ith));
      for (auto it = it0; it != it1; ++it) {
        std::size_t ci = static_cast<std::size_t>(it - keys.begin());
        for (std::uint32_t k = off[ci]; k < off[ci + 1]; ++k) fn(pts[k]);
      }
    }
  return whole;
}

}  // namespace

std::vector<std::size_t> ball_query(const SampledSet& S, const Point& p,
                                    double r) {
  std::vector<std::size_t> out;
  if (S.points_.empty() || !(r > 0)) return out;
  visit_ball_box(S, S.cell_keys_, S.cell_off_, S.cell_pts_, S.g_, S.x0_,
                 S.y0_, S.t0_, S.nx_, S.ny_, S.nt_, p, r,
                 [&](std::uint32_t i) {
                   if (heis_dist(S.points_[i], p) < r) out.push_back(i);
                 });
  std::sort(out.begin(), out.end());
  return out;
}

double nearest_dist(const SampledSet& S, const Point& p) {
  if (S.points_.empty())
    throw std::invalid_argument("nearest_dist: empty set");
  if (S.points_.size() <= 1024) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : S.points_) best = std::min(best, heis_dist(q, p));
    return best;
  }
  for (double r = S.g_;; r *= 2) {
    double best = std::numeric_limits<double>::infinity();
    bool whole = visit_ball_box(
        S, S.cell_keys_, S.cell_off_, S.cell_pts_, S.g_, S.x0_, S.y0_, S.t0_,
        S.nx_, S.ny_, S.nt_, p, r, [&](std::uint32_t i) {
          best = std::min(best, heis_dist(S.points_[i], p));
        });
    // Any unscanned point lies outside B(p, r), hence farther than best.
    if (best <= r) return best;
    if (whole) return best;
  }
}

namespace {

// Shared plane-grid walk: s along the plane, t filtered by keep(t).
template <class Keep>
SampledSet build_plane_grid(double theta, double c, double extent, double h,
                            SetDescriptor desc, Keep&& keep) {
  double ht = h * h;
  auto sc = static_cast<std::size_t>(std::llround(2 * extent / h));
  auto tc = static_cast<std::size_t>(std::llround(2 * extent * extent / ht));
  double nx = std::cos(theta), ny = std::sin(theta);
  std::vector<Point> pts;
  std::vector<double> ws;
  pts.reserve(sc * tc);
  for (std::size_t i = 0; i < sc; ++i) {
    double s = -extent + (i + 0.5) * h;
    double zx = c * nx - s * ny, zy = c * ny + s * nx;
    for (std::size_t j = 0; j < tc; ++j) {
      double t = -extent * extent + (j + 0.5) * ht;
      if (!keep(t)) continue;
      pts.push_back(Point{zx, zy, t});
      ws.push_back(h * ht);
    }
  }
  desc.theta = theta;
  desc.c = c;
  desc.extent = extent;
  desc.h = h;
  desc.s0 = -extent;
  desc.t0 = -extent * extent;
  desc.s_count = sc;
  desc.t_count = tc;
  return make_sampled_set(std::move(pts), std::move(ws), h, std::move(desc));
}

}  // namespace

SampledSet gen_vertical_plane(double theta, double c, double extent,
                              double h) {
  validate_spacing(extent, h, "gen_vertical_plane");
  SetDescriptor d;
  d.kind = "vertical-plane";
  d.plane_grid = true;
  return build_plane_grid(theta, c, extent, h, std::move(d),
                          [](double) { return true; });
}

SampledSet gen_corner(double extent, double h) {
  validate_spacing(extent, h, "gen_corner");
  double ht = h * h;
  auto sc = static_cast<std::size_t>(std::llround(extent / h));
  auto tc = static_cast<std::size_t>(std::llround(2 * extent * extent / ht));
  std::vector<Point> pts;
  std::vector<double> ws;
  pts.reserve(2 * sc * tc);
  for (int wall = 0; wall < 2; ++wall)
    for (std::size_t i = 0; i < sc; ++i) {
      double s = (i + 0.5) * h;
      double zx = wall == 0 ? 0.0 : s;
      double zy = wall == 0 ? s : 0.0;
      for (std::size_t j = 0; j < tc; ++j) {
        double t = -extent * extent + (j + 0.5) * ht;
        pts.push_back(Point{zx, zy, t});
        ws.push_back(h * ht);
      }
    }
  SetDescriptor d;
  d.kind = "corner";
  d.extent = extent;
  d.h = h;
  return make_sampled_set(std::move(pts), std::move(ws), h, std::move(d));
}

SampledSet gen_horizontal_lines(
    double theta, std::span<const std::array<double, 2>> t_intervals,
    double extent, double h) {
  validate_spacing(extent, h, "gen_horizontal_lines");
  double e2 = extent * extent, tol = 1e-12 * (1 + e2);
  std::vector<std::array<double, 2>> iv(t_intervals.begin(),
                                        t_intervals.end());
  for (const auto& [lo, hi] : iv) {
    if (!(lo <= hi))
      throw std::invalid_argument("gen_horizontal_lines: empty interval");
    if (lo < -e2 - tol || hi > e2 + tol)
      throw std::invalid_argument(
          "gen_horizontal_lines: interval outside [-extent^2, extent^2]");
  }
  std::sort(iv.begin(), iv.end());
  for (std::size_t i = 1; i < iv.size(); ++i)
    if (iv[i][0] < iv[i - 1][1])
      throw std::invalid_argument("gen_horizontal_lines: intervals overlap");
  SetDescriptor d;
  d.kind = "horizontal-lines";
  return build_plane_grid(theta, 0.0, extent, h, std::move(d), [&](double t) {
    auto it = std::upper_bound(iv.begin(), iv.end(),
                               std::array<double, 2>{t, std::numeric_limits<double>::infinity()});
    if (it == iv.begin()) return false;
    --it;
    return t >= (*it)[0] && t <= (*it)[1];
  });
}

SampledSet gen_graph(const std::function<double(double, double)>& phi,
                     double extent, double h) {
  validate_spacing(extent, h, "gen_graph");
  double ht = h * h;
  auto yc = static_cast<std::size_t>(std::llround(2 * extent / h));
  auto tc = static_cast<std::size_t>(std::llround(2 * extent * extent / ht));
  std::vector<Point> pts;
  std::vector<double> ws;
  pts.reserve(yc * tc);
  for (std::size_t i = 0; i < yc; ++i) {
    double y = -extent + (i + 0.5) * h;
    for (std::size_t j = 0; j < tc; ++j) {
      double t = -extent * extent + (j + 0.5) * ht;
      pts.push_back(Point{phi(y, t), y, t});
      ws.push_back(h * ht);
    }
  }
  SetDescriptor d;
  d.kind = "graph";
  d.extent = extent;
  d.h = h;
  return make_sampled_set(std::move(pts), std::move(ws), h, std::move(d));
}

RegularityReport regularity_estimate(const SampledSet& S,
                                     std::size_t n_centers,
                                     std::span<const double> scales) {
  RegularityReport rep;
  rep.scales.assign(scales.begin(), scales.end());
  if (!scales.empty()) {
    auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
    rep.r_min = *lo;
    rep.r_max = *hi;
  }
  const std::size_t n = S.size();
  if (n < 2 || n_centers == 0 || scales.empty()) {
    rep.degenerate = true;
    if (n == 1 && n_centers > 0) rep.centers.push_back(S.points()[0]);
  }
  // Valid scale band: below 8h discretization dominates, above extent/4
  // boundary truncation dominates.
  double extent = S.descriptor().extent;
  if (!(extent > 0) && n > 0) {
    double xs = 0, ys = 0;
    for (const auto& p : S.points()) {
      xs = std::max(xs, std::abs(p.x()));
      ys = std::max(ys, std::abs(p.y()));
    }
    extent = std::max(xs, ys);
  }
  double band_lo = 8 * S.h() * (1 - 1e-9);
  double band_hi = extent / 4 * (1 + 1e-9);
  for (std::size_t si = 0; si < scales.size(); ++si)
    if (scales[si] < band_lo || scales[si] > band_hi)
      rep.out_of_band.push_back(static_cast<int>(si));
  if (rep.degenerate) return rep;

  // Centers sit clear of the sampling window so ball truncation reflects
  // the set, not the sample. A corner's apex is real structure and stays
  // eligible; only the far ends of its arms are window cuts.
  double r_int = band_lo;
  for (double r : scales)
    if (!(r < band_lo || r > band_hi)) r_int = std::max(r_int, r);
  const SetDescriptor& d = S.descriptor();
  auto interior = [&](const Point& p) {
    double tb = ball_t_halfwidth(p, r_int);
    double e = d.extent;
    if (d.kind == "vertical-plane" || d.kind == "horizontal-lines") {
      double s = -p.x() * std::sin(d.theta) + p.y() * std::cos(d.theta);
      return std::abs(s) <= e - r_int && std::abs(p.z()) <= e * e - tb;
    }
    if (d.kind == "graph")
      return std::abs(p.y()) <= e - r_int && std::abs(p.z()) <= e * e - tb;
    if (d.kind == "corner")
      return p.x() + p.y() <= e - r_int && std::abs(p.z()) <= e * e - tb;
    return true;
  };
  std::vector<std::size_t> cand;
  if (d.kind.empty()) {
    // Imported sets: bbox margins, skipping near-degenerate directions.
    Point lo = S.points()[0], hi = lo;
    for (const auto& p : S.points()) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = S.points()[i];
      double tb = ball_t_halfwidth(p, r_int);
      bool ok = (hi.x() - lo.x() <= 2 * r_int ||
                 (p.x() >= lo.x() + r_int && p.x() <= hi.x() - r_int)) &&
                (hi.y() - lo.y() <= 2 * r_int ||
                 (p.y() >= lo.y() + r_int && p.y() <= hi.y() - r_int)) &&
                (hi.z() - lo.z() <= 2 * tb ||
                 (p.z() >= lo.z() + tb && p.z() <= hi.z() - tb));
      if (ok) cand.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (interior(S.points()[i])) cand.push_back(i);
  }
  if (cand.empty())
    for (std::size_t i = 0; i < n; ++i) cand.push_back(i);
  std::size_t m = cand.size();
  std::size_t nc = std::min(n_centers, m);
  for (std::size_t i = 0; i < nc; ++i) {
    std::size_t idx = cand[nc == 1 ? m / 2 : i * (m - 1) / (nc - 1)];
    rep.centers.push_back(S.points()[idx]);
  }
  double rmax = 0, rmin = std::numeric_limits<double>::infinity();
  for (const auto& center : rep.centers)
    for (std::size_t si = 0; si < scales.size(); ++si) {
      double r = scales[si];
      double mass = 0;
      for (std::size_t k : ball_query(S, center, r)) mass += S.weights()[k];
      double ratio = mass / (r * r * r);
      rep.ratios.push_back(ratio);
      bool in_band = !(r < band_lo || r > band_hi);
      if (in_band) {
        if (ratio <= 0) {
          rep.degenerate = true;
        } else {
          rmax = std::max(rmax, ratio);
          rmin = std::min(rmin, ratio);
        }
      }
    }
  if (rmax > 0)
    rep.constant = std::max({1.0, rmax, 1.0 / rmin});
  else
    rep.degenerate = true;
  return rep;
}

}  // namespace heis
