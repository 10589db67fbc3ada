#include "heis/symclose.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace heis {

namespace {

// ---------------------------------------------------------------- fiber ops

// Largest AP value <= v, assuming the run is nonempty.
std::int64_t floor_to(const FiberRun& r, std::int64_t v) {
  return r.lo + ((v - r.lo) / r.gap) * r.gap;  // v >= r.lo required
}

// Clip a run to [lo, hi]. Returns false when the intersection is empty.
bool clip_run(FiberRun& r, std::int64_t lo, std::int64_t hi) {
  if (r.hi < lo || r.lo > hi) return false;
  if (r.lo < lo) {
    std::int64_t k = (lo - r.lo + r.gap - 1) / r.gap;
    r.lo += k * r.gap;
    if (r.lo > hi) return false;  // no grid value inside [lo, hi]
  }
  if (r.hi > hi) r.hi = floor_to(r, hi);
  if (r.lo == r.hi) r.gap = 1;
  return r.lo <= r.hi;
}

bool run_contains(const FiberRun& r, std::int64_t v) {
  return v >= r.lo && v <= r.hi && (v - r.lo) % r.gap == 0;
}

bool fiber_contains(const Fiber& f, std::int64_t v) {
  for (const auto& r : f)
    if (run_contains(r, v)) return true;
  return false;
}

std::int64_t fiber_count_in(const Fiber& f, std::int64_t lo, std::int64_t hi) {
  std::int64_t n = 0;
  for (auto r : f)
    if (clip_run(r, lo, hi)) n += r.count();
  return n;
}

// ------------------------------------------------------------ planar engine

struct PairHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
    std::uint64_t h = static_cast<std::uint64_t>(p.first) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(p.second) + 0x9e3779b97f4a7c15ull +
         (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

using IPair = std::pair<std::int64_t, std::int64_t>;

// Window restricted planar mirror closure over int64 pairs. Bulk synchronous
// rounds; returns converged flag and round count.
std::pair<bool, int> planar_engine(std::unordered_set<IPair, PairHash>& all,
                                   std::int64_t wx, int max_iter) {
  std::vector<IPair> delta(all.begin(), all.end());
  std::sort(delta.begin(), delta.end());
  int rounds = 0;
  for (; rounds < max_iter && !delta.empty(); ++rounds) {
    std::vector<IPair> staged;
    auto emit = [&](const IPair& c, const IPair& q) {
      IPair m{2 * c.first - q.first, 2 * c.second - q.second};
      if (std::abs(m.first) > wx || std::abs(m.second) > wx) return;
      if (!all.count(m)) staged.push_back(m);
    };
    std::vector<IPair> stable(all.begin(), all.end());
    for (const auto& q : delta)
      for (const auto& c : stable) {
        emit(c, q);
        emit(q, c);
      }
    std::sort(staged.begin(), staged.end());
    staged.erase(std::unique(staged.begin(), staged.end()), staged.end());
    delta.clear();
    for (const auto& m : staged)
      if (all.insert(m).second) delta.push_back(m);
  }
  return {delta.empty(), rounds};
}

double normalize_zero(double v) { return v == 0.0 ? 0.0 : v; }

struct KeyHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    return PairHash{}({static_cast<std::int64_t>(p.first),
                       static_cast<std::int64_t>(p.second)});
  }
};

std::pair<std::uint64_t, std::uint64_t> bit_key(const PlanarPoint& p) {
  return {std::bit_cast<std::uint64_t>(normalize_zero(p.x())),
          std::bit_cast<std::uint64_t>(normalize_zero(p.y()))};
}

}  // namespace

// ------------------------------------------------------------ planar API

PlanarClosure planar_closure(std::span<const PlanarPoint> seeds, double window,
                             const PlanarClosureOptions& opts) {
  if (seeds.empty()) throw std::invalid_argument("planar_closure: no seeds");
  if (!(window > 0)) throw std::invalid_argument("planar_closure: window <= 0");
  bool integral = true;
  for (const auto& s : seeds)
    integral = integral && std::rint(s.x()) == s.x() &&
               std::rint(s.y()) == s.y() && std::abs(s.x()) < 1e15 &&
               std::abs(s.y()) < 1e15;
  double scale = integral ? 1.0 : opts.snap;
  std::unordered_set<IPair, PairHash> all;
  for (const auto& s : seeds)
    all.insert({std::llround(s.x() / scale), std::llround(s.y() / scale)});
  std::int64_t wx = static_cast<std::int64_t>(std::floor(window / scale + 0.5e-6));
  auto [converged, rounds] = planar_engine(all, wx, opts.max_iter);
  PlanarClosure out;
  out.converged = converged;
  out.rounds = rounds;
  out.exact = integral;
  out.points.reserve(all.size());
  for (const auto& p : all)
    out.points.emplace_back(static_cast<double>(p.first) * scale,
                            static_cast<double>(p.second) * scale);
  std::sort(out.points.begin(), out.points.end(),
            [](const PlanarPoint& a, const PlanarPoint& b) {
              return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
            });
  return out;
}

std::vector<PlanarPoint> lattice_prediction(const PlanarPoint& a,
                                            const PlanarPoint& b, int window) {
  double det = a.x() * b.y() - a.y() * b.x();
  if (std::abs(det) < 1e-12)
    throw std::invalid_argument("lattice_prediction: degenerate generators");
  if (window < 0)
    throw std::invalid_argument("lattice_prediction: negative window");
  std::vector<PlanarPoint> out;
  for (int m = -window; m <= window; ++m)
    for (int n = -window; n <= window; ++n) {
      if ((m & 1) && (n & 1)) continue;
      out.emplace_back(m * a.x() + n * b.x(), m * a.y() + n * b.y());
    }
  std::sort(out.begin(), out.end(), [](const PlanarPoint& p, const PlanarPoint& q) {
    return p.x() != q.x() ? p.x() < q.x() : p.y() < q.y();
  });
  return out;
}

bool validate_checkers(const CheckersSequence& seq,
                       std::span<const PlanarPoint> ambient) {
  if (seq.points.empty() || seq.witnesses.size() + 1 != seq.points.size())
    throw std::invalid_argument("validate_checkers: mismatched lengths");
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, KeyHash> amb;
  for (const auto& p : ambient) amb.insert(bit_key(p));
  for (std::size_t j = 0; j < seq.witnesses.size(); ++j) {
    const auto& w = seq.witnesses[j];
    if (!amb.count(bit_key(w))) return false;
    if (2 * w.x() - seq.points[j].x() != seq.points[j + 1].x() ||
        2 * w.y() - seq.points[j].y() != seq.points[j + 1].y())
      return false;
  }
  return true;
}

std::pair<CheckersSequence, CheckersSequence> loop_sequences(
    const PlanarPoint& z, const PlanarPoint& a, const PlanarPoint& b) {
  PlanarPoint a2 = 2 * a, b2 = 2 * b;
  CheckersSequence fwd;  // a-edge first: holonomy +4 det(a,b) in t
  fwd.points = {z, z + a2, z + a2 + b2, z + b2, z};
  fwd.witnesses = {z + a, z + a2 + b, z + a + b2, z + b};
  CheckersSequence rev;  // reversed traversal flips the sign
  rev.points = {z, z + b2, z + a2 + b2, z + a2, z};
  rev.witnesses = {z + b, z + a + b2, z + a2 + b, z + a};
  return {fwd, rev};
}

// ------------------------------------------------------------ H closure

bool HClosureSet::contains(const ExactPoint& p) const {
  if (std::abs(p.x()) > window_ || std::abs(p.y()) > window_) return false;
  auto it = fibers_.find(LatticePoint(p.x(), p.y()));
  return it != fibers_.end() && fiber_contains(it->second, p.z());
}

const Fiber* HClosureSet::fiber(std::int64_t x, std::int64_t y) const {
  auto it = fibers_.find(LatticePoint(x, y));
  return it == fibers_.end() ? nullptr : &it->second;
}

std::int64_t HClosureSet::size() const {
  std::int64_t n = 0;
  for (const auto& [z, f] : fibers_)
    for (const auto& r : f) n += r.count();
  return n;
}

std::int64_t HClosureSet::count_in_ball(double r) const {
  if (!(r > 0)) return 0;
  long double r4 = static_cast<long double>(r) * r * r * r;
  std::int64_t n = 0;
  for (const auto& [z, f] : fibers_) {
    long double q2 = static_cast<long double>(z.x()) * z.x() +
                     static_cast<long double>(z.y()) * z.y();
    long double rem = r4 - q2 * q2;
    if (rem < 0) continue;
    // |t2| <= tmax with 4 t2^2 <= r^4 - |z|^4.
    auto tmax = static_cast<std::int64_t>(std::floor(std::sqrt(rem) / 2));
    while (4.0L * (tmax + 1) * (tmax + 1) <= rem) ++tmax;
    while (tmax >= 0 && 4.0L * tmax * tmax > rem) --tmax;
    if (tmax < 0) continue;
    n += fiber_count_in(f, -tmax, tmax);
  }
  return n;
}

void HClosureSet::enumerate(
    const std::function<void(const ExactPoint&)>& fn) const {
  std::vector<std::int64_t> vals;
  for (const auto& col : columns()) {
    const Fiber& f = *fiber(col.x(), col.y());
    vals.clear();
    for (const auto& r : f)
      for (std::int64_t v = r.lo; v <= r.hi; v += r.gap) vals.push_back(v);
    std::sort(vals.begin(), vals.end());  // runs may interleave in range
    for (std::int64_t v : vals) fn(ExactPoint(col.x(), col.y(), v));
  }
}

std::vector<ExactPoint> HClosureSet::points() const {
  std::vector<ExactPoint> out;
  out.reserve(static_cast<std::size_t>(size()));
  enumerate([&](const ExactPoint& p) { out.push_back(p); });
  return out;
}

std::vector<LatticePoint> HClosureSet::columns() const {
  std::vector<LatticePoint> cols;
  cols.reserve(fibers_.size());
  for (const auto& [z, f] : fibers_) cols.push_back(z);
  std::sort(cols.begin(), cols.end(),
            [](const LatticePoint& a, const LatticePoint& b) {
              return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
            });
  return cols;
}

HClosureSet h_closure(std::span<const ExactPoint> seeds, std::int64_t window,
                      int max_iter) {
  if (seeds.empty()) throw std::invalid_argument("h_closure: no seeds");
  if (window <= 0 || window > 256)
    throw std::invalid_argument("h_closure: window out of range");
  const std::int64_t M = window, T = 2 * M * M;
  const std::int64_t side = 2 * M + 1;

  // Each column stores its values on a lattice rho + k*g and keeps only
  // the k-intervals it occupies. Arrivals in the dominant flow share the
  // column's lattice exactly, so the hot path is plain interval arithmetic;
  // a mismatched arrival refines g once and re-expresses the content.
  struct Ival {
    std::int64_t a, b;  // closed interval of lattice indices
  };
  struct Col {
    std::int64_t x, y;
    std::int64_t rho = 0, g = 0;  // g == 0: at most the single value rho
    std::vector<Ival> fib;        // content visible this round
    std::vector<Ival> pend;       // novelty staged for the end-of-round merge
    std::vector<Ival> raw;        // arrivals awaiting batch dedup
    std::vector<FiberRun> delta;  // value-space pieces added by the last merge
    std::int64_t dmin = 0, dmax = 0;  // value range of delta
    bool queued = false;              // already on this round's touch list
  };
  std::vector<Col> cols;
  cols.reserve(static_cast<std::size_t>(side * side));
  std::vector<std::int32_t> grid(static_cast<std::size_t>(side * side), -1);
  auto cell = [&](std::int64_t x, std::int64_t y) -> std::int32_t& {
    return grid[static_cast<std::size_t>((x + M) * side + (y + M))];
  };
  auto col_id = [&](std::int64_t x, std::int64_t y) {
    std::int32_t& slot = cell(x, y);
    if (slot < 0) {
      slot = static_cast<std::int32_t>(cols.size());
      cols.push_back(Col{x, y});
      cols.back().x = x;
      cols.back().y = y;
    }
    return slot;
  };

  HClosureSet out;
  out.window_ = M;
  out.seeds_.assign(seeds.begin(), seeds.end());

  // Interval-set primitives. Sets are sorted, disjoint, and non-adjacent.
  auto iv_union = [](std::vector<Ival>& v) {
    if (v.size() < 2) return;
    std::sort(v.begin(), v.end(),
              [](const Ival& p, const Ival& q) { return p.a < q.a; });
    std::size_t w = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i].a <= v[w].b + 1)
        v[w].b = std::max(v[w].b, v[i].b);
      else
        v[++w] = v[i];
    }
    v.resize(w + 1);
  };
  auto iv_covered = [](const std::vector<Ival>& v, std::int64_t a,
                       std::int64_t b) {
    auto it = std::upper_bound(
        v.begin(), v.end(), a,
        [](std::int64_t x, const Ival& e) { return x < e.a; });
    if (it == v.begin()) return false;
    return b <= std::prev(it)->b;
  };
  // Appends q minus base to out_pieces.
  auto iv_subtract = [](const std::vector<Ival>& base, Ival q,
                        std::vector<Ival>& out_pieces) {
    auto it = std::lower_bound(
        base.begin(), base.end(), q.a,
        [](const Ival& e, std::int64_t x) { return e.b < x; });
    std::int64_t cur = q.a;
    for (; it != base.end() && it->a <= q.b; ++it) {
      if (it->a > cur) out_pieces.push_back({cur, it->a - 1});
      cur = std::max(cur, it->b + 1);
      if (cur > q.b) return;
    }
    if (cur <= q.b) out_pieces.push_back({cur, q.b});
  };

  std::vector<std::int32_t> touched;
  std::vector<Ival> pieces;
  // Fold a column's buffered arrivals into its pending set. Batching
  // amortizes dedup over many arrivals that mostly repeat one another.
  // The live set is frozen between merges, so pend stays disjoint from it.
  auto flush = [&](Col& c) {
    if (c.raw.empty()) return;
    iv_union(c.raw);
    pieces.clear();
    for (const auto& q : c.raw) iv_subtract(c.fib, q, pieces);
    c.raw.clear();
    if (pieces.empty()) return;
    c.pend.insert(c.pend.end(), pieces.begin(), pieces.end());
    iv_union(c.pend);
  };
  auto enqueue = [&](Col& c, std::int32_t id, std::int64_t a, std::int64_t b) {
    if (iv_covered(c.fib, a, b)) return;
    if (iv_covered(c.pend, a, b)) return;
    c.raw.push_back({a, b});
    if (!c.queued) {
      c.queued = true;
      touched.push_back(id);
    }
    if (c.raw.size() >= 64) flush(c);
  };
  // Re-express content on a finer lattice. Index spacing grows by f, so
  // occupied indices become isolated points; invariants hold by spacing.
  auto rescale = [&](Col& c, std::int64_t gnew) {
    flush(c);
    if (c.g > 0) {
      std::int64_t f = c.g / gnew;
      auto blow = [&](std::vector<Ival>& v) {
        std::vector<Ival> nv;
        for (const auto& e : v)
          for (std::int64_t k = e.a; k <= e.b; ++k) nv.push_back({k * f, k * f});
        v = std::move(nv);
      };
      blow(c.fib);
      blow(c.pend);
    }
    c.g = gnew;
  };
  // Route one value-space run into a column.
  auto arrive = [&](std::int32_t id, const FiberRun& run) {
    Col& c = cols[static_cast<std::size_t>(id)];
    bool single = run.lo == run.hi;
    if (c.g == 0 && c.fib.empty() && c.pend.empty() && c.raw.empty()) {
      c.rho = run.lo;
      if (single) {
        enqueue(c, id, 0, 0);
      } else {
        c.g = run.gap;
        enqueue(c, id, 0, (run.hi - run.lo) / run.gap);
      }
      return;
    }
    std::int64_t al = run.lo - c.rho;
    if (c.g > 0 && al % c.g == 0 && (single || run.gap == c.g)) {
      std::int64_t ka = al / c.g;
      enqueue(c, id, ka, single ? ka : ka + (run.hi - run.lo) / run.gap);
      return;
    }
    std::int64_t gp = std::gcd(std::gcd(c.g, single ? 0 : run.gap),
                               std::abs(al));
    if (gp == 0) {  // the same single value again
      enqueue(c, id, 0, 0);
      return;
    }
    if (gp != c.g) rescale(c, gp);
    if (single || run.gap == c.g) {
      std::int64_t ka = al / c.g;
      enqueue(c, id, ka, single ? ka : ka + (run.hi - run.lo) / run.gap);
      return;
    }
    // Arrival coarser than the lattice: indices stride, insert pointwise.
    for (std::int64_t v = run.lo; v <= run.hi; v += run.gap)
      enqueue(c, id, (v - c.rho) / c.g, (v - c.rho) / c.g);
  };
  // Stage one run: clip to the window, then hand off to its column.
  auto stage = [&](std::int64_t tx, std::int64_t ty, FiberRun run) {
    if (!clip_run(run, -T, T)) return;
    arrive(col_id(tx, ty), run);
  };

  // Seed round: every in-window seed is both content and delta.
  for (const auto& s : seeds) {
    if (std::abs(s.x()) > M || std::abs(s.y()) > M || std::abs(s.z()) > T)
      continue;
    stage(s.x(), s.y(), FiberRun{s.z(), s.z(), 1});
  }
  if (cols.empty())
    throw std::invalid_argument("h_closure: no seed inside the window");

  std::vector<std::int32_t> alive;  // ids with content, in creation order
  std::size_t fresh_from = 0;       // alive[fresh_from..) joined last merge

  // Merge pending novelty into live sets; returns true when anything grew.
  // Pend is disjoint from the live set by construction, so the pend
  // intervals are exactly the pieces added.
  auto apply = [&]() {
    // Canonical order: by column coordinates, so ids join alive reproducibly.
    std::sort(touched.begin(), touched.end(),
              [&](std::int32_t a, std::int32_t b) {
                const Col& ca = cols[static_cast<std::size_t>(a)];
                const Col& cb = cols[static_cast<std::size_t>(b)];
                return ca.x != cb.x ? ca.x < cb.x : ca.y < cb.y;
              });
    bool changed = false;
    for (std::int32_t id : touched) {
      Col& c = cols[static_cast<std::size_t>(id)];
      flush(c);
      c.queued = false;
      if (c.pend.empty()) continue;
      bool had = !c.fib.empty();
      std::int64_t gv = std::max<std::int64_t>(c.g, 1);
      for (const auto& e : c.pend) {
        std::int64_t lo = c.rho + e.a * gv, hi = c.rho + e.b * gv;
        if (c.delta.empty()) {
          c.dmin = lo;
          c.dmax = hi;
        } else {
          c.dmin = std::min(c.dmin, lo);
          c.dmax = std::max(c.dmax, hi);
        }
        c.delta.push_back(FiberRun{lo, hi, e.a == e.b ? 1 : gv});
      }
      c.fib.insert(c.fib.end(), c.pend.begin(), c.pend.end());
      iv_union(c.fib);
      c.pend.clear();
      changed = true;
      if (!had) alive.push_back(id);
    }
    touched.clear();
    return changed;
  };
  apply();

  int rounds = 0;
  bool converged = false;
  std::vector<std::pair<std::int64_t, std::int64_t>> wcoords;
  for (; rounds < max_iter; ++rounds) {
    std::size_t n_alive = alive.size();
    wcoords.clear();
    wcoords.reserve(n_alive);
    for (std::size_t wi = 0; wi < n_alive; ++wi) {
      const Col& w = cols[static_cast<std::size_t>(alive[wi])];
      wcoords.push_back({w.x, w.y});
    }

    // Last round's deltas against every witness; full fibers against fresh
    // witnesses. Together these are exactly the pairs whose outcome can
    // have changed.
    std::vector<FiberRun> zruns;
    for (std::size_t zi = 0; zi < n_alive; ++zi) {
      std::int32_t zid = alive[zi];
      std::int64_t zx, zy, dmin, dmax;
      {
        const Col& z = cols[static_cast<std::size_t>(zid)];
        if (z.delta.empty()) continue;
        zx = z.x;
        zy = z.y;
        dmin = z.dmin;
        dmax = z.dmax;
        zruns = z.delta;
      }
      for (std::size_t wi = 0; wi < n_alive; ++wi) {
        const auto& [wx, wy] = wcoords[wi];
        std::int64_t tx = 2 * wx - zx;
        if (tx < -M || tx > M) continue;
        std::int64_t ty = 2 * wy - zy;
        if (ty < -M || ty > M) continue;
        std::int64_t d = 2 * (wy * zx - wx * zy);
        if (dmax + d < -T || dmin + d > T) continue;
        for (const auto& r : zruns)
          stage(tx, ty, FiberRun{r.lo + d, r.hi + d, r.gap});
      }
    }
    if (fresh_from < n_alive) {
      std::vector<FiberRun> zfib;
      for (std::size_t zi = 0; zi < n_alive; ++zi) {
        std::int64_t zx, zy;
        {
          // stage() may grow cols; copy what is needed before use.
          const Col& z = cols[static_cast<std::size_t>(alive[zi])];
          zx = z.x;
          zy = z.y;
          std::int64_t gv = std::max<std::int64_t>(z.g, 1);
          zfib.clear();
          for (const auto& e : z.fib)
            zfib.push_back(FiberRun{z.rho + e.a * gv, z.rho + e.b * gv,
                                    e.a == e.b ? 1 : gv});
        }
        for (std::size_t wi = fresh_from; wi < n_alive; ++wi) {
          const auto& [wx, wy] = wcoords[wi];
          std::int64_t tx = 2 * wx - zx;
          if (tx < -M || tx > M) continue;
          std::int64_t ty = 2 * wy - zy;
          if (ty < -M || ty > M) continue;
          std::int64_t d = 2 * (wy * zx - wx * zy);
          for (const auto& r : zfib)
            stage(tx, ty, FiberRun{r.lo + d, r.hi + d, r.gap});
        }
      }
    }

    for (std::size_t i = 0; i < n_alive; ++i)
      cols[static_cast<std::size_t>(alive[i])].delta.clear();
    fresh_from = n_alive;
    if (!apply()) {
      converged = true;
      ++rounds;
      break;
    }
  }

  out.converged_ = converged;
  out.rounds_ = rounds;
  for (const auto& c : cols)
    if (!c.fib.empty()) {
      Fiber f;
      f.reserve(c.fib.size());
      std::int64_t gv = std::max<std::int64_t>(c.g, 1);
      for (const auto& e : c.fib)
        f.push_back(FiberRun{c.rho + e.a * gv, c.rho + e.b * gv,
                             e.a == e.b ? 1 : gv});
      out.fibers_.emplace(LatticePoint(c.x, c.y), std::move(f));
    }
  return out;
}

std::vector<ExactPoint> h_closure_naive(std::span<const ExactPoint> seeds,
                                        std::int64_t window, int max_iter) {
  if (seeds.empty()) throw std::invalid_argument("h_closure_naive: no seeds");
  const std::int64_t M = window, T = 2 * M * M;
  std::unordered_set<ExactPoint, ExactPointHash, ExactPointEq> all;
  for (const auto& s : seeds)
    if (std::abs(s.x()) <= M && std::abs(s.y()) <= M && std::abs(s.z()) <= T)
      all.insert(s);
  for (int round = 0; round < max_iter; ++round) {
    std::vector<ExactPoint> staged;
    for (const auto& q : all)
      for (const auto& p : all) {
        ExactPoint m = exact_sigma(p, q);
        if (std::abs(m.x()) > M || std::abs(m.y()) > M || std::abs(m.z()) > T)
          continue;
        if (!all.count(m)) staged.push_back(m);
      }
    if (staged.empty()) break;
    for (const auto& m : staged) all.insert(m);
  }
  std::vector<ExactPoint> out(all.begin(), all.end());
  std::sort(out.begin(), out.end(), [](const ExactPoint& a, const ExactPoint& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  });
  return out;
}

GrowthFit growth_exponent(std::span<const ExactPoint> seeds,
                          std::int64_t window, std::span<const double> radii,
                          int max_iter) {
  if (radii.size() < 2)
    throw std::invalid_argument("growth_exponent: need at least two radii");
  for (double r : radii)
    if (!(r > 0) || r > static_cast<double>(window))
      throw std::invalid_argument("growth_exponent: radius outside window");
  HClosureSet E = h_closure(seeds, window, max_iter);
  GrowthFit fit;
  fit.radii.assign(radii.begin(), radii.end());
  std::sort(fit.radii.begin(), fit.radii.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double r : fit.radii) {
    std::int64_t c = E.count_in_ball(r);
    if (c <= 0)
      throw std::invalid_argument("growth_exponent: empty ball at radius");
    fit.counts.push_back(c);
    double lx = std::log(r), ly = std::log(static_cast<double>(c));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = static_cast<double>(fit.radii.size());
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

LiftedSequence lift_checkers_into_closure(const HClosureSet& E,
                                          std::span<const LatticePoint> zs,
                                          std::span<const LatticePoint> witnesses,
                                          const ExactPoint& q) {
  if (zs.empty() || witnesses.size() + 1 != zs.size())
    throw std::invalid_argument("lift_checkers: mismatched lengths");
  if (q.x() != zs[0].x() || q.y() != zs[0].y())
    throw std::invalid_argument("lift_checkers: start not over zs[0]");
  if (!E.contains(q))
    throw std::invalid_argument("lift_checkers: start not a member");
  LiftedSequence out;
  out.points.push_back(q);
  ExactPoint cur = q;
  const std::int64_t M = E.window(), T = 2 * M * M;
  for (std::size_t j = 0; j < witnesses.size(); ++j) {
    const auto& w = witnesses[j];
    if (2 * w.x() - zs[j].x() != zs[j + 1].x() ||
        2 * w.y() - zs[j].y() != zs[j + 1].y())
      throw std::invalid_argument("lift_checkers: mirror identity fails");
    if (E.fiber(w.x(), w.y()) == nullptr)
      throw std::invalid_argument("lift_checkers: witness column empty");
    // Sigma through any fiber point over w; t2 of the witness cancels.
    cur = exact_sigma(ExactPoint(w.x(), w.y(), 0), cur);
    out.points.push_back(cur);
    if (std::abs(cur.x()) > M || std::abs(cur.y()) > M || std::abs(cur.z()) > T)
      out.escaped = true;
  }
  return out;
}

}  // namespace heis
