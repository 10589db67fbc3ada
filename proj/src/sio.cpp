#include "heis/sio.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Spot-checks the declared structure on random points; a banded kernel is
// sampled in and around its support annulus. Factories call this before
// returning, so a constructed Kernel's metadata can be trusted downstream.
void verify_kernel_claims(const Kernel& K) {
  if (!K.claims_horizontal_antisymmetry && K.homogeneity == 0) return;
  Rng rng(0x51D0CAFE);
  int done = 0;
  while (done < 1000) {
    Point p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double n = koranyi_norm(p);
    if (n < 1e-3) continue;
    if (K.support_lo > 0 || std::isfinite(K.support_hi)) {
      double lo = K.support_lo > 0 ? 0.75 * K.support_lo : 1e-3;
      double hi = std::isfinite(K.support_hi) ? 1.25 * K.support_hi : 4.0;
      p = dilate(p, rng.uniform(lo, hi) / n);
    }
    ++done;
    double v = K.eval(p);
    if (K.claims_horizontal_antisymmetry) {
      double w = K.eval(bar_involution(p));
      if (std::abs(v + w) > 1e-10 * std::max(1.0, std::abs(v)))
        throw std::logic_error("kernel: antisymmetry claim failed at a sample");
    }
    if (K.homogeneity != 0) {
      double r = rng.uniform(0.5, 2.0);
      double want = std::pow(r, K.homogeneity) * v;
      double got = K.eval(dilate(p, r));
      if (std::abs(got - want) > 1e-10 * std::max(1.0, std::abs(want)))
        throw std::logic_error("kernel: homogeneity claim failed at a sample");
    }
  }
}

// C^2 step: s(0)=0, s(1)=1, first and second derivatives vanish at both ends.
double smoothstep(double u) { return ((6 * u - 15) * u + 10) * u * u * u; }

// 1 on B(center, radius/2), quintic ramp to 0 on the outer half shell.
double bump_plateau(const Point& center, double radius, const Point& p) {
  double d = heis_dist(p, center);
  if (d <= radius / 2) return 1.0;
  if (d >= radius) return 0.0;
  return 1.0 - smoothstep((2 * d - radius) / radius);
}

void validate_bump(const BumpSpec& spec, const char* who) {
  if (!(spec.radius > 0))
    throw std::invalid_argument(std::string(who) + ": radius must be > 0");
  double pc = std::hypot(spec.center.x(), spec.center.y());
  double r = spec.radius;
  if (!(2 * pc - 2 * r >= r / 4))
    throw std::invalid_argument(std::string(who) +
                                ": support must clear its bar image");
  if (!(koranyi_norm(spec.center) - r >= r / 8))
    throw std::invalid_argument(std::string(who) +
                                ": support must clear the group identity");
}

}  // namespace

std::pair<double, double> horizontal_grad(
    const std::function<double(const Point&)>& f, const Point& p,
    double step) {
  if (!(step > 0))
    throw std::invalid_argument("horizontal_grad: step must be > 0");
  auto at = [&](double sx, double sy) {
    return f(group_mul(p, Point{sx, sy, 0}));
  };
  return {(at(step, 0) - at(-step, 0)) / (2 * step),
          (at(0, step) - at(0, -step)) / (2 * step)};
}

Kernel riesz_kernel(char component) {
  if (component != 'x' && component != 'y')
    throw std::invalid_argument("riesz_kernel: component must be 'x' or 'y'");
  bool xc = component == 'x';
  Kernel K;
  K.homogeneity = -3;
  K.claims_horizontal_antisymmetry = true;
  K.name = xc ? "riesz-x" : "riesz-y";
  K.eval = [xc](const Point& p) {
    double zz = p.x() * p.x() + p.y() * p.y();
    double n4 = zz * zz + 16 * p.z() * p.z();
    if (n4 == 0)
      throw std::domain_error("riesz kernel: singular at the group identity");
    double n6 = n4 * std::sqrt(n4);
    return xc ? (-2 * p.x() * zz + 8 * p.z() * p.y()) / n6
              : (-2 * p.y() * zz - 8 * p.z() * p.x()) / n6;
  };
  verify_kernel_claims(K);
  return K;
}

Kernel bump_raw(const BumpSpec& spec) {
  validate_bump(spec, "bump_raw");
  Kernel K;
  K.name = "bump-raw";
  K.support_lo = koranyi_norm(spec.center) - spec.radius;
  K.support_hi = koranyi_norm(spec.center) + spec.radius;
  Point c = spec.center;
  double r = spec.radius;
  K.eval = [c, r](const Point& p) { return bump_plateau(c, r, p); };
  verify_kernel_claims(K);
  return K;
}

Kernel bump_psi(const BumpSpec& spec) {
  validate_bump(spec, "bump_psi");
  Kernel K;
  K.name = "bump";
  K.claims_horizontal_antisymmetry = true;
  K.support_lo = koranyi_norm(spec.center) - spec.radius;
  K.support_hi = koranyi_norm(spec.center) + spec.radius;
  Point c = spec.center;
  double r = spec.radius;
  K.eval = [c, r](const Point& p) {
    return bump_plateau(c, r, p) - bump_plateau(c, r, bar_involution(p));
  };
  verify_kernel_claims(K);
  return K;
}

Kernel stacked_kernel(const Kernel& psi, std::span<const int> signs, int n) {
  if (n < 0) throw std::invalid_argument("stacked_kernel: depth must be >= 0");
  if (signs.size() != std::size_t(2 * n + 1))
    throw std::invalid_argument(
        "stacked_kernel: need one sign per level, 2n+1 in total");
  if (!psi.claims_horizontal_antisymmetry)
    throw std::invalid_argument(
        "stacked_kernel: base kernel must be antisymmetric");
  if (!(psi.support_lo > 0) || !std::isfinite(psi.support_hi))
    throw std::invalid_argument(
        "stacked_kernel: base support must be an annulus away from 0");
  Kernel K;
  K.name = "stacked";
  K.claims_horizontal_antisymmetry = true;
  K.support_lo = psi.support_lo * std::pow(2.0, -n);
  K.support_hi = psi.support_hi * std::pow(2.0, n);
  struct Level {
    double sign, inv, lo, hi;
  };
  std::vector<Level> levels;
  for (int k = -n; k <= n; ++k) {
    double r = std::pow(2.0, -k);
    levels.push_back({double(signs[std::size_t(k + n)]), 1.0 / r,
                      psi.support_lo * r * (1 - 1e-9),
                      psi.support_hi * r * (1 + 1e-9)});
  }
  auto base = psi.eval;
  K.eval = [base, levels](const Point& p) {
    double np = koranyi_norm(p);
    double sum = 0;
    for (const Level& L : levels) {
      if (np < L.lo || np > L.hi) continue;
      sum += L.sign * (L.inv * L.inv * L.inv) * base(dilate(p, L.inv));
    }
    return sum;
  };
  verify_kernel_claims(K);
  return K;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_num(const std::string& s, const char* who) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(who) + ": bad number '" + s + "'");
  }
  if (pos != s.size())
    throw std::invalid_argument(std::string(who) + ": bad number '" + s + "'");
  return v;
}

BumpSpec parse_bump_spec(const std::vector<std::string>& parts,
                         std::size_t at, const char* who) {
  return {Point{parse_num(parts[at], who), parse_num(parts[at + 1], who),
                parse_num(parts[at + 2], who)},
          parse_num(parts[at + 3], who)};
}

}  // namespace

Kernel kernel_from_name(const std::string& name) {
  if (name == "riesz-x") return riesz_kernel('x');
  if (name == "riesz-y") return riesz_kernel('y');
  std::size_t colon = name.find(':');
  std::string head = name.substr(0, colon);
  if (colon != std::string::npos && head == "bump") {
    auto parts = split(name.substr(colon + 1), ',');
    if (parts.size() != 4)
      throw std::invalid_argument("kernel_from_name: bump takes cx,cy,ct,r");
    Kernel K = bump_psi(parse_bump_spec(parts, 0, "kernel_from_name"));
    K.name = name;
    return K;
  }
  if (colon != std::string::npos && head == "stacked") {
    auto parts = split(name.substr(colon + 1), ',');
    if (parts.size() != 6)
      throw std::invalid_argument(
          "kernel_from_name: stacked takes n,signs,cx,cy,ct,r");
    double nv = parse_num(parts[0], "kernel_from_name");
    int n = int(std::llround(nv));
    if (n < 0 || double(n) != nv)
      throw std::invalid_argument(
          "kernel_from_name: depth must be a nonnegative integer");
    std::vector<int> signs;
    if (parts[1] == "alt") {
      for (int k = -n; k <= n; ++k) signs.push_back(k % 2 == 0 ? 1 : -1);
    } else if (parts[1] == "plus") {
      signs.assign(std::size_t(2 * n + 1), 1);
    } else {
      throw std::invalid_argument(
          "kernel_from_name: sign pattern must be 'alt' or 'plus'");
    }
    Kernel psi = bump_psi(parse_bump_spec(parts, 2, "kernel_from_name"));
    Kernel K = stacked_kernel(psi, signs, n);
    K.name = name;
    return K;
  }
  throw std::invalid_argument("kernel_from_name: unknown kernel '" + name +
                              "'");
}

double t_eps(const Kernel& K, const SampledSet& S, std::span<const double> f,
             double eps, const Point& p) {
  if (f.size() != S.size())
    throw std::invalid_argument("t_eps: f must have one value per sample");
  if (!(eps >= 2 * S.h()))
    throw std::invalid_argument("t_eps: eps must be >= 2h");
  const auto& pts = S.points();
  const auto& ws = S.weights();
  double sum = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (f[i] == 0) continue;
    if (heis_dist(p, pts[i]) <= eps) continue;
    sum += K.eval(group_mul(group_inv(pts[i]), p)) * f[i] * ws[i];
  }
  return sum;
}

namespace {

struct PlaneGrid {
  double c = 0, h = 0;
  std::size_t sc = 0, tc = 0;
  double vx = 0, vy = 0;  // in-plane horizontal direction
};

PlaneGrid plane_grid_of(const SampledSet& S) {
  const SetDescriptor& d = S.descriptor();
  return {d.c,     d.h,
          d.s_count, d.t_count,
          -std::sin(d.theta), std::cos(d.theta)};
}

// q^{-1} p for samples di columns and dj rows apart on the grid:
// (ds vx, ds vy, dt - c ds / 2) with ds = di h, dt = dj h^2.
Point rel_point(const PlaneGrid& G, std::int64_t di, std::int64_t dj) {
  double ds = double(di) * G.h;
  return Point{ds * G.vx, ds * G.vy,
               double(dj) * G.h * G.h - G.c * ds / 2};
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::size_t wrap(std::int64_t v, std::size_t P) {
  std::int64_t m = v % std::int64_t(P);
  return std::size_t(m < 0 ? m + std::int64_t(P) : m);
}

using Cvec = std::vector<std::complex<double>>;

// In-place 2D transform of a row-major [ns][nt] array via 1D passes. The
// inverse carries the full 1/(ns*nt) scaling.
void fft2(Eigen::FFT<double>& fft, Cvec& a, std::size_t ns, std::size_t nt,
          bool fwd) {
  Cvec in(nt), out;
  for (std::size_t r = 0; r < ns; ++r) {
    std::copy_n(a.begin() + std::ptrdiff_t(r * nt), nt, in.begin());
    if (fwd)
      fft.fwd(out, in);
    else
      fft.inv(out, in);
    std::copy_n(out.begin(), nt, a.begin() + std::ptrdiff_t(r * nt));
  }
  in.assign(ns, {});
  for (std::size_t col = 0; col < nt; ++col) {
    for (std::size_t r = 0; r < ns; ++r) in[r] = a[r * nt + col];
    if (fwd)
      fft.fwd(out, in);
    else
      fft.inv(out, in);
    for (std::size_t r = 0; r < ns; ++r) a[r * nt + col] = out[r];
  }
}

// FFT convolution of per-sample source values against a translation kernel
// on a full plane grid. The padded size covers the source bounding box plus
// the output range, so circular wraparound never aliases; entries outside
// the kernel's band are exact zeros of the kernel and stay unfilled.
class PlaneConvolver {
 public:
  PlaneConvolver(const SampledSet& S, std::span<const double> src)
      : G_(plane_grid_of(S)) {
    std::size_t ilo = G_.sc, ihi = 0, jlo = G_.tc, jhi = 0;
    for (std::size_t i = 0; i < G_.sc; ++i)
      for (std::size_t j = 0; j < G_.tc; ++j)
        if (src[i * G_.tc + j] != 0) {
          ilo = std::min(ilo, i);
          ihi = std::max(ihi, i);
          jlo = std::min(jlo, j);
          jhi = std::max(jhi, j);
        }
    if (ilo > ihi) return;  // all-zero source
    i0_ = ilo;
    fs_ = ihi - ilo + 1;
    j0_ = jlo;
    ft_ = jhi - jlo + 1;
    Ps_ = next_pow2(G_.sc + fs_ - 1);
    Pt_ = next_pow2(G_.tc + ft_ - 1);
    src_hat_.assign(Ps_ * Pt_, {});
    for (std::size_t a = 0; a < fs_; ++a)
      for (std::size_t b = 0; b < ft_; ++b)
        src_hat_[a * Pt_ + b] = src[(i0_ + a) * G_.tc + (j0_ + b)];
    fft2(fft_, src_hat_, Ps_, Pt_, true);
  }

  const PlaneGrid& grid() const { return G_; }
  bool empty() const { return fs_ == 0; }

  // ker(di, dj) is evaluated only for |di| <= band_s, |dj| <= band_t; it
  // must vanish outside those bands. Returns sum_q ker(p - q) src[q] at
  // every grid sample, in sample index order.
  template <class KerFn>
  std::vector<double> convolve(const KerFn& ker, std::int64_t band_s,
                               std::int64_t band_t) {
    std::vector<double> out(G_.sc * G_.tc, 0.0);
    if (empty()) return out;
    auto vs_lo = std::max(-std::int64_t(i0_ + fs_ - 1), -band_s);
    auto vs_hi = std::min(std::int64_t(G_.sc - 1 - i0_), band_s);
    auto vt_lo = std::max(-std::int64_t(j0_ + ft_ - 1), -band_t);
    auto vt_hi = std::min(std::int64_t(G_.tc - 1 - j0_), band_t);
    Cvec karr(Ps_ * Pt_, std::complex<double>{});
    for (std::int64_t vs = vs_lo; vs <= vs_hi; ++vs) {
      std::size_t row = wrap(vs, Ps_) * Pt_;
      for (std::int64_t vt = vt_lo; vt <= vt_hi; ++vt) {
        double val = ker(vs, vt);
        if (val != 0) karr[row + wrap(vt, Pt_)] = val;
      }
    }
    fft2(fft_, karr, Ps_, Pt_, true);
    for (std::size_t k = 0; k < karr.size(); ++k) karr[k] *= src_hat_[k];
    fft2(fft_, karr, Ps_, Pt_, false);
    for (std::size_t i = 0; i < G_.sc; ++i) {
      std::size_t row = wrap(std::int64_t(i) - std::int64_t(i0_), Ps_) * Pt_;
      for (std::size_t j = 0; j < G_.tc; ++j)
        out[i * G_.tc + j] =
            karr[row + wrap(std::int64_t(j) - std::int64_t(j0_), Pt_)].real();
    }
    return out;
  }

 private:
  PlaneGrid G_;
  std::size_t i0_ = 0, fs_ = 0, j0_ = 0, ft_ = 0, Ps_ = 0, Pt_ = 0;
  Cvec src_hat_;
  Eigen::FFT<double> fft_;
};

// Index reach of a kernel whose support has Koranyi norm <= reach: the s
// offset is bounded by the norm, the t offset by the gauge plus the shear.
std::int64_t band_cols(const PlaneGrid& G, double reach) {
  if (!std::isfinite(reach)) return std::int64_t(G.sc);
  return std::int64_t(std::ceil(reach / G.h)) + 1;
}

std::int64_t band_rows(const PlaneGrid& G, double reach) {
  if (!std::isfinite(reach)) return std::int64_t(G.tc);
  double tmax = reach * reach / 4 + std::abs(G.c) * reach / 2;
  return std::int64_t(std::ceil(tmax / (G.h * G.h))) + 1;
}

}  // namespace

SioReport l2_uniformity(const Kernel& K, const SampledSet& S,
                        std::span<const double> f,
                        std::span<const double> eps_list, std::string f_desc,
                        unsigned threads) {
  if (f.size() != S.size())
    throw std::invalid_argument(
        "l2_uniformity: f must have one value per sample");
  if (eps_list.empty())
    throw std::invalid_argument("l2_uniformity: need at least one eps");
  for (std::size_t m = 0; m < eps_list.size(); ++m) {
    if (!(eps_list[m] >= 2 * S.h()))
      throw std::invalid_argument("l2_uniformity: eps must be >= 2h");
    if (m > 0 && !(eps_list[m] < eps_list[m - 1]))
      throw std::invalid_argument(
          "l2_uniformity: eps must be strictly descending");
  }
  SioReport rep;
  rep.eps.assign(eps_list.begin(), eps_list.end());
  rep.h = S.h();
  rep.f_desc = std::move(f_desc);
  rep.norms.assign(eps_list.size(), 0.0);
  const auto& ws = S.weights();
  if (S.descriptor().plane_grid) {
    std::vector<double> src(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) src[i] = f[i] * ws[i];
    PlaneConvolver conv(S, src);
    const PlaneGrid& G = conv.grid();
    for (std::size_t m = 0; m < eps_list.size(); ++m) {
      double eps = eps_list[m];
      auto T = conv.convolve(
          [&](std::int64_t di, std::int64_t dj) {
            Point g = rel_point(G, di, dj);
            if (!(koranyi_norm(g) > eps)) return 0.0;
            return K.eval(g);
          },
          band_cols(G, K.support_hi), band_rows(G, K.support_hi));
      std::vector<double> vals(S.size());
      for (std::size_t i = 0; i < S.size(); ++i)
        vals[i] = ws[i] * T[i] * T[i];
      rep.norms[m] = std::sqrt(pairwise_sum(std::move(vals)));
    }
  } else {
    for (std::size_t m = 0; m < eps_list.size(); ++m) {
      double eps = eps_list[m];
      std::vector<double> vals(S.size());
      parallel_for(S.size(), threads, [&](std::size_t i) {
        double t = t_eps(K, S, f, eps, S.points()[i]);
        vals[i] = ws[i] * t * t;
      });
      rep.norms[m] = std::sqrt(pairwise_sum(std::move(vals)));
    }
  }
  return rep;
}

CarlesonReport c2_energy(const SampledSet& S, const Kernel& psi,
                         const Point& p0, double R, int k_max,
                         unsigned threads) {
  if (!(R > 0)) throw std::invalid_argument("c2_energy: R must be > 0");
  if (k_max < 0) throw std::invalid_argument("c2_energy: k_max must be >= 0");
  CarlesonReport rep;
  rep.normalizer = R * R * R;
  rep.r_lo = 8 * S.h();
  rep.r_hi = R;
  for (int k = 0; k <= k_max; ++k) {
    double r = std::pow(2.0, -k);
    if (r > R * (1 + 1e-9)) continue;
    if (r < rep.r_lo * (1 - 1e-9))
      rep.clamped_scales.push_back(r);
    else
      rep.scales.push_back(r);
  }
  auto ball = ball_query(S, p0, R);
  rep.masses.assign(rep.scales.size(), 0.0);
  const auto& pts = S.points();
  const auto& ws = S.weights();
  if (S.descriptor().plane_grid) {
    PlaneConvolver conv(S, ws);
    const PlaneGrid& G = conv.grid();
    for (std::size_t si = 0; si < rep.scales.size(); ++si) {
      double r = rep.scales[si];
      double inv = 1.0 / r, inv3 = inv * inv * inv;
      auto F = conv.convolve(
          [&](std::int64_t di, std::int64_t dj) {
            return inv3 * psi.eval(dilate(rel_point(G, di, dj), inv));
          },
          band_cols(G, r * psi.support_hi), band_rows(G, r * psi.support_hi));
      std::vector<double> vals(ball.size());
      for (std::size_t k = 0; k < ball.size(); ++k)
        vals[k] = ws[ball[k]] * F[ball[k]] * F[ball[k]];
      rep.masses[si] = pairwise_sum(std::move(vals));
    }
  } else {
    for (std::size_t si = 0; si < rep.scales.size(); ++si) {
      double r = rep.scales[si];
      double inv = 1.0 / r, inv3 = inv * inv * inv;
      double reach = r * psi.support_hi * (1 + 1e-9);
      std::vector<double> vals(ball.size());
      parallel_for(ball.size(), threads, [&](std::size_t k) {
        const Point& p = pts[ball[k]];
        double F = 0;
        auto term = [&](std::size_t q) {
          F += ws[q] * inv3 *
               psi.eval(dilate(group_mul(group_inv(pts[q]), p), inv));
        };
        if (std::isfinite(reach))
          for (std::size_t q : ball_query(S, p, reach)) term(q);
        else
          for (std::size_t q = 0; q < pts.size(); ++q) term(q);
        vals[k] = ws[ball[k]] * F * F;
      });
      rep.masses[si] = pairwise_sum(std::move(vals));
    }
  }
  double total = 0;
  for (double m : rep.masses) total += m;
  rep.energy = total;
  rep.ratio = rep.energy / rep.normalizer;
  return rep;
}

WitnessBound witness_lower_bound(const SampledSet& S, const Point& q1,
                                 const Point& q2, double r, double tau) {
  if (!(tau > 0) || !(tau < 1))
    throw std::invalid_argument("witness_lower_bound: tau must be in (0, 1)");
  if (!(r > 0))
    throw std::invalid_argument("witness_lower_bound: r must be > 0");
  WitnessBound wb;
  double delta = tau / 32, rho = 2 * delta;
  double inv_r = 1.0 / r, inv3 = inv_r * inv_r * inv_r;
  double best = kInf, imin = kInf;
  for (std::size_t bi : ball_query(S, q1, tau * r)) {
    const Point& b = S.points()[bi];
    Point q = dilate(group_mul(group_inv(b), q2), inv_r);
    if (koranyi_norm(q) > 5) {
      ++wb.n_rejected;
      continue;
    }
    // Net cell: xy on the delta grid, t chosen to cancel the shear, so
    // d(c, q) <= 2^{-1/4} delta < rho / 2.
    double cx = delta * std::round(q.x() / delta);
    double cy = delta * std::round(q.y() / delta);
    double tg = delta * delta / 4;
    Point c{cx, cy,
            tg * std::round((q.z() - 0.5 * (cx * q.y() - cy * q.x())) / tg)};
    double pc = std::hypot(cx, cy);
    if (!(2 * pc - 2 * rho >= rho / 4) ||
        !(koranyi_norm(c) - rho >= rho / 8)) {
      ++wb.n_rejected;
      continue;
    }
    // The bar image of the net ball must clear the set; otherwise the pair
    // is compatible with symmetry and proves nothing.
    Point mirror = group_mul(b, dilate(bar_involution(c), r));
    if (nearest_dist(S, mirror) < (9 * delta + rho) * r) {
      ++wb.n_rejected;
      continue;
    }
    Kernel psi = bump_psi({c, rho});
    Point plus = group_mul(b, dilate(c, r));
    double rr = r * rho * (1 + 1e-9);
    std::vector<std::size_t> idx = ball_query(S, plus, rr);
    std::vector<std::size_t> more = ball_query(S, mirror, rr);
    idx.insert(idx.end(), more.begin(), more.end());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    double integral = 0;
    for (std::size_t k : idx) {
      double v =
          S.weights()[k] * inv3 *
          psi.eval(dilate(group_mul(group_inv(b), S.points()[k]), inv_r));
      imin = std::min(imin, v);
      integral += v;
    }
    ++wb.n_centers;
    best = std::min(best, integral);
  }
  if (wb.n_centers > 0) {
    wb.valid = true;
    wb.value = best;
    wb.integrand_min = imin;
  }
  return wb;
}

}  // namespace heis
