// Command line front end: model-set generation, mirror closures, flatness
// profiles, symmetry verdicts, square-function reports, and the acceptance
// checks. Every artifact embeds the invocation string and the seed, and is
// byte identical across reruns with the same configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "heis/checks.hpp"
#include "heis/io.hpp"
#include "heis/sampled_set.hpp"
#include "heis/sio.hpp"
#include "heis/symclose.hpp"
#include "heis/symmetry.hpp"

using namespace heis;
using nlohmann::json;

namespace {

std::vector<double> parse_doubles(const std::string& s, char sep) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(sep, pos);
    if (end == std::string::npos) end = s.size();
    std::string tok = s.substr(pos, end - pos);
    if (tok.empty()) throw std::invalid_argument("empty number in list: " + s);
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size())
      throw std::invalid_argument("bad number '" + tok + "' in list: " + s);
    out.push_back(v);
    pos = end + 1;
    if (end == s.size()) break;
  }
  return out;
}

Point parse_point(const std::string& s) {
  auto v = parse_doubles(s, ',');
  if (v.size() != 3)
    throw std::invalid_argument("expected x,y,t but got: " + s);
  return Point{v[0], v[1], v[2]};
}

std::vector<std::array<double, 2>> parse_intervals(const std::string& s) {
  std::vector<std::array<double, 2>> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string tok = s.substr(pos, end - pos);
    auto ab = parse_doubles(tok, ':');
    if (ab.size() != 2)
      throw std::invalid_argument("expected lo:hi but got: " + tok);
    out.push_back({ab[0], ab[1]});
    pos = end + 1;
    if (end == s.size()) break;
  }
  return out;
}

std::vector<ExactPoint> parse_seeds(const std::string& s) {
  std::vector<ExactPoint> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(';', pos);
    if (end == std::string::npos) end = s.size();
    auto v = parse_doubles(s.substr(pos, end - pos), ',');
    if (v.size() != 3)
      throw std::invalid_argument("expected x,y,t2 in seeds: " + s);
    out.push_back(exact_point(std::llround(v[0]), std::llround(v[1]),
                              std::llround(v[2])));
    pos = end + 1;
    if (end == s.size()) break;
  }
  return out;
}

SampledSet load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open set file: " + path);
  return set_from_json(json::parse(in));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

void emit_json(json j, const std::string& out, const std::string& config,
               std::uint64_t seed) {
  j["config"] = config;
  j["seed"] = seed;
  std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text(out, text);
}

std::vector<double> make_f(const SampledSet& S, const std::string& desc) {
  if (desc.empty() || desc == "one") return std::vector<double>(S.size(), 1.0);
  if (desc.rfind("ball:", 0) == 0) {
    auto v = parse_doubles(desc.substr(5), ',');
    if (v.size() != 4)
      throw std::invalid_argument("expected ball:cx,cy,ct,r but got: " + desc);
    std::vector<double> f(S.size(), 0.0);
    for (std::size_t i : ball_query(S, Point{v[0], v[1], v[2]}, v[3]))
      f[i] = 1.0;
    return f;
  }
  throw std::invalid_argument("unknown density descriptor: " + desc);
}

}  // namespace

int main(int argc, char** argv) {
  // The recorded config names the computation, not the destination, so the
  // same request writes byte-identical artifacts anywhere.
  std::string config;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--out") {
      ++i;
      continue;
    }
    if (arg.rfind("--out=", 0) == 0 || arg == "--json") continue;
    if (!config.empty()) config += ' ';
    config += arg;
  }

  CLI::App app{"Heisenberg group geometry toolkit"};
  app.require_subcommand(1);
  // --h is a real option below, so help is long form only.
  app.set_help_flag("--help", "Print help");

  std::uint64_t seed = 0;
  unsigned threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  std::string out;
  bool as_json = false;
  app.add_option("--seed", seed, "Seed for subsampled searches; recorded in every artifact");
  app.add_option("--threads", threads, "Worker threads (default: hardware)");
  app.add_option("--out", out, "Output file (stdout when omitted)");
  app.add_flag("--json", as_json, "Print the verify report as json");

  auto* g = app.add_subcommand("generate", "Sample a model set onto the grid");
  g->fallthrough();
  g->set_help_flag("--help", "Print help");
  std::string g_shape;
  double g_h = 0, g_extent = 0, g_theta = 0, g_c = 0, g_amp = 0.1;
  std::string g_intervals;
  g->add_option("--shape", g_shape,
                "vertical-plane | corner | horizontal-lines | graph")
      ->required();
  g->add_option("--h", g_h, "Grid step")->required();
  g->add_option("--extent", g_extent, "Window half width")->required();
  g->add_option("--theta", g_theta, "Plane normal angle");
  g->add_option("--c", g_c, "Plane offset");
  g->add_option("--amp", g_amp, "Graph amplitude");
  g->add_option("--intervals", g_intervals, "t bands lo:hi,lo:hi for lines");

  auto* v = app.add_subcommand("verify", "Run the verification checks");
  v->fallthrough();
  std::string v_suite = "all";
  v->add_option("--suite", v_suite, "all | core | closure | beta | symmetry | sio");

  auto* cl = app.add_subcommand("closure", "Mirror closure of integer seeds");
  cl->fallthrough();
  std::string cl_seeds = "0,0,0;1,0,0;0,1,0";
  std::int64_t cl_window = 4;
  int cl_max_iter = 256;
  cl->add_option("--seeds", cl_seeds, "x,y,t2 triples joined by ';'");
  cl->add_option("--window", cl_window, "Box bound on |x|, |y|");
  cl->add_option("--max-iter", cl_max_iter, "Round cap");

  auto* b = app.add_subcommand("beta", "Flatness profile as csv");
  b->fallthrough();
  std::string b_set, b_centers = "auto:64", b_scales = "dyadic:6";
  double b_r0 = 0;
  b->add_option("--set", b_set, "Set file from generate")->required();
  b->add_option("--centers", b_centers, "auto:K or x,y,t;x,y,t;...");
  b->add_option("--scales", b_scales, "dyadic:J or r1,r2,...");
  b->add_option("--r0", b_r0, "Top dyadic scale (default extent/2)");

  auto* sy = app.add_subcommand("symmetry", "Mirror closure test on a ball");
  sy->fallthrough();
  std::string sy_set, sy_p = "0,0,0";
  double sy_r = 1.0, sy_tau = 0.05;
  std::size_t sy_cap = 20000;
  sy->add_option("--set", sy_set, "Set file from generate")->required();
  sy->add_option("--p", sy_p, "Ball center x,y,t");
  sy->add_option("--r", sy_r, "Ball radius");
  sy->add_option("--tau", sy_tau, "Relative defect tolerance");
  sy->add_option("--pair-cap", sy_cap, "Pair sample cap");

  auto* ca = app.add_subcommand("carleson", "Dyadic square function reports");
  ca->fallthrough();
  std::string ca_mode, ca_set, ca_p0 = "0,0,0", ca_kernel;
  double ca_R = 1.0, ca_eps = 0.1, ca_tau = 0.05, ca_rmin = 0;
  int ca_kmax = 4;
  ca->add_option("--mode", ca_mode, "wgl | lsc | c2")->required();
  ca->add_option("--set", ca_set, "Set file from generate")->required();
  ca->add_option("--p0", ca_p0, "Window center x,y,t");
  ca->add_option("--R", ca_R, "Window radius");
  ca->add_option("--eps", ca_eps, "Flat-defect threshold for wgl");
  ca->add_option("--tau", ca_tau, "Symmetry tolerance for lsc");
  ca->add_option("--r-min", ca_rmin, "Smallest scale (default R/8)");
  ca->add_option("--kernel", ca_kernel, "Pairing kernel for c2");
  ca->add_option("--kmax", ca_kmax, "Deepest dyadic level for c2");

  auto* si = app.add_subcommand("sio", "Truncated singular integrals");
  si->fallthrough();
  std::string si_op, si_set, si_kernel = "riesz-x", si_f = "one",
                    si_p = "0,0,0", si_eps_list;
  double si_eps = 0.5;
  si->add_option("--op", si_op, "teps | l2")->required();
  si->add_option("--set", si_set, "Set file from generate")->required();
  si->add_option("--kernel", si_kernel, "riesz-x | riesz-y | bump:... | stacked:...");
  si->add_option("--f", si_f, "one or ball:cx,cy,ct,r");
  si->add_option("--p", si_p, "Evaluation point for teps");
  si->add_option("--eps", si_eps, "Truncation for teps");
  si->add_option("--eps-list", si_eps_list, "Descending truncations for l2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (g->parsed()) {
      SampledSet S = [&] {
        if (g_shape == "vertical-plane")
          return gen_vertical_plane(g_theta, g_c, g_extent, g_h);
        if (g_shape == "corner") return gen_corner(g_extent, g_h);
        if (g_shape == "graph")
          return gen_graph(
              [&](double y, double t) {
                return g_amp * std::sin(y) * std::sin(t);
              },
              g_extent, g_h);
        if (g_shape == "horizontal-lines") {
          std::vector<std::array<double, 2>> bands =
              g_intervals.empty()
                  ? std::vector<std::array<double, 2>>{
                        {-g_extent / 2, g_extent / 2}}
                  : parse_intervals(g_intervals);
          return gen_horizontal_lines(g_theta, bands, g_extent, g_h);
        }
        throw std::invalid_argument("unknown shape: " + g_shape);
      }();
      emit_json(set_to_json(S), out.empty() ? g_shape + ".json" : out, config,
                seed);
      return 0;
    }

    if (v->parsed()) {
      auto list = checks_for_suite(v_suite);
      bool text_mode = !(as_json && out.empty());
      json checks = json::array();
      bool all_pass = true;
      for (const auto& c : list) {
        CheckResult r = c.run(threads);
        all_pass = all_pass && r.pass;
        if (text_mode) {
          std::printf("[%s] %2d %-34s (%.2f s) %s\n", r.pass ? "PASS" : "FAIL",
                      c.criterion, c.name, r.seconds, r.detail.c_str());
          std::fflush(stdout);
        }
        checks.push_back(json{{"name", c.name},
                              {"suite", c.suite},
                              {"criterion", c.criterion},
                              {"pass", r.pass},
                              {"seconds", r.seconds},
                              {"detail", r.detail}});
      }
      if (as_json || !out.empty()) {
        json rep{{"suite", v_suite}, {"pass", all_pass}, {"checks", checks}};
        emit_json(rep, out, config, seed);
      }
      return all_pass ? 0 : 1;
    }

    if (cl->parsed()) {
      auto seeds = parse_seeds(cl_seeds);
      HClosureSet E = h_closure(seeds, cl_window, cl_max_iter);
      emit_json(closure_to_json(E), out, config, seed);
      return 0;
    }

    if (b->parsed()) {
      SampledSet S = load_set(b_set);
      std::vector<Point> centers;
      if (b_centers.rfind("auto:", 0) == 0) {
        std::size_t k = std::stoul(b_centers.substr(5));
        if (k == 0 || S.size() == 0)
          throw std::invalid_argument("auto centers need a nonempty set");
        for (std::size_t i = 0; i < k; ++i)
          centers.push_back(S.points()[i * S.size() / k]);
      } else {
        std::size_t pos = 0;
        while (pos <= b_centers.size()) {
          std::size_t end = b_centers.find(';', pos);
          if (end == std::string::npos) end = b_centers.size();
          centers.push_back(parse_point(b_centers.substr(pos, end - pos)));
          pos = end + 1;
          if (end == b_centers.size()) break;
        }
      }
      double top = b_r0 > 0 ? b_r0
                   : S.descriptor().extent > 0 ? S.descriptor().extent / 2
                                               : 0.5;
      std::vector<double> scales;
      if (b_scales.rfind("dyadic:", 0) == 0) {
        int J = std::stoi(b_scales.substr(7));
        if (J <= 0) throw std::invalid_argument("dyadic scale count must be > 0");
        for (int j = 0; j < J; ++j) scales.push_back(top * std::pow(2.0, -j));
      } else {
        scales = parse_doubles(b_scales, ',');
      }
      auto cells = beta_profile(S, centers, scales, threads);
      std::string text = "# config: " + config + "\n# seed: " +
                         std::to_string(seed) + "\n" + beta_profile_csv(cells);
      if (out.empty())
        std::fputs(text.c_str(), stdout);
      else
        write_text(out, text);
      return 0;
    }

    if (sy->parsed()) {
      SampledSet S = load_set(sy_set);
      SymmetryVerdict verdict =
          tau_symmetric(S, parse_point(sy_p), sy_r, sy_tau, sy_cap, seed);
      emit_json(verdict_to_json(verdict), out, config, seed);
      return 0;
    }

    if (ca->parsed()) {
      SampledSet S = load_set(ca_set);
      Point p0 = parse_point(ca_p0);
      double rmin = ca_rmin > 0 ? ca_rmin : ca_R / 8;
      CarlesonReport rep;
      if (ca_mode == "wgl")
        rep = wgl_energy(S, p0, ca_R, ca_eps, rmin, threads);
      else if (ca_mode == "lsc")
        rep = lsc_energy(S, p0, ca_R, ca_tau, rmin, 300, seed, threads);
      else if (ca_mode == "c2")
        rep = c2_energy(S, kernel_from_name(ca_kernel), p0, ca_R, ca_kmax,
                        threads);
      else
        throw std::invalid_argument("unknown mode: " + ca_mode);
      emit_json(carleson_to_json(rep), out, config, seed);
      return 0;
    }

    if (si->parsed()) {
      SampledSet S = load_set(si_set);
      Kernel K = kernel_from_name(si_kernel);
      std::vector<double> f = make_f(S, si_f);
      if (si_op == "teps") {
        Point p = parse_point(si_p);
        double value = t_eps(K, S, f, si_eps, p);
        json j{{"value", value},
               {"eps", si_eps},
               {"kernel", K.name},
               {"p", json::array({p.x(), p.y(), p.z()})},
               {"f_desc", si_f}};
        emit_json(j, out, config, seed);
        return 0;
      }
      if (si_op == "l2") {
        auto eps_list = parse_doubles(si_eps_list, ',');
        SioReport rep = l2_uniformity(K, S, f, eps_list, si_f, threads);
        emit_json(sio_to_json(rep), out, config, seed);
        return 0;
      }
      throw std::invalid_argument("unknown op: " + si_op);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
