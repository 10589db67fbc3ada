#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heis/io.hpp"
#include "heis/sampled_set.hpp"
#include "heis/sio.hpp"
#include "heis/symclose.hpp"
#include "heis/symmetry.hpp"

using namespace heis;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(HEIS_CLI_PATH) + " " + args + " >cli_stdout.log 2>cli_stderr.log";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("set files round trip through json") {
  SampledSet S = gen_corner(0.75, 1.0 / 16);
  json j = set_to_json(S);
  CHECK(j["points"].size() == S.size());
  CHECK(j["weights"].size() == S.size());
  CHECK(j["h"].get<double>() == 0.0625);
  CHECK(j["descriptor"]["kind"].get<std::string>() == "corner");
  CHECK(j["points"][0].size() == 3);

  SampledSet S2 = set_from_json(j);
  REQUIRE(S2.size() == S.size());
  CHECK(S2.h() == S.h());
  CHECK(S2.descriptor().kind == S.descriptor().kind);
  CHECK(S2.descriptor().extent == S.descriptor().extent);
  for (std::size_t i = 0; i < S.size(); ++i) {
    CHECK((S2.points()[i] - S.points()[i]).norm() == 0.0);
    CHECK(S2.weights()[i] == S.weights()[i]);
  }
}

TEST_CASE("closure serialization uses doubled t integers") {
  std::vector<ExactPoint> seeds{exact_point(0, 0, 0), exact_point(1, 0, 0),
                                exact_point(0, 1, 0)};
  HClosureSet C = h_closure(seeds, 4);
  REQUIRE(C.contains(exact_point(0, 0, 8)));

  json j = closure_to_json(C);
  CHECK(j["window"].get<std::int64_t>() == 4);
  REQUIRE(j["seeds"].size() == 3);
  CHECK(j["seeds"][1] == json::array({1, 0, 0}));
  REQUIRE(j["points"].size() == std::size_t(C.size()));
  bool found = false;
  for (const auto& e : j["points"]) {
    REQUIRE(e.size() == 3);
    REQUIRE(e[0].is_number_integer());
    REQUIRE(e[2].is_number_integer());
    if (e == json::array({0, 0, 8})) found = true;
  }
  CHECK(found);
}

TEST_CASE("reports serialize with their fields") {
  CarlesonReport r;
  r.scales = {0.5, 0.25};
  r.masses = {0.125, 0.25};
  r.clamped_scales = {0.0625};
  r.energy = 0.375;
  r.normalizer = 8.0;
  r.ratio = 0.046875;
  r.r_lo = 0.0625;
  r.r_hi = 0.5;
  json jc = carleson_to_json(r);
  CHECK(jc["scales"] == json::array({0.5, 0.25}));
  CHECK(jc["masses"] == json::array({0.125, 0.25}));
  CHECK(jc["clamped_scales"] == json::array({0.0625}));
  CHECK(jc["energy"].get<double>() == 0.375);
  CHECK(jc["normalizer"].get<double>() == 8.0);
  CHECK(jc["ratio"].get<double>() == 0.046875);
  CHECK(jc["r_lo"].get<double>() == 0.0625);
  CHECK(jc["r_hi"].get<double>() == 0.5);

  SioReport s;
  s.eps = {0.5, 0.25};
  s.norms = {1.5, 1.25};
  s.h = 0.125;
  s.f_desc = "unit-ball";
  json js = sio_to_json(s);
  CHECK(js["eps"] == json::array({0.5, 0.25}));
  CHECK(js["norms"] == json::array({1.5, 1.25}));
  CHECK(js["h"].get<double>() == 0.125);
  CHECK(js["f_desc"].get<std::string>() == "unit-ball");

  SymmetryVerdict v;
  v.symmetric = false;
  v.has_witness = true;
  v.witness_q1 = Point{0.25, 0, 0.5};
  v.witness_q2 = Point{0, 0.125, -0.25};
  v.checked_pairs = 42;
  v.margin = 0.75;
  json jv = verdict_to_json(v);
  CHECK(jv["symmetric"].get<bool>() == false);
  CHECK(jv["checked_pairs"].get<std::size_t>() == 42);
  CHECK(jv["margin"].get<double>() == 0.75);
  REQUIRE(jv.contains("witness"));
  CHECK(jv["witness"]["q1"] == json::array({0.25, 0.0, 0.5}));
  CHECK(jv["witness"]["q2"] == json::array({0.0, 0.125, -0.25}));

  SymmetryVerdict ok;
  CHECK(!verdict_to_json(ok).contains("witness"));
}

TEST_CASE("generate emits a deterministic set file with config and seed") {
  REQUIRE(run_cli("generate --shape vertical-plane --h 0.1 --extent 1 "
                  "--seed 7 --out cli_gen_a.json") == 0);
  json j = read_json("cli_gen_a.json");
  CHECK(j["seed"].get<std::uint64_t>() == 7);
  CHECK(j["config"].get<std::string>().find("--shape vertical-plane") !=
        std::string::npos);
  // Grid count: (2 extent / h) columns times (2 extent^2 / h^2) rows.
  CHECK(j["points"].size() == 20 * 200);
  CHECK(j["h"].get<double>() == 0.1);
  CHECK(j["descriptor"]["kind"].get<std::string>() == "vertical-plane");

  REQUIRE(run_cli("generate --shape vertical-plane --h 0.1 --extent 1 "
                  "--seed 7 --out cli_gen_b.json") == 0);
  CHECK(read_file("cli_gen_a.json") == read_file("cli_gen_b.json"));

  REQUIRE(run_cli("generate --shape corner --h 0.125 --extent 1 "
                  "--out cli_corner.json") == 0);
  CHECK(read_json("cli_corner.json")["descriptor"]["kind"] == "corner");

  REQUIRE(run_cli("generate --shape graph --h 0.125 --extent 1 --amp 0.1 "
                  "--out cli_graph.json") == 0);
  CHECK(read_json("cli_graph.json")["points"].size() == 16 * 128);

  REQUIRE(run_cli("generate --shape horizontal-lines --h 0.125 --extent 1 "
                  "--intervals -0.5:-0.25,0.25:0.5 --out cli_lines.json") ==
          0);
  CHECK(read_json("cli_lines.json")["descriptor"]["kind"] ==
        "horizontal-lines");
}

TEST_CASE("cli surfaces configuration errors as exit code two") {
  {
    std::ofstream out("cli_bad_set.json");
    out << "{ this is not json";
  }
  CHECK(run_cli("beta --set cli_bad_set.json") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("generate --shape vertical-plane") == 2);
  CHECK(run_cli("generate --shape mystery --h 0.1 --extent 1") == 2);
  CHECK(run_cli("sio --op teps --kernel not-a-kernel --set cli_gen_a.json "
                "--eps 0.5") == 2);
}

TEST_CASE("verify core suite passes and writes a json report") {
  REQUIRE(run_cli("verify --suite core --json --out cli_verify_core.json") ==
          0);
  json j = read_json("cli_verify_core.json");
  CHECK(j["suite"].get<std::string>() == "core");
  CHECK(j.contains("seed"));
  REQUIRE(j["checks"].size() >= 3);
  for (const auto& c : j["checks"]) {
    CHECK(c["pass"].get<bool>());
    CHECK(!c["name"].get<std::string>().empty());
    CHECK(c["criterion"].is_number_integer());
    CHECK(c.contains("detail"));
  }
}

TEST_CASE("closure command writes the documented format") {
  REQUIRE(run_cli("closure --window 3 --out cli_closure.json") == 0);
  json j = read_json("cli_closure.json");
  CHECK(j["window"].get<std::int64_t>() == 3);
  CHECK(j["seeds"] ==
        json::array({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  CHECK(j["points"].size() >= 9);
  CHECK(j.contains("config"));
  CHECK(j.contains("seed"));
}

TEST_CASE("beta command emits one csv row per center and scale") {
  REQUIRE(run_cli("generate --shape vertical-plane --h 0.1 --extent 1 "
                  "--out cli_beta_set.json") == 0);
  REQUIRE(run_cli("beta --set cli_beta_set.json --centers auto:64 "
                  "--scales dyadic:6 --out cli_beta.csv") == 0);
  std::istringstream in(read_file("cli_beta.csv"));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line.rfind("# config:", 0) == 0);
  REQUIRE(std::getline(in, line));
  CHECK(line.rfind("# seed:", 0) == 0);
  REQUIRE(std::getline(in, line));
  CHECK(line == "center_x,center_y,center_t,r,beta,theta_star,c_star");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 64 * 6);
}

TEST_CASE("symmetry command reports witness coordinates") {
  REQUIRE(run_cli("generate --shape corner --h 0.125 --extent 1 "
                  "--out cli_sym_set.json") == 0);
  REQUIRE(run_cli("symmetry --set cli_sym_set.json --p 0,0,0 --r 1 "
                  "--tau 0.05 --out cli_sym.json") == 0);
  json j = read_json("cli_sym.json");
  CHECK(j["symmetric"].get<bool>() == false);
  REQUIRE(j.contains("witness"));
  CHECK(j["witness"]["q1"].size() == 3);
  CHECK(j.contains("config"));
}

TEST_CASE("carleson command serializes dyadic reports") {
  // Scales survive the 8h band clamp only on a grid finer than R/8.
  REQUIRE(run_cli("generate --shape corner --h 0.0625 --extent 1 "
                  "--out cli_carl_set.json") == 0);
  REQUIRE(run_cli("carleson --mode wgl --set cli_carl_set.json --R 0.5 "
                  "--eps 0.2 --r-min 0.125 --out cli_wgl.json") == 0);
  json j = read_json("cli_wgl.json");
  CHECK(!j["scales"].empty());
  CHECK(j["energy"].get<double>() >= 0);
  CHECK(j["r_hi"].get<double>() == 0.5);

  REQUIRE(run_cli("carleson --mode lsc --set cli_carl_set.json --R 0.5 "
                  "--tau 0.05 --r-min 0.25 --out cli_lsc.json") == 0);
  CHECK(read_json("cli_lsc.json")["energy"].get<double>() >= 0);

  REQUIRE(run_cli("carleson --mode c2 --set cli_beta_set.json "
                  "--kernel bump:0,1.2,0,0.3 --R 0.25 --kmax 2 "
                  "--out cli_c2.json") == 0);
  CHECK(read_json("cli_c2.json")["normalizer"].get<double>() > 0);
}

TEST_CASE("sio command evaluates truncated integrals by kernel name") {
  REQUIRE(run_cli("generate --shape vertical-plane --h 0.125 --extent 1 "
                  "--out cli_sio_set.json") == 0);
  // Full symmetric window, f = 1: the odd kernel cancels pairwise.
  REQUIRE(run_cli("sio --op teps --kernel riesz-x --set cli_sio_set.json "
                  "--eps 0.5 --p 0,0,0 --out cli_teps.json") == 0);
  json j = read_json("cli_teps.json");
  CHECK(std::abs(j["value"].get<double>()) <= 1e-9);
  CHECK(j["eps"].get<double>() == 0.5);

  REQUIRE(run_cli("sio --op l2 --kernel riesz-x --set cli_sio_set.json "
                  "--eps-list 0.5,0.25 --f ball:0,0,0,0.75 "
                  "--out cli_l2.json") == 0);
  json jl = read_json("cli_l2.json");
  REQUIRE(jl["norms"].size() == 2);
  CHECK(jl["norms"][0].get<double>() >= 0);
  CHECK(jl["f_desc"].get<std::string>() == "ball:0,0,0,0.75");
}
