#include "heis/io.hpp"

#include <utility>
#include <vector>

namespace heis {

using nlohmann::json;

namespace {

json point_to_json(const Point& p) {
  return json::array({p.x(), p.y(), p.z()});
}

json exact_to_json(const ExactPoint& p) {
  return json::array({p.x(), p.y(), p.z()});
}

}  // namespace

json set_to_json(const SampledSet& S) {
  json pts = json::array();
  for (std::size_t i = 0; i < S.size(); ++i)
    pts.push_back(point_to_json(S.points()[i]));
  const SetDescriptor& d = S.descriptor();
  json desc{{"kind", d.kind},         {"theta", d.theta},
            {"c", d.c},               {"extent", d.extent},
            {"h", d.h},               {"plane_grid", d.plane_grid},
            {"s0", d.s0},             {"t0", d.t0},
            {"s_count", d.s_count},   {"t_count", d.t_count}};
  return json{{"points", std::move(pts)},
              {"weights", S.weights()},
              {"h", S.h()},
              {"descriptor", std::move(desc)}};
}

SampledSet set_from_json(const json& j) {
  std::vector<Point> pts;
  pts.reserve(j.at("points").size());
  for (const auto& e : j.at("points"))
    pts.push_back(Point{e.at(0).get<double>(), e.at(1).get<double>(),
                        e.at(2).get<double>()});
  std::vector<double> ws = j.at("weights").get<std::vector<double>>();
  double h = j.at("h").get<double>();
  const json& jd = j.at("descriptor");
  SetDescriptor d;
  d.kind = jd.at("kind").get<std::string>();
  d.theta = jd.at("theta").get<double>();
  d.c = jd.at("c").get<double>();
  d.extent = jd.at("extent").get<double>();
  d.h = jd.at("h").get<double>();
  d.plane_grid = jd.at("plane_grid").get<bool>();
  d.s0 = jd.at("s0").get<double>();
  d.t0 = jd.at("t0").get<double>();
  d.s_count = jd.at("s_count").get<std::size_t>();
  d.t_count = jd.at("t_count").get<std::size_t>();
  return make_sampled_set(std::move(pts), std::move(ws), h, std::move(d));
}

json closure_to_json(const HClosureSet& C) {
  json seeds = json::array();
  for (const ExactPoint& s : C.seeds()) seeds.push_back(exact_to_json(s));
  json pts = json::array();
  C.enumerate([&](const ExactPoint& p) { pts.push_back(exact_to_json(p)); });
  return json{{"seeds", std::move(seeds)},
              {"window", C.window()},
              {"points", std::move(pts)}};
}

json carleson_to_json(const CarlesonReport& r) {
  return json{{"scales", r.scales},
              {"masses", r.masses},
              {"clamped_scales", r.clamped_scales},
              {"energy", r.energy},
              {"normalizer", r.normalizer},
              {"ratio", r.ratio},
              {"r_lo", r.r_lo},
              {"r_hi", r.r_hi}};
}

json sio_to_json(const SioReport& r) {
  return json{
      {"eps", r.eps}, {"norms", r.norms}, {"h", r.h}, {"f_desc", r.f_desc}};
}

json verdict_to_json(const SymmetryVerdict& v) {
  json j{{"symmetric", v.symmetric},
         {"checked_pairs", v.checked_pairs},
         {"margin", v.margin}};
  if (v.has_witness)
    j["witness"] = json{{"q1", point_to_json(v.witness_q1)},
                        {"q2", point_to_json(v.witness_q2)}};
  return j;
}

}  // namespace heis
