#pragma once

#include <json.hpp>

#include "heis/flatness.hpp"
#include "heis/sampled_set.hpp"
#include "heis/sio.hpp"
#include "heis/symclose.hpp"
#include "heis/symmetry.hpp"

// Artifact formats. Set files: {"points": [[x,y,t],...], "weights": [...],
// "h": h, "descriptor": {...}}. Closure files: {"seeds": [[x,y,t2],...],
// "window": M, "points": [[x,y,t2],...]} with t2 = 2t kept integer.
// Reports serialize field for field. Doubles survive a dump/parse round
// trip bit for bit.

namespace heis {

nlohmann::json set_to_json(const SampledSet& S);

// Throws nlohmann::json::exception on missing or mistyped fields and
// whatever make_sampled_set throws on inconsistent data.
SampledSet set_from_json(const nlohmann::json& j);

nlohmann::json closure_to_json(const HClosureSet& C);

nlohmann::json carleson_to_json(const CarlesonReport& r);

nlohmann::json sio_to_json(const SioReport& r);

// The "witness" object is present exactly when a witness pair exists.
nlohmann::json verdict_to_json(const SymmetryVerdict& v);

}  // namespace heis
