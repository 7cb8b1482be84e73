#pragma once

// JSON seed files:
//   { "terms": [ { "c": [re, im], "az": [re, im], "azt": [...], "aw": [...], "awt": [...] } ],
//     "constants": { "0": [1, 0] }, "level": 2,
//     "allow_zero_ratio": false,
//     "chain": { "-1": [terms], "0": [terms], "1": [terms] } }
// Complex numbers may also be written as a plain number. "constants",
// "allow_zero_ratio" and "chain" are optional.

#include <string>

#include <json.hpp>

#include "asdym/atiyah_ward.hpp"

namespace asdym {

/// Throws ConfigError naming the offending field.
SeedSpec parse_seed(const nlohmann::json& j);
SeedSpec load_seed(const std::string& path);

nlohmann::json to_json(const SeedSpec& seed);

/// [re, im], or a plain number. Throws ConfigError naming `field`.
cplx parse_complex(const nlohmann::json& j, const std::string& field);
nlohmann::json complex_json(cplx c);

}  // namespace asdym
