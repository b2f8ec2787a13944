#pragma once

#include <string>

#include <json.hpp>

#include "bienayme/kernel/offspring.hpp"

namespace bienayme::kernel {

// Schema:
//   { "K": int, "Kprime": int, "lambda": [int],
//     "types": [ {"kind": "explicit", "words": [{"w": [int], "p": float}]}
//              | {"kind": "poisson_product", "means": [float], "tail_mass": float}
//              | {"kind": "geometric_product", "means": [float], "tail_mass": float}
//              | {"kind": "binomial_product", "trials": [int], "probs": [float]} ] }
// Word symbols are 1-based. Errors are ConfigError with the offending field path.
OffspringFamily family_from_json(const nlohmann::json& doc);
OffspringFamily load_family(const std::string& path);

// Always writes explicit word lists (1-based), so parametric families come
// back materialized.
nlohmann::json family_to_json(const OffspringFamily& family);
void save_family(const OffspringFamily& family, const std::string& path);

}  // namespace bienayme::kernel
