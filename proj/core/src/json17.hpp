#pragma once

// Internal helper: deterministic JSON dumping with 17-significant-digit
// doubles, so identical runs produce byte-identical reports.

#include <json.hpp>

#include <string>

namespace mtp {

std::string dump_json17(const nlohmann::json& j, int indent = 2);

}  // namespace mtp
