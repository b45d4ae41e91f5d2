#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cppweave/grouping.hpp"
#include "cppweave/parity.hpp"
#include "cppweave/trails.hpp"

namespace cppweave {

using nlohmann::json;

json to_json(const SppSolution& sol);
SppSolution spp_from_json(const json& j);

json to_json(const ProtectionTree& tree);
json to_json(const CppDesign& d);
json to_json(const TrailHierarchy& h);
json to_json(const FailureReport& r);
json to_json(const VerificationReport& r);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Fingerprint of an SPP solution's canonical serialization.
std::string spp_fingerprint(const SppSolution& sol);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const json& j);

}  // namespace cppweave
