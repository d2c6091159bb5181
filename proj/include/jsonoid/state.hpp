#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "jsonoid/schema.hpp"

namespace jsonoid {

inline constexpr std::string_view kStateMagic = "JZST1";

struct DiscoveryState {
  SchemaNode schema;
  std::uint64_t total_docs = 0;
  DiscoveryConfig config;
};

// Full-fidelity schema state (every facet, exact values), as a JZST1 line
// followed by a JSON body. Unlike the emitted schema this round-trips the
// discovery state exactly, so constraint and outlier analyses reproduce
// identical reports from a reloaded file.
std::string save_state(const DiscoveryState& state);
DiscoveryState load_state(std::string_view text);

Json config_to_json(const DiscoveryConfig& cfg);
DiscoveryConfig config_from_json(const Json& j);

}  // namespace jsonoid
