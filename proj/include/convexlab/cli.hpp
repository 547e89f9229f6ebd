#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "convexlab/norm.hpp"

namespace convexlab::cli {

using json = nlohmann::json;

enum Exit : int { kOk = 0, kConfigError = 2, kNoConvergence = 3, kUnwritable = 4 };

/// {"kind":"lp","p":2} | {"kind":"lp","p":"inf"} | {"kind":"inner","gram":[[..],..]} |
/// {"kind":"sum","parts":[..]}. Throws DomainError on malformed input.
NormSpec spec_from_json(const json& j);
json spec_to_json(const NormSpec& spec);

/// Problems with a merged config ({"command": ..., "spec": ..., parameters}),
/// one message per offending field. Empty means dispatchable.
std::vector<std::string> validate_config(const json& cfg);

/// Entry point behind the convexlab binary. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace convexlab::cli
