#pragma once

#include <json.hpp>

#include "blowup/verify/lipschitz.hpp"
#include "blowup/verify/residual.hpp"

namespace blowup::verify {

using Json = nlohmann::ordered_json;

/// Reals are emitted as shortest round-trip decimal strings.
Json real_json(double x);
Json point_json(const conformal::Point& p);

Json to_json(const ResidualReport& r);
Json to_json(const LipschitzReport& r);
Json to_json(const HolderReport& r);
Json to_json(const CriticalOrderReport& r);
Json to_json(const std::vector<ScanStep>& history);

}  // namespace blowup::verify
