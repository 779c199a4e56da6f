#pragma once

#include "json.hpp"
#include "toric/distance.hpp"
#include "toric/matrix.hpp"

namespace toric {

/// {"q","rows","cols","entries"}
nlohmann::ordered_json to_json(const CodeMatrix& m);
/// {"d","lower","upper","converged","witness","enumerated","ms"}
nlohmann::ordered_json to_json(const DistanceResult& r);
/// {"status","lower","upper","witness","enumerated","ms"}
nlohmann::ordered_json to_json(const LowerBoundVerdict& v);

}  // namespace toric
