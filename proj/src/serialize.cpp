#include "toric/serialize.hpp"

namespace toric {

using nlohmann::ordered_json;

ordered_json to_json(const CodeMatrix& m) {
  ordered_json j;
  j["q"] = m.field()->q();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = m.to_rows();
  return j;
}

ordered_json to_json(const DistanceResult& r) {
  ordered_json j;
  j["d"] = r.converged ? ordered_json(r.d) : ordered_json(nullptr);
  j["lower"] = r.lower_bound;
  j["upper"] = r.upper_bound;
  j["converged"] = r.converged;
  j["witness"] = r.witness;
  j["enumerated"] = r.enumerated;
  j["ms"] = r.elapsed_ms;
  return j;
}

ordered_json to_json(const LowerBoundVerdict& v) {
  ordered_json j;
  j["status"] = to_string(v.status);
  j["lower"] = v.lower_bound;
  j["upper"] = v.upper_bound;
  j["witness"] = v.witness;
  j["enumerated"] = v.enumerated;
  j["ms"] = v.elapsed_ms;
  return j;
}

}  // namespace toric
