#include "toric/predictor.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"
#include <spdlog/spdlog.h>

#include "toric/error.hpp"

namespace toric {

using nlohmann::json;

double ExactPredictor::predict(const CodeMatrix& generator) {
  const auto r = bz_distance(generator, options_);
  if (!r.converged)
    throw PredictorFailure("exact predictor ran out of budget (bounds " + std::to_string(r.lower_bound) + ".." +
                           std::to_string(r.upper_bound) + ")");
  return r.d;
}

double HeuristicPredictor::predict(const CodeMatrix& generator) {
  if (generator.rows() == 0) throw PredictorFailure("heuristic predictor needs a nonempty generator");
  std::size_t best = generator.cols();
  for (std::size_t r = 0; r < generator.rows(); ++r) best = std::min(best, weight(generator.row(r)));
  const std::size_t singleton = generator.cols() - generator.rows() + 1;
  return static_cast<double>(std::min(best, singleton));
}

namespace protocol {

std::string encode_request(std::uint64_t id, const CodeMatrix& generator) {
  json rows = json::array();
  for (std::size_t r = 0; r < generator.rows(); ++r) rows.push_back(json(std::vector<int>(generator.row(r).begin(), generator.row(r).end())));
  return json{{"id", id}, {"q", generator.field()->q()}, {"rows", std::move(rows)}}.dump();
}

namespace {

json parse_object(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ProtocolViolation("not valid JSON", line);
  if (!j.is_object()) throw ProtocolViolation("expected a JSON object", line);
  return j;
}

}  // namespace

Handshake parse_handshake(const std::string& line) {
  const json j = parse_object(line);
  if (!j.contains("ready") || j["ready"] != true) throw ProtocolViolation("handshake lacks \"ready\":true", line);
  if (!j.contains("q") || !j["q"].is_number_unsigned()) throw ProtocolViolation("handshake lacks integer \"q\"", line);
  Handshake h;
  h.q = j["q"].get<unsigned>();
  if (j.contains("model") && j["model"].is_string()) h.model = j["model"].get<std::string>();
  return h;
}

Response parse_response(const std::string& line, std::uint64_t expected_id) {
  const json j = parse_object(line);
  if (!j.contains("id") || !j["id"].is_number_unsigned()) throw ProtocolViolation("response lacks integer \"id\"", line);
  Response r;
  r.id = j["id"].get<std::uint64_t>();
  if (r.id != expected_id)
    throw ProtocolViolation("expected id " + std::to_string(expected_id) + ", got " + std::to_string(r.id), line);
  if (j.contains("error")) {
    const std::string msg = j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump();
    throw PredictorFailure("predictor error on request " + std::to_string(r.id) + ": " + msg);
  }
  if (!j.contains("d_approx") || !j["d_approx"].is_number()) throw ProtocolViolation("response lacks \"d_approx\"", line);
  r.d_approx = j["d_approx"].get<double>();
  if (!std::isfinite(r.d_approx) || r.d_approx < 0) throw ProtocolViolation("d_approx must be finite and >= 0", line);
  if (j.contains("probs")) {
    if (!j["probs"].is_array()) throw ProtocolViolation("\"probs\" must be an array", line);
    double total = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < j["probs"].size(); ++i) {
      const auto& p = j["probs"][i];
      if (!p.is_number() || p.get<double>() < 0) throw ProtocolViolation("probabilities must be numbers >= 0", line);
      r.probs.push_back(p.get<double>());
      total += r.probs.back();
      mean += r.probs.back() * static_cast<double>(i);
    }
    if (std::abs(total - 1.0) > 1e-6) throw ProtocolViolation("probabilities sum to " + std::to_string(total), line);
    if (std::abs(mean - r.d_approx) > 1e-6) throw ProtocolViolation("d_approx is not the expectation of probs", line);
  }
  return r;
}

}  // namespace protocol

RemotePredictor::RemotePredictor(const std::string& command, unsigned q, std::chrono::milliseconds timeout)
    : command_(command), q_(q), timeout_(timeout) {
  child_ = std::make_unique<ChildProcess>(command);
  auto line = child_->read_line(timeout_);
  if (!line) {
    if (child_->eof()) throw SpawnFailure("predictor '" + command + "' exited before its handshake");
    throw PredictorTimeout(0, "no handshake from '" + command + "'");
  }
  const auto h = protocol::parse_handshake(*line);
  if (h.q != q_) throw ProtocolViolation("predictor serves q=" + std::to_string(h.q) + ", need q=" + std::to_string(q_), *line);
  model_ = h.model;
  spdlog::debug("predictor '{}' ready (model '{}')", command_, model_);
}

RemotePredictor::~RemotePredictor() {
  if (child_) child_->shutdown();
}

double RemotePredictor::predict(const CodeMatrix& generator) {
  if (generator.field()->q() != q_)
    throw PredictorFailure("generator over q=" + std::to_string(generator.field()->q()) + " sent to q=" +
                           std::to_string(q_) + " predictor");
  const std::uint64_t id = next_id_++;
  if (!child_->write_line(protocol::encode_request(id, generator), timeout_))
    throw PredictorFailure("could not send request " + std::to_string(id) + " to '" + command_ + "'");
  auto line = child_->read_line(timeout_);
  if (!line) {
    if (child_->eof()) throw PredictorFailure("predictor '" + command_ + "' closed its output on request " + std::to_string(id));
    throw PredictorTimeout(id, "no response within " + std::to_string(timeout_.count()) + " ms");
  }
  return protocol::parse_response(*line, id).d_approx;
}

std::unique_ptr<Predictor> make_predictor(std::string_view spec, unsigned q, const DistanceOptions& exact_options,
                                          std::chrono::milliseconds timeout) {
  if (spec == "exact") return std::make_unique<ExactPredictor>(exact_options);
  if (spec == "heuristic") return std::make_unique<HeuristicPredictor>();
  if (spec.starts_with("cmd:")) return std::make_unique<RemotePredictor>(std::string(spec.substr(4)), q, timeout);
  throw ParseError("unknown predictor '" + std::string(spec) + "' (expected exact, heuristic or cmd:...)");
}

}  // namespace toric
