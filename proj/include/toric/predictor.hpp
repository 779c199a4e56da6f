#pragma once

/// @file predictor.hpp
/// @brief Minimum-distance predictors used as GA fitness oracles.
///
/// Remote predictors run as a child process speaking newline-delimited JSON:
///   child -> {"ready":true,"q":Q,"model":"..."}       (once)
///   parent -> {"id":N,"q":Q,"rows":[[...],...]}
///   child -> {"id":N,"d_approx":X,"probs":[...]}      or {"id":N,"error":"..."}

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toric/distance.hpp"
#include "toric/matrix.hpp"
#include "toric/subprocess.hpp"

namespace toric {

class Predictor {
 public:
  virtual ~Predictor() = default;
  /// Predicted minimum distance of the code generated by `generator`.
  /// Throws PredictorFailure.
  virtual double predict(const CodeMatrix& generator) = 0;
  virtual std::string name() const = 0;
};

/// Exact distance via Brouwer-Zimmermann; a budget overrun is a PredictorFailure.
class ExactPredictor final : public Predictor {
 public:
  explicit ExactPredictor(DistanceOptions options = {}) : options_(std::move(options)) {}
  double predict(const CodeMatrix& generator) override;
  std::string name() const override { return "exact"; }

 private:
  DistanceOptions options_;
};

/// Minimum row weight of the generator, an upper bound on d.
class HeuristicPredictor final : public Predictor {
 public:
  double predict(const CodeMatrix& generator) override;
  std::string name() const override { return "heuristic"; }
};

namespace protocol {

struct Handshake {
  unsigned q = 0;
  std::string model;
};

struct Response {
  std::uint64_t id = 0;
  double d_approx = 0.0;
  std::vector<double> probs;
};

std::string encode_request(std::uint64_t id, const CodeMatrix& generator);
/// Throws ProtocolViolation.
Handshake parse_handshake(const std::string& line);
/// Throws ProtocolViolation, or PredictorFailure when the child reports an error.
Response parse_response(const std::string& line, std::uint64_t expected_id);

}  // namespace protocol

class RemotePredictor final : public Predictor {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{30000};

  /// Spawns `command` and waits for its handshake. Throws SpawnFailure,
  /// PredictorTimeout, ProtocolViolation.
  RemotePredictor(const std::string& command, unsigned q, std::chrono::milliseconds timeout = kDefaultTimeout);
  ~RemotePredictor() override;

  double predict(const CodeMatrix& generator) override;
  std::string name() const override { return "remote:" + command_; }

  const std::string& model() const noexcept { return model_; }
  std::uint64_t requests() const noexcept { return next_id_ - 1; }

 private:
  std::string command_;
  unsigned q_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<ChildProcess> child_;
  std::string model_;
  std::uint64_t next_id_ = 1;
};

/// "exact", "heuristic" or "cmd:<shell command>". Throws ParseError.
std::unique_ptr<Predictor> make_predictor(std::string_view spec, unsigned q, const DistanceOptions& exact_options = {},
                                          std::chrono::milliseconds timeout = RemotePredictor::kDefaultTimeout);

}  // namespace toric
