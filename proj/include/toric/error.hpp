#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace toric {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrimePower : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero in finite field") {}
};

class EmptyPointSet : public Error {
 public:
  EmptyPointSet() : Error("lattice point set is empty") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Brute-force enumeration would visit more codewords than the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(double words, std::uint64_t cap)
      : Error("brute force needs " + std::to_string(words) + " codewords, cap is " + std::to_string(cap)),
        words_(words) {}
  double words() const noexcept { return words_; }

 private:
  double words_;
};

class NotEnoughSubsets : public Error {
 public:
  using Error::Error;
};

class EmptyPopulation : public Error {
 public:
  EmptyPopulation() : Error("population is empty") {}
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (point lists, CSV, JSONL, config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Any failure of a minimum-distance predictor. The GA treats these as fatal.
class PredictorFailure : public Error {
 public:
  using Error::Error;
};

class SpawnFailure : public PredictorFailure {
 public:
  using PredictorFailure::PredictorFailure;
};

class PredictorTimeout : public PredictorFailure {
 public:
  PredictorTimeout(std::uint64_t id, const std::string& detail)
      : PredictorFailure("predictor timed out on request " + std::to_string(id) + ": " + detail), id_(id) {}
  std::uint64_t id() const noexcept { return id_; }

 private:
  std::uint64_t id_;
};

class ProtocolViolation : public PredictorFailure {
 public:
  ProtocolViolation(const std::string& what, std::string line)
      : PredictorFailure("protocol violation: " + what + " (line: " + line + ")"), line_(std::move(line)) {}
  const std::string& line() const noexcept { return line_; }

 private:
  std::string line_;
};

}  // namespace toric
