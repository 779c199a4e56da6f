#pragma once

/// @file dataset.hpp
/// @brief (V, G, d) datasets: generation, class balancing, JSONL storage.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "toric/code.hpp"
#include "toric/distance.hpp"

namespace toric {

enum class Provenance { Random, Ga, Injected };

const char* to_string(Provenance p) noexcept;
/// Throws ParseError.
Provenance parse_provenance(const std::string& s);

struct CodeRecord {
  unsigned q = 0;
  std::size_t m = 0;
  std::vector<LatticePoint> points;  // reduced and sorted
  std::vector<std::vector<Element>> generator;
  std::size_t k = 0;
  std::optional<int> d;  // null when the distance did not converge
  int d_lo = 0;
  int d_hi = 0;
  Provenance provenance = Provenance::Random;
  std::optional<double> weight;

  bool operator==(const CodeRecord&) const = default;
};

CodeRecord make_record(const ToricCode& code, const DistanceResult& distance, Provenance provenance);

struct GenerateOptions {
  DistanceOptions distance;  // per record
  std::uint64_t seed = 0;
  unsigned threads = 1;  // records computed concurrently
};

/// N distinct uniform m-subsets of [0, q-2]^2 with their distances. The
/// output depends only on the seed, not on the thread count (unless a wall
/// clock budget cuts computations short). Throws NotEnoughSubsets.
std::vector<CodeRecord> generate_dataset(unsigned q, std::size_t m, std::size_t count, const GenerateOptions& options);

struct BalancePolicy {
  std::size_t floor = 0;
  std::size_t ceiling = SIZE_MAX;
  double ratio = 0.9;  // train share of each class
  std::uint64_t seed = 0;
  std::size_t min_class = 10;  // smaller classes go to the test set only

  static BalancePolicy f7();
  static BalancePolicy f8_pretrain();
  static BalancePolicy f8_train();
  /// Throws Error.
  void validate() const;
};

struct BalanceResult {
  std::vector<CodeRecord> train;
  std::vector<CodeRecord> test;
  std::size_t excluded = 0;  // records without an exact distance
};

/// Per distance class: split at `ratio`, then resample the train part into
/// [floor, ceiling] (with replacement upwards, without downwards). Each train
/// record carries weight original/resampled class size. Throws EmptyInput.
BalanceResult balance(const std::vector<CodeRecord>& records, const BalancePolicy& policy);

nlohmann::ordered_json to_json(const CodeRecord& r);
/// Throws ParseError.
CodeRecord record_from_json(const nlohmann::json& j);

/// One record per line, written atomically.
void save_jsonl(const std::vector<CodeRecord>& records, const std::string& path);
std::string to_jsonl(const std::vector<CodeRecord>& records);
/// Throws ParseError naming the offending line.
std::vector<CodeRecord> load_jsonl(const std::string& path);
std::vector<CodeRecord> parse_jsonl(const std::string& text);

struct DatasetStats {
  std::map<int, std::size_t> by_d;
  std::map<std::size_t, std::size_t> by_k;
  std::size_t without_d = 0;
  std::size_t total = 0;
};

DatasetStats dataset_stats(const std::vector<CodeRecord>& records);
/// Two sections, "d,count" and "k,count", separated by a blank line.
void write_stats_csv(const DatasetStats& stats, std::ostream& out);

}  // namespace toric
