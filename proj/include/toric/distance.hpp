#pragma once

/// @file distance.hpp
/// @brief Exact minimum Hamming distance of linear codes.
///
/// Two independent routes:
///  - brute_force_distance walks every nonzero message in a p-ary Gray-code
///    order over the additive coordinates of GF(q)^k (one vector addition per
///    step) and is used as the reference oracle.
///  - bz_distance is the Brouwer-Zimmermann algorithm: several row-equivalent
///    generator matrices, each systematic on its own information set, are
///    enumerated round by round over messages of weight r. After round r a
///    matrix with relative rank rr guarantees that every codeword not yet seen
///    has at least max(0, r + 1 - (k - rr)) nonzeros on its new columns, and
///    these contributions add up to the lower bound.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "toric/code.hpp"
#include "toric/matrix.hpp"

namespace toric {

/// Both limits are optional; an empty budget never runs out.
struct DistanceBudget {
  std::optional<std::chrono::milliseconds> wall_time;
  std::optional<std::uint64_t> max_words;

  static DistanceBudget unlimited() { return {}; }
  static DistanceBudget millis(long long ms) { return {std::chrono::milliseconds(ms), std::nullopt}; }
  static DistanceBudget words(std::uint64_t n) { return {std::nullopt, n}; }
};

struct DistanceOptions {
  DistanceBudget budget;
  unsigned threads = 1;
  /// Called after every enumeration pass with the current (lower, upper) bounds.
  std::function<void(int lower, int upper)> on_progress;
};

struct DistanceResult {
  int d = 0;
  int lower_bound = 0;
  int upper_bound = 0;
  std::vector<Element> witness;  // codeword of weight upper_bound
  std::uint64_t enumerated = 0;
  double elapsed_ms = 0.0;
  bool converged = false;
};

inline constexpr std::uint64_t kDefaultBruteForceCap = std::uint64_t{1} << 28;

/// Exhaustive enumeration of all q^k - 1 nonzero codewords. Throws CapExceeded.
DistanceResult brute_force_distance(const CodeMatrix& generator, std::uint64_t cap = kDefaultBruteForceCap);
DistanceResult brute_force_distance(const ToricCode& code, std::uint64_t cap = kDefaultBruteForceCap);

struct InformationSet {
  CodeMatrix matrix;                // k x n, identity on `pivots` (row r has its 1 at pivots[r])
  std::vector<std::size_t> pivots;  // information set, one column per row
  std::size_t relative_rank = 0;    // pivots in columns unused by earlier sets
};

struct InformationSetDecomposition {
  std::vector<InformationSet> sets;
  std::size_t k = 0;
  std::size_t n = 0;
};

/// Greedy decomposition: set 0 is the RREF of G; each further set prefers
/// pivots in columns not yet covered and the process stops at the first set
/// contributing relative rank 0. Throws RankDeficient.
InformationSetDecomposition build_information_sets(const CodeMatrix& generator);

/// Brouwer-Zimmermann minimum distance. A budget that runs out produces a
/// result with converged = false and the bounds reached so far.
DistanceResult bz_distance(const CodeMatrix& generator, const DistanceOptions& options = {});
DistanceResult bz_distance(const ToricCode& code, const DistanceOptions& options = {});

enum class LowerBoundStatus { Verified, Refuted, Inconclusive };

struct LowerBoundVerdict {
  LowerBoundStatus status = LowerBoundStatus::Inconclusive;
  std::vector<Element> witness;  // a codeword of weight < target when Refuted
  int lower_bound = 0;
  int upper_bound = 0;
  std::uint64_t enumerated = 0;
  double elapsed_ms = 0.0;
};

/// Decides d >= target with early exit: Refuted on the first codeword of
/// weight < target, Verified once the lower bound reaches target.
LowerBoundVerdict verify_lower_bound(const CodeMatrix& generator, int target, const DistanceOptions& options = {});
LowerBoundVerdict verify_lower_bound(const ToricCode& code, int target, const DistanceOptions& options = {});

const char* to_string(LowerBoundStatus status) noexcept;

}  // namespace toric
