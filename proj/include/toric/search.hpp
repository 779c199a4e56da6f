#pragma once

/// @file search.hpp
/// @brief Champion-hunting campaigns and their bookkeeping.
///
/// Exhaustive campaigns compute the exact distance of every new code the GA
/// evaluates. Filtered campaigns first test d >= d_k with an early-exit
/// verifier and compute full distances only for the survivors.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "toric/distance.hpp"
#include "toric/ga.hpp"

namespace toric {

/// n - k + 1. Throws Error unless 1 <= k <= n.
int singleton_bound(std::size_t n, std::size_t k);

/// 2^((q-1)^2) / (q^2 (q^2-1) (q^2-q)), the orbit-count estimate for lattice
/// point sets under the affine group. Throws Error for q < 3.
double estimate_search_space(unsigned q);
double log10_search_space(unsigned q);

struct ChampionEntry {
  int d = 0;
  std::string source;
};

/// Best known distance per dimension for block length (q-1)^2.
class ChampionTable {
 public:
  explicit ChampionTable(unsigned q);

  /// Throws Error if d breaks the Singleton bound or k is out of range.
  void set(std::size_t k, int d, std::string source = {});
  std::optional<int> get(std::size_t k) const;
  const std::map<std::size_t, ChampionEntry>& entries() const noexcept { return entries_; }
  unsigned q() const noexcept { return q_; }
  std::size_t n() const noexcept { return n_; }

  /// CSV with header k,d,source. Throws ParseError.
  static ChampionTable parse_csv(const std::string& text, unsigned q);
  static ChampionTable load_csv(const std::string& path, unsigned q);
  std::string to_csv() const;

 private:
  unsigned q_;
  std::size_t n_;
  std::map<std::size_t, ChampionEntry> entries_;
};

struct Candidate {
  LatticePointSet points;
  bool inconclusive = false;  // filter ran out of budget
  int lower = 0;
  int upper = 0;
  std::optional<int> d;  // set once fully verified
};

struct DimensionState {
  int best_d = 0;
  std::vector<LatticePointSet> champions;  // codes attaining best_d
  std::vector<Candidate> candidates;
  std::uint64_t ga_runs = 0;
  std::uint64_t evaluated = 0;      // codes scored by the GA
  std::uint64_t bz_runs = 0;        // distance computations, including filter runs
  std::uint64_t champion_hits = 0;  // verified codes with d >= d_k
  std::uint64_t inconclusive = 0;
  std::optional<int> min_d;
  std::optional<int> max_d;
};

struct SearchState {
  unsigned q = 0;
  std::size_t passes = 0;
  SeenSet seen;
  std::map<std::size_t, DimensionState> dims;

  nlohmann::json to_json() const;
  /// Throws ParseError.
  static SearchState from_json(const nlohmann::json& j);
  /// Atomic write through a temporary file.
  void save(const std::string& path) const;
  static SearchState load(const std::string& path);
};

struct CampaignOptions {
  std::size_t max_passes = 3;
  DistanceOptions verify;  // per-code distance computations
  std::vector<std::size_t> skip;
  /// Called with every finished GA run.
  std::function<void(std::size_t k, std::size_t pass, const GARunReport&)> on_ga_report;
  /// Called after every pass, e.g. to checkpoint the state.
  std::function<void(const SearchState&)> on_pass;
};

/// Per-run GA seed derived from the base seed, pass and dimension.
std::uint64_t derive_seed(std::uint64_t base, std::size_t pass, std::size_t k);

/// Exact distances for the unseen codes of dimension k in S; champions update
/// as equal -> add, greater -> replace. Codes of other dimensions are only
/// marked as seen. `table` (optional) is used to count champion hits.
void update_distances(const std::vector<LatticePointSet>& codes, std::size_t k, SearchState& state,
                      const ChampionTable* table, const DistanceOptions& options);

/// Filter step: unseen codes of dimension k that are not refuted at d_k become
/// candidates; budget overruns are kept with the inconclusive flag.
void update_candidates(const std::vector<LatticePointSet>& codes, std::size_t k, int d_k, SearchState& state,
                       const DistanceOptions& options);

/// Full distances for the candidates of each dimension (flagged ones last),
/// starting from best_d = d_k.
void verify_candidates(const std::vector<std::size_t>& dims, const ChampionTable& table, SearchState& state,
                       const DistanceOptions& options);

/// Throws Error if a dimension has no table entry and PredictorFailure when a
/// GA run aborts (the state keeps everything up to that point).
void run_exhaustive_campaign(const std::vector<std::size_t>& dims, const ChampionTable& table, const GAConfig& base,
                             Predictor& predictor, SearchState& state, const CampaignOptions& options);
void run_filtered_campaign(const std::vector<std::size_t>& dims, const ChampionTable& table, const GAConfig& base,
                           Predictor& predictor, SearchState& state, const CampaignOptions& options);

struct EfficiencyRow {
  std::size_t k = 0;
  std::uint64_t codes = 0;
  std::uint64_t champions = 0;
  std::optional<double> per_champion;  // codes / champions
  std::optional<int> min_d;
  std::optional<int> max_d;
};

EfficiencyRow efficiency_row(std::size_t k, std::uint64_t codes, std::uint64_t champions,
                             std::optional<int> min_d = std::nullopt, std::optional<int> max_d = std::nullopt);
std::vector<EfficiencyRow> efficiency_report(const SearchState& state);
/// "n/a" without champions, otherwise two decimals.
std::string format_per_champion(const EfficiencyRow& row);
/// Columns k,codes,champions,bz_per_champion,min_d,max_d.
void write_efficiency_csv(const std::vector<EfficiencyRow>& rows, std::ostream& out);

}  // namespace toric
