#include "toric/search.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <spdlog/spdlog.h>
#include <sstream>

#include "toric/code.hpp"
#include "toric/error.hpp"
#include "toric/io.hpp"

namespace toric {

using nlohmann::json;

int singleton_bound(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw Error("Singleton bound needs 1 <= k <= n (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  return static_cast<int>(n - k + 1);
}

double log10_search_space(unsigned q) {
  if (q < 3) throw Error("search-space estimate needs q >= 3");
  const double qq = q;
  const double exponent = (qq - 1) * (qq - 1) * std::log10(2.0);
  const double group = std::log10(qq * qq) + std::log10(qq * qq - 1) + std::log10(qq * qq - qq);
  return exponent - group;
}

double estimate_search_space(unsigned q) { return std::pow(10.0, log10_search_space(q)); }

ChampionTable::ChampionTable(unsigned q) : q_(q), n_(static_cast<std::size_t>(q - 1) * (q - 1)) {}

void ChampionTable::set(std::size_t k, int d, std::string source) {
  const int bound = singleton_bound(n_, k);
  if (d < 1 || d > bound)
    throw Error("d=" + std::to_string(d) + " for k=" + std::to_string(k) + " violates 1 <= d <= " + std::to_string(bound));
  entries_[k] = {d, std::move(source)};
}

std::optional<int> ChampionTable::get(std::size_t k) const {
  auto it = entries_.find(k);
  if (it == entries_.end()) return std::nullopt;
  return it->second.d;
}

ChampionTable ChampionTable::parse_csv(const std::string& text, unsigned q) {
  ChampionTable table(q);
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("k,d", 0) != 0) throw ParseError("line " + std::to_string(number) + ": expected header k,d,source");
      header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string k, d, source;
    std::getline(fields, k, ',');
    std::getline(fields, d, ',');
    std::getline(fields, source);
    try {
      std::size_t used_k = 0, used_d = 0;
      const auto kv = std::stoul(k, &used_k);
      const auto dv = std::stoi(d, &used_d);
      if (used_k != k.size() || used_d != d.size()) throw std::invalid_argument("trailing text");
      table.set(kv, dv, source);
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(number) + ": " + e.what());
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(number) + ": bad row '" + line + "'");
    }
  }
  if (!header) throw ParseError("champion table is empty");
  return table;
}

ChampionTable ChampionTable::load_csv(const std::string& path, unsigned q) { return parse_csv(read_file(path), q); }

std::string ChampionTable::to_csv() const {
  std::ostringstream out;
  out << "k,d,source\n";
  for (const auto& [k, e] : entries_) out << k << ',' << e.d << ',' << e.source << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

json points_json(const LatticePointSet& v) { return v.to_string(); }

LatticePointSet points_from(const json& j, unsigned q) {
  return LatticePointSet(parse_points(j.get<std::string>()), static_cast<int>(q) - 1);
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

json SearchState::to_json() const {
  json out;
  out["q"] = q;
  out["passes"] = passes;
  json seen_list = json::array();
  for (const auto& v : seen.items()) seen_list.push_back(points_json(v));
  out["seen"] = std::move(seen_list);
  json dim_map = json::object();
  for (const auto& [k, s] : dims) {
    json d;
    d["best_d"] = s.best_d;
    d["champions"] = json::array();
    for (const auto& v : s.champions) d["champions"].push_back(points_json(v));
    d["candidates"] = json::array();
    for (const auto& c : s.candidates)
      d["candidates"].push_back(
          {{"V", points_json(c.points)}, {"inconclusive", c.inconclusive}, {"lower", c.lower}, {"upper", c.upper}, {"d", opt(c.d)}});
    d["ga_runs"] = s.ga_runs;
    d["evaluated"] = s.evaluated;
    d["bz_runs"] = s.bz_runs;
    d["champion_hits"] = s.champion_hits;
    d["inconclusive"] = s.inconclusive;
    d["min_d"] = opt(s.min_d);
    d["max_d"] = opt(s.max_d);
    dim_map[std::to_string(k)] = std::move(d);
  }
  out["dims"] = std::move(dim_map);
  return out;
}

SearchState SearchState::from_json(const json& j) {
  try {
    SearchState s;
    s.q = j.at("q").get<unsigned>();
    s.passes = j.at("passes").get<std::size_t>();
    for (const auto& v : j.at("seen")) s.seen.insert(points_from(v, s.q));
    for (const auto& [key, d] : j.at("dims").items()) {
      DimensionState ds;
      ds.best_d = d.at("best_d").get<int>();
      for (const auto& v : d.at("champions")) ds.champions.push_back(points_from(v, s.q));
      for (const auto& c : d.at("candidates"))
        ds.candidates.push_back({points_from(c.at("V"), s.q), c.at("inconclusive").get<bool>(), c.at("lower").get<int>(),
                                 c.at("upper").get<int>(), opt_from<int>(c.at("d"))});
      ds.ga_runs = d.at("ga_runs").get<std::uint64_t>();
      ds.evaluated = d.at("evaluated").get<std::uint64_t>();
      ds.bz_runs = d.at("bz_runs").get<std::uint64_t>();
      ds.champion_hits = d.at("champion_hits").get<std::uint64_t>();
      ds.inconclusive = d.at("inconclusive").get<std::uint64_t>();
      ds.min_d = opt_from<int>(d.at("min_d"));
      ds.max_d = opt_from<int>(d.at("max_d"));
      s.dims[std::stoul(key)] = std::move(ds);
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad search state: ") + e.what());
  }
}

void SearchState::save(const std::string& path) const { write_file_atomic(path, to_json().dump(1) + "\n"); }

SearchState SearchState::load(const std::string& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ParseError("search state " + path + " is not valid JSON");
  return from_json(j);
}

// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t base, std::size_t pass, std::size_t k) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(base ^ mix((static_cast<std::uint64_t>(pass) << 32) ^ k));
}

namespace {

void record_distance(DimensionState& ds, int d) {
  ds.min_d = ds.min_d ? std::min(*ds.min_d, d) : d;
  ds.max_d = ds.max_d ? std::max(*ds.max_d, d) : d;
}

void promote(DimensionState& ds, const LatticePointSet& v, int d) {
  if (d == ds.best_d) {
    ds.champions.push_back(v);
  } else if (d > ds.best_d) {
    ds.best_d = d;
    ds.champions = {v};
  }
}

}  // namespace

void update_distances(const std::vector<LatticePointSet>& codes, std::size_t k, SearchState& state,
                      const ChampionTable* table, const DistanceOptions& options) {
  const FieldPtr field = field_new(state.q);
  DimensionState& ds = state.dims[k];
  const std::optional<int> d_k = table ? table->get(k) : std::nullopt;
  for (const auto& v : codes) {
    if (state.seen.contains(v)) continue;
    state.seen.insert(v);
    const ToricCode code(field, v);
    if (code.k() != k) continue;
    ++ds.bz_runs;
    const auto r = bz_distance(code, options);
    if (!r.converged) {
      ++ds.inconclusive;
      spdlog::warn("k={} {}: distance inconclusive in [{}, {}]", k, v.to_string(), r.lower_bound, r.upper_bound);
      continue;
    }
    record_distance(ds, r.d);
    if (d_k && r.d >= *d_k) ++ds.champion_hits;
    promote(ds, v, r.d);
  }
}

void update_candidates(const std::vector<LatticePointSet>& codes, std::size_t k, int d_k, SearchState& state,
                       const DistanceOptions& options) {
  const FieldPtr field = field_new(state.q);
  DimensionState& ds = state.dims[k];
  for (const auto& v : codes) {
    if (state.seen.contains(v)) continue;
    state.seen.insert(v);
    const ToricCode code(field, v);
    if (code.k() != k) continue;
    ++ds.bz_runs;
    const auto verdict = verify_lower_bound(code, d_k, options);
    if (verdict.status == LowerBoundStatus::Refuted) continue;
    const bool flagged = verdict.status == LowerBoundStatus::Inconclusive;
    if (flagged) ++ds.inconclusive;
    ds.candidates.push_back({v, flagged, verdict.lower_bound, verdict.upper_bound, std::nullopt});
  }
}

void verify_candidates(const std::vector<std::size_t>& dims, const ChampionTable& table, SearchState& state,
                       const DistanceOptions& options) {
  const FieldPtr field = field_new(state.q);
  for (std::size_t k : dims) {
    auto it = state.dims.find(k);
    if (it == state.dims.end()) continue;
    DimensionState& ds = it->second;
    const int d_k = table.get(k).value_or(0);
    ds.best_d = d_k;
    ds.champions.clear();
    ds.champion_hits = 0;
    std::stable_partition(ds.candidates.begin(), ds.candidates.end(), [](const Candidate& c) { return !c.inconclusive; });
    for (auto& c : ds.candidates) {
      if (!c.d) {
        const auto r = bz_distance(ToricCode(field, c.points), options);
        if (!r.converged) {
          c.inconclusive = true;
          c.lower = r.lower_bound;
          c.upper = r.upper_bound;
          continue;
        }
        c.d = r.d;
        c.lower = c.upper = r.d;
        record_distance(ds, r.d);
      }
      if (*c.d >= d_k) ++ds.champion_hits;
      promote(ds, c.points, *c.d);
    }
  }
}

namespace {

bool skipped(const CampaignOptions& options, std::size_t k) {
  return std::find(options.skip.begin(), options.skip.end(), k) != options.skip.end();
}

int required_entry(const ChampionTable& table, std::size_t k) {
  const auto d = table.get(k);
  if (!d) throw Error("champion table has no entry for k=" + std::to_string(k));
  return *d;
}

// One GA run targeting dimension k; returns its evaluated point sets.
std::vector<LatticePointSet> ga_pass(std::size_t k, std::size_t pass, const GAConfig& base, Predictor& predictor,
                                     SearchState& state, const CampaignOptions& options, GARunReport& report) {
  GAConfig config = base;
  config.q = state.q;
  config.m = k;
  config.target_k = k;
  config.seed = derive_seed(base.seed, pass, k);
  FitnessContext ctx;
  ctx.field = field_new(state.q);
  ctx.predictor = &predictor;
  ctx.seen = state.seen;
  report = run_ga(config, ctx);
  DimensionState& ds = state.dims[k];
  ++ds.ga_runs;
  ds.evaluated += report.evaluated.size();
  if (options.on_ga_report) options.on_ga_report(k, pass, report);
  std::vector<LatticePointSet> out;
  out.reserve(report.evaluated.size());
  for (const auto& e : report.evaluated) out.push_back(e.points);
  return out;
}

}  // namespace

void run_exhaustive_campaign(const std::vector<std::size_t>& dims, const ChampionTable& table, const GAConfig& base,
                             Predictor& predictor, SearchState& state, const CampaignOptions& options) {
  for (std::size_t k : dims) required_entry(table, k);
  for (std::size_t pass = 0; pass < options.max_passes; ++pass) {
    bool ran = false;
    for (std::size_t k : dims) {
      if (skipped(options, k) || state.dims[k].best_d >= required_entry(table, k)) continue;
      ran = true;
      GARunReport report;
      const auto codes = ga_pass(k, state.passes, base, predictor, state, options, report);
      update_distances(codes, k, state, &table, options.verify);
      spdlog::info("pass {} k={}: {} codes, best d={}", state.passes + 1, k, codes.size(), state.dims[k].best_d);
      if (report.failure) {
        if (options.on_pass) options.on_pass(state);
        throw PredictorFailure(*report.failure);
      }
    }
    if (!ran) break;
    ++state.passes;
    if (options.on_pass) options.on_pass(state);
  }
}

void run_filtered_campaign(const std::vector<std::size_t>& dims, const ChampionTable& table, const GAConfig& base,
                           Predictor& predictor, SearchState& state, const CampaignOptions& options) {
  for (std::size_t k : dims) required_entry(table, k);
  std::vector<std::size_t> active;
  for (std::size_t k : dims)
    if (!skipped(options, k)) active.push_back(k);

  for (std::size_t pass = 0; pass < options.max_passes && !active.empty(); ++pass) {
    for (std::size_t k : active) {
      GARunReport report;
      const auto codes = ga_pass(k, state.passes, base, predictor, state, options, report);
      update_candidates(codes, k, required_entry(table, k), state, options.verify);
      spdlog::info("pass {} k={}: {} codes, {} candidates", state.passes + 1, k, codes.size(),
                   state.dims[k].candidates.size());
      if (report.failure) {
        if (options.on_pass) options.on_pass(state);
        throw PredictorFailure(*report.failure);
      }
    }
    ++state.passes;
    if (options.on_pass) options.on_pass(state);
  }
  verify_candidates(active, table, state, options.verify);
  if (options.on_pass) options.on_pass(state);
}

// ---------------------------------------------------------------------------

EfficiencyRow efficiency_row(std::size_t k, std::uint64_t codes, std::uint64_t champions, std::optional<int> min_d,
                             std::optional<int> max_d) {
  EfficiencyRow row{k, codes, champions, std::nullopt, min_d, max_d};
  if (champions > 0) row.per_champion = static_cast<double>(codes) / static_cast<double>(champions);
  return row;
}

std::vector<EfficiencyRow> efficiency_report(const SearchState& state) {
  std::vector<EfficiencyRow> rows;
  for (const auto& [k, ds] : state.dims) rows.push_back(efficiency_row(k, ds.bz_runs, ds.champion_hits, ds.min_d, ds.max_d));
  return rows;
}

std::string format_per_champion(const EfficiencyRow& row) {
  if (!row.per_champion) return "n/a";
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << *row.per_champion;
  return out.str();
}

void write_efficiency_csv(const std::vector<EfficiencyRow>& rows, std::ostream& out) {
  out << "k,codes,champions,bz_per_champion,min_d,max_d\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.codes << ',' << r.champions << ',' << format_per_champion(r) << ',';
    if (r.min_d) out << *r.min_d;
    out << ',';
    if (r.max_d) out << *r.max_d;
    out << '\n';
  }
}

}  // namespace toric
