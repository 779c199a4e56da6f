// Command-line front end: minimum distances, datasets, GA campaigns, bounds.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "toric/code.hpp"
#include "toric/dataset.hpp"
#include "toric/distance.hpp"
#include "toric/error.hpp"
#include "toric/ga.hpp"
#include "toric/io.hpp"
#include "toric/logging.hpp"
#include "toric/predictor.hpp"
#include "toric/search.hpp"
#include "toric/serialize.hpp"

namespace {

using namespace toric;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kComputation = 2, kPredictor = 3, kInconclusive = 4 };

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string log_level = "warn";
  std::string out;
};

DistanceOptions distance_options(const Globals& g, long long budget_ms) {
  DistanceOptions o;
  o.threads = g.threads;
  if (budget_ms > 0) o.budget = DistanceBudget::millis(budget_ms);
  return o;
}

void print_json(const ordered_json& j) { std::cout << j.dump() << std::endl; }

void print_version() {
  std::cout << "toricsearch " << TORIC_VERSION << "\n";
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
    const auto f = field_new(q);
    std::cout << "  GF(" << q << ") modulus [";
    for (std::size_t i = 0; i < f->modulus().size(); ++i) std::cout << (i ? "," : "") << f->modulus()[i];
    std::cout << "] xi " << f->xi() << "\n";
  }
}

// --- mindist ---------------------------------------------------------------

struct MindistArgs {
  unsigned q = 0;
  std::string points;
  bool brute = false;
  bool bz = false;
  long long budget_ms = 0;
  int verify = 0;
  std::uint64_t cap = kDefaultBruteForceCap;
};

int run_mindist(const Globals& g, const MindistArgs& a) {
  const auto field = field_new(a.q);
  const ToricCode code = build_code(field, parse_points(a.points));
  ordered_json out;
  int rc = kOk;
  if (a.verify > 0) {
    const auto v = verify_lower_bound(code, a.verify, distance_options(g, a.budget_ms));
    out = to_json(v);
    out["target"] = a.verify;
    if (v.status == LowerBoundStatus::Inconclusive) rc = kInconclusive;
  } else {
    const auto r = a.brute ? brute_force_distance(code, a.cap) : bz_distance(code, distance_options(g, a.budget_ms));
    out = to_json(r);
    out["method"] = a.brute ? "brute" : "bz";
    if (!r.converged) rc = kInconclusive;
  }
  out["q"] = a.q;
  out["n"] = code.n();
  out["k"] = code.k();
  out["points"] = code.points().to_string();
  print_json(out);
  return rc;
}

// --- gen-dataset -----------------------------------------------------------

struct GenArgs {
  unsigned q = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  long long budget_ms = 0;
  std::string stats;
};

int run_gen_dataset(const Globals& g, const GenArgs& a) {
  if (g.out.empty()) throw ParseError("gen-dataset needs --out FILE");
  GenerateOptions o;
  o.seed = g.seed;
  o.threads = g.threads;
  o.distance = distance_options(g, a.budget_ms);
  const auto records = generate_dataset(a.q, a.m, a.n, o);
  save_jsonl(records, g.out);
  const auto stats = dataset_stats(records);
  if (!a.stats.empty()) {
    std::ostringstream csv;
    write_stats_csv(stats, csv);
    write_file_atomic(a.stats, csv.str());
  }
  print_json({{"records", records.size()}, {"without_d", stats.without_d}, {"out", g.out}});
  return kOk;
}

// --- ga-search -------------------------------------------------------------

struct SearchArgs {
  unsigned q = 0;
  std::vector<std::size_t> dims;
  std::string config;
  std::string predictor = "exact";
  std::string table;
  int target_d = 0;
  std::string mode = "exhaustive";
  std::size_t max_passes = 3;
  long long budget_ms = 0;
  long long predictor_timeout_ms = 30000;
  std::vector<std::size_t> skip;
  std::string resume;
  std::optional<std::size_t> population, generations, parents, elites;
  std::optional<double> mutation;
};

void write_search_outputs(const std::filesystem::path& dir, const SearchState& state, const std::string& evaluated) {
  write_file_atomic((dir / "evaluated.jsonl").string(), evaluated);
  state.save((dir / "state.json").string());

  std::ostringstream candidates, champions, efficiency;
  candidates << "k,V,inconclusive,lower,upper,d\n";
  champions << "k,d,V\n";
  for (const auto& [k, ds] : state.dims) {
    for (const auto& c : ds.candidates) {
      candidates << k << ",\"" << c.points.to_string() << "\"," << (c.inconclusive ? 1 : 0) << ',' << c.lower << ','
                 << c.upper << ',';
      if (c.d) candidates << *c.d;
      candidates << '\n';
    }
    for (const auto& v : ds.champions) champions << k << ',' << ds.best_d << ",\"" << v.to_string() << "\"\n";
  }
  write_efficiency_csv(efficiency_report(state), efficiency);
  write_file_atomic((dir / "candidates.csv").string(), candidates.str());
  write_file_atomic((dir / "champions.csv").string(), champions.str());
  write_file_atomic((dir / "efficiency.csv").string(), efficiency.str());
}

int run_ga_search(const Globals& g, const SearchArgs& a, bool seed_given) {
  if (a.mode != "exhaustive" && a.mode != "filtered") throw ParseError("--mode must be exhaustive or filtered");
  ChampionTable table(a.q);
  if (!a.table.empty()) table = ChampionTable::load_csv(a.table, a.q);
  if (a.target_d > 0)
    for (auto k : a.dims) table.set(k, a.target_d, "command line");
  if (a.table.empty() && a.target_d <= 0) throw ParseError("ga-search needs --table or --target-d");

  GAConfig base;
  base.q = a.q;
  if (!a.config.empty()) base = load_ga_config(a.config, base);
  base.q = a.q;
  if (seed_given || a.config.empty()) base.seed = g.seed;
  if (a.population) base.population_size = *a.population;
  if (a.generations) base.generations = *a.generations;
  if (a.parents) base.parents = *a.parents;
  if (a.elites) base.elites = *a.elites;
  if (a.mutation) base.mutation_probability = *a.mutation;

  const std::filesystem::path dir = g.out.empty() ? "ga-out" : g.out;
  std::filesystem::create_directories(dir);

  SearchState state;
  state.q = a.q;
  if (!a.resume.empty()) {
    state = SearchState::load(a.resume);
    if (state.q != a.q) throw ParseError("resumed state is for q=" + std::to_string(state.q));
  }

  const auto exact = distance_options(g, 0);
  auto predictor = make_predictor(a.predictor, a.q, exact, std::chrono::milliseconds(a.predictor_timeout_ms));

  std::string evaluated;
  CampaignOptions options;
  options.max_passes = a.max_passes;
  options.verify = distance_options(g, a.budget_ms);
  options.skip = a.skip;
  options.on_ga_report = [&](std::size_t k, std::size_t pass, const GARunReport& report) {
    for (const auto& e : report.evaluated) {
      ordered_json j;
      j["target_k"] = k;
      j["pass"] = pass;
      j["V"] = e.points.to_string();
      j["k"] = e.k;
      j["d_approx"] = e.d_approx;
      j["fitness"] = e.fitness;
      evaluated += j.dump();
      evaluated += '\n';
    }
  };

  int rc = kOk;
  try {
    if (a.mode == "exhaustive")
      run_exhaustive_campaign(a.dims, table, base, *predictor, state, options);
    else
      run_filtered_campaign(a.dims, table, base, *predictor, state, options);
  } catch (const PredictorFailure& e) {
    spdlog::error("predictor failure: {}", e.what());
    std::cerr << "error: " << e.what() << "\n";
    rc = kPredictor;
  }
  write_search_outputs(dir, state, evaluated);

  ordered_json summary;
  summary["mode"] = a.mode;
  summary["passes"] = state.passes;
  summary["out"] = dir.string();
  ordered_json dims = ordered_json::object();
  for (const auto& [k, ds] : state.dims) {
    ordered_json d;
    d["best_d"] = ds.best_d;
    d["target_d"] = table.get(k) ? ordered_json(*table.get(k)) : ordered_json(nullptr);
    d["champions"] = ds.champions.size();
    d["candidates"] = ds.candidates.size();
    d["ga_runs"] = ds.ga_runs;
    d["bz_runs"] = ds.bz_runs;
    dims[std::to_string(k)] = std::move(d);
  }
  summary["dims"] = std::move(dims);
  print_json(summary);
  return rc;
}

// --- dataset utilities -----------------------------------------------------

struct BalanceArgs {
  std::string in;
  std::string policy = "f7";
  std::optional<std::size_t> floor, ceiling;
  std::optional<double> ratio;
};

int run_balance(const Globals& g, const BalanceArgs& a) {
  BalancePolicy p;
  if (a.policy == "f7") p = BalancePolicy::f7();
  else if (a.policy == "f8-pretrain") p = BalancePolicy::f8_pretrain();
  else if (a.policy == "f8-train") p = BalancePolicy::f8_train();
  else if (a.policy != "custom") throw ParseError("unknown policy '" + a.policy + "'");
  if (a.floor) p.floor = *a.floor;
  if (a.ceiling) p.ceiling = *a.ceiling;
  if (a.ratio) p.ratio = *a.ratio;
  p.seed = g.seed;
  const auto result = balance(load_jsonl(a.in), p);
  const std::filesystem::path dir = g.out.empty() ? "." : g.out;
  std::filesystem::create_directories(dir);
  save_jsonl(result.train, (dir / "train.jsonl").string());
  save_jsonl(result.test, (dir / "test.jsonl").string());
  print_json({{"train", result.train.size()}, {"test", result.test.size()}, {"excluded", result.excluded}});
  return kOk;
}

int run_stats(const Globals& g, const std::string& in) {
  std::ostringstream csv;
  write_stats_csv(dataset_stats(load_jsonl(in)), csv);
  if (g.out.empty())
    std::cout << csv.str();
  else
    write_file_atomic(g.out, csv.str());
  return kOk;
}

std::string three_figures(double log10_value) {
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  if (std::round(mantissa * 100) >= 1000) {
    mantissa /= 10;
    exponent += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fe%d", mantissa, static_cast<int>(exponent));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalised toric codes: minimum distances, datasets and GA champion search", "toricsearch"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for distance enumeration")->check(CLI::Range(1u, 1024u));
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")->capture_default_str();
  app.add_option("--out", g.out, "Output file or directory");
  app.add_flag_callback("--version", [] {
    print_version();
    throw CLI::Success();
  }, "Print version and field constants");

  MindistArgs md;
  auto* mindist = app.add_subcommand("mindist", "Minimum distance of C_V");
  mindist->add_option("--q", md.q, "Field order")->required();
  mindist->add_option("--points", md.points, "Lattice points \"(a,b);(c,d);...\"")->required();
  auto* brute = mindist->add_flag("--brute", md.brute, "Exhaustive enumeration");
  mindist->add_flag("--bz", md.bz, "Brouwer-Zimmermann (default)")->excludes(brute);
  mindist->add_option("--budget-ms", md.budget_ms, "Wall-clock budget, 0 for none");
  mindist->add_option("--verify", md.verify, "Only decide d >= VALUE");
  mindist->add_option("--cap", md.cap, "Codeword cap for --brute");

  GenArgs gen;
  auto* gen_dataset = app.add_subcommand("gen-dataset", "Random (V, G, d) dataset as JSONL");
  gen_dataset->add_option("--q", gen.q, "Field order")->required();
  gen_dataset->add_option("--m", gen.m, "Lattice points per code")->required();
  gen_dataset->add_option("--n", gen.n, "Number of records")->required();
  gen_dataset->add_option("--budget-ms", gen.budget_ms, "Per-record distance budget, 0 for none");
  gen_dataset->add_option("--stats", gen.stats, "Also write histogram CSV here");

  SearchArgs sa;
  auto* ga_search = app.add_subcommand("ga-search", "GA champion campaign");
  ga_search->add_option("--q", sa.q, "Field order")->required();
  ga_search->add_option("--k", sa.dims, "Target dimensions (comma separated)")->required()->delimiter(',');
  ga_search->add_option("--config", sa.config, "GA key=value config file");
  ga_search->add_option("--predictor", sa.predictor, "exact, heuristic or cmd:COMMAND")->capture_default_str();
  ga_search->add_option("--table", sa.table, "Champion table CSV (k,d,source)");
  ga_search->add_option("--target-d", sa.target_d, "Best known d for every --k (instead of --table)");
  ga_search->add_option("--mode", sa.mode, "exhaustive or filtered")->capture_default_str();
  ga_search->add_option("--max-passes", sa.max_passes, "Campaign passes")->capture_default_str();
  ga_search->add_option("--budget-ms", sa.budget_ms, "Per-code distance budget, 0 for none");
  ga_search->add_option("--predictor-timeout-ms", sa.predictor_timeout_ms, "Remote predictor timeout")
      ->capture_default_str();
  ga_search->add_option("--skip", sa.skip, "Dimensions to skip")->delimiter(',');
  ga_search->add_option("--resume", sa.resume, "Search state JSON to continue from");
  ga_search->add_option("--population", sa.population, "Population size");
  ga_search->add_option("--generations", sa.generations, "Generations per GA run");
  ga_search->add_option("--parents", sa.parents, "Parents selected per generation");
  ga_search->add_option("--elites", sa.elites, "Elites carried over");
  ga_search->add_option("--mutation", sa.mutation, "Mutation probability");

  unsigned space_q = 0;
  auto* space = app.add_subcommand("space", "Estimated number of lattice point sets up to affine equivalence");
  space->add_option("--q", space_q, "Field order")->required();

  std::size_t bound_n = 0, bound_k = 0;
  auto* bounds = app.add_subcommand("bounds", "Singleton bound n - k + 1");
  bounds->add_option("--n", bound_n, "Block length")->required();
  bounds->add_option("--k", bound_k, "Dimension")->required();

  BalanceArgs ba;
  auto* balance_cmd = app.add_subcommand("balance", "Split and rebalance a dataset into train/test JSONL");
  balance_cmd->add_option("--in", ba.in, "Input JSONL")->required();
  balance_cmd->add_option("--policy", ba.policy, "f7, f8-pretrain, f8-train or custom")->capture_default_str();
  balance_cmd->add_option("--floor", ba.floor, "Minimum train class size");
  balance_cmd->add_option("--ceiling", ba.ceiling, "Maximum train class size");
  balance_cmd->add_option("--ratio", ba.ratio, "Train share per class");

  std::string stats_in;
  auto* stats = app.add_subcommand("stats", "Distance and dimension histograms as CSV");
  stats->add_option("--in", stats_in, "Input JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    init_logging(g.log_level);
    if (*mindist) return run_mindist(g, md);
    if (*gen_dataset) return run_gen_dataset(g, gen);
    if (*ga_search) return run_ga_search(g, sa, app.count("--seed") > 0);
    if (*space) {
      const double l = log10_search_space(space_q);
      print_json({{"q", space_q}, {"estimate", std::pow(10.0, l)}, {"log10", l}, {"display", three_figures(l)}});
      return kOk;
    }
    if (*bounds) {
      print_json({{"n", bound_n}, {"k", bound_k}, {"singleton", singleton_bound(bound_n, bound_k)}});
      return kOk;
    }
    if (*balance_cmd) return run_balance(g, ba);
    if (*stats) return run_stats(g, stats_in);
  } catch (const PredictorFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPredictor;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotPrimePower& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputation;
  }
  return kUsage;
}
