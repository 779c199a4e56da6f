#include "toric/ga.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <spdlog/spdlog.h>
#include <sstream>

#include "json.hpp"
#include "toric/code.hpp"
#include "toric/error.hpp"

namespace toric {

void GAConfig::validate() const {
  if (!prime_power(q).first) throw Error("q=" + std::to_string(q) + " is not a prime power");
  const std::size_t n = static_cast<std::size_t>(q - 1) * (q - 1);
  if (m < 1 || m > n) throw Error("m must lie in [1, " + std::to_string(n) + "]");
  if (population_size < 1) throw Error("population_size must be positive");
  if (elites >= population_size) throw Error("elites must be smaller than population_size");
  if (parents < 2) throw Error("parents must be at least 2");
  if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0))
    throw Error("mutation_probability must lie in [0, 1]");
  if (offset <= 0.0 || duplicate_score <= 0.0) throw Error("offset and duplicate_score must be positive");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParseError("line " + std::to_string(line) + ": bad value '" + value + "' for " + key);
  return out;
}

double parse_real(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty())
    throw ParseError("line " + std::to_string(line) + ": bad value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError("line " + std::to_string(line) + ": bad value '" + value + "' for " + key);
}

}  // namespace

GAConfig parse_ga_config(const std::string& text, GAConfig c) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected key=value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key == "q") c.q = parse_number<unsigned>(key, value, line);
    else if (key == "m") c.m = parse_number<std::size_t>(key, value, line);
    else if (key == "target_k" || key == "k") c.target_k = parse_number<std::size_t>(key, value, line);
    else if (key == "population_size") c.population_size = parse_number<std::size_t>(key, value, line);
    else if (key == "parents") c.parents = parse_number<std::size_t>(key, value, line);
    else if (key == "elites") c.elites = parse_number<std::size_t>(key, value, line);
    else if (key == "mutation_probability") c.mutation_probability = parse_real(key, value, line);
    else if (key == "per_gene_mutation") c.per_gene_mutation = parse_bool(key, value, line);
    else if (key == "generations") c.generations = parse_number<std::size_t>(key, value, line);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value, line);
    else if (key == "offset") c.offset = parse_real(key, value, line);
    else if (key == "duplicate_score") c.duplicate_score = parse_real(key, value, line);
    else if (key == "crossover_retries") c.crossover_retries = parse_number<std::size_t>(key, value, line);
    else throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  return c;
}

GAConfig load_ga_config(const std::string& path, GAConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ga_config(buf.str(), base);
}

std::string to_config_text(const GAConfig& c) {
  std::ostringstream out;
  out << "q=" << c.q << "\nm=" << c.m << "\ntarget_k=" << c.target_k << "\npopulation_size=" << c.population_size
      << "\nparents=" << c.parents << "\nelites=" << c.elites << "\nmutation_probability=" << c.mutation_probability
      << "\nper_gene_mutation=" << (c.per_gene_mutation ? "true" : "false") << "\ngenerations=" << c.generations
      << "\nseed=" << c.seed << "\noffset=" << c.offset << "\nduplicate_score=" << c.duplicate_score
      << "\ncrossover_retries=" << c.crossover_retries << "\n";
  return out.str();
}

double fitness(const LatticePointSet& v, FitnessContext& ctx) {
  if (ctx.seen.contains(v)) return ctx.duplicate_score;
  if (!ctx.predictor) throw PredictorFailure("no predictor configured");
  const ToricCode code(ctx.field, v);
  ++ctx.predictor_calls;
  const double d = ctx.predictor->predict(code.generator());
  ctx.seen.insert(v);
  const double k_gap = std::abs(static_cast<double>(code.k()) - static_cast<double>(ctx.target_k));
  const double score = ctx.offset + d - k_gap;
  ctx.evaluated.push_back({code.points(), code.k(), d, score});
  return score;
}

std::vector<std::size_t> select_sus(std::span<const double> scores, std::size_t count, Rng& rng) {
  if (scores.empty()) throw EmptyPopulation();
  double total = 0.0;
  for (double s : scores) {
    if (!(s > 0.0)) throw Error("selection needs positive scores");
    total += s;
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  if (count == 0) return out;
  const double step = total / static_cast<double>(count);
  const double start = std::uniform_real_distribution<double>(0.0, step)(rng);
  std::size_t i = 0;
  double cumulative = scores[0];
  for (std::size_t c = 0; c < count; ++c) {
    const double pointer = start + static_cast<double>(c) * step;
    while (cumulative <= pointer && i + 1 < scores.size()) cumulative += scores[++i];
    out.push_back(i);
  }
  return out;
}

std::optional<std::pair<LatticePointSet, LatticePointSet>> crossover(const LatticePointSet& p1,
                                                                     const LatticePointSet& p2, Rng& rng) {
  const auto& a = p1.points();
  const auto& b = p2.points();
  if (a.size() != b.size()) throw DimensionMismatch("parents have different gene counts");
  const std::size_t m = a.size();
  if (m < 2) return std::make_pair(p1, p2);
  const std::size_t split = std::uniform_int_distribution<std::size_t>(1, m - 1)(rng);

  auto child = [&](const std::vector<LatticePoint>& head, const std::vector<LatticePoint>& tail)
      -> std::optional<LatticePointSet> {
    std::vector<LatticePoint> genes(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(split));
    genes.insert(genes.end(), tail.begin() + static_cast<std::ptrdiff_t>(split), tail.end());
    std::vector<LatticePoint> sorted = genes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
    return LatticePointSet(std::move(genes), p1.period());
  };
  auto c1 = child(a, b);
  auto c2 = child(b, a);
  if (!c1 || !c2) return std::nullopt;
  return std::make_pair(std::move(*c1), std::move(*c2));
}

namespace {

LatticePoint unused_point(const std::vector<LatticePoint>& genes, int period, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(period) * period;
  std::vector<bool> used(n, false);
  for (const auto& g : genes) used[static_cast<std::size_t>(g.a) * period + g.b] = true;
  const std::size_t free = n - static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, free - 1)(rng);
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (used[idx]) continue;
    if (pick-- == 0) return {static_cast<int>(idx / period), static_cast<int>(idx % period)};
  }
  return {};
}

}  // namespace

LatticePointSet mutate(const LatticePointSet& v, Rng& rng, double probability, bool per_gene) {
  const int period = v.period();
  const std::size_t n = static_cast<std::size_t>(period) * period;
  std::bernoulli_distribution coin(probability);
  std::vector<LatticePoint> genes = v.points();
  if (genes.empty() || genes.size() >= n) return v;
  bool changed = false;
  if (per_gene) {
    for (std::size_t i = 0; i < genes.size(); ++i)
      if (coin(rng)) {
        genes[i] = unused_point(genes, period, rng);
        changed = true;
      }
  } else if (coin(rng)) {
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, genes.size() - 1)(rng);
    genes[i] = unused_point(genes, period, rng);
    changed = true;
  }
  return changed ? LatticePointSet(std::move(genes), period) : v;
}

LatticePointSet random_point_set(int period, std::size_t m, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(period) * period;
  if (m > n) throw Error("cannot pick " + std::to_string(m) + " of " + std::to_string(n) + " lattice points");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
    std::swap(idx[i], idx[j]);
  }
  std::vector<LatticePoint> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    pts.emplace_back(static_cast<int>(idx[i] / period), static_cast<int>(idx[i] % period));
  return LatticePointSet(std::move(pts), period);
}

namespace {

double log_binomial(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

}  // namespace

GARunReport run_ga(const GAConfig& config, FitnessContext& ctx) {
  config.validate();
  if (!ctx.field || ctx.field->q() != config.q) throw Error("fitness context field does not match config q");
  ctx.target_k = config.target_k;
  ctx.offset = config.offset;
  ctx.duplicate_score = config.duplicate_score;

  Rng rng(config.seed);
  const int period = static_cast<int>(config.q) - 1;
  const std::size_t first_eval = ctx.evaluated.size();
  GARunReport report;

  // Distinct initial chromosomes when the space allows it.
  std::vector<Individual> population;
  std::set<LatticePointSet> initial;
  const double space = log_binomial(double(period) * period, double(config.m));
  const bool distinct = space >= std::log(double(config.population_size)) + 1.0;
  while (population.size() < config.population_size) {
    auto v = random_point_set(period, config.m, rng);
    if (distinct && !initial.insert(v).second) continue;
    population.push_back({std::move(v), std::nullopt});
  }

  auto finish = [&]() {
    report.evaluated.assign(ctx.evaluated.begin() + static_cast<std::ptrdiff_t>(first_eval), ctx.evaluated.end());
    report.final_population = population;
    for (const auto& ind : population)
      if (ind.fitness && (!report.best || *ind.fitness > *report.best->fitness)) report.best = ind;
    return report;
  };
  auto score_all = [&]() -> bool {
    for (auto& ind : population) {
      if (ind.fitness) continue;
      try {
        ind.fitness = fitness(ind.points, ctx);
      } catch (const PredictorFailure& e) {
        report.failure = e.what();
        spdlog::error("GA aborted: {}", e.what());
        return false;
      }
    }
    return true;
  };

  if (!score_all()) return finish();

  const std::size_t need = config.population_size - config.elites;
  for (std::size_t g = 0; g < config.generations; ++g) {
    std::vector<double> scores;
    scores.reserve(population.size());
    for (const auto& ind : population) scores.push_back(*ind.fitness);

    auto parents = select_sus(scores, config.parents, rng);
    std::shuffle(parents.begin(), parents.end(), rng);
    std::size_t cursor = 0;
    auto next_pair = [&]() {
      const std::size_t a = parents[cursor % parents.size()];
      const std::size_t b = parents[(cursor + 1) % parents.size()];
      cursor += 2;
      return std::make_pair(a, b);
    };

    std::vector<Individual> offspring;
    offspring.reserve(need);
    while (offspring.size() < need) {
      const auto [a, b] = next_pair();
      auto kids = crossover(population[a].points, population[b].points, rng);
      for (std::size_t retry = 0; !kids && retry < config.crossover_retries; ++retry) {
        const auto [c, d] = next_pair();
        kids = crossover(population[c].points, population[d].points, rng);
      }
      std::vector<LatticePointSet> children;
      if (kids) {
        children = {std::move(kids->first), std::move(kids->second)};
      } else {
        const std::size_t fitter = *population[a].fitness >= *population[b].fitness ? a : b;
        children = {population[fitter].points};
      }
      for (auto& child : children) {
        if (offspring.size() == need) break;
        offspring.push_back({mutate(child, rng, config.mutation_probability, config.per_gene_mutation), std::nullopt});
      }
    }

    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return *population[x].fitness > *population[y].fitness; });
    std::vector<Individual> next;
    next.reserve(config.population_size);
    for (std::size_t e = 0; e < config.elites; ++e) next.push_back(population[order[e]]);
    for (auto& child : offspring) next.push_back(std::move(child));
    population = std::move(next);

    if (!score_all()) return finish();
    ++report.generations_run;
    spdlog::debug("generation {}: {} codes evaluated", g + 1, ctx.evaluated.size() - first_eval);
  }
  return finish();
}

void write_report_jsonl(const GARunReport& report, std::ostream& out) {
  for (const auto& e : report.evaluated) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : e.points) pts.push_back({p.a, p.b});
    out << nlohmann::json{{"V", pts}, {"k", e.k}, {"d_approx", e.d_approx}, {"fitness", e.fitness}}.dump() << '\n';
  }
}

}  // namespace toric
