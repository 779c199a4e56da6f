#include "toric/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "toric/error.hpp"
#include "toric/ga.hpp"
#include "toric/io.hpp"

namespace toric {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Random:
      return "random";
    case Provenance::Ga:
      return "ga";
    case Provenance::Injected:
      return "injected";
  }
  return "random";
}

Provenance parse_provenance(const std::string& s) {
  if (s == "random") return Provenance::Random;
  if (s == "ga") return Provenance::Ga;
  if (s == "injected") return Provenance::Injected;
  throw ParseError("unknown provenance '" + s + "'");
}

CodeRecord make_record(const ToricCode& code, const DistanceResult& distance, Provenance provenance) {
  CodeRecord r;
  r.q = code.field()->q();
  r.m = code.points().size();
  r.points = code.points().points();
  r.generator = code.generator().to_rows();
  r.k = code.k();
  if (distance.converged) r.d = distance.d;
  r.d_lo = distance.lower_bound;
  r.d_hi = distance.upper_bound;
  r.provenance = provenance;
  return r;
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  return std::round(std::exp(std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1)));
}

std::vector<LatticePointSet> all_subsets(int period, std::size_t m) {
  const std::size_t n = static_cast<std::size_t>(period) * period;
  std::vector<LatticePointSet> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    std::vector<LatticePoint> pts;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) pts.emplace_back(static_cast<int>(i / period), static_cast<int>(i % period));
    out.emplace_back(std::move(pts), period);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

std::vector<LatticePointSet> sample_subsets(int period, std::size_t m, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(period) * period;
  const double total = binomial(n, m);
  if (double(count) > total)
    throw NotEnoughSubsets("only " + std::to_string(static_cast<unsigned long long>(total)) + " subsets of size " +
                           std::to_string(m) + " exist, " + std::to_string(count) + " requested");
  // Dense requests: shuffle the full list instead of rejection sampling.
  if (total <= 4.0 * double(count) && total <= 2e6) {
    auto all = all_subsets(period, m);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    return all;
  }
  std::set<LatticePointSet> seen;
  std::vector<LatticePointSet> out;
  out.reserve(count);
  while (out.size() < count) {
    auto v = random_point_set(period, m, rng);
    if (seen.insert(v).second) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<CodeRecord> generate_dataset(unsigned q, std::size_t m, std::size_t count, const GenerateOptions& options) {
  const FieldPtr field = field_new(q);
  const int period = static_cast<int>(q) - 1;
  if (m < 1) throw Error("m must be positive");
  if (count == 0) return {};
  const auto subsets = sample_subsets(period, m, count, options.seed);

  std::vector<CodeRecord> records(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  DistanceOptions per_record = options.distance;
  per_record.threads = 1;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        const ToricCode code(field, subsets[i]);
        records[i] = make_record(code, bz_distance(code, per_record), Provenance::Random);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

// ---------------------------------------------------------------------------

BalancePolicy BalancePolicy::f7() {
  BalancePolicy p;
  p.floor = 500;
  p.ceiling = 50000;
  return p;
}

BalancePolicy BalancePolicy::f8_pretrain() {
  BalancePolicy p;
  p.floor = 10000;
  return p;
}

BalancePolicy BalancePolicy::f8_train() {
  BalancePolicy p;
  p.floor = 600;
  return p;
}

void BalancePolicy::validate() const {
  if (floor > ceiling) throw Error("balance floor exceeds ceiling");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("train ratio must lie in (0, 1)");
}

BalanceResult balance(const std::vector<CodeRecord>& records, const BalancePolicy& policy) {
  policy.validate();
  if (records.empty()) throw EmptyInput("no records to balance");
  BalanceResult out;
  std::map<int, std::vector<const CodeRecord*>> classes;
  for (const auto& r : records) {
    if (r.d) classes[*r.d].push_back(&r);
    else ++out.excluded;
  }

  Rng rng(policy.seed);
  for (auto& [d, members] : classes) {
    std::shuffle(members.begin(), members.end(), rng);
    if (members.size() < policy.min_class) {
      for (const auto* r : members) out.test.push_back(*r);
      continue;
    }
    const std::size_t n_train = std::min(members.size(), static_cast<std::size_t>(std::llround(double(members.size()) * policy.ratio)));
    for (std::size_t i = n_train; i < members.size(); ++i) out.test.push_back(*members[i]);
    if (n_train == 0) continue;

    std::vector<const CodeRecord*> train(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    if (train.size() < policy.floor) {
      std::uniform_int_distribution<std::size_t> pick(0, n_train - 1);
      while (train.size() < policy.floor) train.push_back(members[pick(rng)]);
    } else if (train.size() > policy.ceiling) {
      train.resize(policy.ceiling);  // already shuffled
    }
    const double w = double(n_train) / double(train.size());
    for (const auto* r : train) {
      out.train.push_back(*r);
      out.train.back().weight = w;
    }
  }
  std::shuffle(out.train.begin(), out.train.end(), rng);
  std::shuffle(out.test.begin(), out.test.end(), rng);
  return out;
}

// ---------------------------------------------------------------------------

ordered_json to_json(const CodeRecord& r) {
  ordered_json j;
  j["q"] = r.q;
  j["m"] = r.m;
  ordered_json pts = ordered_json::array();
  for (const auto& p : r.points) pts.push_back({p.a, p.b});
  j["V"] = std::move(pts);
  j["G"] = r.generator;
  j["k"] = r.k;
  j["d"] = r.d ? ordered_json(*r.d) : ordered_json(nullptr);
  j["d_lo"] = r.d_lo;
  j["d_hi"] = r.d_hi;
  j["prov"] = to_string(r.provenance);
  if (r.weight) j["w"] = *r.weight;
  return j;
}

CodeRecord record_from_json(const json& j) {
  try {
    CodeRecord r;
    r.q = j.at("q").get<unsigned>();
    r.m = j.at("m").get<std::size_t>();
    for (const auto& p : j.at("V")) {
      if (!p.is_array() || p.size() != 2) throw ParseError("lattice point must be [a,b]");
      r.points.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    r.generator = j.at("G").get<std::vector<std::vector<Element>>>();
    r.k = j.at("k").get<std::size_t>();
    if (!j.at("d").is_null()) r.d = j.at("d").get<int>();
    r.d_lo = j.at("d_lo").get<int>();
    r.d_hi = j.at("d_hi").get<int>();
    r.provenance = parse_provenance(j.at("prov").get<std::string>());
    if (j.contains("w")) r.weight = j.at("w").get<double>();
    if (r.k != r.generator.size()) throw ParseError("k does not match the generator row count");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string to_jsonl(const std::vector<CodeRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

void save_jsonl(const std::vector<CodeRecord>& records, const std::string& path) {
  write_file_atomic(path, to_jsonl(records));
}

std::vector<CodeRecord> parse_jsonl(const std::string& text) {
  std::vector<CodeRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("line " + std::to_string(number) + ": malformed JSON");
    try {
      out.push_back(record_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<CodeRecord> load_jsonl(const std::string& path) { return parse_jsonl(read_file(path)); }

DatasetStats dataset_stats(const std::vector<CodeRecord>& records) {
  DatasetStats s;
  s.total = records.size();
  for (const auto& r : records) {
    ++s.by_k[r.k];
    if (r.d) ++s.by_d[*r.d];
    else ++s.without_d;
  }
  return s;
}

void write_stats_csv(const DatasetStats& stats, std::ostream& out) {
  out << "d,count\n";
  for (const auto& [d, c] : stats.by_d) out << d << ',' << c << '\n';
  if (stats.without_d) out << "null," << stats.without_d << '\n';
  out << "\nk,count\n";
  for (const auto& [k, c] : stats.by_k) out << k << ',' << c << '\n';
}

}  // namespace toric
