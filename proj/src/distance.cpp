#include "toric/distance.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <numeric>
#include <thread>

#include "toric/error.hpp"

namespace toric {
namespace {

using Clock = std::chrono::steady_clock;

// Elementwise field operations on packed element arrays. XorOps and ModOps
// vectorise; TableOps falls back to the field tables.
template <class Elem>
struct XorOps {
  using elem = Elem;
  Elem add(Elem a, Elem b) const noexcept { return static_cast<Elem>(a ^ b); }
  Elem neg(Elem a) const noexcept { return a; }
};

template <class Elem>
struct ModOps {
  using elem = Elem;
  Elem p;
  Elem add(Elem a, Elem b) const noexcept {
    const Elem t = static_cast<Elem>(p - b);
    return a >= t ? static_cast<Elem>(a - t) : static_cast<Elem>(a + b);
  }
  Elem neg(Elem a) const noexcept { return a ? static_cast<Elem>(p - a) : Elem{0}; }
};

template <class Elem>
struct TableOps {
  using elem = Elem;
  const Field* field;
  Elem add(Elem a, Elem b) const noexcept { return static_cast<Elem>(field->add(a, b)); }
  Elem neg(Elem a) const noexcept { return static_cast<Elem>(field->neg(a)); }
};

template <class Fn>
decltype(auto) with_ops(const Field& f, Fn&& fn) {
  if (f.q() <= 256) {
    using E = std::uint8_t;
    if (f.p() == 2) return fn(XorOps<E>{});
    if (f.is_prime()) return fn(ModOps<E>{static_cast<E>(f.p())});
    return fn(TableOps<E>{&f});
  }
  using E = std::uint16_t;
  if (f.p() == 2) return fn(XorOps<E>{});
  if (f.is_prime()) return fn(ModOps<E>{static_cast<E>(f.p())});
  return fn(TableOps<E>{&f});
}

template <class Elem, class Ops>
inline void add_into(Elem* __restrict out, const Elem* __restrict a, const Elem* __restrict b, std::size_t width,
                     const Ops& ops) noexcept {
  for (std::size_t w = 0; w < width; ++w) out[w] = ops.add(a[w], b[w]);
}

template <class Elem>
inline int count_mismatch(const Elem* __restrict a, const Elem* __restrict b, std::size_t width) noexcept {
  int c = 0;
  for (std::size_t w = 0; w < width; ++w) c += a[w] != b[w];
  return c;
}

std::size_t padded_width(std::size_t n, std::size_t elem_size) {
  const std::size_t lane = 32 / elem_size;
  return (n + lane - 1) / lane * lane;
}

class BudgetGate {
 public:
  BudgetGate(const DistanceBudget& budget, Clock::time_point start) : max_words_(budget.max_words) {
    if (budget.wall_time) deadline_ = start + *budget.wall_time;
  }

  bool charge(std::uint64_t words) noexcept {
    const std::uint64_t total = words_.fetch_add(words, std::memory_order_relaxed) + words;
    if ((max_words_ && total >= *max_words_) || (deadline_ && Clock::now() >= *deadline_))
      exhausted_.store(true, std::memory_order_relaxed);
    return exhausted();
  }
  bool exhausted() const noexcept { return exhausted_.load(std::memory_order_relaxed); }
  std::uint64_t total() const noexcept { return words_.load(std::memory_order_relaxed); }

 private:
  std::optional<Clock::time_point> deadline_;
  std::optional<std::uint64_t> max_words_;
  std::atomic<std::uint64_t> words_{0};
  std::atomic<bool> exhausted_{false};
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Brute force

template <class Ops>
DistanceResult brute_force_impl(const CodeMatrix& g, const Field& f, const Ops& ops) {
  using Elem = typename Ops::elem;
  const auto start = Clock::now();
  const std::size_t k = g.rows(), n = g.cols(), m = f.m(), p = f.p();
  const std::size_t width = padded_width(n, sizeof(Elem));
  const std::size_t digits = k * m;

  // delta[i*m + b] = basis(b) * row i
  std::vector<Elem> deltas(digits * width, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t b = 0; b < m; ++b) {
      Elem* d = deltas.data() + (i * m + b) * width;
      for (std::size_t c = 0; c < n; ++c) d[c] = static_cast<Elem>(f.mul(f.basis(static_cast<unsigned>(b)), g.at(i, c)));
    }

  std::vector<Elem> word(width, 0), zero(width, 0);
  std::vector<unsigned> counter(digits + 1, 0);
  int best = INT_MAX;
  std::vector<Element> witness;
  std::uint64_t steps = 0;

  // Modular p-ary Gray code: step N changes exactly one digit (the number of
  // trailing zero digits of N) by +1.
  while (true) {
    std::size_t t = 0;
    while (t < digits && counter[t] == p - 1) counter[t++] = 0;
    if (t == digits) break;
    ++counter[t];
    const Elem* d = deltas.data() + t * width;
    add_into(word.data(), word.data(), d, width, ops);
    ++steps;
    const int w = count_mismatch(word.data(), zero.data(), width);
    if (w < best) {
      best = w;
      witness.assign(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(n));
    }
  }

  DistanceResult out;
  out.d = out.lower_bound = out.upper_bound = best;
  out.witness = std::move(witness);
  out.enumerated = steps;
  out.elapsed_ms = elapsed_ms(start);
  out.converged = true;
  return out;
}

CodeMatrix canonical_generator(const CodeMatrix& g) {
  auto r = rref(g);
  if (r.matrix.rows() == 0) throw RankDeficient("generator matrix is zero");
  return std::move(r.matrix);
}

// ---------------------------------------------------------------------------
// Brouwer-Zimmermann

// Non-pivot columns of one information-set matrix, with every row stored in
// all q-1 nonzero multiples. Weight of a codeword = r (its pivot part) + the
// weight of the packed part.
template <class Elem>
struct PackedSet {
  std::size_t k = 0, width = 0, multiples = 0;
  std::vector<Elem> scaled;

  const Elem* row(std::size_t i, unsigned coef) const noexcept {
    return scaled.data() + (i * multiples + (coef - 1)) * width;
  }
};

template <class Elem>
PackedSet<Elem> pack(const InformationSet& set, const Field& f) {
  const std::size_t k = set.matrix.rows(), n = set.matrix.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : set.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  PackedSet<Elem> out;
  out.k = k;
  out.multiples = f.q() - 1;
  out.width = padded_width(free_cols.size(), sizeof(Elem));
  const double bytes = double(k) * out.multiples * out.width * sizeof(Elem);
  if (bytes > double(1ULL << 30)) throw Error("code too large for enumeration tables");
  out.scaled.assign(k * out.multiples * out.width, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (unsigned c = 1; c <= out.multiples; ++c) {
      Elem* dst = out.scaled.data() + (i * out.multiples + (c - 1)) * out.width;
      for (std::size_t w = 0; w < free_cols.size(); ++w)
        dst[w] = static_cast<Elem>(f.mul(static_cast<Element>(c), set.matrix.at(i, free_cols[w])));
    }
  return out;
}

using Message = std::vector<std::pair<std::size_t, Element>>;  // (row, coefficient)

struct PassOutcome {
  int best = INT_MAX;
  Message message;
  bool stop_found = false;
  bool incomplete = false;
};

constexpr std::uint64_t kCheckInterval = 4096;

// Enumerates messages of weight exactly r whose largest support index lies in
// [lo, hi). Supports are visited in colexicographic order; the coefficient on
// the smallest support index is fixed to 1.
template <class Ops>
class PassWorker {
  using Elem = typename Ops::elem;

 public:
  PassWorker(const PackedSet<Elem>& set, const Ops& ops, int r, int best, int stop_below, BudgetGate& gate,
             const std::atomic<std::size_t>& lowest_stop, std::size_t index)
      : set_(set),
        ops_(ops),
        r_(r),
        stop_below_(stop_below),
        gate_(gate),
        lowest_stop_(lowest_stop),
        index_(index),
        buffers_(static_cast<std::size_t>(r + 1) * set.width, 0),
        support_(static_cast<std::size_t>(r), 0),
        coef_(static_cast<std::size_t>(r), 1) {
    outcome_.best = best;
  }

  void run(std::size_t lo, std::size_t hi) {
    if (r_ == 1) {
      leaves(buffer(0), lo, hi);
    } else {
      const int top = r_ - 1;
      for (std::size_t v = lo; v < hi && !halt_; ++v) {
        support_[top] = v;
        for (unsigned c = 1; c <= set_.multiples && !halt_; ++c) {
          coef_[top] = static_cast<Element>(c);
          descend(top - 1, v, set_.row(v, c));
        }
      }
    }
    flush();
  }

  PassOutcome& outcome() noexcept { return outcome_; }

 private:
  Elem* buffer(int level) noexcept { return buffers_.data() + static_cast<std::size_t>(level) * set_.width; }

  void descend(int t, std::size_t upper, const Elem* partial) {
    if (t == 0) {
      Elem* np = buffer(0);
      for (std::size_t w = 0; w < set_.width; ++w) np[w] = ops_.neg(partial[w]);
      leaves(np, 0, upper);
      return;
    }
    Elem* next = buffer(t + 1);
    for (std::size_t j = static_cast<std::size_t>(t); j < upper && !halt_; ++j) {
      support_[static_cast<std::size_t>(t)] = j;
      for (unsigned c = 1; c <= set_.multiples && !halt_; ++c) {
        coef_[static_cast<std::size_t>(t)] = static_cast<Element>(c);
        add_into(next, partial, set_.row(j, c), set_.width, ops_);
        descend(t - 1, j, next);
      }
    }
  }

  // `np` holds the negated partial sum: a coordinate of partial + row is zero
  // exactly where row equals np.
  void leaves(const Elem* np, std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const int w = r_ + count_mismatch(set_.row(j, 1), np, set_.width);
      if (w < outcome_.best) {
        outcome_.best = w;
        outcome_.message.clear();
        outcome_.message.emplace_back(j, Element{1});
        for (int t = 1; t < r_; ++t)
          outcome_.message.emplace_back(support_[static_cast<std::size_t>(t)], coef_[static_cast<std::size_t>(t)]);
        if (w < stop_below_) {
          outcome_.stop_found = true;
          halt_ = true;
          pending_ += j - lo + 1;
          return;
        }
      }
    }
    pending_ += hi > lo ? hi - lo : 0;
    if (pending_ >= kCheckInterval) flush();
  }

  void flush() {
    if (pending_ == 0 && !gate_.exhausted()) return;
    if (gate_.charge(pending_)) {
      if (!outcome_.stop_found) {
        halt_ = true;
        outcome_.incomplete = true;
      }
    }
    pending_ = 0;
    if (lowest_stop_.load(std::memory_order_relaxed) < index_) halt_ = true;
  }

  const PackedSet<Elem>& set_;
  const Ops& ops_;
  int r_;
  int stop_below_;
  BudgetGate& gate_;
  const std::atomic<std::size_t>& lowest_stop_;
  std::size_t index_;
  std::vector<Elem> buffers_;
  std::vector<std::size_t> support_;
  std::vector<Element> coef_;
  PassOutcome outcome_;
  std::uint64_t pending_ = 0;
  bool halt_ = false;
};

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// Contiguous ranges of the outermost support index with roughly equal work.
std::vector<std::pair<std::size_t, std::size_t>> partition_top(std::size_t k, int r, unsigned threads) {
  const std::size_t lo = r == 1 ? 0 : static_cast<std::size_t>(r - 1);
  std::vector<double> work;
  for (std::size_t v = lo; v < k; ++v) work.push_back(r == 1 ? 1.0 : binomial(v, static_cast<std::size_t>(r - 1)));
  const double total = std::accumulate(work.begin(), work.end(), 0.0);
  const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(threads, work.size()));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = lo;
  double acc = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    acc += work[i];
    const std::size_t v = lo + i;
    if (out.size() + 1 < parts && acc >= total * double(out.size() + 1) / double(parts)) {
      out.emplace_back(begin, v + 1);
      begin = v + 1;
    }
  }
  if (begin < k || out.empty()) out.emplace_back(begin, k);
  return out;
}

template <class Ops>
PassOutcome run_pass(const PackedSet<typename Ops::elem>& set, const Ops& ops, int r, int best, int stop_below,
                     BudgetGate& gate, unsigned threads) {
  const auto ranges = partition_top(set.k, r, threads);
  std::atomic<std::size_t> lowest_stop{SIZE_MAX};
  std::vector<PassOutcome> outcomes(ranges.size());

  auto work = [&](std::size_t i) {
    PassWorker<Ops> worker(set, ops, r, best, stop_below, gate, lowest_stop, i);
    worker.run(ranges[i].first, ranges[i].second);
    outcomes[i] = std::move(worker.outcome());
    if (outcomes[i].stop_found) {
      std::size_t cur = lowest_stop.load();
      while (i < cur && !lowest_stop.compare_exchange_weak(cur, i)) {
      }
    }
  };

  if (ranges.size() == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < ranges.size(); ++i) pool.emplace_back(work, i);
    for (auto& t : pool) t.join();
  }

  // Deterministic reduction: the first stop word in range order, otherwise the
  // first occurrence of the minimum.
  PassOutcome merged;
  merged.best = best;
  for (auto& o : outcomes) {
    merged.incomplete = merged.incomplete || o.incomplete;
    if (merged.stop_found) continue;
    if (o.stop_found) {
      merged.best = o.best;
      merged.message = std::move(o.message);
      merged.stop_found = true;
    } else if (o.best < merged.best) {
      merged.best = o.best;
      merged.message = std::move(o.message);
    }
  }
  return merged;
}

std::vector<Element> combine(const CodeMatrix& m, const Message& message) {
  const Field& f = *m.field();
  std::vector<Element> out(m.cols(), 0);
  for (auto [row, coef] : message)
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] = f.add(out[c], f.mul(coef, m.at(row, c)));
  return out;
}

struct BzRun {
  int lower = 0;
  int upper = 0;
  std::vector<Element> witness;
  std::uint64_t enumerated = 0;
  double elapsed = 0.0;
  bool converged = false;
  bool budget_out = false;
};

// Shared driver. With a target, stops as soon as d >= target is proven or a
// word of weight < target is found.
template <class Ops>
BzRun bz_impl(const CodeMatrix& g, const Ops& ops, const DistanceOptions& options, std::optional<int> target) {
  using Elem = typename Ops::elem;
  const auto start = Clock::now();
  BudgetGate gate(options.budget, start);
  const Field& f = *g.field();

  const auto deco = build_information_sets(g);
  const int k = static_cast<int>(deco.k);
  std::vector<PackedSet<Elem>> packed;
  packed.reserve(deco.sets.size());
  for (const auto& s : deco.sets) packed.push_back(pack<Elem>(s, f));

  auto contribution = [&](int r, std::size_t j) {
    return std::max(0, r + 1 - (k - static_cast<int>(deco.sets[j].relative_rank)));
  };

  BzRun run;
  // Each generator row is a codeword.
  const CodeMatrix& g0 = deco.sets[0].matrix;
  run.upper = INT_MAX;
  for (std::size_t i = 0; i < g0.rows(); ++i) {
    const int w = static_cast<int>(weight(g0.row(i)));
    if (w < run.upper) {
      run.upper = w;
      run.witness.assign(g0.row(i).begin(), g0.row(i).end());
    }
  }
  int round0 = 0;
  for (std::size_t j = 0; j < deco.sets.size(); ++j) round0 += contribution(0, j);
  run.lower = std::max(1, round0);

  auto finish = [&](bool converged) {
    run.converged = converged;
    if (converged) run.lower = run.upper;
    run.enumerated = gate.total();
    run.elapsed = elapsed_ms(start);
    return run;
  };
  auto done = [&]() -> std::optional<bool> {
    if (target && run.upper < *target) return false;
    if (target && run.lower >= *target) return run.lower >= run.upper;
    if (run.lower >= run.upper) return true;
    return std::nullopt;
  };
  if (auto d = done()) return finish(*d);
  if (gate.charge(0)) {
    run.budget_out = true;
    return finish(false);
  }

  for (int r = 1; r <= k; ++r) {
    for (std::size_t j = 0; j < packed.size(); ++j) {
      const int stop_below = target ? *target : run.lower + 1;
      auto pass = run_pass(packed[j], ops, r, run.upper, stop_below, gate, std::max(1u, options.threads));
      if (pass.best < run.upper) {
        run.upper = pass.best;
        run.witness = combine(deco.sets[j].matrix, pass.message);
      }
      if (pass.stop_found) {
        if (options.on_progress) options.on_progress(run.lower, run.upper);
        // Either below the target, or at most the proven lower bound.
        return finish(!target && run.upper <= run.lower);
      }
      if (pass.incomplete) {
        run.budget_out = true;
        if (options.on_progress) options.on_progress(run.lower, run.upper);
        return finish(false);
      }

      int lower = 0;
      for (std::size_t i = 0; i < packed.size(); ++i) lower += contribution(i <= j ? r : r - 1, i);
      run.lower = std::max(run.lower, lower);
      // Matrix 0 has now produced every message of weight <= k.
      if (r == k && j == 0) run.lower = std::max(run.lower, run.upper);
      if (options.on_progress) options.on_progress(run.lower, run.upper);
      if (auto d = done()) return finish(*d);
    }
  }
  return finish(true);
}

}  // namespace

// ---------------------------------------------------------------------------

DistanceResult brute_force_distance(const CodeMatrix& generator, std::uint64_t cap) {
  const CodeMatrix g = canonical_generator(generator);
  const Field& f = *g.field();
  const double words = std::pow(double(f.q()), double(g.rows())) - 1.0;
  if (words > double(cap)) throw CapExceeded(words, cap);
  return with_ops(f, [&](const auto& ops) { return brute_force_impl(g, f, ops); });
}

DistanceResult brute_force_distance(const ToricCode& code, std::uint64_t cap) {
  return brute_force_distance(code.generator(), cap);
}

InformationSetDecomposition build_information_sets(const CodeMatrix& generator) {
  const std::size_t k = generator.rows(), n = generator.cols();
  auto first = rref(generator);
  if (first.pivots.size() != k || k == 0)
    throw RankDeficient("generator has rank " + std::to_string(first.pivots.size()) + " but " + std::to_string(k) +
                        " rows");

  InformationSetDecomposition out;
  out.k = k;
  out.n = n;
  std::vector<bool> used(n, false);
  for (auto c : first.pivots) used[c] = true;
  out.sets.push_back({first.matrix, first.pivots, k});

  while (true) {
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < n; ++c)
      if (!used[c]) order.push_back(c);
    const std::size_t fresh = order.size();
    if (fresh == 0) break;
    for (std::size_t c = 0; c < n; ++c)
      if (used[c]) order.push_back(c);

    auto next = eliminate(first.matrix, order);
    std::size_t relative = 0;
    for (auto c : next.pivots)
      if (!used[c]) ++relative;
    if (relative == 0) break;
    for (auto c : next.pivots) used[c] = true;
    out.sets.push_back({std::move(next.matrix), std::move(next.pivots), relative});
  }
  return out;
}

DistanceResult bz_distance(const CodeMatrix& generator, const DistanceOptions& options) {
  const CodeMatrix g = canonical_generator(generator);
  const BzRun run =
      with_ops(*g.field(), [&](const auto& ops) { return bz_impl(g, ops, options, std::nullopt); });
  DistanceResult out;
  out.d = run.upper;
  out.lower_bound = run.lower;
  out.upper_bound = run.upper;
  out.witness = run.witness;
  out.enumerated = run.enumerated;
  out.elapsed_ms = run.elapsed;
  out.converged = run.converged;
  return out;
}

DistanceResult bz_distance(const ToricCode& code, const DistanceOptions& options) {
  return bz_distance(code.generator(), options);
}

LowerBoundVerdict verify_lower_bound(const CodeMatrix& generator, int target, const DistanceOptions& options) {
  if (target < 1) throw Error("lower-bound target must be at least 1");
  const CodeMatrix g = canonical_generator(generator);
  const BzRun run = with_ops(*g.field(), [&](const auto& ops) { return bz_impl(g, ops, options, target); });
  LowerBoundVerdict out;
  out.lower_bound = run.lower;
  out.upper_bound = run.upper;
  out.enumerated = run.enumerated;
  out.elapsed_ms = run.elapsed;
  if (run.upper < target) {
    out.status = LowerBoundStatus::Refuted;
    out.witness = run.witness;
  } else if (run.lower >= target) {
    out.status = LowerBoundStatus::Verified;
  } else {
    out.status = LowerBoundStatus::Inconclusive;
  }
  return out;
}

LowerBoundVerdict verify_lower_bound(const ToricCode& code, int target, const DistanceOptions& options) {
  return verify_lower_bound(code.generator(), target, options);
}

const char* to_string(LowerBoundStatus status) noexcept {
  switch (status) {
    case LowerBoundStatus::Verified:
      return "verified";
    case LowerBoundStatus::Refuted:
      return "refuted";
    case LowerBoundStatus::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

}  // namespace toric
