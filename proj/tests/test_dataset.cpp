#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "toric/dataset.hpp"
#include "toric/error.hpp"
#include "toric/io.hpp"

using namespace toric;

namespace {

CodeRecord synthetic(int d, std::size_t id) {
  CodeRecord r;
  r.q = 5;
  r.m = 1;
  r.points = {{static_cast<int>(id % 4), static_cast<int>(id / 4 % 4)}};
  r.generator = {{1, static_cast<Element>(id % 5)}};
  r.k = 1;
  r.d = d;
  r.d_lo = r.d_hi = d;
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("toric_test_" + name)).string();
}

}  // namespace

TEST_CASE("dataset generation") {
  CHECK(generate_dataset(5, 6, 0, {}).empty());

  GenerateOptions o;
  o.seed = 4;
  const auto records = generate_dataset(5, 6, 100, o);
  REQUIRE(records.size() == 100);
  std::set<std::vector<LatticePoint>> distinct;
  for (const auto& r : records) {
    CHECK(distinct.insert(r.points).second);
    REQUIRE(r.d);
    CHECK(*r.d <= 16 - static_cast<int>(r.k) + 1);
    CHECK(r.k == r.generator.size());
    CHECK(r.m == 6);
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const ToricCode c(field_new(5), LatticePointSet(records[i].points, 4));
    CHECK(brute_force_distance(c).d == *records[i].d);
  }

  o.threads = 3;
  CHECK(generate_dataset(5, 6, 100, o) == records);
  CHECK_THROWS_AS(generate_dataset(5, 6, 8009, {}), NotEnoughSubsets);
  CHECK(generate_dataset(5, 15, 16, {}).size() == 16);
}

TEST_CASE("budgeted generation keeps inconclusive records") {
  GenerateOptions o;
  o.distance.budget = DistanceBudget::words(2000);
  const auto records = generate_dataset(8, 20, 3, o);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    if (!r.d) CHECK(r.d_lo < r.d_hi);
  }
}

TEST_CASE("balancing") {
  SUBCASE("class within bounds") {
    std::vector<CodeRecord> records;
    for (std::size_t i = 0; i < 1000; ++i) records.push_back(synthetic(8, i));
    const auto out = balance(records, BalancePolicy::f7());
    CHECK(out.train.size() == 900);
    CHECK(out.test.size() == 100);
    for (const auto& r : out.train) CHECK(*r.weight == doctest::Approx(1.0));
  }
  SUBCASE("oversampled class") {
    std::vector<CodeRecord> records;
    for (std::size_t i = 0; i < 22; ++i) records.push_back(synthetic(5, i));
    const auto out = balance(records, BalancePolicy::f7());
    CHECK(out.test.size() == 2);
    REQUIRE(out.train.size() == 500);
    double total = 0.0;
    for (const auto& r : out.train) {
      CHECK(*r.weight == doctest::Approx(0.04));
      total += *r.weight;
    }
    CHECK(total == doctest::Approx(20.0));
  }
  SUBCASE("downsampled class draws without replacement") {
    std::vector<CodeRecord> records;
    for (std::size_t i = 0; i < 300; ++i) {
      records.push_back(synthetic(7, i));
      records.back().d_lo = static_cast<int>(i);  // make records distinguishable
    }
    BalancePolicy p;
    p.floor = 10;
    p.ceiling = 100;
    const auto out = balance(records, p);
    REQUIRE(out.train.size() == 100);
    std::set<int> ids;
    for (const auto& r : out.train) ids.insert(r.d_lo);
    CHECK(ids.size() == 100);
    CHECK(out.train.front().weight == doctest::Approx(2.7));
  }
  SUBCASE("rare classes are test only and null distances are excluded") {
    std::vector<CodeRecord> records;
    for (std::size_t i = 0; i < 5; ++i) records.push_back(synthetic(13, i));
    for (std::size_t i = 0; i < 50; ++i) records.push_back(synthetic(4, i));
    records.push_back(synthetic(4, 0));
    records.back().d.reset();
    const auto out = balance(records, BalancePolicy::f7());
    CHECK(out.excluded == 1);
    CHECK(std::count_if(out.test.begin(), out.test.end(), [](const CodeRecord& r) { return *r.d == 13; }) == 5);
    CHECK(std::none_of(out.train.begin(), out.train.end(), [](const CodeRecord& r) { return *r.d == 13; }));
    for (const auto& r : out.test) CHECK_FALSE(r.weight);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(balance({}, BalancePolicy::f7()), EmptyInput);
    BalancePolicy p;
    p.floor = 10;
    p.ceiling = 5;
    CHECK_THROWS_AS(balance({synthetic(1, 0)}, p), Error);
  }
}

TEST_CASE("balanced train classes stay inside [floor, ceiling]") {
  std::vector<CodeRecord> records;
  const std::map<int, std::size_t> sizes{{3, 12}, {4, 80}, {5, 700}, {6, 3000}, {7, 9}};
  std::size_t id = 0;
  for (auto [d, count] : sizes)
    for (std::size_t i = 0; i < count; ++i) records.push_back(synthetic(d, id++));
  BalancePolicy p;
  p.floor = 100;
  p.ceiling = 1000;
  const auto out = balance(records, p);
  std::map<int, std::size_t> train;
  for (const auto& r : out.train) ++train[*r.d];
  for (auto [d, count] : train) {
    CHECK(count >= p.floor);
    CHECK(count <= p.ceiling);
  }
  CHECK(train.count(7) == 0);
}

TEST_CASE("JSONL round trip") {
  GenerateOptions o;
  o.seed = 9;
  auto records = generate_dataset(4, 5, 30, o);
  CodeRecord open = records.front();
  open.d.reset();
  open.d_lo = 3;
  open.d_hi = 6;
  open.provenance = Provenance::Ga;
  open.weight = 0.25;
  records.push_back(open);

  const auto path = temp_path("roundtrip.jsonl");
  save_jsonl(records, path);
  CHECK(load_jsonl(path) == records);

  const std::string text = read_file(path);
  CHECK(text.find(R"("d":null,"d_lo":3,"d_hi":6,"prov":"ga","w":0.25)") != std::string::npos);
  CHECK(text.rfind(R"({"q":4,"m":5,"V":)", 0) == 0);

  // truncate inside the third line
  const auto cut = text.find('\n', text.find('\n') + 1) + 20;
  write_file_atomic(path, text.substr(0, cut));
  try {
    load_jsonl(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_jsonl(R"({"q":5})"), ParseError);
}

TEST_CASE("JSONL round trip on many synthetic records") {
  std::vector<CodeRecord> records;
  Rng rng(12);
  for (std::size_t i = 0; i < 10000; ++i) {
    auto r = synthetic(static_cast<int>(rng() % 9) + 1, i);
    if (rng() % 7 == 0) r.d.reset();
    if (rng() % 3 == 0) r.weight = double(rng() % 1000) / 64.0;
    records.push_back(std::move(r));
  }
  CHECK(parse_jsonl(to_jsonl(records)) == records);
}

TEST_CASE("dataset statistics") {
  CHECK(dataset_stats({}).by_d.empty());
  std::vector<CodeRecord> records{synthetic(2, 0), synthetic(2, 1), synthetic(5, 2)};
  records.back().d.reset();
  const auto s = dataset_stats(records);
  std::size_t total = s.without_d;
  for (auto [d, c] : s.by_d) total += c;
  CHECK(total == records.size());
  std::ostringstream csv;
  write_stats_csv(s, csv);
  CHECK(csv.str() == "d,count\n2,2\nnull,1\n\nk,count\n1,3\n");
}
