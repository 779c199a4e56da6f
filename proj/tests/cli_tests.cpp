#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "run_command.hpp"

using nlohmann::json;
using testing_support::run_command;
using testing_support::scratch_dir;
using testing_support::slurp;

namespace {

const std::string kBin = TORICSEARCH;
const std::string kMock = MOCK_PREDICTOR;
const std::string kData = DATA_DIR;

std::string f5_points() { return "\"(0,1);(1,1);(1,2);(2,0);(2,3);(3,1)\""; }

}  // namespace

TEST_CASE("mindist") {
  SUBCASE("worked F3 example") {
    const auto r = run_command(kBin + " mindist --q 3 --points \"(0,0);(0,1);(1,0)\"");
    REQUIRE(r.exit_code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["d"] == 2);
    CHECK(j["n"] == 4);
    CHECK(j["k"] == 3);
    CHECK(j["converged"] == true);
  }
  SUBCASE("brute force and BZ agree") {
    const auto brute = json::parse(run_command(kBin + " mindist --q 5 --brute --points " + f5_points()).out);
    const auto bz = json::parse(run_command(kBin + " mindist --q 5 --bz --points " + f5_points()).out);
    CHECK(brute["d"] == 8);
    CHECK(brute["enumerated"] == 15624);
    CHECK(bz["d"] == 8);
  }
  SUBCASE("F8 witness") {
    const auto r = run_command(kBin + " mindist --q 8 --points \"(1,0);(2,3);(6,3)\"");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["d"] == 42);
  }
  SUBCASE("verify") {
    const auto ok = run_command(kBin + " mindist --q 5 --verify 8 --points " + f5_points());
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out)["status"] == "verified");
    const auto no = run_command(kBin + " mindist --q 5 --verify 9 --points " + f5_points());
    CHECK(no.exit_code == 0);
    CHECK(json::parse(no.out)["status"] == "refuted");
  }
  SUBCASE("budget overrun exits 4 with bounds") {
    const auto r = run_command(kBin +
                               " mindist --q 8 --budget-ms 200 --points "
                               "\"(0,1);(0,2);(0,3);(0,5);(1,0);(1,1);(1,5);(1,6);(3,2);(3,3);(3,5);(3,6);"
                               "(4,3);(4,4);(5,1);(5,3);(5,5);(6,4)\"");
    CHECK(r.exit_code == 4);
    const auto j = json::parse(r.out);
    CHECK(j["d"].is_null());
    CHECK(j["lower"] <= j["upper"]);
  }
  SUBCASE("usage errors exit 1") {
    CHECK(run_command(kBin + " mindist --q 6 --points \"(0,0)\"").exit_code == 1);
    CHECK(run_command(kBin + " mindist --q 5 --points \"(0,0\"").exit_code == 1);
    CHECK(run_command(kBin + " mindist --points \"(0,0)\"").exit_code == 1);
    CHECK(run_command(kBin).exit_code == 1);
    CHECK(run_command(kBin + " frobnicate").exit_code == 1);
  }
}

TEST_CASE("gen-dataset") {
  const auto dir = scratch_dir("cli_gen");
  const auto a = (dir / "a.jsonl").string();
  const auto b = (dir / "b.jsonl").string();
  const auto stats = (dir / "stats.csv").string();
  const auto r = run_command(kBin + " gen-dataset --q 5 --m 6 --n 40 --seed 3 --threads 1 --out " + a +
                             " --stats " + stats);
  REQUIRE(r.exit_code == 0);
  CHECK(json::parse(r.out)["records"] == 40);
  const std::string text = slurp(a);
  CHECK(std::count(text.begin(), text.end(), '\n') == 40);
  CHECK(slurp(stats).rfind("d,count\n", 0) == 0);

  CHECK(run_command(kBin + " gen-dataset --q 5 --m 6 --n 40 --seed 3 --threads 1 --out " + b).exit_code == 0);
  CHECK(slurp(b) == text);
  CHECK(run_command(kBin + " gen-dataset --q 5 --m 6 --n 40 --seed 3 --threads 4 --out " + b).exit_code == 0);
  CHECK(slurp(b) == text);

  const auto too_many = run_command(kBin + " gen-dataset --q 5 --m 6 --n 9000 --out " + b);
  CHECK(too_many.exit_code == 2);
  CHECK(too_many.err.find("8008") != std::string::npos);
  CHECK(run_command(kBin + " gen-dataset --q 5 --m 6 --n 4").exit_code == 1);

  SUBCASE("balance and stats") {
    const auto out = (dir / "split").string();
    const auto bal = run_command(kBin + " balance --in " + a + " --policy custom --floor 5 --ceiling 50 --out " + out);
    REQUIRE(bal.exit_code == 0);
    const auto j = json::parse(bal.out);
    CHECK(j["train"].get<int>() > 0);
    CHECK(std::filesystem::exists(dir / "split" / "train.jsonl"));
    const auto st = run_command(kBin + " stats --in " + a);
    CHECK(st.exit_code == 0);
    CHECK(st.out == slurp(stats));
    CHECK(run_command(kBin + " stats --in " + (dir / "missing.jsonl").string()).exit_code == 2);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("ga-search") {
  const auto dir = scratch_dir("cli_ga");
  const std::string small = " --population 16 --generations 4 --parents 10 --elites 2 --max-passes 1 --threads 1";

  SUBCASE("exhaustive campaign writes its outputs") {
    const auto out = (dir / "ex").string();
    const auto r = run_command(kBin + " ga-search --q 5 --k 6 --table " + kData + "/champions_f5_demo.csv" + small +
                               " --seed 1 --out " + out);
    REQUIRE(r.exit_code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["dims"]["6"]["ga_runs"] == 1);
    for (const char* f : {"evaluated.jsonl", "state.json", "candidates.csv", "champions.csv", "efficiency.csv"})
      CHECK(std::filesystem::exists(dir / "ex" / f));
    CHECK(slurp(dir / "ex" / "efficiency.csv").rfind("k,codes,champions,bz_per_champion,min_d,max_d\n", 0) == 0);
  }
  SUBCASE("filtered campaign") {
    const auto out = (dir / "fi").string();
    const auto r = run_command(kBin + " ga-search --q 5 --k 6 --target-d 8 --mode filtered" + small +
                               " --seed 2 --out " + out);
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(dir / "fi" / "candidates.csv").rfind("k,V,inconclusive,lower,upper,d\n", 0) == 0);
  }
  SUBCASE("mock predictor") {
    const auto out = (dir / "mock").string();
    const auto ok = run_command(kBin + " ga-search --q 5 --k 6 --target-d 8 --predictor \"cmd:" + kMock +
                                " --q 5\"" + small + " --out " + out);
    CHECK(ok.exit_code == 0);
    const auto bad = run_command(kBin + " ga-search --q 5 --k 6 --target-d 8 --predictor \"cmd:" + kMock +
                                 " --q 5 --mode malformed\"" + small + " --out " + out);
    CHECK(bad.exit_code == 3);
    CHECK(bad.err.find("error:") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "mock" / "state.json"));
    const auto slow = run_command(kBin + " ga-search --q 5 --k 6 --target-d 8 --predictor-timeout-ms 300 " +
                                  "--predictor \"cmd:" + kMock + " --q 5 --mode hang --after 3\"" + small +
                                  " --out " + out);
    CHECK(slow.exit_code == 3);
  }
  SUBCASE("same seed, same bytes") {
    const std::string cmd = kBin + " ga-search --q 5 --k 3,6 --target-d 8" + small + " --seed 11 --out ";
    const auto a = run_command(cmd + (dir / "a").string());
    const auto b = run_command(cmd + (dir / "b").string());
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    for (const char* f : {"evaluated.jsonl", "state.json", "champions.csv", "efficiency.csv"})
      CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  SUBCASE("usage") {
    CHECK(run_command(kBin + " ga-search --q 5 --k 6 --out " + (dir / "u").string()).exit_code == 1);
    CHECK(run_command(kBin + " ga-search --q 5 --k 6 --target-d 8 --mode sideways").exit_code == 1);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("space, bounds and version") {
  const auto s = run_command(kBin + " space --q 8");
  REQUIRE(s.exit_code == 0);
  CHECK(json::parse(s.out)["display"] == "2.49e9");
  CHECK(json::parse(run_command(kBin + " space --q 13").out)["display"] == "5.03e36");
  const auto b = run_command(kBin + " bounds --n 49 --k 18");
  REQUIRE(b.exit_code == 0);
  CHECK(json::parse(b.out)["singleton"] == 32);
  CHECK(run_command(kBin + " bounds --n 49 --k 50").exit_code != 0);
  const auto v = run_command(kBin + " --version");
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("GF(8) modulus [1,1,0,1] xi 2") != std::string::npos);
}
