// Scripted predictor child for protocol tests.
//
//   mock_predictor [--q Q] [--mode MODE] [--after N]
//
// Answers d_approx = number of rows. After N good answers (default 0) it
// switches to MODE: echo (never), probs, error, malformed, hang, wrong-id,
// bad-probs, exit. Modes no-handshake, bad-handshake and wrong-q break the
// handshake itself.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

using nlohmann::json;

int main(int argc, char** argv) {
  int q = 5;
  std::string mode = "echo";
  long after = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--q") q = std::atoi(argv[i + 1]);
    else if (key == "--mode") mode = argv[i + 1];
    else if (key == "--after") after = std::atol(argv[i + 1]);
  }

  if (mode == "no-handshake") {
    std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
  }
  if (mode == "bad-handshake") {
    std::cout << "hello" << std::endl;
  } else {
    std::cout << json{{"ready", true}, {"q", mode == "wrong-q" ? q + 1 : q}, {"model", "mock"}}.dump() << std::endl;
  }

  std::string line;
  long served = 0;
  while (std::getline(std::cin, line)) {
    const json req = json::parse(line, nullptr, false);
    if (req.is_discarded()) return 2;
    const auto id = req["id"].get<std::uint64_t>();
    const double rows = static_cast<double>(req["rows"].size());
    const bool misbehave = served++ >= after;
    const std::string m = misbehave ? mode : "echo";

    if (m == "error") {
      std::cout << json{{"id", id}, {"error", "oom"}}.dump() << std::endl;
    } else if (m == "malformed") {
      std::cout << "{\"id\":" << id << ",\"d_approx\":" << std::endl;
    } else if (m == "hang") {
      std::this_thread::sleep_for(std::chrono::seconds(30));
    } else if (m == "wrong-id") {
      std::cout << json{{"id", id + 7}, {"d_approx", rows}}.dump() << std::endl;
    } else if (m == "exit") {
      return 0;
    } else if (m == "probs" || m == "bad-probs") {
      const std::size_t classes = static_cast<std::size_t>((q - 1) * (q - 1));
      std::vector<double> p(classes, 0.0);
      const std::size_t hot = std::min(classes - 1, static_cast<std::size_t>(rows));
      p[hot] = m == "probs" ? 0.75 : 0.5;
      p[hot - 1] = 0.25;
      const double mean = 0.75 * double(hot) + 0.25 * double(hot - 1);
      std::cout << json{{"id", id}, {"d_approx", mean}, {"probs", p}}.dump() << std::endl;
    } else {
      std::cout << json{{"id", id}, {"d_approx", rows}}.dump() << std::endl;
    }
  }
  return 0;
}
