#include "toric/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "toric/error.hpp"

namespace toric {

LatticePoint LatticePoint::reduced(int period) const {
  auto mod = [period](int v) {
    const int r = v % period;
    return r < 0 ? r + period : r;
  };
  return {mod(a), mod(b)};
}

LatticePointSet::LatticePointSet(std::vector<LatticePoint> points, int period) : period_(period) {
  if (period <= 0) throw Error("lattice period must be positive");
  for (auto& u : points) u = u.reduced(period);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  points_ = std::move(points);
}

bool LatticePointSet::contains(const LatticePoint& u) const {
  return std::binary_search(points_.begin(), points_.end(), u.reduced(period_));
}

std::string LatticePointSet::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < points_.size(); ++i)
    os << (i ? ";" : "") << '(' << points_[i].a << ',' << points_[i].b << ')';
  return os.str();
}

std::vector<LatticePoint> parse_points(std::string_view text) {
  std::vector<LatticePoint> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ';' || text[i] == ','))
      ++i;
  };
  auto read_int = [&]() -> int {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      throw ParseError("expected integer at offset " + std::to_string(start) + " in \"" + std::string(text) + "\"");
    const int v = std::stoi(std::string(text.substr(start, i - start)));
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return v;
  };
  auto expect = [&](char c) {
    if (i >= text.size() || text[i] != c)
      throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(i) + " in \"" +
                       std::string(text) + "\"");
    ++i;
  };

  skip();
  while (i < text.size()) {
    expect('(');
    const int a = read_int();
    expect(',');
    const int b = read_int();
    expect(')');
    out.emplace_back(a, b);
    skip();
  }
  return out;
}

std::size_t LatticePointSetHash::operator()(const LatticePointSet& v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& u : v) {
    h ^= static_cast<std::size_t>(u.a) * 131 + static_cast<std::size_t>(u.b) + 1;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace toric
