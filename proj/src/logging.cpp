#include "toric/logging.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "toric/error.hpp"

namespace toric {

void init_logging(std::string_view level) {
  const auto parsed = spdlog::level::from_str(std::string(level));
  if (parsed == spdlog::level::off && level != "off") throw ParseError("unknown log level '" + std::string(level) + "'");
  static auto logger = [] {
    auto l = spdlog::stderr_color_mt("toric");
    l->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    return l;
  }();
  logger->set_level(parsed);
  spdlog::set_default_logger(logger);
}

}  // namespace toric
