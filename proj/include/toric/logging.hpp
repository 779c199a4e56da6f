#pragma once

#include <string_view>

namespace toric {

/// Routes the default spdlog logger to stderr at the given level
/// ("trace", "debug", "info", "warn", "error", "off"). Throws ParseError.
void init_logging(std::string_view level);

}  // namespace toric
