#pragma once

#include <string_view>

namespace asyncdfl::log {

void warn(std::string_view message);
void info(std::string_view message);

// Silences warnings (tests that provoke them on purpose).
void set_quiet(bool quiet);

}  // namespace asyncdfl::log
