#include "asyncdfl/log.hpp"

#include <atomic>

#include <spdlog/spdlog.h>

namespace asyncdfl::log {

namespace {
std::atomic<bool> g_quiet{false};
}

void warn(std::string_view message) {
  if (!g_quiet.load()) spdlog::warn("{}", message);
}

void info(std::string_view message) {
  if (!g_quiet.load()) spdlog::info("{}", message);
}

void set_quiet(bool quiet) { g_quiet.store(quiet); }

}  // namespace asyncdfl::log
