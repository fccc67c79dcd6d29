#pragma once

#include <cstdlib>
#include <memory>
#include <string_view>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace rankmetrics {

// Diagnostics go to stderr only. The level comes from RANKMETRICS_LOG
// (error|info|debug), defaulting to error.
inline spdlog::level::level_enum log_level_from_env() {
  const char* raw = std::getenv("RANKMETRICS_LOG");
  if (raw == nullptr) return spdlog::level::err;
  std::string_view v{raw};
  if (v == "debug") return spdlog::level::debug;
  if (v == "info") return spdlog::level::info;
  return spdlog::level::err;
}

inline spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto lg = std::make_shared<spdlog::logger>("rankmetrics", sink);
    lg->set_pattern("[%l] %v");
    lg->set_level(log_level_from_env());
    return lg;
  }();
  return *instance;
}

}  // namespace rankmetrics
