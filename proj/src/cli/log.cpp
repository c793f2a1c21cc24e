#include "jetlag/cli/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>

namespace jetlag::cli {

spdlog::logger& log() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto l = std::make_shared<spdlog::logger>("jetlag", sink);
    l->set_pattern("jetlag [%l] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return *logger;
}

bool set_log_level(std::string_view name) {
  spdlog::level::level_enum level;
  if (name == "error") {
    level = spdlog::level::err;
  } else if (name == "warn") {
    level = spdlog::level::warn;
  } else if (name == "info") {
    level = spdlog::level::info;
  } else if (name == "debug") {
    level = spdlog::level::debug;
  } else {
    return false;
  }
  log().set_level(level);
  return true;
}

void configure_logging() {
  const char* env = std::getenv("JETLAG_LOG");
  if (env == nullptr || *env == '\0') return;
  if (!set_log_level(env)) log().warn("ignoring JETLAG_LOG={} (expected error, warn, info or debug)", env);
}

}  // namespace jetlag::cli
