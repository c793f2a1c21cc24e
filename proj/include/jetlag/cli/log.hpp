#pragma once

#include <spdlog/logger.h>

#include <memory>
#include <string_view>

namespace jetlag::cli {

/// Diagnostics logger; always writes to standard error.
spdlog::logger& log();

/// Sets the level from JETLAG_LOG (error, warn, info, debug). Unset means warn;
/// an unrecognised value is reported and ignored.
void configure_logging();

/// Returns false for names outside {error, warn, info, debug}.
bool set_log_level(std::string_view name);

}  // namespace jetlag::cli
