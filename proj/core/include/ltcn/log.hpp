#pragma once

#include <string>

namespace ltcn {

// Log level comes from the LTCN_LOG environment variable: error|info|debug.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();

void log_error(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

} // namespace ltcn
