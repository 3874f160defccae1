#include "ltcn/log.hpp"

#include <cstdlib>
#include <iostream>

namespace ltcn {

namespace {

LogLevel parse_level() {
  const char* env = std::getenv("LTCN_LOG");
  if (env == nullptr) return LogLevel::Error;
  const std::string value(env);
  if (value == "debug") return LogLevel::Debug;
  if (value == "info") return LogLevel::Info;
  return LogLevel::Error;
}

} // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log_error(const std::string& message) {
  std::cerr << "[ltcn] error: " << message << '\n';
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::Info) std::cerr << "[ltcn] " << message << '\n';
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::Debug) std::cerr << "[ltcn] debug: " << message << '\n';
}

} // namespace ltcn
