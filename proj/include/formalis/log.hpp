#ifndef FORMALIS_LOG_HPP
#define FORMALIS_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>

namespace formalis {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

/// Level from FORMALIS_LOG (quiet|info|debug), default quiet.
/// All log output goes to stderr; stdout carries results only.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("FORMALIS_LOG");
    if (!env) return LogLevel::quiet;
    std::string v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::quiet;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[formalis info] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[formalis debug] " << msg << "\n";
}

}  // namespace formalis

#endif
