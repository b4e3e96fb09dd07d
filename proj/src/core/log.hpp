#pragma once

#include <sstream>
#include <string>

namespace xlab {

// Verbosity comes from EXTRAPOLAB_LOG in {error, info, debug}; default error.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();
void log_line(LogLevel level, const std::string& msg);

template <typename... Args>
void log_info(Args&&... args) {
  if (log_level() < LogLevel::Info) return;
  std::ostringstream os;
  (os << ... << args);
  log_line(LogLevel::Info, os.str());
}

template <typename... Args>
void log_debug(Args&&... args) {
  if (log_level() < LogLevel::Debug) return;
  std::ostringstream os;
  (os << ... << args);
  log_line(LogLevel::Debug, os.str());
}

template <typename... Args>
void log_error(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  log_line(LogLevel::Error, os.str());
}

}  // namespace xlab
