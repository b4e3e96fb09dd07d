#include "core/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace xlab {

LogLevel log_level() {
  static const LogLevel lvl = [] {
    const char* env = std::getenv("EXTRAPOLAB_LOG");
    if (!env) return LogLevel::Error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Error;
  }();
  return lvl;
}

void log_line(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  static const char* tags[] = {"error", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "[extrapolab %s] %s\n", tags[static_cast<int>(level)], msg.c_str());
}

}  // namespace xlab
