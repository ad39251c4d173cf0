#include "prodfreq/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace prodfreq {
namespace {

LogLevel read_level_from_env() {
  const char* env = std::getenv("PRODFREQ_LOG_LEVEL");
  if (!env) return LogLevel::Warn;
  if (std::strcmp(env, "error") == 0) return LogLevel::Error;
  if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
  if (std::strcmp(env, "info") == 0) return LogLevel::Info;
  if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
  return LogLevel::Warn;
}

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = read_level_from_env();
  return level;
}

void log_msg(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[prodfreq:%s] %s\n", level_tag(level),
               message.c_str());
}

}  // namespace prodfreq
