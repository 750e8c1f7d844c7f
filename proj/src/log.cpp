#include "gmqdt/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace gmqdt::log {
namespace {

Level from_env() {
  const char* v = std::getenv("GMQDT_LOG");
  if (v == nullptr) return Level::Warn;
  const std::string_view s(v);
  if (s == "debug") return Level::Debug;
  if (s == "info") return Level::Info;
  if (s == "error") return Level::Error;
  if (s == "off") return Level::Off;
  return Level::Warn;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{from_env()};
  return level;
}

}  // namespace

Level threshold() { return current().load(std::memory_order_relaxed); }
void set_threshold(Level level) { current().store(level); }

void write(Level level, const std::string& message) {
  static std::mutex mu;
  static constexpr const char* tags[] = {"debug", "info", "warn", "error", "off"};
  std::lock_guard lock(mu);
  std::cerr << "[gmqdt:" << tags[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace gmqdt::log
