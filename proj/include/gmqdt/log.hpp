#pragma once

#include <sstream>
#include <string>

// Minimal stderr logger. The threshold comes from GMQDT_LOG
// (debug|info|warn|error|off, default warn).

namespace gmqdt::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

Level threshold();
void set_threshold(Level level);
void write(Level level, const std::string& message);

template <typename... Args>
void emit(Level level, Args&&... args) {
  if (level < threshold()) return;
  std::ostringstream os;
  (os << ... << args);
  write(level, os.str());
}

template <typename... Args>
void debug(Args&&... a) { emit(Level::Debug, std::forward<Args>(a)...); }
template <typename... Args>
void info(Args&&... a) { emit(Level::Info, std::forward<Args>(a)...); }
template <typename... Args>
void warn(Args&&... a) { emit(Level::Warn, std::forward<Args>(a)...); }

}  // namespace gmqdt::log
