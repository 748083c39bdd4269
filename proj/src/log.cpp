#include "fairmatch/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace fairmatch::log {

namespace {

std::mutex g_mutex;
std::ostream* g_stream = nullptr;

Level level_from_env() {
  const char* env = std::getenv("FAIRMATCH_LOG");
  return env ? parse_level(env) : Level::off;
}

std::atomic<Level>& current() {
  static std::atomic<Level> value{level_from_env()};
  return value;
}

}  // namespace

Level parse_level(const std::string& text) {
  if (text == "debug" || text == "2") return Level::debug;
  if (text == "info" || text == "1") return Level::info;
  return Level::off;
}

Level level() { return current().load(); }
void set_level(Level level) { current().store(level); }

bool enabled(Level at) {
  return at != Level::off && static_cast<int>(at) <= static_cast<int>(level());
}

void set_stream(std::ostream* stream) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_stream = stream;
}

void emit(Level at, const nlohmann::json& record) {
  if (!enabled(at)) return;
  std::string line = record.dump();
  std::lock_guard<std::mutex> lock(g_mutex);
  std::ostream& out = g_stream ? *g_stream : std::cerr;
  out << line << '\n';
  out.flush();
}

}  // namespace fairmatch::log
