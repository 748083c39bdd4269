#pragma once

#include <json.hpp>

#include <iosfwd>

// Line-delimited JSON trace records. Verbosity comes from the FAIRMATCH_LOG
// environment variable (off, info, debug); records go to stderr unless a
// different stream is installed.
namespace fairmatch::log {

enum class Level { off = 0, info = 1, debug = 2 };

Level level();
void set_level(Level level);
bool enabled(Level at);

/// nullptr restores stderr.
void set_stream(std::ostream* stream);

void emit(Level at, const nlohmann::json& record);

Level parse_level(const std::string& text);

}  // namespace fairmatch::log
