#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "het/tracker.hpp"

namespace het {

// Flat key=value text: one pair per line, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

// Applies recognized keys onto `config`; unknown keys raise ParseError so
// typos do not silently fall back to defaults.
void apply_config(TrackerConfig& config, const std::map<std::string, std::string>& kv);

TrackerConfig load_config(const std::filesystem::path& path);

// Every field, in the file format apply_config reads back.
std::string config_to_text(const TrackerConfig& config);

// "X,Y,W,H" integer box string (CLI --init format).
Box parse_box(const std::string& text);

}  // namespace het
