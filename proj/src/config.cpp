#include "het/config.hpp"

#include <fstream>
#include <sstream>

#include "het/errors.hpp"

namespace het {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value);

template <>
int parse_number<int>(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer for " + key + ": '" + value + "'");
  }
}

template <>
double parse_number<double>(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number for " + key + ": '" + value + "'");
  }
}

template <>
std::uint64_t parse_number<std::uint64_t>(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad unsigned integer for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ParseError("bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                       trimmed + "'");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_value_text(buf.str());
}

void apply_config(TrackerConfig& config, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "m") config.m = parse_number<int>(key, value);
    else if (key == "q_patches") config.q_patches = parse_number<int>(key, value);
    else if (key == "z_max") config.z_max = parse_number<int>(key, value);
    else if (key == "learning_rate") config.learning_rate = parse_number<double>(key, value);
    else if (key == "beta") config.beta = parse_number<double>(key, value);
    else if (key == "pi") config.pi = parse_number<double>(key, value);
    else if (key == "stride") config.stride = parse_number<int>(key, value);
    else if (key == "n_update") config.n_update = parse_number<int>(key, value);
    else if (key == "patch_scale") config.patch_scale = parse_number<double>(key, value);
    else if (key == "predictive_search") config.predictive_search = parse_bool(key, value);
    else if (key == "seed") config.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "kalman_p0") config.kalman.p0 = parse_number<double>(key, value);
    else if (key == "kalman_q_pos") config.kalman.q_pos = parse_number<double>(key, value);
    else if (key == "kalman_q_vel") config.kalman.q_vel = parse_number<double>(key, value);
    else if (key == "kalman_r_pos") config.kalman.r_pos = parse_number<double>(key, value);
    else throw ParseError("unknown config key: '" + key + "'");
  }
}

TrackerConfig load_config(const std::filesystem::path& path) {
  TrackerConfig config;
  apply_config(config, parse_key_value_file(path));
  return config;
}

std::string config_to_text(const TrackerConfig& c) {
  std::ostringstream out;
  out << "m=" << c.m << "\n"
      << "q_patches=" << c.q_patches << "\n"
      << "z_max=" << c.z_max << "\n"
      << "learning_rate=" << c.learning_rate << "\n"
      << "beta=" << c.beta << "\n"
      << "pi=" << c.pi << "\n"
      << "stride=" << c.stride << "\n"
      << "n_update=" << c.n_update << "\n"
      << "patch_scale=" << c.patch_scale << "\n"
      << "predictive_search=" << (c.predictive_search ? "true" : "false") << "\n"
      << "seed=" << c.seed << "\n"
      << "kalman_p0=" << c.kalman.p0 << "\n"
      << "kalman_q_pos=" << c.kalman.q_pos << "\n"
      << "kalman_q_vel=" << c.kalman.q_vel << "\n"
      << "kalman_r_pos=" << c.kalman.r_pos << "\n";
  return out.str();
}

Box parse_box(const std::string& text) {
  std::string cleaned = text;
  for (auto& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(cleaned);
  Box box;
  std::string extra;
  if (!(is >> box.x >> box.y >> box.w >> box.h) || (is >> extra)) {
    throw ParseError("bad box string (want X,Y,W,H): '" + text + "'");
  }
  if (box.w < 1 || box.h < 1) throw ParseError("box must have positive size: '" + text + "'");
  return box;
}

}  // namespace het
