/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cxcomp/bench/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "../format.hpp"
#include "cxcomp/bench/schemes.hpp"
#include "cxcomp/errors.hpp"

namespace cxcomp::bench {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) {
      break;
    }
    s.remove_prefix(pos + 1);
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value);
  }
  return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view value) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value);
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "0" || value == "false" || value == "no" || value == "off") {
    return false;
  }
  bad_value(key, value);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i ? "," : "") + items[i];
  }
  return out;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Coeffs:
      return "coeffs";
    case ExperimentKind::OdeConverge:
      return "ode-converge";
    case ExperimentKind::OdeCpu:
      return "ode-cpu";
    case ExperimentKind::VortexConverge:
      return "vortex";
    case ExperimentKind::Zalesak:
      return "zalesak";
    case ExperimentKind::StabilityRegion:
      return "stability";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
  if (name == "coeffs") return ExperimentKind::Coeffs;
  if (name == "ode-converge") return ExperimentKind::OdeConverge;
  if (name == "ode-cpu") return ExperimentKind::OdeCpu;
  if (name == "vortex" || name == "vortex-converge") return ExperimentKind::VortexConverge;
  if (name == "zalesak") return ExperimentKind::Zalesak;
  if (name == "stability" || name == "stability-region") return ExperimentKind::StabilityRegion;
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::Coeffs:
      c.pairs = {{1, 0}, {2, 0}, {2, -1}, {3, 0}, {3, -2}, {4, 0}, {5, 0}, {6, 0}};
      break;
    case ExperimentKind::OdeConverge:
      c.schemes = {"BE1", "BE2", "BE3", "HM1", "HM2", "HM4"};
      c.dt0 = 0.2;
      c.levels = 7;
      break;
    case ExperimentKind::OdeCpu:
      c.schemes = {"BE1", "BE2", "HM1", "HM2"};
      c.dt0 = 0.2;
      c.levels = 9;
      break;
    case ExperimentKind::VortexConverge:
      c.schemes = {"BE1", "BE2", "BE4"};
      c.dt0 = 4e-2;
      c.levels = 3;
      c.mesh_n = 64;
      c.period = 4.0;
      break;
    case ExperimentKind::Zalesak:
      c.schemes = {"BE2"};
      c.dt0 = 1e-3;
      c.levels = 0;
      c.mesh_n = 100;
      c.period = 4.0;
      break;
    case ExperimentKind::StabilityRegion:
      c.schemes = {"BE1", "BE2", "BE3", "HM1", "HM2", "HM4"};
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (!(dt0 > 0.0)) throw ConfigError("dt0 must be positive");
  if (levels < 0) throw ConfigError("levels must be non-negative");
  if (levels > 30) throw ConfigError("levels must not exceed 30");
  if (mesh_n < 1) throw ConfigError("mesh_n must be positive");
  if (period < 0.0) throw ConfigError("period must be non-negative");
  if ((kind == ExperimentKind::VortexConverge || kind == ExperimentKind::Zalesak) && !(period > 0.0)) {
    throw ConfigError("period must be positive");
  }
  if (!(supg_c > 0.0)) throw ConfigError("supg_c must be positive");
  if (!(supg_tol > 0.0)) throw ConfigError("supg_tol must be positive");
  if (repeats < 1) throw ConfigError("repeats must be positive");
  if (!(target_error > 0.0)) throw ConfigError("target_error must be positive");
  if (resolution < 2) throw ConfigError("resolution must be at least 2");
  if (!(re_max > re_min) || !(im_max > im_min)) throw ConfigError("empty stability window");
  if (!(reference_dt > 0.0)) throw ConfigError("reference_dt must be positive");
  if (threads < 1) throw ConfigError("threads must be positive");
  if (kind != ExperimentKind::Coeffs && schemes.empty()) throw ConfigError("no schemes selected");
  for (const auto& s : schemes) {
    (void)parse_scheme(s);
  }
  if (kind == ExperimentKind::VortexConverge) {
    (void)parse_scheme(reference_scheme);
  }
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "kind") {
    if (parse_kind(value) != c.kind) {
      throw ConfigError("config kind '" + std::string(value) + "' does not match experiment '" +
                        kind_name(c.kind) + "'");
    }
  } else if (key == "schemes") {
    c.schemes.clear();
    for (auto s : split(value, ',')) {
      if (!s.empty()) {
        if (!is_known_scheme(s)) {
          throw ConfigError("unknown scheme label '" + std::string(s) + "'");
        }
        c.schemes.emplace_back(s);
      }
    }
  } else if (key == "dt0") {
    c.dt0 = to_double(key, value);
  } else if (key == "levels") {
    c.levels = to_int<int>(key, value);
  } else if (key == "mesh_n" || key == "mesh-n") {
    c.mesh_n = to_int<int>(key, value);
  } else if (key == "period") {
    c.period = to_double(key, value);
  } else if (key == "supg_c" || key == "supg-c") {
    c.supg_c = to_double(key, value);
  } else if (key == "supg_tol" || key == "supg-tol") {
    c.supg_tol = to_double(key, value);
  } else if (key == "out" || key == "output_dir") {
    c.output_dir = std::string(value);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "repeats") {
    c.repeats = to_int<int>(key, value);
  } else if (key == "target_error") {
    c.target_error = to_double(key, value);
  } else if (key == "pairs") {
    c.pairs.clear();
    for (auto item : split(value, ',')) {
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) bad_value(key, item);
      c.pairs.push_back({to_int<int>(key, trim(item.substr(0, colon))),
                         to_int<int>(key, trim(item.substr(colon + 1)))});
    }
  } else if (key == "window") {
    const auto parts = split(value, ',');
    if (parts.size() != 4) bad_value(key, value);
    c.re_min = to_double(key, parts[0]);
    c.re_max = to_double(key, parts[1]);
    c.im_min = to_double(key, parts[2]);
    c.im_max = to_double(key, parts[3]);
  } else if (key == "resolution") {
    c.resolution = to_int<int>(key, value);
  } else if (key == "reference_scheme") {
    (void)parse_scheme(value);
    c.reference_scheme = std::string(value);
  } else if (key == "reference_dt") {
    c.reference_dt = to_double(key, value);
  } else if (key == "snapshots") {
    c.snapshots = to_bool(key, value);
  } else if (key == "threads") {
    c.threads = to_int<int>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "kind = " << kind_name(c.kind) << '\n';
  out << "schemes = " << join(c.schemes) << '\n';
  out << "dt0 = " << detail::sig17(c.dt0) << '\n';
  out << "levels = " << c.levels << '\n';
  out << "mesh_n = " << c.mesh_n << '\n';
  out << "period = " << detail::sig17(c.period) << '\n';
  out << "supg_c = " << detail::sig17(c.supg_c) << '\n';
  out << "supg_tol = " << detail::sig17(c.supg_tol) << '\n';
  if (!c.output_dir.empty()) {
    out << "out = " << c.output_dir << '\n';
  }
  out << "seed = " << c.seed << '\n';
  out << "repeats = " << c.repeats << '\n';
  out << "target_error = " << detail::sig17(c.target_error) << '\n';
  std::vector<std::string> pairs;
  for (const auto& p : c.pairs) {
    pairs.push_back(std::to_string(p.base_order) + ":" + std::to_string(p.branch));
  }
  if (!pairs.empty()) {
    out << "pairs = " << join(pairs) << '\n';
  }
  out << "window = " << detail::sig17(c.re_min) << ',' << detail::sig17(c.re_max) << ','
      << detail::sig17(c.im_min) << ',' << detail::sig17(c.im_max) << '\n';
  out << "resolution = " << c.resolution << '\n';
  out << "reference_scheme = " << c.reference_scheme << '\n';
  out << "reference_dt = " << detail::sig17(c.reference_dt) << '\n';
  out << "snapshots = " << (c.snapshots ? "true" : "false") << '\n';
  out << "threads = " << c.threads << '\n';
  return out.str();
}

}  // namespace cxcomp::bench
