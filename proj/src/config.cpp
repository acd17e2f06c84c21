#include "cylspec/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>

#include "cylspec/error.hpp"
#include "cylspec/io.hpp"

namespace cylspec {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::config_error, "line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment, honoring double-quoted strings.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

double parse_number(const std::string& s, int line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') fail(line, "not a number: '" + s + "'");
  return v;
}

ConfigValue parse_scalar(const std::string& raw, int line) {
  if (raw.size() >= 2 && raw.front() == '"') {
    if (raw.back() != '"' || raw.size() < 2) fail(line, "unterminated string");
    return raw.substr(1, raw.size() - 2);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  return parse_number(raw, line);
}

ConfigValue parse_array(const std::string& raw, int line) {
  std::string body = trim(raw.substr(1, raw.size() - 2));
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  if (quoted) fail(line, "unterminated string in array");
  if (items.empty()) fail(line, "empty array");
  for (const std::string& it : items)
    if (it.empty()) fail(line, "empty array element");
  if (items.front().front() == '"') {
    std::vector<std::string> out;
    for (const std::string& it : items) {
      ConfigValue v = parse_scalar(it, line);
      if (!std::holds_alternative<std::string>(v)) fail(line, "mixed array element kinds");
      out.push_back(std::get<std::string>(v));
    }
    return out;
  }
  std::vector<double> out;
  for (const std::string& it : items) out.push_back(parse_number(it, line));
  return out;
}

// Typed accessors that consume keys, so leftovers can be reported.
class Fields {
 public:
  explicit Fields(const ConfigTree& tree) : tree_(tree) {}

  bool has(const std::string& key) {
    return tree_.find(key) != tree_.end();
  }
  double number(const std::string& key, double def) {
    auto it = take(key);
    if (it == tree_.end()) return def;
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    bad(key, "a number");
  }
  int integer(const std::string& key, int def) {
    double v = number(key, static_cast<double>(def));
    if (v != std::floor(v)) bad(key, "an integer");
    return static_cast<int>(v);
  }
  std::string str(const std::string& key, const std::string& def) {
    auto it = take(key);
    if (it == tree_.end()) return def;
    if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
    bad(key, "a string");
  }
  std::vector<double> numbers(const std::string& key) {
    auto it = take(key);
    if (it == tree_.end()) return {};
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    bad(key, "an array of numbers");
  }
  std::vector<std::string> strings(const std::string& key,
                                   std::vector<std::string> def) {
    auto it = take(key);
    if (it == tree_.end()) return def;
    if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
    bad(key, "an array of strings");
  }
  void reject_unknown() const {
    for (const auto& [key, value] : tree_)
      if (!used_.count(key))
        throw Error(ErrorKind::config_error, "unknown key '" + key + "'");
  }

 private:
  ConfigTree::const_iterator take(const std::string& key) {
    auto it = tree_.find(key);
    if (it != tree_.end()) used_.insert(key);
    return it;
  }
  [[noreturn]] void bad(const std::string& key, const char* want) {
    throw Error(ErrorKind::config_error, "key '" + key + "' must be " + want);
  }
  const ConfigTree& tree_;
  std::set<std::string> used_;
};

[[noreturn]] void reject(const std::string& msg) {
  throw Error(ErrorKind::config_error, msg);
}

}  // namespace

ConfigTree parse_config_text(const std::string& text) {
  ConfigTree tree;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) fail(line_no, "invalid section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string raw = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(line_no, "invalid key name");
    if (raw.empty()) fail(line_no, "missing value");
    std::string full = section.empty() ? key : section + "." + key;
    if (tree.count(full)) fail(line_no, "duplicate key '" + full + "'");
    if (raw.front() == '[') {
      if (raw.back() != ']') fail(line_no, "unterminated array");
      tree.emplace(full, parse_array(raw, line_no));
    } else {
      tree.emplace(full, parse_scalar(raw, line_no));
    }
  }
  return tree;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig config_from_text(const std::string& text) {
  ConfigTree tree = parse_config_text(text);
  Fields f(tree);
  RunConfig cfg;

  cfg.a = f.number("nonlinearity.a", cfg.a);
  if (!(cfg.a > 0.0 && cfg.a < 1.0)) reject("nonlinearity.a must lie in (0,1)");
  std::string kind = f.str("nonlinearity.kind", "cubic");
  if (kind != "cubic") reject("nonlinearity.kind must be 'cubic'");

  cfg.wave_kind = f.str("wave.kind", cfg.wave_kind);
  if (cfg.wave_kind != "front" && cfg.wave_kind != "periodic")
    reject("wave.kind must be 'front' or 'periodic'");
  cfg.wave_length = f.number("wave.length", cfg.wave_length);
  if (cfg.wave_kind == "periodic" && !(cfg.wave_length > 0.0))
    reject("wave.length must be positive for periodic waves");

  std::string default_pot = (cfg.wave_kind == "front") ? "front" : "synthetic";
  cfg.potential_kind = f.str("potential.kind", default_pot);
  if (cfg.potential_kind != "front" && cfg.potential_kind != "synthetic" &&
      cfg.potential_kind != "file")
    reject("potential.kind must be 'front', 'synthetic', or 'file'");
  if (cfg.potential_kind == "synthetic" && cfg.wave_kind != "periodic")
    reject("potential.kind 'synthetic' requires wave.kind 'periodic'");
  if (cfg.potential_kind == "front" && cfg.wave_kind != "front")
    reject("potential.kind 'front' requires wave.kind 'front'");
  cfg.potential_file = f.str("potential.file", "");
  if (cfg.potential_kind == "file" && cfg.potential_file.empty())
    reject("potential.file is required when potential.kind is 'file'");
  cfg.alpha = f.number("potential.alpha", cfg.alpha);
  if (!(cfg.alpha > 0.0)) reject("potential.alpha must be positive");
  cfg.nx = f.integer("potential.nx", cfg.nx);
  cfg.nz = f.integer("potential.nz", cfg.nz);
  if (cfg.nx < 3 || cfg.nz < 3) reject("potential.nx and potential.nz must be at least 3");
  cfg.z_extent = f.number("potential.z_extent", cfg.z_extent);
  if (!(cfg.z_extent > 0.0)) reject("potential.z_extent must be positive");
  cfg.bc_x = parse_bc(f.str("potential.bc_x", "dirichlet"));
  cfg.bc_z = parse_bc(f.str("potential.bc_z", "dirichlet"));

  cfg.speed_set = f.has("operator.speed");
  cfg.speed = f.number("operator.speed", 0.0);
  if (!cfg.speed_set && cfg.wave_kind != "front")
    reject("operator.speed is required unless the wave is a front");

  cfg.k = f.integer("solver.k", cfg.k);
  if (cfg.k < 1) reject("solver.k must be at least 1");
  std::vector<double> sh = f.numbers("solver.shifts");
  if (!sh.empty()) {
    if (sh.size() % 2 != 0)
      reject("solver.shifts must list re,im pairs (even length)");
    cfg.shifts.clear();
    for (std::size_t i = 0; i + 1 < sh.size(); i += 2)
      cfg.shifts.emplace_back(sh[i], sh[i + 1]);
  }
  cfg.residual_tol = f.number("solver.residual_tol", cfg.residual_tol);
  if (!(cfg.residual_tol > 0.0)) reject("solver.residual_tol must be positive");
  cfg.modes = f.integer("solver.modes", cfg.modes);
  if (cfg.modes < 1) reject("solver.modes must be at least 1");
  double seed = f.number("solver.seed", -1.0);
  if (seed >= 0.0) {
    if (seed != std::floor(seed)) reject("solver.seed must be a nonnegative integer");
    cfg.seed = static_cast<unsigned long long>(seed);
  }

  cfg.period = f.number("dispersion.period", cfg.period);
  if (!(cfg.period > 0.0)) reject("dispersion.period must be positive");
  cfg.dispersion_nz = f.integer("dispersion.nz", cfg.dispersion_nz);
  if (cfg.dispersion_nz < 3) reject("dispersion.nz must be at least 3");

  bool has_lo = f.has("decay.fit_lo");
  bool has_hi = f.has("decay.fit_hi");
  cfg.fit_lo = f.number("decay.fit_lo", cfg.fit_lo);
  cfg.fit_hi = f.number("decay.fit_hi", cfg.fit_hi);
  if (has_lo != has_hi) reject("decay.fit_lo and decay.fit_hi must be given together");
  if (has_lo && !(cfg.fit_lo < cfg.fit_hi)) reject("decay fit window must satisfy fit_lo < fit_hi");
  cfg.hypothesis_tol = f.number("decay.hypothesis_tol", cfg.hypothesis_tol);
  if (!(cfg.hypothesis_tol > 0.0)) reject("decay.hypothesis_tol must be positive");

  cfg.out_dir = f.str("outputs.directory", cfg.out_dir);
  if (cfg.out_dir.empty()) reject("outputs.directory must not be empty");
  cfg.formats = f.strings("outputs.formats", cfg.formats);
  for (const std::string& fmt : cfg.formats)
    if (fmt != "csv" && fmt != "json" && fmt != "svg" && fmt != "mtx")
      reject("outputs.formats entries must be csv, json, svg, or mtx");

  f.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::config_error, e.what());
  }
  return config_from_text(text);
}

Bc parse_bc(const std::string& name) {
  if (name == "dirichlet") return Bc::dirichlet;
  if (name == "periodic") return Bc::periodic;
  reject("boundary condition must be 'dirichlet' or 'periodic'");
}

}  // namespace cylspec
