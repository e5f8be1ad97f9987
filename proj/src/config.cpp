#include "lpcont/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lpcont/errors.hpp"

namespace lpcont {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw ConfigError("bad value for " + key + ": '" + text + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_number<T>(key, part));
  if (values.empty()) throw ConfigError("empty list for " + key);
  return values;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  return os.str();
}

std::string number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool uses_index_set(const std::string& experiment) {
  return experiment == "perturb" || experiment == "kato";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "map.family", "map.a",   "map.b",    "map.eps", "map.cx", "map.cy",         "map.width",
      "M",          "n_1d",    "F",        "p",       "sweep",  "seed",           "restarts",
      "iters",      "nodes",   "N_max",    "N_list",  "sample_density", "k",      "out"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key), value = trim(raw_value);
  if (key == "map.family") c.map.family = value;
  else if (key == "map.a") c.map.a = parse_number<double>(key, value);
  else if (key == "map.b") c.map.b = parse_number<double>(key, value);
  else if (key == "map.eps") c.map.eps = parse_number<double>(key, value);
  else if (key == "map.cx") c.map.cx = parse_number<double>(key, value);
  else if (key == "map.cy") c.map.cy = parse_number<double>(key, value);
  else if (key == "map.width") c.map.width = parse_number<double>(key, value);
  else if (key == "M") c.M = parse_number<int>(key, value);
  else if (key == "n_1d") c.n_1d = parse_number<int>(key, value);
  else if (key == "F") c.F = value;
  else if (key == "p") c.p = parse_list<double>(key, value);
  else if (key == "sweep") c.sweep = parse_list<double>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "restarts") c.restarts = parse_number<int>(key, value);
  else if (key == "iters") c.iters = parse_number<int>(key, value);
  else if (key == "nodes") c.nodes = parse_number<int>(key, value);
  else if (key == "N_max") c.N_max = parse_number<int>(key, value);
  else if (key == "N_list") c.N_list = parse_list<int>(key, value);
  else if (key == "sample_density") c.sample_density = parse_number<int>(key, value);
  else if (key == "k") c.k = parse_number<int>(key, value);
  else if (key == "out") c.out = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

void apply_assignment(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void load_config(ExperimentConfig& config, std::istream& is) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_assignment(config, line);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  load_config(config, in);
}

std::string setting_value(const ExperimentConfig& c, const std::string& key) {
  if (key == "map.family") return c.map.family;
  if (key == "map.a") return number(c.map.a);
  if (key == "map.b") return number(c.map.b);
  if (key == "map.eps") return number(c.map.eps);
  if (key == "map.cx") return number(c.map.cx);
  if (key == "map.cy") return number(c.map.cy);
  if (key == "map.width") return number(c.map.width);
  if (key == "M") return std::to_string(c.M);
  if (key == "n_1d") return std::to_string(c.n_1d);
  if (key == "F") return c.F;
  if (key == "p") return join(c.p);
  if (key == "sweep") return join(c.sweep);
  if (key == "seed") return std::to_string(c.seed);
  if (key == "restarts") return std::to_string(c.restarts);
  if (key == "iters") return std::to_string(c.iters);
  if (key == "nodes") return std::to_string(c.nodes);
  if (key == "N_max") return std::to_string(c.N_max);
  if (key == "N_list") return join(c.N_list);
  if (key == "sample_density") return std::to_string(c.sample_density);
  if (key == "k") return std::to_string(c.k);
  if (key == "out") return c.out;
  throw ConfigError("unknown config key '" + key + "'");
}

IndexSet parse_index_set(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("index set spec needs a kind: '" + spec + "'");
  const std::string kind = trim(spec.substr(0, colon));
  const std::string arg = trim(spec.substr(colon + 1));
  if (kind == "square" || kind == "ball" || kind == "window") {
    const auto n = parse_number<Int>("F", arg);
    if (n < 1) throw ConfigError("index set parameter must be positive: '" + spec + "'");
    if (kind == "square") return cutoff_square(n);
    if (kind == "ball") return cutoff_ball(n);
    return eigenvalue_window(n);
  }
  if (kind == "list") {
    std::vector<LatticeMode> modes;
    for (const auto& item : split(arg, ',')) {
      const auto x = item.find('x');
      if (x == std::string::npos) throw ConfigError("list entries look like 2x3, got '" + item + "'");
      const auto m = parse_number<Int>("F", item.substr(0, x));
      const auto n = parse_number<Int>("F", item.substr(x + 1));
      if (m < 1 || n < 1) throw ConfigError("mode indices must be positive: '" + item + "'");
      modes.push_back({m, n});
    }
    if (modes.empty()) throw ConfigError("empty mode list");
    return IndexSet(std::move(modes), "list");
  }
  throw ConfigError("unknown index set kind '" + kind + "'");
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  const auto& fam = c.map.family;
  require(fam == "identity" || fam == "affine" || fam == "conformal_quadratic" || fam == "bump",
          "unknown map.family '" + fam + "'");
  require(c.map.a > 0 && c.map.b > 0, "map.a and map.b must be positive");
  require(c.map.width > 0, "map.width must be positive");
  require(c.M >= 2 && c.M <= 40, "M must lie in [2, 40]");
  require(c.n_1d >= 2 * c.M + 12, "n_1d must be at least 2M+12 = " + std::to_string(2 * c.M + 12));
  for (double p : c.p) require(p > 1.0 && std::isfinite(p), "p values must lie in (1, inf)");
  for (double e : c.sweep) require(std::isfinite(e) && e >= 0.0, "sweep values must be finite and >= 0");
  require(c.restarts >= 1 && c.iters >= 1, "restarts and iters must be positive");
  require(c.nodes >= 16, "nodes must be at least 16");
  require(c.N_max >= 1 && c.N_max <= 60, "N_max must lie in [1, 60]");
  for (int n : c.N_list) require(n >= 1 && n <= 40, "N_list entries must lie in [1, 40]");
  require(c.sample_density >= 4, "sample_density must be at least 4");
  require(c.k >= 1 && c.k <= c.M * c.M, "k must lie in [1, M^2]");

  if (uses_index_set(c.experiment)) {
    const IndexSet F = parse_index_set(c.F);
    require(F.max_index() <= c.M, "F = " + c.F + " needs order " + std::to_string(F.max_index()) +
                                      " > M = " + std::to_string(c.M));
    spectrum_window(F, exhaustive_index(F.max_eigenvalue()));
  }
}

void write_config_echo(std::ostream& os, const ExperimentConfig& config) {
  os << "# lpcont " << kVersion << ' ' << config.experiment << '\n';
  for (const auto& key : config_keys()) os << "# " << key << '=' << setting_value(config, key) << '\n';
}

}  // namespace lpcont
