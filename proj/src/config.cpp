#include "corot/config.hpp"

#include <fstream>
#include <sstream>

#include "corot/errors.hpp"

namespace corot {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}
}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path.string());
}

RunConfig RunConfig::from_string(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

void RunConfig::apply_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got " + kv);
  values_[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
}

bool RunConfig::has(const std::string& k) const { return values_.count(k) != 0; }

std::string RunConfig::get(const std::string& k) const {
  auto it = values_.find(k);
  if (it == values_.end()) throw ConfigError("missing config key '" + k + "'");
  return it->second;
}

std::string RunConfig::get_or(const std::string& k, const std::string& fb) const {
  auto it = values_.find(k);
  return it == values_.end() ? fb : it->second;
}

double RunConfig::get_double(const std::string& k) const {
  try {
    return std::stod(get(k));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key '" + k + "' is not a number: " + get(k));
  }
}

double RunConfig::get_double_or(const std::string& k, double fb) const {
  return has(k) ? get_double(k) : fb;
}

int RunConfig::get_int_or(const std::string& k, int fb) const {
  if (!has(k)) return fb;
  try {
    return std::stoi(get(k));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key '" + k + "' is not an integer: " + get(k));
  }
}

EvolutionConfig RunConfig::evolution() const {
  EvolutionConfig ec;
  ec.grid = RadialGrid::make(get_int_or("grid.n", 257), get_double_or("grid.r_max", 2.0));
  ec.t_end = get_double_or("time.t_end", 1.0);
  ec.cfl = get_double_or("time.cfl", 0.5);
  ec.store_dt = get_double_or("time.store_dt", 0.0);
  ec.alpha = get_double_or("matter.alpha", 1.0);
  ec.k = get_int_or("matter.k", 1);
  const std::string tname = get("target.name");  // required; error names the key
  std::vector<double> coeffs;
  if (has("target.coeffs")) coeffs = parse_list(get("target.coeffs"));
  ec.target = make_target(tname, coeffs);
  ec.v_threshold_factor = get_double_or("detect.v_threshold_factor", 50.0);
  ec.dispersal_ball = get_double_or("detect.dispersal_ball", 1.0);
  ec.dispersal_fraction = get_double_or("detect.dispersal_fraction", 0.01);
  ec.skip_domain_check = get_int_or("grid.skip_domain_check", 0) != 0;
  ec.validate();
  return ec;
}

InitialDataSpec RunConfig::initial_data() const {
  InitialDataSpec spec;
  const std::string family = get_or("matter.family", "compact_bump");
  if (family == "gaussian_bump")
    spec.family = InitialDataSpec::Family::GaussianBump;
  else if (family == "compact_bump")
    spec.family = InitialDataSpec::Family::CompactBump;
  else if (family == "custom")
    spec.family = InitialDataSpec::Family::CustomTable;
  else
    throw ConfigError("unknown matter.family '" + family + "'");

  spec.amplitude = get_double_or("matter.amplitude", 0.0);
  spec.center = get_double_or("matter.center", 0.5);
  spec.width = get_double_or("matter.width", 0.25);
  const std::string mom = get_or("matter.momentum", "time_symmetric");
  if (mom == "time_symmetric")
    spec.time_symmetric = true;
  else if (mom == "ingoing")
    spec.time_symmetric = false;
  else
    throw ConfigError("matter.momentum must be time_symmetric or ingoing");

  if (spec.family == InitialDataSpec::Family::CustomTable) {
    const std::string path = get("matter.table");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matter.table file " + path);
    double r, v, pi;
    while (in >> r >> v >> pi) {
      spec.table_r.push_back(r);
      spec.table_v.push_back(v);
      spec.table_pi.push_back(pi);
    }
  }
  return spec;
}

}  // namespace corot
