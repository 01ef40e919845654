#include "kpplab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kpplab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ConfigStore ConfigStore::parse(const std::string& text) {
  ConfigStore cs;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    cs.kv_[section.empty() ? key : section + "." + key] = value;
  }
  return cs;
}

ConfigStore ConfigStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool ConfigStore::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ConfigStore::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw std::invalid_argument("missing config key: " + key);
  return it->second;
}

std::string ConfigStore::get_string(const std::string& key,
                                    const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double ConfigStore::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("config key " + key + ": not a number");
  return d;
}

double ConfigStore::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long ConfigStore::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  return std::stol(get_string(key));
}

bool ConfigStore::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key " + key + ": not a boolean");
}

std::vector<double> ConfigStore::get_doubles(const std::string& key) const {
  std::string v = get_string(key);
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream in(v);
  std::vector<double> out;
  double d;
  while (in >> d) out.push_back(d);
  return out;
}

void ConfigStore::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

std::string ConfigStore::canonical() const {
  // std::map iterates in key order already; group by section for readability.
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : kv_) {
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string base = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section || out.tellp() == 0) {
      if (out.tellp() != 0) out << "\n";
      if (!sec.empty()) out << "[" << sec << "]\n";
      section = sec;
    }
    out << base << " = " << value << "\n";
  }
  return out.str();
}

ExperimentConfig ExperimentConfig::from_store(const ConfigStore& s) {
  ExperimentConfig c;
  c.canonical_text = s.canonical();
  c.name = s.get_string("run.name", "run");

  c.tail.family = tail_family_from_string(s.get_string("profile.family"));
  c.tail.alpha = s.get_double("profile.alpha", 0.0);
  c.tail.beta = s.get_double("profile.beta", 0.0);
  c.tail.C = s.get_double("profile.C", 1.0);
  if (c.tail.family == TailFamily::target_curve) {
    const std::string curve = s.get_string("profile.curve");
    if (curve == "quadratic")
      c.tail.curve = TargetCurve::quadratic;
    else if (curve == "exponential")
      c.tail.curve = TargetCurve::exponential;
    else
      throw std::invalid_argument("profile.curve must be quadratic or exponential");
    c.tail.curve_param = s.get_double("profile.curve_param");
    c.tail.fprime0 = s.get_double("profile.fprime0", 1.0);
  }
  c.plateau = s.get_double("profile.plateau", 0.9);
  c.x_blend = s.get_double("profile.x_blend", 0.0);
  c.blend_width = s.get_double("profile.blend_width", 2.0);

  const std::string nltype = s.get_string("nonlinearity.type", "logistic");
  if (nltype != "logistic")
    throw std::invalid_argument("config supports the logistic nonlinearity only");
  c.logistic_r = s.get_double("nonlinearity.r", 1.0);

  c.grid_kind = s.get_string("grid.kind", "composite");
  c.x_left = s.get_double("grid.x_left", 0.0);
  c.x_right = s.get_double("grid.x_right");
  c.n_intervals = static_cast<int>(s.get_int("grid.n", 0));
  c.stretch = s.get_double("grid.stretch", 0.0);
  c.dxi = s.get_double("grid.dxi", 0.04);
  c.sigma = s.get_double("grid.sigma", 1.0);
  c.anchor = s.get_double("grid.anchor", 0.0);

  c.solver.dt = s.get_double("solver.dt", 0.0);
  c.solver.local_error_tol = s.get_double("solver.local_error_tol", 1e-7);
  c.solver.dt_min = s.get_double("solver.dt_min", 1e-6);
  c.solver.dt_obs = s.get_double("solver.dt_obs", 0.25);
  c.solver.expansion_margin = s.get_double("solver.expansion_margin", 0.2);
  c.solver.expansion_factor = s.get_double("solver.expansion_factor", 3.0);
  c.solver.node_budget = static_cast<std::size_t>(s.get_int("solver.node_budget", 200000));

  c.t_end = s.get_double("run.t_end");
  if (s.has("run.levels")) c.levels = s.get_doubles("run.levels");
  c.snapshots = s.get_bool("run.snapshots", true);
  c.expansion = s.get_bool("run.expansion", true);

  if (s.has("checks.band_eps")) c.band_eps = s.get_doubles("checks.band_eps");
  if (s.has("checks.refined")) c.refined = s.get_doubles("checks.refined");
  c.sandwich_eps = s.get_double("checks.sandwich_eps", 0.0);
  c.sandwich_tol = s.get_double("checks.sandwich_tol", 1e-3);
  c.flatness = s.get_bool("checks.flatness", false);
  if (s.has("checks.fit")) {
    std::istringstream in(s.get_string("checks.fit"));
    FitRequest fr;
    std::string law;
    if (!(in >> law >> fr.t_a >> fr.t_b))
      throw std::invalid_argument("checks.fit wants: <law> <t_a> <t_b>");
    fr.law = growth_law_from_string(law);
    c.fits.push_back(fr);
  }

  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_store(ConfigStore::load(path));
}

void ExperimentConfig::validate() const {
  for (double lam : levels)
    if (!(lam > 0.0 && lam < 1.0))
      throw std::invalid_argument("level values must lie in (0,1)");
  if (levels.empty()) throw std::invalid_argument("at least one level required");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!refined.empty() && refined.size() != 4)
    throw std::invalid_argument("checks.refined wants: r_lo r_hi t_a t_b");
  if (grid_kind != "uniform" && grid_kind != "log_stretched" && grid_kind != "composite")
    throw std::invalid_argument("grid.kind must be uniform, log_stretched or composite");
  if (grid_kind != "composite" && n_intervals <= 0)
    throw std::invalid_argument("grid.n required for uniform and log_stretched grids");
  // Constructing the profile runs its own validation.
  make_profile();
}

InitialProfile ExperimentConfig::make_profile() const {
  if (tail.family == TailFamily::target_curve && x_blend <= 0.0)
    return InitialProfile::from_target_curve(tail.curve, tail.curve_param, tail.fprime0,
                                             plateau, blend_width);
  const double xb = x_blend > 0.0
                        ? x_blend
                        : InitialProfile::default_x_blend(tail, plateau, blend_width);
  return InitialProfile::make(tail, plateau, xb, blend_width);
}

Nonlinearity ExperimentConfig::make_nonlinearity() const {
  return Nonlinearity::logistic(logistic_r);
}

Grid ExperimentConfig::make_grid() const {
  if (grid_kind == "uniform")
    return Grid::build(GridKind::uniform, x_left, x_right, n_intervals);
  if (grid_kind == "log_stretched")
    return Grid::build(GridKind::log_stretched, x_left, x_right, n_intervals, stretch);
  const InitialProfile p = make_profile();
  const double a = anchor > 0.0 ? anchor : p.x_blend() + 10.0;
  return Grid::stretched_with_uniform_head(x_left, a, x_right, dxi, sigma);
}

}  // namespace kpplab
