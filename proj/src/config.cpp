#include "dls/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "dls/errors.hpp"

namespace dls {

namespace {

constexpr std::pair<Experiment, const char*> kExperiments[] = {
    {Experiment::fig4_sub, "fig4_sub"}, {Experiment::fig4_super, "fig4_super"}, {Experiment::fig5, "fig5"},
    {Experiment::fig6, "fig6"},         {Experiment::fig7, "fig7"},             {Experiment::fig8, "fig8"},
    {Experiment::custom_sweep, "custom_sweep"},
};

using Slot = std::variant<double*, int*, std::string*, std::vector<double>*, Experiment*>;

struct Binding {
  const char* section;  // "" for top level
  const char* key;
  Slot slot;
};

std::vector<Binding> bindings(ExperimentConfig& c) {
  auto& cv = c.cavity;
  auto& lz = c.lorentzian;
  auto& sb = c.subluminal;
  auto& o = c.oracle;
  auto& a = c.appendix;
  auto& sw = c.sweep;
  auto& sv = c.solver;
  auto& out = c.output;
  return {
      {"", "experiment", &c.experiment},
      {"cavity", "q", &cv.q},
      {"cavity", "frequency_hz", &cv.frequency_hz},
      {"lorentzian", "g1", &lz.g1},
      {"lorentzian", "gamma1_hz", &lz.gamma1_hz},
      {"lorentzian", "gamma2_hz", &lz.gamma2_hz},
      {"lorentzian", "n1", &lz.n1},
      {"lorentzian", "n2", &lz.n2},
      {"subluminal", "n", &sb.n},
      {"subluminal", "mu", &sb.mu},
      {"subluminal", "gamma_hz", &sb.gamma_hz},
      {"subluminal", "theta", &sb.theta},
      {"oracle", "mu", &o.mu},
      {"oracle", "gamma3_hz", &o.gamma3_hz},
      {"oracle", "gamma1_hz", &o.gamma1_hz},
      {"oracle", "gamma2_hz", &o.gamma2_hz},
      {"oracle", "delta_p1_hz", &o.delta_p1_hz},
      {"oracle", "delta_p2_hz", &o.delta_p2_hz},
      {"oracle", "theta1", &o.theta1},
      {"oracle", "theta2", &o.theta2},
      {"oracle", "g1_q", &o.g1_q},
      {"oracle", "pump_lock_offset_hz", &o.pump_lock_offset_hz},
      {"appendix", "mu", &a.mu},
      {"appendix", "n", &a.n},
      {"appendix", "gamma_eff_hz", &a.gamma_eff_hz},
      {"appendix", "gamma3_hz", &a.gamma3_hz},
      {"appendix", "delta_p_hz", &a.delta_p_hz},
      {"appendix", "omega_p_hz", &a.omega_p_hz},
      {"appendix", "omega_l_hz", &a.omega_l_hz},
      {"appendix", "length_m", &a.length_m},
      {"appendix", "wavelength_m", &a.wavelength_m},
      {"appendix", "reflectivity", &a.reflectivity},
      {"appendix", "fig7_points", &a.fig7_points},
      {"appendix", "fig7_span", &a.fig7_span},
      {"appendix", "sat_delta_p_hz", &a.sat_delta_p_hz},
      {"appendix", "sat_theta", &a.sat_theta},
      {"appendix", "sat_g0_q", &a.sat_g0_q},
      {"appendix", "fig8_points", &a.fig8_points},
      {"sweep", "inv_ng_min", &sw.inv_ng_min},
      {"sweep", "inv_ng_max", &sw.inv_ng_max},
      {"sweep", "inv_ng_points", &sw.inv_ng_points},
      {"sweep", "sub_inv_ng_min", &sw.sub_inv_ng_min},
      {"sweep", "sub_inv_ng_max", &sw.sub_inv_ng_max},
      {"sweep", "delta_p_hz", &sw.delta_p_hz},
      {"sweep", "small_delta_p_hz", &sw.small_delta_p_hz},
      {"sweep", "oracle_points", &sw.oracle_points},
      {"sweep", "custom_model", &sw.custom_model},
      {"solver", "tolerance_hz", &sv.tolerance_hz},
      {"solver", "field_tolerance", &sv.field_tolerance},
      {"solver", "max_iter", &sv.max_iter},
      {"solver", "relaxation", &sv.relaxation},
      {"solver", "agreement_band", &sv.agreement_band},
      {"output", "dir", &out.dir},
      {"output", "precision", &out.precision},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Line of `key` within `section`, for messages; 0 if not found.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line, current;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t[0] == '[') {
      current = trim(t.substr(1, t.find(']') - 1));
      if (key.empty() && current == section) return n;
      continue;
    }
    if (!key.empty() && current == section && trim(t.substr(0, t.find('='))) == key) return n;
  }
  return 0;
}

std::string where(const std::string& text, const std::string& section, const std::string& key) {
  const int n = line_of(text, section, key);
  std::string name = section.empty() ? key : key.empty() ? "[" + section + "]" : section + "." + key;
  return n > 0 ? "line " + std::to_string(n) + ": " + name : name;
}

double parse_double(const std::string& raw, const std::string& loc) {
  const std::string s = trim(raw);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(loc + ": expected a finite number, got '" + s + "'");
  return v;
}

int parse_int(const std::string& raw, const std::string& loc) {
  const std::string s = trim(raw);
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || v < INT32_MIN || v > INT32_MAX)
    throw ConfigError(loc + ": expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void assign(const Slot& slot, const std::string& value, const std::string& loc) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          *p = parse_double(value, loc);
        } else if constexpr (std::is_same_v<T, int>) {
          *p = parse_int(value, loc);
        } else if constexpr (std::is_same_v<T, std::string>) {
          *p = trim(value);
        } else if constexpr (std::is_same_v<T, Experiment>) {
          try {
            *p = parse_experiment(trim(value));
          } catch (const ConfigError& e) {
            throw ConfigError(loc + ": " + e.what());
          }
        } else {
          p->clear();
          std::istringstream in(value);
          for (std::string item; std::getline(in, item, ',');) p->push_back(parse_double(item, loc));
        }
      },
      slot);
}

std::string render(const Slot& slot) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          return fmt_double(*p);
        } else if constexpr (std::is_same_v<T, int>) {
          return std::to_string(*p);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, Experiment>) {
          return experiment_name(*p);
        } else {
          std::string s;
          for (std::size_t i = 0; i < p->size(); ++i) s += (i ? ", " : "") + fmt_double((*p)[i]);
          return s;
        }
      },
      slot);
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(std::string(field) + ": " + what);
}

}  // namespace

const char* experiment_name(Experiment e) {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return name;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kExperiments)
    if (name == n) return k;
  std::string known;
  for (const auto& [k, n] : kExperiments) known += std::string(known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown experiment '" + name + "' (expected one of " + known + ")");
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig cfg;
  const auto table = bindings(cfg);
  std::map<std::string, std::map<std::string, const Binding*>> index;
  for (const auto& b : table) index[b.section][b.key] = &b;

  for (const auto& [name, node] : tree) {
    const bool is_section = !node.empty() || index.count(name);
    if (!is_section || name.empty()) {
      const auto it = index[""].find(name);
      if (it == index[""].end()) throw ConfigError(where(text, "", name) + ": unknown key");
      assign(it->second->slot, node.data(), where(text, "", name));
      continue;
    }
    const auto& keys = index[name];
    if (!node.data().empty()) throw ConfigError(where(text, "", name) + ": unknown key");
    for (const auto& [key, leaf] : node) {
      const auto it = keys.find(key);
      if (it == keys.end()) throw ConfigError(where(text, name, key) + ": unknown key");
      assign(it->second->slot, leaf.data(), where(text, name, key));
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate(const ExperimentConfig& c) {
  auto pos = [](double v) { return std::isfinite(v) && v > 0; };
  require(pos(c.cavity.q), "cavity.q", "must be positive");
  require(pos(c.cavity.frequency_hz), "cavity.frequency_hz", "must be positive");

  require(pos(c.lorentzian.g1), "lorentzian.g1", "must be positive");
  require(pos(c.lorentzian.gamma1_hz), "lorentzian.gamma1_hz", "must be positive");
  require(pos(c.lorentzian.gamma2_hz), "lorentzian.gamma2_hz", "must be positive");
  require(pos(c.lorentzian.n1), "lorentzian.n1", "must be positive");
  require(std::isfinite(c.lorentzian.n2) && c.lorentzian.n2 >= 0, "lorentzian.n2", "must be non-negative");

  require(pos(c.subluminal.n), "subluminal.n", "must be positive");
  require(pos(c.subluminal.mu), "subluminal.mu", "must be positive");
  require(pos(c.subluminal.gamma_hz), "subluminal.gamma_hz", "must be positive");
  require(pos(c.subluminal.theta) && c.subluminal.theta < 1, "subluminal.theta", "must lie in (0, 1)");

  const auto& o = c.oracle;
  require(pos(o.mu), "oracle.mu", "must be positive");
  require(pos(o.gamma3_hz), "oracle.gamma3_hz", "must be positive");
  require(pos(o.gamma1_hz), "oracle.gamma1_hz", "must be positive");
  require(pos(o.gamma2_hz), "oracle.gamma2_hz", "must be positive");
  require(pos(o.delta_p1_hz), "oracle.delta_p1_hz", "must be positive");
  require(pos(o.delta_p2_hz), "oracle.delta_p2_hz", "must be positive");
  require(pos(o.theta1) && o.theta1 < 1, "oracle.theta1", "must lie in (0, 1)");
  require(pos(o.theta2) && o.theta2 < 1, "oracle.theta2", "must lie in (0, 1)");
  require(pos(o.g1_q) && o.g1_q > 1, "oracle.g1_q", "must exceed 1 (above threshold)");
  require(std::isfinite(o.pump_lock_offset_hz), "oracle.pump_lock_offset_hz", "must be finite");

  const auto& a = c.appendix;
  require(pos(a.mu), "appendix.mu", "must be positive");
  require(pos(a.n), "appendix.n", "must be positive");
  require(pos(a.gamma_eff_hz), "appendix.gamma_eff_hz", "must be positive");
  require(pos(a.gamma3_hz), "appendix.gamma3_hz", "must be positive");
  require(pos(a.delta_p_hz), "appendix.delta_p_hz", "must be positive");
  require(pos(a.omega_p_hz), "appendix.omega_p_hz", "must be positive");
  require(pos(a.omega_l_hz), "appendix.omega_l_hz", "must be positive");
  require(pos(a.length_m), "appendix.length_m", "must be positive");
  require(pos(a.wavelength_m), "appendix.wavelength_m", "must be positive");
  require(pos(a.reflectivity) && a.reflectivity < 1, "appendix.reflectivity", "must lie in (0, 1)");
  require(a.fig7_points >= 2, "appendix.fig7_points", "must be at least 2");
  require(pos(a.fig7_span), "appendix.fig7_span", "must be positive");
  require(pos(a.sat_delta_p_hz), "appendix.sat_delta_p_hz", "must be positive");
  require(pos(a.sat_theta) && a.sat_theta < 1, "appendix.sat_theta", "must lie in (0, 1)");
  require(pos(a.sat_g0_q) && a.sat_g0_q > 1, "appendix.sat_g0_q", "must exceed 1 (above threshold)");
  require(a.fig8_points >= 3, "appendix.fig8_points", "must be at least 3");

  const auto& s = c.sweep;
  require(pos(s.inv_ng_min), "sweep.inv_ng_min", "must be positive");
  require(pos(s.inv_ng_max) && s.inv_ng_max >= s.inv_ng_min, "sweep.inv_ng_max", "must be >= sweep.inv_ng_min");
  require(s.inv_ng_points >= 1, "sweep.inv_ng_points", "must be at least 1");
  require(pos(s.sub_inv_ng_min), "sweep.sub_inv_ng_min", "must be positive");
  require(pos(s.sub_inv_ng_max) && s.sub_inv_ng_max < 1 && s.sub_inv_ng_max >= s.sub_inv_ng_min,
          "sweep.sub_inv_ng_max", "must lie in [sweep.sub_inv_ng_min, 1)");
  require(!s.delta_p_hz.empty(), "sweep.delta_p_hz", "must list at least one value");
  for (double v : s.delta_p_hz) require(std::isfinite(v) && v != 0, "sweep.delta_p_hz", "values must be nonzero");
  require(std::isfinite(s.small_delta_p_hz) && s.small_delta_p_hz != 0, "sweep.small_delta_p_hz",
          "must be nonzero");
  require(s.oracle_points >= 1, "sweep.oracle_points", "must be at least 1");
  require(s.custom_model == "linear" || s.custom_model == "subluminal" || s.custom_model == "lorentzian",
          "sweep.custom_model", "must be linear, subluminal or lorentzian");

  require(pos(c.solver.tolerance_hz), "solver.tolerance_hz", "must be positive");
  require(pos(c.solver.field_tolerance), "solver.field_tolerance", "must be positive");
  require(c.solver.max_iter >= 1, "solver.max_iter", "must be at least 1");
  require(pos(c.solver.relaxation) && c.solver.relaxation <= 1, "solver.relaxation", "must lie in (0, 1]");
  require(pos(c.solver.agreement_band), "solver.agreement_band", "must be positive");

  require(!c.output.dir.empty(), "output.dir", "must not be empty");
  require(c.output.precision >= 1 && c.output.precision <= 17, "output.precision", "must lie in [1, 17]");
}

std::string format_config(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  std::ostringstream os;
  std::string section = "";
  for (const auto& b : bindings(copy)) {
    if (b.section != section) {
      section = b.section;
      os << "\n[" << section << "]\n";
    }
    os << b.key << " = " << render(b.slot) << '\n';
  }
  return os.str();
}

}  // namespace dls
