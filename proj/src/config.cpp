#include "fockcap/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace fockcap {

ConfigError::ConfigError(const std::string &message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string &v, const std::string &key, int line) {
  const char *begin = v.c_str();
  char *end = nullptr;
  errno = 0;
  const double d = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  return d;
}

long long to_integer(const std::string &v, const std::string &key, int line) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'", line);
  return out;
}

int to_int(const std::string &v, const std::string &key, int line) {
  const long long x = to_integer(v, key, line);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(key + ": integer out of range", line);
  return static_cast<int>(x);
}

bool to_bool(const std::string &v, const std::string &key, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'", line);
}

std::string fmt(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

template <class T> std::string join(const std::vector<T> &xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += fmt(xs[i]);
    else if constexpr (std::is_same_v<T, std::string>)
      out += xs[i];
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

std::string_view orbital_kind_name(OrbitalConfig::Kind k) {
  switch (k) {
  case OrbitalConfig::Kind::eigen: return "eigen";
  case OrbitalConfig::Kind::gaussian: return "gaussian";
  case OrbitalConfig::Kind::file: return "file";
  }
  return "gaussian";
}

std::string_view initial_kind_name(InitialConfig::Kind k) {
  switch (k) {
  case InitialConfig::Kind::slater: return "slater";
  case InitialConfig::Kind::ground_state: return "ground_state";
  case InitialConfig::Kind::custom: return "custom";
  }
  return "slater";
}

using Setter = std::function<void(ExperimentConfig &, const std::string &, const std::string &, int)>;
using Getter = std::function<std::string(const ExperimentConfig &)>;

struct Field {
  std::string key; // section.name
  Setter set;
  Getter get;
  bool required = false;
};

#define FC_DOUBLE(KEY, MEMBER, REQ)                                                                \
  Field {                                                                                          \
    KEY, [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {              \
      c.MEMBER = to_double(v, k, l);                                                               \
    },                                                                                             \
        [](const ExperimentConfig &c) { return fmt(c.MEMBER); }, REQ                               \
  }
#define FC_INT(KEY, MEMBER, REQ)                                                                   \
  Field {                                                                                          \
    KEY, [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {              \
      c.MEMBER = to_int(v, k, l);                                                                  \
    },                                                                                             \
        [](const ExperimentConfig &c) { return std::to_string(c.MEMBER); }, REQ                    \
  }
#define FC_BOOL(KEY, MEMBER)                                                                       \
  Field {                                                                                          \
    KEY, [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {              \
      c.MEMBER = to_bool(v, k, l);                                                                 \
    },                                                                                             \
        [](const ExperimentConfig &c) { return std::string(c.MEMBER ? "true" : "false"); }, false  \
  }
#define FC_STRING(KEY, MEMBER)                                                                     \
  Field {                                                                                          \
    KEY, [](ExperimentConfig &c, const std::string &v, const std::string &, int) { c.MEMBER = v; },\
        [](const ExperimentConfig &c) { return c.MEMBER; }, false                                  \
  }

void add_orbital_fields(std::vector<Field> &fs, const std::string &prefix,
                        OrbitalConfig InitialConfig::*member) {
  fs.push_back({prefix + ".kind",
                [member](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                  auto &o = c.initial.*member;
                  if (v == "eigen") o.kind = OrbitalConfig::Kind::eigen;
                  else if (v == "gaussian") o.kind = OrbitalConfig::Kind::gaussian;
                  else if (v == "file") o.kind = OrbitalConfig::Kind::file;
                  else throw ConfigError(k + ": expected eigen, gaussian or file, got '" + v + "'", l);
                },
                [member](const ExperimentConfig &c) {
                  return std::string(orbital_kind_name((c.initial.*member).kind));
                }});
  fs.push_back({prefix + ".levels",
                [member](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                  auto &o = c.initial.*member;
                  o.levels.clear();
                  for (const auto &s : split_list(v)) o.levels.push_back(to_int(s, k, l));
                },
                [member](const ExperimentConfig &c) { return join((c.initial.*member).levels); }});
  fs.push_back({prefix + ".coefficients",
                [member](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                  auto &o = c.initial.*member;
                  o.coefficients.clear();
                  for (const auto &s : split_list(v)) o.coefficients.push_back(to_double(s, k, l));
                },
                [member](const ExperimentConfig &c) { return join((c.initial.*member).coefficients); }});
  const std::pair<const char *, double OrbitalConfig::*> scalars[] = {
      {".center", &OrbitalConfig::center}, {".k0", &OrbitalConfig::k0}, {".width", &OrbitalConfig::width}};
  for (const auto &[suffix, field] : scalars) {
    fs.push_back({prefix + suffix,
                  [member, field](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                    (c.initial.*member).*field = to_double(v, k, l);
                  },
                  [member, field](const ExperimentConfig &c) { return fmt((c.initial.*member).*field); }});
  }
  fs.push_back({prefix + ".path",
                [member](ExperimentConfig &c, const std::string &v, const std::string &, int) {
                  (c.initial.*member).path = v;
                },
                [member](const ExperimentConfig &c) { return (c.initial.*member).path; }});
}

const std::vector<Field> &schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> fs{
        FC_STRING("run.name", name),
        FC_DOUBLE("grid.x_max", grid.x_max, true),
        FC_INT("grid.n_points", grid.n_points, true),
        FC_DOUBLE("grid.x_offset", grid.x_offset, false),
        FC_DOUBLE("grid.mass", grid.mass, false),
        Field{"potential.kind",
              [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                try {
                  c.potential.kind = potential_kind_from_string(v);
                } catch (const std::invalid_argument &e) {
                  throw ConfigError(k + ": " + e.what(), l);
                }
              },
              [](const ExperimentConfig &c) { return std::string(to_string(c.potential.kind)); }},
        FC_DOUBLE("potential.depth", potential.depth, false),
        FC_DOUBLE("potential.center", potential.center, false),
        FC_DOUBLE("potential.width", potential.width, false),
        FC_DOUBLE("potential.softening_sq", potential.softening_sq, false),
        FC_DOUBLE("interaction.strength", interaction.strength, false),
        FC_DOUBLE("interaction.softening", interaction.softening, false),
        Field{"cap.kind",
              [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                try {
                  c.cap.kind = cap_kind_from_string(v);
                } catch (const std::invalid_argument &e) {
                  throw ConfigError(k + ": " + e.what(), l);
                }
              },
              [](const ExperimentConfig &c) { return std::string(to_string(c.cap.kind)); }},
        FC_DOUBLE("cap.strength", cap.strength, false),
        FC_INT("cap.order", cap.order, false),
        FC_DOUBLE("cap.onset", cap.onset, false),
        FC_DOUBLE("cap.accuracy", cap.accuracy, false),
        FC_DOUBLE("cap.k_min", cap.k_min, false),
        FC_BOOL("pulse.enabled", pulse.enabled),
        FC_DOUBLE("pulse.peak_field", pulse.peak_field, false),
        FC_DOUBLE("pulse.frequency", pulse.frequency, false),
        FC_DOUBLE("pulse.n_cycles", pulse.n_cycles, false),
        Field{"initial.kind",
              [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                if (v == "slater") c.initial.kind = InitialConfig::Kind::slater;
                else if (v == "ground_state") c.initial.kind = InitialConfig::Kind::ground_state;
                else if (v == "custom") c.initial.kind = InitialConfig::Kind::custom;
                else throw ConfigError(k + ": expected slater, ground_state or custom, got '" + v + "'", l);
              },
              [](const ExperimentConfig &c) { return std::string(initial_kind_name(c.initial.kind)); },
              true},
        Field{"initial.spin",
              [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                if (v == "triplet") c.initial.exchange = Exchange::antisymmetric;
                else if (v == "singlet") c.initial.exchange = Exchange::symmetric;
                else throw ConfigError(k + ": expected triplet or singlet, got '" + v + "'", l);
              },
              [](const ExperimentConfig &c) {
                return std::string(c.initial.exchange == Exchange::symmetric ? "singlet" : "triplet");
              },
              true},
        FC_STRING("initial.path", initial.path),
    };
    add_orbital_fields(fs, "initial.alpha", &InitialConfig::alpha);
    add_orbital_fields(fs, "initial.beta", &InitialConfig::beta);
    const std::vector<Field> rest{
        FC_DOUBLE("groundstate.dtau", groundstate.dtau, false),
        FC_DOUBLE("groundstate.tolerance", groundstate.tolerance, false),
        FC_INT("groundstate.max_iterations", groundstate.max_iterations, false),
        FC_DOUBLE("time.dt", time.dt, true),
        FC_DOUBLE("time.t_end", time.t_end, true),
        FC_INT("time.output_stride", time.output_stride, false),
        FC_INT("time.snapshot_stride", time.snapshot_stride, false),
        FC_INT("time.spectrum_stride", time.spectrum_stride, false),
        FC_DOUBLE("checks.trace_drift_bound", checks.trace_drift_bound, false),
        FC_BOOL("checks.eigen_check", checks.eigen_check),
        FC_BOOL("output.matrices", output.matrices),
        FC_DOUBLE("reference.domain_factor", reference.domain_factor, false),
        FC_BOOL("reference.stop_at_contact", reference.stop_at_contact),
        FC_STRING("sweep.key", sweep.key),
        Field{"sweep.values",
              [](ExperimentConfig &c, const std::string &v, const std::string &, int) {
                c.sweep.values = split_list(v);
              },
              [](const ExperimentConfig &c) { return join(c.sweep.values); }},
        Field{"oracle.modes",
              [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                c.oracle.modes.clear();
                for (const auto &s : split_list(v)) c.oracle.modes.push_back(to_int(s, k, l));
              },
              [](const ExperimentConfig &c) { return join(c.oracle.modes); }},
        Field{"oracle.seeds",
              [](ExperimentConfig &c, const std::string &v, const std::string &k, int l) {
                c.oracle.seeds.clear();
                for (const auto &s : split_list(v)) {
                  const long long x = to_integer(s, k, l);
                  if (x < 0) throw ConfigError(k + ": seeds must be non-negative", l);
                  c.oracle.seeds.push_back(static_cast<unsigned long long>(x));
                }
              },
              [](const ExperimentConfig &c) { return join(c.oracle.seeds); }},
        FC_DOUBLE("oracle.dt", oracle.dt, false),
        FC_DOUBLE("oracle.t_end", oracle.t_end, false),
    };
    fs.insert(fs.end(), rest.begin(), rest.end());
    return fs;
  }();
  return fields;
}

#undef FC_DOUBLE
#undef FC_INT
#undef FC_BOOL
#undef FC_STRING

const Field *find_field(const std::string &key) {
  for (const auto &f : schema())
    if (f.key == key) return &f;
  return nullptr;
}

void check_orbital(const OrbitalConfig &o, const std::string &name) {
  switch (o.kind) {
  case OrbitalConfig::Kind::eigen:
    if (o.levels.empty()) throw ConfigError(name + ".levels: at least one level is required");
    if (o.levels.size() != o.coefficients.size())
      throw ConfigError(name + ": levels and coefficients must have the same length");
    for (int lv : o.levels)
      if (lv < 0) throw ConfigError(name + ".levels: levels must be non-negative");
    break;
  case OrbitalConfig::Kind::gaussian:
    if (!(o.width > 0.0)) throw ConfigError(name + ".width: must be positive");
    break;
  case OrbitalConfig::Kind::file:
    if (o.path.empty()) throw ConfigError(name + ".path: required for file orbitals");
    break;
  }
}

void validate(const ExperimentConfig &c) {
  auto wrap = [](auto &&fn) {
    try {
      fn();
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
  };
  if (!(c.grid.x_max > 0.0)) throw ConfigError("grid.x_max: must be positive");
  if (c.grid.n_points < 4) throw ConfigError("grid.n_points: must be at least 4");
  if (!(c.grid.mass > 0.0)) throw ConfigError("grid.mass: must be positive");
  const Grid g = c.make_grid();
  wrap([&] { c.potential.validate(); });
  wrap([&] { c.interaction.validate(); });
  wrap([&] { c.cap.validate(g); });
  if (c.pulse.enabled) {
    if (!(c.pulse.frequency > 0.0)) throw ConfigError("pulse.frequency: must be positive");
    if (!(c.pulse.n_cycles > 0.0)) throw ConfigError("pulse.n_cycles: must be positive");
  }
  if (!(c.time.dt > 0.0)) throw ConfigError("time.dt: must be positive");
  if (!(c.time.t_end >= 0.0)) throw ConfigError("time.t_end: must be non-negative");
  if (c.time.output_stride < 1) throw ConfigError("time.output_stride: must be at least 1");
  if (c.time.snapshot_stride < 0) throw ConfigError("time.snapshot_stride: must be non-negative");
  if (c.time.snapshot_stride % c.time.output_stride != 0)
    throw ConfigError("time.snapshot_stride: must be a multiple of time.output_stride");
  if (c.time.spectrum_stride < 0) throw ConfigError("time.spectrum_stride: must be non-negative");
  switch (c.initial.kind) {
  case InitialConfig::Kind::slater:
    check_orbital(c.initial.alpha, "initial.alpha");
    check_orbital(c.initial.beta, "initial.beta");
    break;
  case InitialConfig::Kind::custom:
    if (c.initial.path.empty()) throw ConfigError("initial.path: required for custom initial states");
    break;
  case InitialConfig::Kind::ground_state: break;
  }
  if (!(c.groundstate.dtau > 0.0)) throw ConfigError("groundstate.dtau: must be positive");
  if (!(c.groundstate.tolerance > 0.0)) throw ConfigError("groundstate.tolerance: must be positive");
  if (c.groundstate.max_iterations < 1) throw ConfigError("groundstate.max_iterations: must be positive");
  if (!(c.checks.trace_drift_bound > 0.0)) throw ConfigError("checks.trace_drift_bound: must be positive");
  if (!(c.reference.domain_factor >= 1.0)) throw ConfigError("reference.domain_factor: must be >= 1");
  if (!c.sweep.key.empty()) {
    if (!find_field(c.sweep.key) || c.sweep.key.rfind("sweep.", 0) == 0)
      throw ConfigError("sweep.key: unknown key '" + c.sweep.key + "'");
    if (c.sweep.values.empty()) throw ConfigError("sweep.values: at least one value is required");
  }
  for (int m : c.oracle.modes)
    if (m < 4 || m > 8) throw ConfigError("oracle.modes: each entry must lie in [4, 8]");
  if (!(c.oracle.dt > 0.0)) throw ConfigError("oracle.dt: must be positive");
  if (!(c.oracle.t_end > 0.0)) throw ConfigError("oracle.t_end: must be positive");
}

} // namespace

const std::vector<std::string> &required_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto &f : schema())
      if (f.required) out.push_back(f.key);
    return out;
  }();
  return keys;
}

Grid ExperimentConfig::make_grid() const { return fockcap::make_grid(grid.x_max, grid.n_points, grid.x_offset); }

std::optional<PulseSpec> ExperimentConfig::pulse_spec() const {
  if (!pulse.enabled) return std::nullopt;
  return pulse_from_cycles(pulse.peak_field, pulse.frequency, pulse.n_cycles);
}

DiscreteModel ExperimentConfig::model() const {
  return sample_model(make_grid(), grid.mass, potential, interaction, cap, pulse_spec());
}

ImaginaryTimeOptions ExperimentConfig::imaginary_time_options() const {
  ImaginaryTimeOptions o;
  o.dtau = groundstate.dtau;
  o.tolerance = groundstate.tolerance;
  o.max_iterations = groundstate.max_iterations;
  return o;
}

InvariantOptions ExperimentConfig::invariant_options() const {
  InvariantOptions o;
  o.trace_drift_bound = checks.trace_drift_bound;
  o.eigen_check = checks.eigen_check;
  return o;
}

ExperimentConfig parse_config(const std::string &text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (name.empty()) throw ConfigError("missing key before '='", line_no);
    if (section.empty()) throw ConfigError("key '" + name + "' appears before any [section]", line_no);
    const std::string key = section + "." + name;
    const Field *f = find_field(key);
    if (!f) throw ConfigError("unknown key '" + name + "' in section [" + section + "]", line_no);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);
    f->set(c, value, key, line_no);
  }
  std::vector<std::string> missing;
  for (const auto &k : required_keys())
    if (!seen.count(k)) missing.push_back(k);
  if (!missing.empty()) throw ConfigError("missing required keys: " + join(missing));
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig &config) {
  std::string out;
  std::string section;
  for (const auto &f : schema()) {
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    const std::string name = f.key.substr(dot + 1);
    const std::string value = f.get(config);
    if (value.empty()) continue;
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += name + " = " + value + "\n";
  }
  return out;
}

ExperimentConfig with_override(const ExperimentConfig &config, const std::string &key,
                               const std::string &value) {
  const Field *f = find_field(key);
  if (!f) throw ConfigError("unknown key '" + key + "'");
  ExperimentConfig c = config;
  f->set(c, trim(value), key, 0);
  validate(c);
  return c;
}

} // namespace fockcap
