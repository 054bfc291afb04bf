#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockcap/cap.hpp"
#include "fockcap/dynamics.hpp"
#include "fockcap/potentials.hpp"

namespace fockcap {

/// Parse or validation failure. `line` is 0 when the problem is not tied to
/// a single line (missing keys, cross-field constraints).
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &message, int line = 0);
  int line() const { return line_; }

private:
  int line_;
};

struct GridConfig {
  double x_max = 0.0;
  int n_points = 0;
  double x_offset = 0.0;
  double mass = 1.0;
  bool operator==(const GridConfig &) const = default;
};

struct PulseConfig {
  bool enabled = false;
  double peak_field = 0.0;
  double frequency = 0.0;
  double n_cycles = 0.0;
  bool operator==(const PulseConfig &) const = default;
};

/// One orbital of a product initial state.
///   eigen:    sum_i coefficients[i] * phi_{levels[i]} of the static one-body
///             Hamiltonian, renormalised.
///   gaussian: gaussian_packet(center, k0, width).
///   file:     two columns (re im) per grid point, renormalised.
struct OrbitalConfig {
  enum class Kind { eigen, gaussian, file };
  Kind kind = Kind::gaussian;
  std::vector<int> levels;
  std::vector<double> coefficients;
  double center = 0.0;
  double k0 = 0.0;
  double width = 1.0;
  std::string path;
  bool operator==(const OrbitalConfig &) const = default;
};

struct InitialConfig {
  enum class Kind { slater, ground_state, custom };
  Kind kind = Kind::slater;
  Exchange exchange = Exchange::antisymmetric;
  OrbitalConfig alpha;
  OrbitalConfig beta;
  std::string path; // custom: N x N grid function, "re im" per line, row-major
  bool operator==(const InitialConfig &) const = default;
};

struct TimeConfig {
  double dt = 0.0;
  double t_end = 0.0;
  int output_stride = 1;
  int snapshot_stride = 0;   // steps between snapshots; 0 disables
  int spectrum_stride = 1;   // outputs between rho1 eigen-decompositions; 0 disables
  bool operator==(const TimeConfig &) const = default;
};

struct OutputConfig {
  bool matrices = false; // |psi2| and |rho1| in snapshots
  bool operator==(const OutputConfig &) const = default;
};

struct ReferenceConfig {
  double domain_factor = 2.0;
  bool stop_at_contact = true;
  bool operator==(const ReferenceConfig &) const = default;
};

struct SweepConfig {
  std::string key; // dotted "section.key"
  std::vector<std::string> values;
  bool operator==(const SweepConfig &) const = default;
};

struct OracleConfig {
  std::vector<int> modes{4, 6};
  std::vector<unsigned long long> seeds{1, 2, 3};
  double dt = 0.02;
  double t_end = 1.0;
  bool operator==(const OracleConfig &) const = default;
};

struct GroundStateConfig {
  double dtau = 0.01;
  double tolerance = 1e-10;
  int max_iterations = 200000;
  bool operator==(const GroundStateConfig &) const = default;
};

struct ChecksConfig {
  double trace_drift_bound = 1e-4;
  bool eigen_check = false;
  bool operator==(const ChecksConfig &) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  GridConfig grid;
  PotentialSpec potential;
  InteractionSpec interaction;
  CapSpec cap;
  PulseConfig pulse;
  InitialConfig initial;
  GroundStateConfig groundstate;
  TimeConfig time;
  ChecksConfig checks;
  OutputConfig output;
  ReferenceConfig reference;
  SweepConfig sweep;
  OracleConfig oracle;

  bool operator==(const ExperimentConfig &) const = default;

  Grid make_grid() const;
  std::optional<PulseSpec> pulse_spec() const;
  DiscreteModel model() const;
  ImaginaryTimeOptions imaginary_time_options() const;
  InvariantOptions invariant_options() const;
};

/// Parses the flat `key = value` format: `#` starts a comment, `[section]`
/// headers group keys, and every key may appear at most once.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig &config);

/// Applies a single dotted override ("cap.strength", "8") and revalidates.
ExperimentConfig with_override(const ExperimentConfig &config, const std::string &key,
                               const std::string &value);

/// Keys that must appear in every config.
const std::vector<std::string> &required_keys();

} // namespace fockcap
