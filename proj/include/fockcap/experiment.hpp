#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fockcap/config.hpp"
#include "fockcap/dynamics.hpp"
#include "fockcap/oracle.hpp"

namespace fockcap {

std::string code_version();

/// Density snapshot. Text form: four header lines `t`, `N`, `h`, `x_offset`
/// (name and value), then blocks `n_two`, `n_one`, `n_total` with one value
/// per line, and optionally `abs_psi2` and `abs_rho1` (N*N values, row-major).
struct Snapshot {
  double t = 0.0;
  int n = 0;
  double h = 0.0;
  double x_offset = 0.0;
  RVector n_two, n_one, n_total;
  RMatrix abs_psi2, abs_rho1; // empty unless requested

  void write(std::ostream &out) const;
  static Snapshot read(std::istream &in);
};

Snapshot make_snapshot(const SystemState &state, const Grid &grid, bool matrices);

/// Orbital from its config on the static model (no absorber, no field).
CVector build_orbital(const OrbitalConfig &spec, const DiscreteModel &model);

struct PreparedRun {
  DiscreteModel model;
  TwoBodyState initial;
  double ground_energy = 0.0; // set for ground_state initial states
  bool has_ground_energy = false;
};

/// Samples the model and builds the initial two-body state.
PreparedRun prepare_run(const ExperimentConfig &config);

using SnapshotHook = std::function<void(const Snapshot &)>;

struct RunResult {
  Trajectory trajectory;
  TwoBodyState initial;
  std::vector<Snapshot> snapshots;
};

/// Full engine run. With a non-empty out_dir writes manifest.txt,
/// observables.csv, diagnostics.csv and snapshots/; with dry_run only the
/// manifest is written and no propagation happens.
RunResult run_experiment(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                         bool dry_run = false);

struct ReferenceResult {
  std::vector<Snapshot> snapshots; // restricted to the original domain
  std::vector<double> times;
  std::vector<double> norm;             // h^2 sum |psi2|^2 on the enlarged grid
  std::vector<double> boundary_density; // max total density on the outer edge points
  double contact_time = -1.0;           // first time boundary density exceeds 1e-8, or -1
};

/// Absorber-free propagation of psi2 on a domain enlarged by
/// reference.domain_factor around the original one; densities are restricted
/// to the original points and emitted at the config's snapshot stride (every
/// output row when the stride is zero). With reference.stop_at_contact the
/// run ends at the first snapshot after boundary contact.
ReferenceResult run_reference(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                              std::ostream *warnings = nullptr);

/// Same config on a domain enlarged by `factor` with the absorber kept at the
/// new edges; the initial state is built on the enlarged grid.
ExperimentConfig enlarged_domain(const ExperimentConfig &config, double factor);

struct GroundStateReport {
  double two_body_energy = 0.0;
  int two_body_iterations = 0;
  double one_body_energy = 0.0;
  int one_body_iterations = 0;
};

/// Imaginary-time ground states of the two-body and one-body static models.
/// Writes groundstate.txt and psi2.txt (usable as a custom initial state).
GroundStateReport run_groundstate(const ExperimentConfig &config, const std::filesystem::path &out_dir);

/// All oracle cases (modes x seeds x both exchange sectors), `jobs` at a time.
std::vector<OracleCaseReport> run_oracle(const ExperimentConfig &config,
                                         const std::filesystem::path &out_dir, int jobs = 1);

struct SweepEntry {
  std::string value;
  ObservableRow final_row;
  std::string error; // non-empty if the entry failed
};

/// One run per sweep value in out_dir/<key>=<value>/, `jobs` at a time.
std::vector<SweepEntry> run_sweep(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                                  int jobs = 1);

void write_observables_csv(std::ostream &out, const std::vector<ObservableRow> &rows);

/// Custom state files: "re im" per line.
CMatrix read_grid_function(const std::filesystem::path &path, int rows, int cols);
void write_grid_function(const std::filesystem::path &path, const CMatrix &m);

} // namespace fockcap
