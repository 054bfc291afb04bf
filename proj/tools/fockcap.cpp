// fockcap command-line driver.
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "fockcap/experiment.hpp"

namespace {

using namespace fockcap;

int report_run(const RunResult &r) {
  if (r.trajectory.rows.empty()) return 0;
  const auto &last = r.trajectory.rows.back();
  std::printf("t = %.6g  P2 = %.6f  P1 = %.6f  P0 = %.6f  cond_purity_1 = %.4f  trace_drift = %.2e\n", last.t,
              last.p2, last.p1, last.p0, last.cond_purity_1, last.trace_drift);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fock-space Lindblad engine for two particles under complex absorbing potentials"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  bool dry_run = false;
  int jobs = 1;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };

  auto *gs = app.add_subcommand("groundstate", "Imaginary-time ground states of the static model");
  add_common(gs);
  auto *run = app.add_subcommand("run", "Propagate the configured experiment");
  add_common(run);
  run->add_flag("--dry-run", dry_run, "Write the manifest only");
  auto *ref = app.add_subcommand("reference", "Absorber-free reference on an enlarged domain");
  add_common(ref);
  auto *orc = app.add_subcommand("oracle", "Compare the engine with the dense Fock-space generator");
  add_common(orc);
  orc->add_option("--jobs", jobs, "Parallel cases")->check(CLI::PositiveNumber);
  auto *sweep = app.add_subcommand("sweep", "Run the config once per sweep value");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig config = load_config(config_path);
    if (gs->parsed()) {
      const auto r = run_groundstate(config, out_dir);
      std::printf("two-body E = %.10f (%d iterations)\none-body E = %.10f (%d iterations)\n", r.two_body_energy,
                  r.two_body_iterations, r.one_body_energy, r.one_body_iterations);
      return 0;
    }
    if (run->parsed()) return report_run(run_experiment(config, out_dir, dry_run));
    if (ref->parsed()) {
      const auto r = run_reference(config, out_dir, &std::cerr);
      std::printf("reference: %zu snapshots, final norm %.12f, boundary contact %s\n", r.snapshots.size(),
                  r.norm.empty() ? 0.0 : r.norm.back(),
                  r.contact_time < 0.0 ? "none" : std::to_string(r.contact_time).c_str());
      return 0;
    }
    if (orc->parsed()) {
      bool ok = true;
      for (const auto &r : run_oracle(config, out_dir, jobs)) {
        std::printf("%s\n", format_report(r).c_str());
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
    if (sweep->parsed()) {
      bool ok = true;
      for (const auto &e : run_sweep(config, out_dir, jobs)) {
        if (!e.error.empty()) {
          std::printf("%s = %s: error: %s\n", config.sweep.key.c_str(), e.value.c_str(), e.error.c_str());
          ok = false;
        } else {
          std::printf("%s = %s: P2 = %.6f P1 = %.6f P0 = %.6f\n", config.sweep.key.c_str(), e.value.c_str(),
                      e.final_row.p2, e.final_row.p1, e.final_row.p0);
        }
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "fockcap: %s\n", e.what());
    return 1;
  }
  return 0;
}
