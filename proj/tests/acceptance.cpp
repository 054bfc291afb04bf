// Acceptance checks on the bundled configs. Prints one PASS/FAIL line per
// criterion, preceded by indented detail lines. Arguments select a subset
// (e.g. `acceptance 4 6`); no arguments runs everything.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fockcap/experiment.hpp"

using namespace fockcap;
namespace fs = std::filesystem;

namespace {

// criterion 1
constexpr double kHeliumEnergy = -2.904, kIonEnergy = -2.000, kEnergyTol = 0.005;
constexpr int kGroundStateGrid = 512;
// criterion 2
constexpr double kCollisionP1 = 0.92, kCollisionP1Tol = 0.02;
constexpr double kCollisionP0 = 0.077, kCollisionP0Tol = 0.01;
constexpr double kCollisionPurity = 0.6, kCollisionPurityTol = 0.05;
// criterion 3
constexpr double kHeliumP1 = 0.31, kHeliumP1Tol = 0.03;
constexpr double kHeliumP0 = 0.034, kHeliumP0Tol = 0.008;
// criterion 5
constexpr double kTraceTol = 1e-6;
constexpr double kMonotoneTol = 1e-12;
constexpr double kNegativityTol = 1e-8; // relative to tr(rho1)
constexpr double kHermiticityTol = 1e-15;
constexpr double kP0MismatchTol = 1e-6;
// criterion 6
constexpr double kSeparableP2 = 1e-3, kSeparableOverlap = 0.99, kSeparablePurity = 0.99;
// criterion 7
constexpr double kDensityTol = 1e-3;
constexpr double kDoublingTol = 0.005;
constexpr double kCapSwapTol = 0.02;
constexpr double kComparisonDt = 0.005;
constexpr double kDoublingTEnd = 150.0; // both domains drained; see also the value at the config t_end

const fs::path kConfigs = fs::path(FOCKCAP_SOURCE_DIR) / "configs";
const fs::path kOut = "acceptance_out";

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void detail(const char *fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

bool verdict(int id, const std::string &title, bool pass) {
  std::printf("%s %d %s\n", pass ? "PASS" : "FAIL", id, title.c_str());
  std::fflush(stdout);
  return pass;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

// Runs shared between criteria are computed once.
class Runs {
public:
  const RunResult &get(const std::string &name, const ExperimentConfig &config) {
    auto it = runs_.find(name);
    if (it != runs_.end()) return it->second;
    const auto t0 = Clock::now();
    RunResult r = run_experiment(config, kOut / name);
    detail("%s: %zu steps in %.1f s", name.c_str(),
           static_cast<std::size_t>(std::lround(config.time.t_end / config.time.dt)), seconds_since(t0));
    return runs_.emplace(name, std::move(r)).first->second;
  }

private:
  std::map<std::string, RunResult> runs_;
};

ExperimentConfig collision_config() { return load_config(kConfigs / "collision.cfg"); }
ExperimentConfig helium_config(const std::string &cycles) {
  return with_override(load_config(kConfigs / "helium.cfg"), "pulse.n_cycles", cycles);
}
ExperimentConfig separability_config() { return load_config(kConfigs / "separability.cfg"); }

// Same physics at a coarser step with strides rescaled to the same times.
ExperimentConfig at_step(ExperimentConfig c, double dt) {
  const double scale = c.time.dt / dt;
  c.time.output_stride = std::max(1, static_cast<int>(std::lround(c.time.output_stride * scale)));
  c.time.snapshot_stride = 0;
  c.time.spectrum_stride = 0;
  c.time.dt = dt;
  return c;
}

bool criterion_1() {
  ExperimentConfig c = with_override(load_config(kConfigs / "helium.cfg"), "grid.n_points",
                                     std::to_string(kGroundStateGrid));
  const auto t0 = Clock::now();
  const GroundStateReport r = run_groundstate(c, kOut / "groundstate");
  detail("two-body E0 = %.6f (%d iterations), one-body E0 = %.6f (%d iterations), N = %d, %.1f s",
         r.two_body_energy, r.two_body_iterations, r.one_body_energy, r.one_body_iterations, kGroundStateGrid,
         seconds_since(t0));
  return verdict(1, "ground-state energies",
                 within(r.two_body_energy, kHeliumEnergy, kEnergyTol) &&
                     within(r.one_body_energy, kIonEnergy, kEnergyTol));
}

bool criterion_2(Runs &runs) {
  const ExperimentConfig c = collision_config();
  const auto &last = runs.get("collision", c).trajectory.rows.back();
  detail("t = %.1f: P2 = %.6f P1 = %.6f P0 = %.6f cond_purity_1 = %.4f (N = %d, dt = %g)", last.t, last.p2,
         last.p1, last.p0, last.cond_purity_1, c.grid.n_points, c.time.dt);
  return verdict(2, "collision experiment",
                 within(last.p1, kCollisionP1, kCollisionP1Tol) && within(last.p0, kCollisionP0, kCollisionP0Tol) &&
                     within(last.cond_purity_1, kCollisionPurity, kCollisionPurityTol));
}

bool criterion_3(Runs &runs) {
  std::vector<std::string> matching;
  for (const std::string cycles : {"3", "5"}) {
    const auto &last = runs.get("helium_" + cycles, helium_config(cycles)).trajectory.rows.back();
    const bool ok = within(last.p1, kHeliumP1, kHeliumP1Tol) && within(last.p0, kHeliumP0, kHeliumP0Tol);
    detail("%s cycles, t = %.1f: P2 = %.6f P1 = %.6f P0 = %.6f -> %s", cycles.c_str(), last.t, last.p2, last.p1,
           last.p0, ok ? "matches" : "does not match");
    if (ok) matching.push_back(cycles);
  }
  std::string which = matching.empty() ? "none" : "";
  for (const auto &m : matching) which += (which.empty() ? "" : ", ") + m;
  detail("cycle counts matching P1 = %.2f +- %.2f and P0 = %.3f +- %.3f: %s", kHeliumP1, kHeliumP1Tol, kHeliumP0,
         kHeliumP0Tol, which.c_str());
  return verdict(3, "helium ionization", !matching.empty());
}

bool criterion_4() {
  const ExperimentConfig c = load_config(kConfigs / "oracle.cfg");
  const auto t0 = Clock::now();
  bool ok = true;
  for (const auto &r : run_oracle(c, kOut / "oracle")) {
    detail("%s", format_report(r).c_str());
    ok = ok && r.passed;
  }
  detail("%.1f s", seconds_since(t0));
  return verdict(4, "oracle equivalence", ok);
}

bool check_structure(const std::string &name, const RunResult &r) {
  double drift = 0.0, p2_rise = 0.0, p0_drop = 0.0, negativity = 0.0, herm = 0.0, mismatch = 0.0;
  double lambda_min = 0.0, t_worst = 0.0, p1_worst = 0.0;
  std::size_t spectra = 0;
  const ObservableRow *prev = nullptr;
  for (const auto &row : r.trajectory.rows) {
    drift = std::max(drift, row.trace_drift);
    mismatch = std::max(mismatch, std::abs(row.p0 - row.p0_from_constraint));
    herm = std::max(herm, row.hermiticity_rho1);
    if (!std::isnan(row.min_eigenvalue_rho1)) {
      ++spectra;
      lambda_min = std::min(lambda_min, row.min_eigenvalue_rho1);
      const double rel = -row.min_eigenvalue_rho1 / std::max(row.p1, 1e-300);
      if (rel > negativity) {
        negativity = rel;
        t_worst = row.t;
        p1_worst = row.p1;
      }
    }
    if (prev) {
      p2_rise = std::max(p2_rise, row.p2 - prev->p2);
      p0_drop = std::max(p0_drop, prev->p0 - row.p0);
    }
    prev = &row;
  }
  const bool all_spectra = spectra == r.trajectory.rows.size();
  const bool ok = drift <= kTraceTol && p2_rise <= kMonotoneTol && p0_drop <= kMonotoneTol &&
                  negativity <= kNegativityTol && herm <= kHermiticityTol && mismatch <= kP0MismatchTol &&
                  all_spectra;
  detail("%s: max|sum P - 1| = %.2e, max P2 rise = %.1e, max p0 drop = %.1e, max -lambda_min/tr = %.1e (t = %.3g, P1 = %.1e), "
         "min lambda = %.1e, max|rho1 - rho1^H| = %.1e, max p0 mismatch = %.2e, spectra %zu/%zu -> %s",
         name.c_str(), drift, p2_rise, p0_drop, negativity, t_worst, p1_worst, lambda_min, herm, mismatch, spectra, r.trajectory.rows.size(),
         ok ? "ok" : "violated");
  return ok;
}

bool criterion_5(Runs &runs) {
  bool ok = true;
  ok = check_structure("collision", runs.get("collision", collision_config())) && ok;
  ok = check_structure("helium_3", runs.get("helium_3", helium_config("3"))) && ok;
  ok = check_structure("helium_5", runs.get("helium_5", helium_config("5"))) && ok;
  ok = check_structure("separability", runs.get("separability", separability_config())) && ok;
  return verdict(5, "conservation and structure", ok);
}

bool criterion_6(Runs &runs) {
  const ExperimentConfig c = separability_config();
  const RunResult &r = runs.get("separability", c);
  const PreparedRun prepared = prepare_run(c);
  const Grid &g = prepared.model.grid;
  const CVector alpha = build_orbital(c.initial.alpha, prepared.model);
  const SystemState &s = r.trajectory.final_state;
  const auto p = partial_traces(s, g);
  const double h = g.spacing();
  const double overlap = (h * h * alpha.dot(s.rho1.matrix * alpha)).real();
  const double cp = cond_purity(s, g, 1);
  detail("t = %.1f: P2 = %.2e, P1 = %.6f, <alpha|rho1|alpha> = %.6f (%.6f of P1), cond_purity_1 = %.6f", s.time,
         p.p2, p.p1, overlap, overlap / p.p1, cp);
  return verdict(6, "separability",
                 p.p2 < kSeparableP2 && overlap >= kSeparableOverlap * p.p1 && cp >= kSeparablePurity);
}

bool criterion_7(Runs &runs) {
  const ExperimentConfig c = collision_config();
  const RunResult &engine = runs.get("collision", c);
  bool ok = true;

  // (a) interior density against the absorber-free reference
  const auto t0 = Clock::now();
  const ReferenceResult ref = run_reference(c, kOut / "reference");
  const Grid g = c.make_grid();
  const RVector gamma = cap_on_grid(c.cap, g, c.grid.mass);
  double worst = 0.0, worst_t = 0.0;
  int compared = 0;
  for (const auto &rs : ref.snapshots) {
    if (ref.contact_time >= 0.0 && rs.t >= ref.contact_time) break;
    const Snapshot *es = nullptr;
    for (const auto &s : engine.snapshots)
      if (std::abs(s.t - rs.t) < 1e-9) es = &s;
    if (!es) continue;
    ++compared;
    for (int j = 0; j < g.size(); ++j) {
      if (gamma(j) != 0.0) continue;
      const double d = std::abs(es->n_total(j) - rs.n_total(j));
      if (d > worst) {
        worst = d;
        worst_t = rs.t;
      }
    }
  }
  const bool density_ok = compared >= 2 && worst <= kDensityTol;
  detail("reference on a %gx domain: contact at t = %.2f, %d snapshots compared, interior L-inf = %.2e at t = %.1f "
         "(%.1f s) -> %s",
         c.reference.domain_factor, ref.contact_time, compared, worst, worst_t, seconds_since(t0),
         density_ok ? "ok" : "violated");
  ok = ok && density_ok;

  // (b) doubling the domain, absorber kept at the new edges
  ExperimentConfig small_long = at_step(c, kComparisonDt);
  small_long.time.t_end = kDoublingTEnd;
  const RunResult &small = runs.get("collision_long", small_long);
  const RunResult &big = runs.get("collision_doubled", enlarged_domain(small_long, 2.0));
  auto max_dp = [&](double t) {
    const ObservableRow *a = nullptr, *b = nullptr;
    for (const auto &r : small.trajectory.rows)
      if (std::abs(r.t - t) < 1e-9) a = &r;
    for (const auto &r : big.trajectory.rows)
      if (std::abs(r.t - t) < 1e-9) b = &r;
    if (!a || !b) return std::numeric_limits<double>::infinity();
    return std::max({std::abs(a->p2 - b->p2), std::abs(a->p1 - b->p1), std::abs(a->p0 - b->p0)});
  };
  const auto &last = big.trajectory.rows.back();
  const double dmax = max_dp(kDoublingTEnd);
  const bool doubling_ok = dmax <= kDoublingTol;
  detail("doubled domain (dt = %g): at t = %g P2 = %.6f P1 = %.6f P0 = %.6f, max |dP| = %.2e -> %s "
         "(max |dP| at t = %g: %.2e)",
         kComparisonDt, last.t, last.p2, last.p1, last.p0, dmax, doubling_ok ? "ok" : "violated", c.time.t_end,
         max_dp(c.time.t_end));
  ok = ok && doubling_ok;

  // (c) swapping the power absorber for the Manolopoulos one
  ExperimentConfig mano = at_step(c, kComparisonDt);
  mano.cap.kind = CapKind::manolopoulos;
  const double p1_power = runs.get("collision_coarse", at_step(c, kComparisonDt)).trajectory.rows.back().p1;
  const double p1_mano = runs.get("collision_manolopoulos", mano).trajectory.rows.back().p1;
  const bool swap_ok = std::abs(p1_power - p1_mano) < kCapSwapTol;
  detail("absorber swap (dt = %g): P1 power = %.6f, Manolopoulos = %.6f, |dP1| = %.2e -> %s", kComparisonDt,
         p1_power, p1_mano, std::abs(p1_power - p1_mano), swap_ok ? "ok" : "violated");
  ok = ok && swap_ok;
  return verdict(7, "reference density and absorber independence", ok);
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto want = [&](int id) { return selected.empty() || selected.count(id) > 0; };

  fs::create_directories(kOut);
  Runs runs;
  int failed = 0;
  const auto t0 = Clock::now();
  auto guarded = [&](int id, auto &&fn) {
    if (!want(id)) return;
    try {
      if (!fn()) ++failed;
    } catch (const std::exception &e) {
      detail("error: %s", e.what());
      verdict(id, "aborted", false);
      ++failed;
    }
  };
  guarded(1, [] { return criterion_1(); });
  guarded(2, [&] { return criterion_2(runs); });
  guarded(3, [&] { return criterion_3(runs); });
  guarded(4, [] { return criterion_4(); });
  guarded(5, [&] { return criterion_5(runs); });
  guarded(6, [&] { return criterion_6(runs); });
  guarded(7, [&] { return criterion_7(runs); });
  std::printf("acceptance: %d failed, %.0f s total\n", failed, seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
