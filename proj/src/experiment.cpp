#include "fockcap/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef FOCKCAP_VERSION
#define FOCKCAP_VERSION "0.0.0"
#endif

namespace fockcap {

namespace fs = std::filesystem;

std::string code_version() { return FOCKCAP_VERSION; }

namespace {

std::string fmt(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::ofstream open_out(const fs::path &p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

void write_vector(std::ostream &out, const char *name, const RVector &v) {
  out << name << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << fmt(v(i)) << '\n';
}

void write_matrix(std::ostream &out, const char *name, const RMatrix &m) {
  out << name << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << fmt(m(r, c)) << '\n';
}

std::string expect_line(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("snapshot: unexpected end of file");
  return line;
}

double header_value(std::istream &in, const std::string &name) {
  std::istringstream ls(expect_line(in));
  std::string key;
  double v = 0.0;
  if (!(ls >> key >> v) || key != name) throw std::runtime_error("snapshot: expected header '" + name + "'");
  return v;
}

RVector read_block(std::istream &in, const std::string &name, Eigen::Index count) {
  if (expect_line(in) != name) throw std::runtime_error("snapshot: expected block '" + name + "'");
  RVector v(count);
  for (Eigen::Index i = 0; i < count; ++i) v(i) = std::stod(expect_line(in));
  return v;
}

DiscreteModel static_model(const DiscreteModel &model) {
  DiscreteModel m = model;
  m.cap.setZero();
  m.pulse.reset();
  return m;
}

void write_manifest(const fs::path &dir, const ExperimentConfig &config, const std::string &mode) {
  auto out = open_out(dir / "manifest.txt");
  out << "# fockcap " << code_version() << "\n# mode " << mode << "\n";
  out << serialize_config(config);
}

} // namespace

void Snapshot::write(std::ostream &out) const {
  out << "t " << fmt(t) << "\nN " << n << "\nh " << fmt(h) << "\nx_offset " << fmt(x_offset) << '\n';
  write_vector(out, "n_two", n_two);
  write_vector(out, "n_one", n_one);
  write_vector(out, "n_total", n_total);
  if (abs_psi2.size()) write_matrix(out, "abs_psi2", abs_psi2);
  if (abs_rho1.size()) write_matrix(out, "abs_rho1", abs_rho1);
}

Snapshot Snapshot::read(std::istream &in) {
  Snapshot s;
  s.t = header_value(in, "t");
  s.n = static_cast<int>(header_value(in, "N"));
  s.h = header_value(in, "h");
  s.x_offset = header_value(in, "x_offset");
  s.n_two = read_block(in, "n_two", s.n);
  s.n_one = read_block(in, "n_one", s.n);
  s.n_total = read_block(in, "n_total", s.n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line != "abs_psi2" && line != "abs_rho1") throw std::runtime_error("snapshot: unknown block '" + line + "'");
    RMatrix m(s.n, s.n);
    for (int r = 0; r < s.n; ++r)
      for (int c = 0; c < s.n; ++c) m(r, c) = std::stod(expect_line(in));
    (line == "abs_psi2" ? s.abs_psi2 : s.abs_rho1) = std::move(m);
  }
  return s;
}

Snapshot make_snapshot(const SystemState &state, const Grid &grid, bool matrices) {
  const Densities d = densities(state, grid);
  Snapshot s{state.time, grid.size(), grid.spacing(), grid.lower(), d.two, d.one, d.total, {}, {}};
  if (matrices) {
    s.abs_psi2 = state.psi2.amplitudes.cwiseAbs();
    s.abs_rho1 = state.rho1.matrix.cwiseAbs();
  }
  return s;
}

CMatrix read_grid_function(const fs::path &path, int rows, int cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw std::runtime_error("'" + path.string() + "': expected " + std::to_string(rows * cols) + " values");
      m(r, c) = Complex(re, im);
    }
  return m;
}

void write_grid_function(const fs::path &path, const CMatrix &m) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << fmt(m(r, c).real()) << ' ' << fmt(m(r, c).imag()) << '\n';
}

CVector build_orbital(const OrbitalConfig &spec, const DiscreteModel &model) {
  const Grid &g = model.grid;
  CVector v;
  switch (spec.kind) {
  case OrbitalConfig::Kind::gaussian:
    return gaussian_packet(g, spec.center, spec.k0, spec.width);
  case OrbitalConfig::Kind::eigen: {
    int top = 0;
    for (int l : spec.levels) top = std::max(top, l);
    const Eigenstates eig = lowest_eigenstates(static_model(model), top + 1);
    v = CVector::Zero(g.size());
    for (std::size_t i = 0; i < spec.levels.size(); ++i)
      v += spec.coefficients[i] * eig.orbitals.col(spec.levels[i]);
    break;
  }
  case OrbitalConfig::Kind::file:
    v = read_grid_function(spec.path, g.size(), 1).col(0);
    break;
  }
  const double norm = std::sqrt(g.spacing() * v.squaredNorm());
  if (!(norm > 0.0)) throw std::runtime_error("orbital has zero norm");
  return v / norm;
}

PreparedRun prepare_run(const ExperimentConfig &config) {
  PreparedRun run{config.model(), {}, 0.0, false};
  const Grid &g = run.model.grid;
  const Exchange s = config.initial.exchange;
  switch (config.initial.kind) {
  case InitialConfig::Kind::slater:
    run.initial = build_product_state(build_orbital(config.initial.alpha, run.model),
                                      build_orbital(config.initial.beta, run.model), s, g);
    if (two_body_norm(run.initial.amplitudes, g) == 0.0)
      throw std::runtime_error("initial state vanishes (identical orbitals in the triplet sector)");
    break;
  case InitialConfig::Kind::ground_state: {
    const GroundState gs =
        imaginary_time_ground_state(static_model(run.model), s, config.imaginary_time_options());
    run.initial = gs.psi2;
    run.ground_energy = gs.energy;
    run.has_ground_energy = true;
    break;
  }
  case InitialConfig::Kind::custom: {
    CMatrix psi = read_grid_function(config.initial.path, g.size(), g.size());
    psi = 0.5 * (psi + sign_of(s) * psi.transpose()).eval();
    const double norm = std::sqrt(two_body_norm(psi, g));
    if (!(norm > 0.0)) throw std::runtime_error("custom initial state vanishes in the chosen sector");
    run.initial = TwoBodyState{psi / norm, s, spin_for(s)};
    break;
  }
  }
  return run;
}

void write_observables_csv(std::ostream &out, const std::vector<ObservableRow> &rows) {
  out << "t,P2,P1,P0,N_expect,purity,cond_purity_1,entropy,overlap_initial,trace_drift\n";
  for (const auto &r : rows) {
    out << fmt(r.t) << ',' << fmt(r.p2) << ',' << fmt(r.p1) << ',' << fmt(r.p0) << ','
        << fmt(r.n_expect) << ',' << fmt(r.purity) << ',' << fmt(r.cond_purity_1) << ','
        << fmt(r.entropy) << ',' << fmt(r.overlap_initial) << ',' << fmt(r.trace_drift) << '\n';
  }
}

RunResult run_experiment(const ExperimentConfig &config, const fs::path &out_dir, bool dry_run) {
  const bool files = !out_dir.empty();
  if (files) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, config, dry_run ? "dry-run" : "run");
  }
  RunResult result;
  if (dry_run) return result;

  PreparedRun run = prepare_run(config);
  result.initial = run.initial;
  const Grid grid = run.model.grid;
  const double dt = config.time.dt;
  const Propagator prop(std::move(run.model), dt);

  const int snap = config.time.snapshot_stride;
  if (files && snap > 0) fs::create_directories(out_dir / "snapshots");
  int snap_index = 0;
  auto hook = [&](const SystemState &state, const ObservableRow &) {
    if (snap <= 0) return;
    const long step = std::lround(state.time / dt);
    if (step % snap != 0) return;
    Snapshot s = make_snapshot(state, grid, config.output.matrices);
    if (files) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%05d.txt", snap_index);
      auto out = open_out(out_dir / "snapshots" / name);
      s.write(out);
    }
    ++snap_index;
    result.snapshots.push_back(std::move(s));
  };
  const Schedule schedule{config.time.t_end, config.time.output_stride, config.time.spectrum_stride};
  RunOptions opts{config.invariant_options()};
  result.trajectory = run_simulation(make_system_state(run.initial), prop, schedule, opts, hook);

  if (files) {
    {
      auto out = open_out(out_dir / "observables.csv");
      write_observables_csv(out, result.trajectory.rows);
    }
    auto diag = open_out(out_dir / "diagnostics.csv");
    diag << "t,p0_integrated,p0_from_constraint,p0_mismatch,min_eigenvalue_rho1,hermiticity_rho1\n";
    for (const auto &r : result.trajectory.rows)
      diag << fmt(r.t) << ',' << fmt(r.p0) << ',' << fmt(r.p0_from_constraint) << ','
           << fmt(r.p0 - r.p0_from_constraint) << ',' << fmt(r.min_eigenvalue_rho1) << ','
           << fmt(r.hermiticity_rho1) << '\n';
    if (run.has_ground_energy) {
      auto out = std::ofstream(out_dir / "manifest.txt", std::ios::app);
      out << "# ground_energy " << fmt(run.ground_energy) << '\n';
    }
  }
  return result;
}

ExperimentConfig enlarged_domain(const ExperimentConfig &config, double factor) {
  if (!(factor >= 1.0)) throw std::invalid_argument("enlarged_domain: factor must be >= 1");
  const int n = config.grid.n_points;
  const long n_big = std::lround(factor * n);
  if ((n_big - n) % 2 != 0)
    throw std::invalid_argument("enlarged_domain: factor must add an even number of points");
  const double h = config.grid.x_max / n;
  ExperimentConfig big = config;
  big.grid.n_points = static_cast<int>(n_big);
  big.grid.x_max = h * static_cast<double>(n_big);
  big.grid.x_offset = config.grid.x_offset - h * static_cast<double>((n_big - n) / 2);
  if (config.initial.kind == InitialConfig::Kind::custom)
    throw std::invalid_argument("enlarged_domain: custom initial states are not supported");
  return big;
}

ReferenceResult run_reference(const ExperimentConfig &config, const fs::path &out_dir, std::ostream *warnings) {
  ExperimentConfig big = enlarged_domain(config, config.reference.domain_factor);
  big.cap.kind = CapKind::none;
  const int n = config.grid.n_points;
  const int shift = (big.grid.n_points - n) / 2;
  const bool files = !out_dir.empty();
  if (files) {
    fs::create_directories(out_dir / "snapshots");
    write_manifest(out_dir, config, "reference");
  }

  PreparedRun run = prepare_run(big);
  const Grid g = run.model.grid;
  const Grid small = config.make_grid();
  const double dt = config.time.dt;
  const Propagator prop(std::move(run.model), dt);
  const long steps = std::lround(config.time.t_end / dt);
  const int stride = config.time.snapshot_stride > 0 ? config.time.snapshot_stride : config.time.output_stride;
  const int edge = std::max(1, g.size() / 64);

  ReferenceResult res;
  SystemState state = make_system_state(run.initial);
  auto record = [&](long step) {
    state.time = static_cast<double>(step) * dt;
    const Densities d = densities(state, g);
    double boundary = 0.0;
    for (int j = 0; j < edge; ++j) boundary = std::max({boundary, d.total(j), d.total(g.size() - 1 - j)});
    res.times.push_back(state.time);
    res.norm.push_back(two_body_norm(state.psi2.amplitudes, g));
    res.boundary_density.push_back(boundary);
    if (boundary > 1e-8 && res.contact_time < 0.0) {
      res.contact_time = state.time;
      if (warnings)
        *warnings << "warning: reference boundary density " << boundary << " exceeds 1e-8 at t = " << state.time
                  << "; later snapshots are not valid references\n";
    }
    Snapshot s{state.time, n, small.spacing(), small.lower(), d.two.segment(shift, n), d.one.segment(shift, n),
               d.total.segment(shift, n), {}, {}};
    if (files) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%05zu.txt", res.snapshots.size());
      auto out = open_out(out_dir / "snapshots" / name);
      s.write(out);
    }
    res.snapshots.push_back(std::move(s));
  };
  record(0);
  for (long s = 1; s <= steps; ++s) {
    prop.step_psi2(state.psi2, static_cast<double>(s - 1) * dt);
    if (s % stride == 0 || s == steps) {
      record(s);
      if (config.reference.stop_at_contact && res.contact_time >= 0.0) break;
    }
  }
  if (files) {
    auto out = open_out(out_dir / "reference.csv");
    out << "t,norm,boundary_density\n";
    for (std::size_t i = 0; i < res.times.size(); ++i)
      out << fmt(res.times[i]) << ',' << fmt(res.norm[i]) << ',' << fmt(res.boundary_density[i]) << '\n';
  }
  return res;
}

GroundStateReport run_groundstate(const ExperimentConfig &config, const fs::path &out_dir) {
  const DiscreteModel model = static_model(config.model());
  const auto opts = config.imaginary_time_options();
  const GroundState two = imaginary_time_ground_state(model, config.initial.exchange, opts);
  const OneBodyGroundState one = imaginary_time_ground_state_1d(model, opts);
  GroundStateReport rep{two.energy, two.iterations, one.energy, one.iterations};
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, config, "groundstate");
    auto out = open_out(out_dir / "groundstate.txt");
    out << "two_body_energy " << fmt(rep.two_body_energy) << "\ntwo_body_iterations " << rep.two_body_iterations
        << "\none_body_energy " << fmt(rep.one_body_energy) << "\none_body_iterations " << rep.one_body_iterations
        << '\n';
    write_grid_function(out_dir / "psi2.txt", two.psi2.amplitudes);
  }
  return rep;
}

namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)> &task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  for (auto &t : pool) t.join();
}

} // namespace

std::vector<OracleCaseReport> run_oracle(const ExperimentConfig &config, const fs::path &out_dir, int jobs) {
  std::vector<OracleCase> cases;
  for (int m : config.oracle.modes)
    for (Exchange s : {Exchange::antisymmetric, Exchange::symmetric})
      for (auto seed : config.oracle.seeds) cases.push_back({m, s, seed, 1.0, config.oracle.t_end});
  std::vector<OracleCaseReport> reports(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) { reports[i] = run_oracle_case(cases[i], config.oracle.dt); });
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_manifest(out_dir, config, "oracle");
    auto out = open_out(out_dir / "oracle_report.txt");
    for (const auto &r : reports) out << format_report(r) << '\n';
  }
  return reports;
}

std::vector<SweepEntry> run_sweep(const ExperimentConfig &config, const fs::path &out_dir, int jobs) {
  if (config.sweep.key.empty()) throw std::invalid_argument("sweep: no sweep.key in config");
  std::vector<SweepEntry> entries(config.sweep.values.size());
  if (!out_dir.empty()) fs::create_directories(out_dir);
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const std::string &value = config.sweep.values[i];
    entries[i].value = value;
    try {
      const ExperimentConfig c = with_override(config, config.sweep.key, value);
      const fs::path dir = out_dir.empty() ? fs::path() : out_dir / (config.sweep.key + "=" + value);
      const RunResult r = run_experiment(c, dir);
      entries[i].final_row = r.trajectory.rows.back();
    } catch (const std::exception &e) {
      entries[i].error = e.what();
    }
  });
  if (!out_dir.empty()) {
    auto out = open_out(out_dir / "sweep.csv");
    out << "value,t,P2,P1,P0,error\n";
    for (const auto &e : entries)
      out << e.value << ',' << fmt(e.final_row.t) << ',' << fmt(e.final_row.p2) << ',' << fmt(e.final_row.p1) << ','
          << fmt(e.final_row.p0) << ",\"" << e.error << "\"\n";
  }
  return entries;
}

} // namespace fockcap
