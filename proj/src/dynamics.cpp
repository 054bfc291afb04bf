#include "fockcap/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace fockcap {

DiscreteModel sample_model(const Grid &grid, double mass, const PotentialSpec &potential,
                           const InteractionSpec &interaction, const CapSpec &cap,
                           std::optional<PulseSpec> pulse) {
  potential.validate();
  interaction.validate();
  if (pulse) pulse->validate();
  const int n = grid.size();
  DiscreteModel m{grid, mass, RVector(n), cap_on_grid(cap, grid, mass), RMatrix(n, n), pulse};
  for (int j = 0; j < n; ++j) m.potential(j) = eval_static_potential(potential, grid.x(j));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) m.interaction(j, k) = eval_interaction(interaction, grid.x(j), grid.x(k));
  return m;
}

namespace {

RVector kinetic_symbol_of(const Grid &grid, double mass) {
  RVector t(grid.size());
  for (int j = 0; j < grid.size(); ++j) t(j) = kHbar * kHbar * grid.k(j) * grid.k(j) / (2.0 * mass);
  return t;
}

void check_model(const DiscreteModel &m) {
  const int n = m.grid.size();
  if (m.potential.size() != n || m.cap.size() != n || m.interaction.rows() != n ||
      m.interaction.cols() != n)
    throw std::invalid_argument("DiscreteModel: sampled arrays do not match the grid");
  if (!(m.mass > 0.0)) throw std::invalid_argument("DiscreteModel: mass must be positive");
  if ((m.cap.array() < 0.0).any()) throw std::invalid_argument("DiscreteModel: Gamma must be non-negative");
}

// exp(-i x E dt/2 / hbar) for the length-gauge coupling.
CVector field_half_phase(const Grid &grid, double field, double dt) {
  CVector f(grid.size());
  for (int j = 0; j < grid.size(); ++j)
    f(j) = std::polar(1.0, -length_gauge_term(grid.x(j), field) * dt / (2.0 * kHbar));
  return f;
}

void hermitize_from_lower(CMatrix &m) {
  m.triangularView<Eigen::StrictlyUpper>() = m.adjoint();
  m.diagonal() = m.diagonal().real().cast<Complex>();
}

} // namespace

Propagator::Propagator(DiscreteModel model, double dt)
    : model_(std::move(model)), dt_(dt), fft_(model_.grid.size()) {
  if (!(dt > 0.0)) throw std::invalid_argument("Propagator: dt must be positive");
  check_model(model_);
  const int n = model_.grid.size();
  const RVector &v = model_.potential;
  const RVector &g = model_.cap;
  kinetic_symbol_ = kinetic_symbol_of(model_.grid, model_.mass);

  for (int j = 0; j < n; ++j)
    if (g(j) > 0.0) absorbing_rows_.push_back(j);

  const double tau = dt / (2.0 * kHbar);
  two_body_half_.resize(n, n);
  two_body_kinetic_.resize(n, n);
  const double norm2 = 1.0 / (static_cast<double>(n) * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const double re = v(j) + v(k) + model_.interaction(j, k);
      const double im = g(j) + g(k);
      two_body_half_(j, k) = std::exp(-im * tau) * std::polar(1.0, -re * tau);
      two_body_kinetic_(j, k) =
          norm2 * std::polar(1.0, -(kinetic_symbol_(j) + kinetic_symbol_(k)) * dt / kHbar);
    }
  }
  one_body_half_.resize(n);
  for (int j = 0; j < n; ++j) one_body_half_(j) = std::exp(-g(j) * tau) * std::polar(1.0, -v(j) * tau);
  // rho -> K rho K^H in the transposed spectral layout of forward_2d_transposed
  density_kinetic_.resize(n, n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p)
      density_kinetic_(p, q) = norm2 * std::polar(1.0, -(kinetic_symbol_(q) - kinetic_symbol_(p)) * dt / kHbar);
}

void Propagator::step_psi2(TwoBodyState &psi2, double t) const {
  CMatrix &psi = psi2.amplitudes;
  const double e_mid = model_.field(t + 0.5 * dt_);
  if (e_mid != 0.0) {
    const CVector f = field_half_phase(model_.grid, e_mid, dt_);
    const CMatrix half = (f * f.transpose()).cwiseProduct(two_body_half_);
    psi.array() *= half.array();
    fft_.forward_2d_transposed(psi);
    psi.array() *= two_body_kinetic_.array();
    fft_.inverse_2d_transposed(psi);
    psi.array() *= half.array();
  } else {
    psi.array() *= two_body_half_.array();
    fft_.forward_2d_transposed(psi);
    psi.array() *= two_body_kinetic_.array();
    fft_.inverse_2d_transposed(psi);
    psi.array() *= two_body_half_.array();
  }
}

CMatrix Propagator::apply_two_body_hamiltonian(const CMatrix &psi2, double t, bool with_cap) const {
  const int n = model_.grid.size();
  const double norm2 = 1.0 / (static_cast<double>(n) * n);
  CMatrix out = psi2;
  fft_.forward_2d_transposed(out);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out(j, k) *= (kinetic_symbol_(j) + kinetic_symbol_(k)) * norm2;
  fft_.inverse_2d_transposed(out);
  const double e = model_.field(t);
  RVector w = model_.potential;
  for (int j = 0; j < n; ++j) w(j) += length_gauge_term(model_.grid.x(j), e);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      Complex diag = w(j) + w(k) + model_.interaction(j, k);
      if (with_cap) diag -= kI * (model_.cap(j) + model_.cap(k));
      out(j, k) += diag * psi2(j, k);
    }
  }
  return out;
}

CMatrix Propagator::apply_one_body_hamiltonian(const CMatrix &m, double t, bool with_cap) const {
  const int n = model_.grid.size();
  CMatrix out = m;
  fft_.forward_columns(out);
  out = (kinetic_symbol_ / static_cast<double>(n)).cast<Complex>().asDiagonal() * out;
  fft_.inverse_columns(out);
  const double e = model_.field(t);
  CVector diag(n);
  for (int j = 0; j < n; ++j) {
    diag(j) = model_.potential(j) + length_gauge_term(model_.grid.x(j), e);
    if (with_cap) diag(j) -= kI * model_.cap(j);
  }
  out += diag.asDiagonal() * m;
  return out;
}

void Propagator::step_rho1(OneBodyDensity &rho1, const TwoBodyState &psi2_t, double t) const {
  CMatrix &rho = rho1.matrix;
  const int n = model_.grid.size();
  const double h = model_.grid.spacing();

  // Homogeneous part U rho U^H with U = D K D.
  const double e_mid = model_.field(t + 0.5 * dt_);
  CVector d = one_body_half_;
  if (e_mid != 0.0) d.array() *= field_half_phase(model_.grid, e_mid, dt_).array();
  const CMatrix outer = d * d.adjoint();
  rho.array() *= outer.array();
  fft_.forward_2d_transposed(rho);
  rho.array() *= density_kinetic_.array();
  fft_.inverse_2d_transposed(rho);
  rho.array() *= outer.array();

  if (absorbing_rows_.empty()) {
    hermitize_from_lower(rho);
    return;
  }

  // With G = (sqrt(Gamma) psi2)^T on the absorbing rows, rho_S = 2h G G^H and
  //   2 dt rho_S + dt^2 [rho_S' - i(Heff rho_S - h.c.)]
  //     = 2h [2 dt (G + dt/2 E)(G + dt/2 E)^H - dt^3/2 E E^H],
  // where E = G' - i Heff G.
  const CMatrix &psi = psi2_t.amplitudes;
  const auto r = static_cast<Eigen::Index>(absorbing_rows_.size());
  const double e = model_.field(t);
  CVector w(n);
  for (int x = 0; x < n; ++x)
    w(x) = Complex(model_.potential(x) + length_gauge_term(model_.grid.x(x), e), -model_.cap(x));
  const CVector kin = (kinetic_symbol_ / static_cast<double>(n)).cast<Complex>();

  CMatrix t1 = psi;
  fft_.forward_columns(t1);
  t1 = kin.asDiagonal() * t1;
  fft_.inverse_columns(t1);

  CMatrix g(n, r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const int j = absorbing_rows_[static_cast<std::size_t>(c)];
    g.col(c) = std::sqrt(model_.cap(j)) * psi.row(j).transpose();
  }
  CMatrix tg = g;
  fft_.forward_columns(tg);
  tg = kin.asDiagonal() * tg;
  fft_.inverse_columns(tg);

  CMatrix big_e(n, r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const int j = absorbing_rows_[static_cast<std::size_t>(c)];
    const double sg = std::sqrt(model_.cap(j));
    for (int x = 0; x < n; ++x) {
      const Complex diag = w(j) + 2.0 * w(x) + model_.interaction(j, x);
      big_e(x, c) = (-kI / kHbar) * (sg * t1(j, x) + 2.0 * tg(x, c) + diag * g(x, c));
    }
  }
  const CMatrix c_mid = g + (0.5 * dt_) * big_e;
  auto lower = rho.selfadjointView<Eigen::Lower>();
  lower.rankUpdate(c_mid, 4.0 * h * dt_ / kHbar);
  lower.rankUpdate(big_e, -h * dt_ * dt_ * dt_ / kHbar);
  hermitize_from_lower(rho);
}

double Propagator::vacuum_feed_rate(const CMatrix &rho1) const {
  double s = 0.0;
  for (int j : absorbing_rows_) s += model_.cap(j) * rho1(j, j).real();
  return 2.0 / kHbar * model_.grid.spacing() * s;
}

double step_p0(double p0, const CMatrix &rho1_t, const CMatrix &rho1_next, const RVector &gamma,
               const Grid &grid, double dt) {
  const int n = grid.size();
  if (rho1_t.rows() != n || rho1_next.rows() != n || gamma.size() != n)
    throw std::invalid_argument("step_p0: shape mismatch");
  const double h = grid.spacing();
  const double f0 = 2.0 / kHbar * h * gamma.dot(rho1_t.diagonal().real());
  const double f1 = 2.0 / kHbar * h * gamma.dot(rho1_next.diagonal().real());
  return p0 + 0.5 * dt * (f0 + f1);
}

void Propagator::step(SystemState &state) const {
  const double t = state.time;
  const double rate_before = vacuum_feed_rate(state.rho1.matrix);
  step_rho1(state.rho1, state.psi2, t);
  step_psi2(state.psi2, t);
  state.p0 += 0.5 * dt_ * (rate_before + vacuum_feed_rate(state.rho1.matrix));
  state.time = t + dt_;
}

namespace {

double two_body_energy(const Propagator &prop, const CMatrix &psi) {
  const CMatrix hpsi = prop.apply_two_body_hamiltonian(psi, 0.0, false);
  return (psi.conjugate().cwiseProduct(hpsi)).sum().real() / psi.squaredNorm();
}

CMatrix default_guess(const DiscreteModel &model, Exchange s) {
  const Grid &g = model.grid;
  const int n = g.size();
  // Centre the guess on the potential minimum.
  Eigen::Index jmin = 0;
  model.potential.minCoeff(&jmin);
  const double xc = g.x(static_cast<int>(jmin));
  const double w = std::max(0.5, 0.05 * g.length());
  CVector a(n), b(n);
  for (int j = 0; j < n; ++j) {
    const double d = g.x(j) - xc;
    a(j) = std::exp(-d * d / (2.0 * w * w));
    b(j) = d * a(j);
  }
  if (s == Exchange::symmetric) return a * a.transpose();
  return a * b.transpose() - b * a.transpose();
}

} // namespace

GroundState imaginary_time_ground_state(const DiscreteModel &model, Exchange s,
                                        const ImaginaryTimeOptions &options,
                                        std::optional<CMatrix> initial_guess) {
  if ((model.cap.array() != 0.0).any())
    throw std::invalid_argument("imaginary_time_ground_state: absorber must vanish");
  if (!(options.dtau > 0.0)) throw std::invalid_argument("imaginary_time_ground_state: dtau must be positive");
  const Grid &g = model.grid;
  const int n = g.size();
  const double h = g.spacing();
  const double sg = sign_of(s);
  const Propagator prop(model, options.dtau); // reused for H application
  const RVector t = kinetic_symbol_of(g, model.mass);

  RMatrix half(n, n), kin(n, n);
  const double norm2 = 1.0 / (static_cast<double>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      half(j, k) = std::exp(-(model.potential(j) + model.potential(k) + model.interaction(j, k)) *
                            options.dtau / (2.0 * kHbar));
      kin(j, k) = norm2 * std::exp(-(t(j) + t(k)) * options.dtau / kHbar);
    }

  CMatrix psi = initial_guess ? *initial_guess : default_guess(model, s);
  if (psi.rows() != n || psi.cols() != n)
    throw std::invalid_argument("imaginary_time_ground_state: guess shape mismatch");
  SpectralTransform fft(n);
  const int interval = std::max(1, options.energy_interval);
  double e_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iterations; ++it) {
    psi.array() *= half.array().cast<Complex>();
    fft.forward_2d_transposed(psi);
    psi.array() *= kin.array().cast<Complex>();
    fft.inverse_2d_transposed(psi);
    psi.array() *= half.array().cast<Complex>();
    psi = 0.5 * (psi + sg * psi.transpose()).eval();
    const double norm = std::sqrt(h * h * psi.squaredNorm());
    if (!(norm > 0.0)) throw ConvergenceError("imaginary_time_ground_state: state collapsed to zero");
    psi /= norm;
    if (it % interval == 0) {
      const double e = two_body_energy(prop, psi);
      if (std::abs(e - e_prev) < options.tolerance) {
        TwoBodyState st{psi, s, spin_for(s)};
        return {std::move(st), e, it};
      }
      e_prev = e;
    }
  }
  throw ConvergenceError("imaginary_time_ground_state: no convergence after " +
                         std::to_string(options.max_iterations) + " iterations");
}

OneBodyGroundState imaginary_time_ground_state_1d(const DiscreteModel &model,
                                                  const ImaginaryTimeOptions &options) {
  if ((model.cap.array() != 0.0).any())
    throw std::invalid_argument("imaginary_time_ground_state_1d: absorber must vanish");
  const Grid &g = model.grid;
  const int n = g.size();
  const double h = g.spacing();
  const RVector t = kinetic_symbol_of(g, model.mass);
  RVector half(n), kin(n);
  for (int j = 0; j < n; ++j) {
    half(j) = std::exp(-model.potential(j) * options.dtau / (2.0 * kHbar));
    kin(j) = std::exp(-t(j) * options.dtau / kHbar) / n;
  }
  Eigen::Index jmin = 0;
  model.potential.minCoeff(&jmin);
  const double xc = g.x(static_cast<int>(jmin));
  CVector phi(n);
  for (int j = 0; j < n; ++j) phi(j) = std::exp(-(g.x(j) - xc) * (g.x(j) - xc) / 2.0);

  SpectralTransform fft(n);
  auto energy = [&](const CVector &v) {
    CVector tv = v;
    fft.forward(tv);
    tv.array() *= (t / static_cast<double>(n)).array().cast<Complex>();
    fft.inverse(tv);
    tv += (model.potential.cast<Complex>().array() * v.array()).matrix();
    return v.dot(tv).real() / v.squaredNorm();
  };
  const int interval = std::max(1, options.energy_interval);
  double e_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iterations; ++it) {
    phi.array() *= half.array().cast<Complex>();
    fft.forward(phi);
    phi.array() *= kin.array().cast<Complex>();
    fft.inverse(phi);
    phi.array() *= half.array().cast<Complex>();
    phi /= std::sqrt(h * phi.squaredNorm());
    if (it % interval == 0) {
      const double e = energy(phi);
      if (std::abs(e - e_prev) < options.tolerance) return {phi, e, it};
      e_prev = e;
    }
  }
  throw ConvergenceError("imaginary_time_ground_state_1d: no convergence");
}

Eigenstates lowest_eigenstates(const DiscreteModel &model, int count) {
  const int n = model.grid.size();
  if (count < 1 || count > n) throw std::invalid_argument("lowest_eigenstates: bad count");
  RMatrix ham = dense_kinetic_matrix(model.grid, model.mass);
  ham.diagonal() += model.potential;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(ham);
  Eigenstates out;
  out.energies = es.eigenvalues().head(count);
  out.orbitals = es.eigenvectors().leftCols(count).cast<Complex>() / std::sqrt(model.grid.spacing());
  // Sign convention: the leftmost component above 1e-3 of the peak is positive.
  // Unlike the largest component this does not depend on the grid for odd states.
  for (int c = 0; c < count; ++c) {
    const double peak = out.orbitals.col(c).cwiseAbs().maxCoeff();
    Eigen::Index i = 0;
    while (std::abs(out.orbitals(i, c)) < 1e-3 * peak) ++i;
    if (out.orbitals(i, c).real() < 0.0) out.orbitals.col(c) *= -1.0;
  }
  return out;
}

Trajectory run_simulation(SystemState initial, const Propagator &propagator,
                          const Schedule &schedule, const RunOptions &options,
                          const OutputHook &hook) {
  const Grid &grid = propagator.grid();
  const double dt = propagator.dt();
  if (schedule.t_end < 0.0) throw std::invalid_argument("run_simulation: t_end must be non-negative");
  const double t0 = initial.time;
  const long steps = std::lround((schedule.t_end - t0) / dt);
  const int stride = std::max(1, schedule.output_stride);
  const TwoBodyState reference = initial.psi2;

  Trajectory traj;
  SystemState state = std::move(initial);
  long outputs = 0;
  auto emit = [&]() {
    const bool spectrum =
        schedule.spectrum_stride > 0 && (outputs % schedule.spectrum_stride == 0);
    ObservableRow row = compute_observables(state, grid, reference, spectrum);
    traj.rows.push_back(row);
    if (hook) hook(state, row);
    ++outputs;
  };

  InvariantOptions inv = options.invariants;
  inv.eigen_check = false; // spectrum is handled at output rows
  enforce_invariants(state, grid, inv);
  emit();
  for (long s = 1; s <= steps; ++s) {
    propagator.step(state);
    state.time = t0 + static_cast<double>(s) * dt;
    enforce_invariants(state, grid, inv);
    if (s % stride == 0 || s == steps) emit();
  }
  traj.final_state = std::move(state);
  return traj;
}

} // namespace fockcap
