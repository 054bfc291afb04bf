#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fockcap/cap.hpp"
#include "fockcap/grid.hpp"
#include "fockcap/observables.hpp"
#include "fockcap/potentials.hpp"
#include "fockcap/state.hpp"

namespace fockcap {

/// All model functions sampled on the grid. The static potential, absorber
/// and interaction are fixed; the pulse enters as x E(t).
struct DiscreteModel {
  Grid grid;
  double mass = 1.0;
  RVector potential;   // V(x_j)
  RVector cap;         // Gamma(x_j) >= 0
  RMatrix interaction; // U(x_j - x_k), direct distance
  std::optional<PulseSpec> pulse;

  double field(double t) const { return pulse ? eval_pulse(*pulse, t) : 0.0; }
};

DiscreteModel sample_model(const Grid &grid, double mass, const PotentialSpec &potential,
                           const InteractionSpec &interaction, const CapSpec &cap,
                           std::optional<PulseSpec> pulse = std::nullopt);

/// Precomputed phase factors for one time step of length dt. The time-dependent
/// field is folded in at the step midpoint t + dt/2.
class Propagator {
public:
  Propagator(DiscreteModel model, double dt);

  const DiscreteModel &model() const { return model_; }
  const Grid &grid() const { return model_.grid; }
  double dt() const { return dt_; }

  /// Strang step of i psi2' = (H2 - i Gamma2) psi2: half diagonal, full kinetic, half diagonal.
  void step_psi2(TwoBodyState &psi2, double t) const;

  /// Second-order step of the one-particle block with the two-body source
  /// evaluated from psi2 at the start of the step:
  ///   rho1 <- U rho1 U^H + 2 dt rho_S + dt^2 [rho_S' - i (Heff rho_S - rho_S Heff^H)].
  void step_rho1(OneBodyDensity &rho1, const TwoBodyState &psi2_t, double t) const;

  /// Advances (rho1, psi2, p0, t) by one step.
  void step(SystemState &state) const;

  /// (2/hbar) h sum_j Gamma_j rho1(x_j, x_j): the rate of flow into the vacuum.
  double vacuum_feed_rate(const CMatrix &rho1) const;

  /// (H2(t) - i Gamma2) psi2 or H2(t) psi2.
  CMatrix apply_two_body_hamiltonian(const CMatrix &psi2, double t, bool with_cap) const;
  /// (h(t) - i Gamma) applied to every column of m.
  CMatrix apply_one_body_hamiltonian(const CMatrix &m, double t, bool with_cap) const;

private:
  DiscreteModel model_;
  double dt_;
  SpectralTransform fft_;
  std::vector<int> absorbing_rows_;
  CMatrix two_body_half_;  // exp(-i(V_j + V_k + U_jk - i(Gamma_j + Gamma_k)) dt/2)
  CMatrix two_body_kinetic_; // exp(-i(T_j + T_k) dt) / n^2
  CVector one_body_half_;  // exp(-i(V_j - i Gamma_j) dt/2)
  CMatrix density_kinetic_;  // exp(-i(T_q - T_p) dt) / n^2
  RVector kinetic_symbol_;   // hbar^2 k^2 / 2m
};

/// Trapezoidal update of the vacuum weight from d p0/dt = (2/hbar) h sum Gamma_j rho1_jj.
double step_p0(double p0, const CMatrix &rho1_t, const CMatrix &rho1_next, const RVector &gamma,
               const Grid &grid, double dt);

struct ImaginaryTimeOptions {
  double dtau = 0.01;
  double tolerance = 1e-10;
  int max_iterations = 200000;
  int energy_interval = 10;
};

struct GroundState {
  TwoBodyState psi2;
  double energy = 0.0;
  int iterations = 0;
};

struct OneBodyGroundState {
  CVector orbital;
  double energy = 0.0;
  int iterations = 0;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Imaginary-time relaxation of the two-body block within the exchange sector
/// `s`. The absorber must vanish. Renormalises every step; converged when the
/// energy <H2> changes by less than the tolerance between evaluations.
GroundState imaginary_time_ground_state(const DiscreteModel &model, Exchange s,
                                        const ImaginaryTimeOptions &options = {},
                                        std::optional<CMatrix> initial_guess = std::nullopt);

/// Same relaxation for a single particle in V(x).
OneBodyGroundState imaginary_time_ground_state_1d(const DiscreteModel &model,
                                                  const ImaginaryTimeOptions &options = {});

struct Eigenstates {
  RVector energies;
  CMatrix orbitals; // columns normalised with h sum |.|^2 = 1
};

/// Lowest one-body eigenpairs of T + V from dense diagonalisation.
Eigenstates lowest_eigenstates(const DiscreteModel &model, int count);

struct Schedule {
  double t_end = 0.0;
  int output_stride = 1;
  int spectrum_stride = 1; // compute rho1 eigenvalues every this many outputs (0: never)
};

struct RunOptions {
  InvariantOptions invariants{};
};

using OutputHook = std::function<void(const SystemState &, const ObservableRow &)>;

struct Trajectory {
  std::vector<ObservableRow> rows;
  SystemState final_state;
};

/// Steps `initial` to schedule.t_end, emitting an observable row every
/// output_stride steps (and at t = 0 and at the final step).
Trajectory run_simulation(SystemState initial, const Propagator &propagator,
                          const Schedule &schedule, const RunOptions &options = {},
                          const OutputHook &hook = {});

} // namespace fockcap
