#pragma once

#include <optional>

#include "fockcap/grid.hpp"
#include "fockcap/state.hpp"

namespace fockcap {

struct PartialTraces {
  double p2 = 0.0;
  double p1 = 0.0;
  double p0 = 0.0;
  double p1_imag = 0.0; // imaginary part of h*tr(rho1); should vanish
};

struct Densities {
  RVector two;   // 2h sum_j |psi2(x_j, x_k)|^2
  RVector one;   // rho1(x_k, x_k)
  RVector total; // two + one
};

/// One output row. NaN marks quantities that are undefined or not computed.
struct ObservableRow {
  double t = 0.0;
  double p2 = 0.0, p1 = 0.0, p0 = 0.0;
  double n_expect = 0.0;
  double purity = 0.0;
  double cond_purity_1 = 0.0;
  double entropy = 0.0;
  double overlap_initial = 0.0;
  double trace_drift = 0.0;
  // diagnostics
  double p0_from_constraint = 0.0;
  double min_eigenvalue_rho1 = 0.0;
  double hermiticity_rho1 = 0.0; // max |rho1 - rho1^H|
};

inline constexpr double kConditionalThreshold = 1e-12;

PartialTraces partial_traces(const SystemState &state, const Grid &grid);
double particle_number(const SystemState &state, const Grid &grid);
double purity(const SystemState &state, const Grid &grid);
/// Purity of rho_{n,n}/P(n). Throws std::domain_error when P(n) is below threshold.
double cond_purity(const SystemState &state, const Grid &grid, int n);
double entropy(const SystemState &state, const Grid &grid);
Densities densities(const SystemState &state, const Grid &grid);

/// Tr_n(A rho)/Tr_n(rho). For n = 1 `op` is a one-body matrix acting on grid
/// vectors; for n = 2 it is a diagonal two-body function A(x_j, x_k) given as
/// an n x n matrix of values. n = 0 has only the identity (op ignored).
double conditional_expectation(const SystemState &state, const Grid &grid, const CMatrix &op, int n);

/// |h^2 sum conj(psi0) psi_t|^2.
double overlap_initial(const TwoBodyState &psi2_t, const TwoBodyState &psi2_0, const Grid &grid);

/// Eigenvalues of h*rho1 (sum = P(1)).
RVector rho1_spectrum(const OneBodyDensity &rho1, const Grid &grid);

/// Full row; with_spectrum toggles the O(n^3) entropy / min-eigenvalue pieces.
ObservableRow compute_observables(const SystemState &state, const Grid &grid,
                                  const TwoBodyState &initial, bool with_spectrum);

} // namespace fockcap
