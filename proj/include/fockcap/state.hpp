#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "fockcap/grid.hpp"

namespace fockcap {

/// Total spin S and projection M_S; a static sector label.
struct SpinLabel {
  int total = 1;
  int projection = 1;
  bool operator==(const SpinLabel &) const = default;
};

/// Pure two-particle block psi2(x_j, x_k), stored as grid-function values so
/// that P(2) = h^2 sum |psi2|^2.
struct TwoBodyState {
  CMatrix amplitudes;
  Exchange exchange = Exchange::antisymmetric;
  SpinLabel spin{};
};

/// Mixed one-particle block rho1(x_j, x_k); P(1) = h sum_j rho1(x_j, x_j).
struct OneBodyDensity {
  CMatrix matrix;
  SpinLabel spin{};

  /// Spinor carried by the one-particle block: (|up> + (-1)^S |down>)/sqrt2
  /// for M_S = 0, otherwise aligned with the two-body projection.
  std::array<double, 2> spinor() const;
};

/// Block-diagonal Fock-space state rho = |psi2><psi2| + rho1 + p0 |-><-|.
struct SystemState {
  TwoBodyState psi2;
  OneBodyDensity rho1;
  double p0 = 0.0;
  double time = 0.0;
};

SpinLabel spin_for(Exchange s);

/// Normalised (anti)symmetrised product of two normalised orbitals,
/// [alpha_j beta_k + s beta_j alpha_k] / sqrt(2 (1 + s |<alpha,beta>|^2)).
/// Returns the zero matrix when the combination vanishes (alpha = beta, s = -1).
TwoBodyState build_product_state(const CVector &alpha, const CVector &beta, Exchange s,
                                 const Grid &grid);

/// Normalised packet ~ exp(-(x - center)^2 / (4 width^2)) exp(i k0 x); `width`
/// is the position standard deviation of |v|^2.
CVector gaussian_packet(const Grid &grid, double center, double k0, double width);

/// Fresh state with all probability in the two-particle block.
SystemState make_system_state(TwoBodyState psi2, double time = 0.0);

/// rho_S(x_k, x_l) = 2h sum_j psi2(x_j, x_k) Gamma(x_j) conj(psi2(x_j, x_l)).
/// Only rows with Gamma > 0 contribute.
CMatrix source_matrix(const TwoBodyState &psi2, const RVector &gamma, const Grid &grid);

double two_body_norm(const CMatrix &psi2, const Grid &grid);
double one_body_trace(const CMatrix &rho1, const Grid &grid);

struct InvariantOptions {
  double trace_drift_bound = 1e-4;
  bool eigen_check = false;
};

struct InvariantReport {
  double trace_drift = 0.0;
  double exchange_defect = 0.0;    // max |psi2 - s psi2^T| / 2 before repair
  double hermiticity_defect = 0.0; // max |rho1 - rho1^H| / 2 before repair
  std::optional<double> min_eigenvalue; // of h*rho1, when eigen_check is on
};

class TraceDriftError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Re-symmetrises psi2, Hermitises rho1 and reports the trace drift
/// |P(2) + P(1) + p0 - 1|. Throws TraceDriftError above the hard bound.
InvariantReport enforce_invariants(SystemState &state, const Grid &grid,
                                   const InvariantOptions &options = {});

} // namespace fockcap
