#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockcap/dynamics.hpp"

namespace fockcap {

/// Statistics of the represented two-body sector. The spin-triplet sector
/// (M_S = 1) is a spinless fermion problem; the spatial part of the spin
/// singlet sector is isomorphic to bosons with at most double occupancy.
enum class Statistics { fermion, boson };

Statistics statistics_for(Exchange s);

/// Occupation-number basis on `modes` sites with at most `max_particles`
/// particles, ordered by particle number and then lexicographically in the
/// occupied sites.
class FockBasis {
public:
  FockBasis(int modes, Statistics statistics, int max_particles);

  int modes() const { return modes_; }
  int max_particles() const { return max_particles_; }
  Statistics statistics() const { return statistics_; }
  int dimension() const { return static_cast<int>(configs_.size()); }
  int block_dimension(int n) const;
  int block_offset(int n) const;
  const std::vector<std::vector<int>> &configurations() const { return configs_; }
  /// Index of an occupation vector, or -1 when it is not represented.
  int index_of(const std::vector<int> &occupation) const;

  /// Matrix of c_j (fermions) or a_j (bosons) on the truncated space.
  const RMatrix &annihilation(int j) const { return annihilators_[static_cast<std::size_t>(j)]; }

  /// Largest violation of {c_j, c_k^+} = delta_jk, {c_j, c_k} = 0 (fermions) or
  /// [a_j, a_k^+] = delta_jk, [a_j, a_k] = 0 (bosons) on states with fewer than
  /// max_particles particles, where the truncation is invisible.
  double commutation_defect() const;

private:
  int modes_;
  Statistics statistics_;
  int max_particles_;
  std::vector<std::vector<int>> configs_;
  std::vector<int> block_offsets_;
  std::vector<RMatrix> annihilators_;
};

/// Two-particle Fock space on the grid for the given exchange sector. The grid
/// must have at most 8 points.
FockBasis build_fock_basis(const Grid &grid, Exchange s);

/// rho -> (1/i hbar)([H, rho] - i{Gamma, rho} + 2i sum_j Gamma_j c_j rho c_j^+)
/// on the full truncated Fock space, off-diagonal blocks included.
class DenseGenerator {
public:
  DenseGenerator(const FockBasis &basis, const CMatrix &one_body, const RMatrix &interaction,
                 const RVector &gamma);

  const FockBasis &basis() const { return basis_; }
  const CMatrix &hamiltonian() const { return hamiltonian_; }
  const CMatrix &absorber() const { return absorber_; }

  CMatrix apply(const CMatrix &rho) const;

private:
  FockBasis basis_;
  RVector gamma_;
  CMatrix hamiltonian_;
  CMatrix absorber_;
};

/// Generator for a time-independent model: h = T (spectral) + V, U and Gamma
/// from the sampled model.
DenseGenerator make_dense_generator(const DiscreteModel &model, Exchange s);

struct DenseSample {
  double t;
  CMatrix rho;
};

/// Classical fourth-order Runge-Kutta with step dt, recording every
/// `record_every` steps (and t = 0).
std::vector<DenseSample> integrate_dense(const DenseGenerator &gen, const CMatrix &rho0,
                                         double t_end, double dt, int record_every);

/// Embeds a block-diagonal engine state into the Fock-space density matrix.
CMatrix embed_state(const FockBasis &basis, const SystemState &state, const Grid &grid);

/// Pair-basis amplitude vector of a two-body grid function.
CVector pair_vector(const FockBasis &basis, const CMatrix &psi2, const Grid &grid);

/// Sub-block rho_{n,m} of a Fock-space matrix.
CMatrix fock_block(const FockBasis &basis, const CMatrix &rho, int n, int m);

struct BlockFlowReport {
  double two_from_one = 0.0;       // |d rho22/dt| for a perturbation in rho11 (structural zero)
  double one_from_two = 0.0;       // |d rho11/dt| for a pure two-body perturbation
  double source_mismatch = 0.0;    // vs 2 h rho_S from source_matrix
  double vacuum_rate_mismatch = 0.0; // d p0/dt vs (2/hbar) h sum Gamma rho1_jj
};

/// Directional derivatives of the generator showing that rho_{n,m} is fed by
/// rho_{n+1,m+1} only.
BlockFlowReport verify_block_flow_direction(const DenseGenerator &gen, const Grid &grid,
                                            const CMatrix &psi2, const CMatrix &rho1);

struct OracleCase {
  int modes = 4;
  Exchange exchange = Exchange::antisymmetric;
  std::uint64_t seed = 1;
  double spacing = 1.0;
  double t_end = 1.0;
};

/// Random tiny model: potential, absorber (two absorbing edge sites) and a
/// softened interaction, with a random pure two-body initial state.
struct OracleProblem {
  DiscreteModel model;
  TwoBodyState initial;
};
OracleProblem make_oracle_problem(const OracleCase &c);

struct EngineComparison {
  double max_deviation = 0.0; // over all steps and blocks
  double max_offdiag_block = 0.0;
  double max_trace_error = 0.0; // oracle trace drift
  double min_eigenvalue = 0.0;  // smallest oracle eigenvalue along the run
};

/// Runs the production engine with step dt_engine and the dense oracle with
/// dt_engine / oracle_refinement and compares every block at every engine step.
EngineComparison compare_engine_with_oracle(const OracleProblem &problem, double t_end,
                                            double dt_engine, int oracle_refinement = 20);

struct OracleCaseReport {
  OracleCase spec;
  double dt = 0.0;
  double deviation_coarse = 0.0;
  double deviation_fine = 0.0;
  double ratio = 0.0;
  double max_offdiag_block = 0.0;
  double max_trace_error = 0.0;
  bool passed = false;
};

/// Engine-vs-oracle convergence check at dt and dt/2; passes when the
/// deviation ratio lies in [3.5, 4.5].
OracleCaseReport run_oracle_case(const OracleCase &c, double dt);

std::string format_report(const OracleCaseReport &r);

} // namespace fockcap
