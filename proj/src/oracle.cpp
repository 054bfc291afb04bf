#include "fockcap/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fockcap {

Statistics statistics_for(Exchange s) {
  return s == Exchange::antisymmetric ? Statistics::fermion : Statistics::boson;
}

namespace {

// Sorted site lists of length n: strictly increasing (fermions) or
// non-decreasing (bosons), in lexicographic order.
void enumerate_sites(int modes, int n, bool allow_repeat, std::vector<std::vector<int>> &out) {
  std::vector<int> sites;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(sites.size()) == n) {
      out.push_back(sites);
      return;
    }
    for (int j = start; j < modes; ++j) {
      sites.push_back(j);
      rec(allow_repeat ? j : j + 1);
      sites.pop_back();
    }
  };
  rec(0);
}

} // namespace

FockBasis::FockBasis(int modes, Statistics statistics, int max_particles)
    : modes_(modes), statistics_(statistics), max_particles_(max_particles) {
  if (modes < 1) throw std::invalid_argument("FockBasis: need at least one mode");
  if (max_particles < 0) throw std::invalid_argument("FockBasis: negative particle cap");
  if (statistics == Statistics::fermion && max_particles > modes)
    throw std::invalid_argument("FockBasis: more fermions than modes");

  for (int n = 0; n <= max_particles; ++n) {
    block_offsets_.push_back(static_cast<int>(configs_.size()));
    std::vector<std::vector<int>> lists;
    enumerate_sites(modes, n, statistics == Statistics::boson, lists);
    for (const auto &l : lists) {
      std::vector<int> occ(static_cast<std::size_t>(modes), 0);
      for (int j : l) ++occ[static_cast<std::size_t>(j)];
      configs_.push_back(std::move(occ));
    }
  }
  block_offsets_.push_back(static_cast<int>(configs_.size()));

  const int d = dimension();
  annihilators_.assign(static_cast<std::size_t>(modes), RMatrix::Zero(d, d));
  for (int col = 0; col < d; ++col) {
    const auto &occ = configs_[static_cast<std::size_t>(col)];
    int preceding = 0;
    for (int j = 0; j < modes; ++j) {
      const int nj = occ[static_cast<std::size_t>(j)];
      if (nj > 0) {
        auto lowered = occ;
        --lowered[static_cast<std::size_t>(j)];
        const int row = index_of(lowered);
        const double amp = statistics == Statistics::fermion ? ((preceding % 2) ? -1.0 : 1.0)
                                                             : std::sqrt(static_cast<double>(nj));
        annihilators_[static_cast<std::size_t>(j)](row, col) = amp;
      }
      preceding += nj;
    }
  }
}

int FockBasis::block_dimension(int n) const {
  if (n < 0 || n > max_particles_) return 0;
  return block_offsets_[static_cast<std::size_t>(n + 1)] - block_offsets_[static_cast<std::size_t>(n)];
}

int FockBasis::block_offset(int n) const {
  if (n < 0 || n > max_particles_) throw std::out_of_range("FockBasis: block out of range");
  return block_offsets_[static_cast<std::size_t>(n)];
}

int FockBasis::index_of(const std::vector<int> &occupation) const {
  // Linear scan is fine for the tiny spaces this class is meant for.
  for (std::size_t i = 0; i < configs_.size(); ++i)
    if (configs_[i] == occupation) return static_cast<int>(i);
  return -1;
}

double FockBasis::commutation_defect() const {
  const int d = dimension();
  const int below = block_offset(max_particles_); // states with n < max_particles
  const double sg = statistics_ == Statistics::fermion ? 1.0 : -1.0;
  double defect = 0.0;
  for (int j = 0; j < modes_; ++j) {
    for (int k = 0; k < modes_; ++k) {
      const RMatrix &cj = annihilation(j);
      const RMatrix &ck = annihilation(k);
      RMatrix mixed = cj * ck.transpose() + sg * ck.transpose() * cj;
      if (j == k) mixed -= RMatrix::Identity(d, d);
      defect = std::max(defect, mixed.leftCols(below).cwiseAbs().maxCoeff());
      const RMatrix pure = cj * ck + sg * ck * cj;
      defect = std::max(defect, pure.cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

FockBasis build_fock_basis(const Grid &grid, Exchange s) {
  if (grid.size() > 8) throw std::invalid_argument("build_fock_basis: at most 8 grid points");
  return FockBasis(grid.size(), statistics_for(s), 2);
}

DenseGenerator::DenseGenerator(const FockBasis &basis, const CMatrix &one_body,
                               const RMatrix &interaction, const RVector &gamma)
    : basis_(basis), gamma_(gamma) {
  const int m = basis.modes();
  if (one_body.rows() != m || one_body.cols() != m || interaction.rows() != m ||
      interaction.cols() != m || gamma.size() != m)
    throw std::invalid_argument("DenseGenerator: operator shapes do not match the basis");
  const int d = basis.dimension();
  hamiltonian_ = CMatrix::Zero(d, d);
  absorber_ = CMatrix::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    const RMatrix ci_dag = basis.annihilation(i).transpose();
    for (int j = 0; j < m; ++j) {
      const RMatrix &cj = basis.annihilation(j);
      hamiltonian_ += one_body(i, j) * (ci_dag * cj).cast<Complex>();
      const RMatrix pair = ci_dag * cj.transpose() * cj * basis.annihilation(i);
      hamiltonian_ += (0.5 * interaction(i, j)) * pair.cast<Complex>();
    }
    absorber_ += (gamma(i) * ci_dag * basis.annihilation(i)).cast<Complex>();
  }
}

CMatrix DenseGenerator::apply(const CMatrix &rho) const {
  CMatrix out = (-kI / kHbar) * (hamiltonian_ * rho - rho * hamiltonian_) -
                (1.0 / kHbar) * (absorber_ * rho + rho * absorber_);
  for (int j = 0; j < basis_.modes(); ++j) {
    if (gamma_(j) == 0.0) continue;
    const RMatrix &cj = basis_.annihilation(j);
    out += (2.0 * gamma_(j) / kHbar) * (cj.cast<Complex>() * rho * cj.transpose().cast<Complex>());
  }
  return out;
}

DenseGenerator make_dense_generator(const DiscreteModel &model, Exchange s) {
  if (model.pulse) throw std::invalid_argument("make_dense_generator: time-dependent fields unsupported");
  CMatrix h = dense_kinetic_matrix(model.grid, model.mass).cast<Complex>();
  h.diagonal() += model.potential.cast<Complex>();
  return DenseGenerator(build_fock_basis(model.grid, s), h, model.interaction, model.cap);
}

std::vector<DenseSample> integrate_dense(const DenseGenerator &gen, const CMatrix &rho0,
                                         double t_end, double dt, int record_every) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_dense: dt must be positive");
  const long steps = std::lround(t_end / dt);
  const int every = std::max(1, record_every);
  std::vector<DenseSample> out;
  CMatrix rho = rho0;
  out.push_back({0.0, rho});
  for (long s = 1; s <= steps; ++s) {
    const CMatrix k1 = gen.apply(rho);
    const CMatrix k2 = gen.apply(rho + 0.5 * dt * k1);
    const CMatrix k3 = gen.apply(rho + 0.5 * dt * k2);
    const CMatrix k4 = gen.apply(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % every == 0) out.push_back({static_cast<double>(s) * dt, rho});
  }
  return out;
}

CVector pair_vector(const FockBasis &basis, const CMatrix &psi2, const Grid &grid) {
  const int off = basis.block_offset(2);
  const int dim = basis.block_dimension(2);
  const double h = grid.spacing();
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const auto &occ = basis.configurations()[static_cast<std::size_t>(off + i)];
    std::vector<int> sites;
    for (int j = 0; j < basis.modes(); ++j)
      for (int c = 0; c < occ[static_cast<std::size_t>(j)]; ++c) sites.push_back(j);
    const int a = sites[0], b = sites[1];
    v(i) = (a == b) ? h * psi2(a, a) : std::sqrt(2.0) * h * psi2(a, b);
  }
  return v;
}

CMatrix embed_state(const FockBasis &basis, const SystemState &state, const Grid &grid) {
  if (basis.modes() != grid.size() || basis.max_particles() != 2)
    throw std::invalid_argument("embed_state: basis does not match the grid");
  const int d = basis.dimension();
  CMatrix rho = CMatrix::Zero(d, d);
  rho(0, 0) = state.p0;
  const int o1 = basis.block_offset(1), d1 = basis.block_dimension(1);
  rho.block(o1, o1, d1, d1) = grid.spacing() * state.rho1.matrix;
  const CVector v = pair_vector(basis, state.psi2.amplitudes, grid);
  const int o2 = basis.block_offset(2), d2 = basis.block_dimension(2);
  rho.block(o2, o2, d2, d2) = v * v.adjoint();
  return rho;
}

CMatrix fock_block(const FockBasis &basis, const CMatrix &rho, int n, int m) {
  return rho.block(basis.block_offset(n), basis.block_offset(m), basis.block_dimension(n),
                   basis.block_dimension(m));
}

BlockFlowReport verify_block_flow_direction(const DenseGenerator &gen, const Grid &grid,
                                            const CMatrix &psi2, const CMatrix &rho1) {
  const FockBasis &basis = gen.basis();
  const int d = basis.dimension();
  const int o1 = basis.block_offset(1), d1 = basis.block_dimension(1);
  const double h = grid.spacing();
  BlockFlowReport rep;

  // Perturbation confined to rho_{1,1}.
  CMatrix delta1 = CMatrix::Zero(d, d);
  delta1.block(o1, o1, d1, d1) = h * rho1;
  const CMatrix flow1 = gen.apply(delta1);
  rep.two_from_one = fock_block(basis, flow1, 2, 2).cwiseAbs().maxCoeff();
  // Gamma is read off the absorber's one-particle block, which is diagonal.
  const CMatrix g1 = fock_block(basis, gen.absorber(), 1, 1);
  double expected_rate = 0.0;
  for (int j = 0; j < grid.size(); ++j)
    expected_rate += 2.0 / kHbar * h * g1(j, j).real() * rho1(j, j).real();
  rep.vacuum_rate_mismatch = std::abs(flow1(0, 0).real() - expected_rate);

  // Pure two-body perturbation.
  const CVector v = pair_vector(basis, psi2, grid);
  CMatrix delta2 = CMatrix::Zero(d, d);
  const int o2 = basis.block_offset(2), d2 = basis.block_dimension(2);
  delta2.block(o2, o2, d2, d2) = v * v.adjoint();
  const CMatrix flow2 = gen.apply(delta2);
  const CMatrix feed = fock_block(basis, flow2, 1, 1);
  rep.one_from_two = feed.cwiseAbs().maxCoeff();

  RVector gamma(grid.size());
  for (int j = 0; j < grid.size(); ++j) gamma(j) = g1(j, j).real();
  const Exchange s = basis.statistics() == Statistics::fermion ? Exchange::antisymmetric
                                                                 : Exchange::symmetric;
  const CMatrix rho_s = source_matrix(TwoBodyState{psi2, s, spin_for(s)}, gamma, grid);
  rep.source_mismatch = (feed - (2.0 / kHbar) * h * rho_s).cwiseAbs().maxCoeff();
  return rep;
}

OracleProblem make_oracle_problem(const OracleCase &c) {
  if (c.modes < 4 || c.modes > 8) throw std::invalid_argument("oracle case: modes must lie in [4, 8]");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Grid grid = make_grid(c.spacing * c.modes, c.modes, 0.0);
  const int n = grid.size();
  DiscreteModel model{grid, 1.0, RVector(n), RVector::Zero(n), RMatrix(n, n), std::nullopt};
  for (int j = 0; j < n; ++j) model.potential(j) = uni(rng);
  model.cap(0) = 1.0 + 0.5 * uni(rng);
  model.cap(n - 1) = 1.0 + 0.5 * uni(rng);
  const InteractionSpec u{1.0 + 0.5 * uni(rng), 1.0};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) model.interaction(j, k) = eval_interaction(u, grid.x(j), grid.x(k));

  CMatrix psi(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) psi(j, k) = Complex(normal(rng), normal(rng));
  const double sg = sign_of(c.exchange);
  psi = 0.5 * (psi + sg * psi.transpose()).eval();
  psi /= std::sqrt(two_body_norm(psi, grid));
  return {std::move(model), TwoBodyState{psi, c.exchange, spin_for(c.exchange)}};
}

EngineComparison compare_engine_with_oracle(const OracleProblem &problem, double t_end,
                                            double dt_engine, int oracle_refinement) {
  const Grid &grid = problem.model.grid;
  const Exchange s = problem.initial.exchange;
  const Propagator prop(problem.model, dt_engine);
  const DenseGenerator gen = make_dense_generator(problem.model, s);
  const FockBasis &basis = gen.basis();

  SystemState state = make_system_state(problem.initial);
  const CMatrix rho0 = embed_state(basis, state, grid);
  const auto samples =
      integrate_dense(gen, rho0, t_end, dt_engine / oracle_refinement, oracle_refinement);

  EngineComparison cmp;
  cmp.min_eigenvalue = std::numeric_limits<double>::infinity();
  InvariantOptions loose;
  loose.trace_drift_bound = 1.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0) {
      prop.step(state);
      enforce_invariants(state, grid, loose);
    }
    const CMatrix &rho = samples[i].rho;
    const CMatrix engine = embed_state(basis, state, grid);
    for (int n = 0; n <= 2; ++n)
      cmp.max_deviation = std::max(
          cmp.max_deviation,
          (fock_block(basis, rho, n, n) - fock_block(basis, engine, n, n)).cwiseAbs().maxCoeff());
    for (int n = 0; n <= 2; ++n)
      for (int m = 0; m <= 2; ++m)
        if (n != m)
          cmp.max_offdiag_block =
              std::max(cmp.max_offdiag_block, fock_block(basis, rho, n, m).cwiseAbs().maxCoeff());
    cmp.max_trace_error = std::max(cmp.max_trace_error, std::abs(rho.trace() - Complex(1.0)));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    cmp.min_eigenvalue = std::min(cmp.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  return cmp;
}

OracleCaseReport run_oracle_case(const OracleCase &c, double dt) {
  const OracleProblem problem = make_oracle_problem(c);
  const auto coarse = compare_engine_with_oracle(problem, c.t_end, dt);
  const auto fine = compare_engine_with_oracle(problem, c.t_end, 0.5 * dt);
  OracleCaseReport r;
  r.spec = c;
  r.dt = dt;
  r.deviation_coarse = coarse.max_deviation;
  r.deviation_fine = fine.max_deviation;
  r.ratio = coarse.max_deviation / fine.max_deviation;
  r.max_offdiag_block = std::max(coarse.max_offdiag_block, fine.max_offdiag_block);
  r.max_trace_error = std::max(coarse.max_trace_error, fine.max_trace_error);
  r.passed = r.ratio >= 3.5 && r.ratio <= 4.5 && r.max_offdiag_block == 0.0 &&
             r.max_trace_error <= 1e-10;
  return r;
}

std::string format_report(const OracleCaseReport &r) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "M=%d s=%+d seed=%llu dt=%.4g dev(dt)=%.3e dev(dt/2)=%.3e ratio=%.3f "
                "offdiag=%.1e trace_err=%.1e %s",
                r.spec.modes, static_cast<int>(r.spec.exchange),
                static_cast<unsigned long long>(r.spec.seed), r.dt, r.deviation_coarse,
                r.deviation_fine, r.ratio, r.max_offdiag_block, r.max_trace_error,
                r.passed ? "PASS" : "FAIL");
  return buf;
}

} // namespace fockcap
