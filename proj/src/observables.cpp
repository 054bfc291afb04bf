#include "fockcap/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fockcap {

namespace {

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

PartialTraces partial_traces(const SystemState &state, const Grid &grid) {
  const double h = grid.spacing();
  const Complex tr = state.rho1.matrix.trace();
  return {two_body_norm(state.psi2.amplitudes, grid), h * tr.real(), state.p0, h * tr.imag()};
}

double particle_number(const SystemState &state, const Grid &grid) {
  const auto p = partial_traces(state, grid);
  return 2.0 * p.p2 + p.p1;
}

double purity(const SystemState &state, const Grid &grid) {
  const auto p = partial_traces(state, grid);
  const double h = grid.spacing();
  return p.p2 * p.p2 + h * h * state.rho1.matrix.squaredNorm() + p.p0 * p.p0;
}

double cond_purity(const SystemState &state, const Grid &grid, int n) {
  const auto p = partial_traces(state, grid);
  switch (n) {
  case 2:
    if (p.p2 < kConditionalThreshold) throw std::domain_error("cond_purity: P(2) vanishes");
    return 1.0;
  case 1: {
    if (p.p1 < kConditionalThreshold) throw std::domain_error("cond_purity: P(1) vanishes");
    const double h = grid.spacing();
    return h * h * state.rho1.matrix.squaredNorm() / (p.p1 * p.p1);
  }
  case 0:
    if (p.p0 < kConditionalThreshold) throw std::domain_error("cond_purity: P(0) vanishes");
    return 1.0;
  default:
    throw std::domain_error("cond_purity: block must be 0, 1 or 2");
  }
}

RVector rho1_spectrum(const OneBodyDensity &rho1, const Grid &grid) {
  const CMatrix weighted = grid.spacing() * rho1.matrix;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(weighted, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

namespace {

double entropy_from(const PartialTraces &p, const RVector &spectrum) {
  double s = xlogx(p.p2) + xlogx(p.p0);
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) s += xlogx(spectrum(i));
  return -s;
}

} // namespace

double entropy(const SystemState &state, const Grid &grid) {
  return entropy_from(partial_traces(state, grid), rho1_spectrum(state.rho1, grid));
}

Densities densities(const SystemState &state, const Grid &grid) {
  const double h = grid.spacing();
  Densities d;
  d.two = 2.0 * h * state.psi2.amplitudes.cwiseAbs2().colwise().sum().transpose();
  d.one = state.rho1.matrix.diagonal().real();
  d.total = d.two + d.one;
  return d;
}

double conditional_expectation(const SystemState &state, const Grid &grid, const CMatrix &op, int n) {
  const auto p = partial_traces(state, grid);
  const double h = grid.spacing();
  const int size = grid.size();
  switch (n) {
  case 0:
    if (p.p0 < kConditionalThreshold) throw std::domain_error("conditional_expectation: P(0) vanishes");
    return 1.0;
  case 1: {
    if (p.p1 < kConditionalThreshold) throw std::domain_error("conditional_expectation: P(1) vanishes");
    if (op.rows() != size || op.cols() != size)
      throw std::invalid_argument("conditional_expectation: operator shape mismatch");
    // Tr(A rho1) with A acting on grid vectors and rho1 carrying weight h.
    return (h * (op * state.rho1.matrix).trace()).real() / p.p1;
  }
  case 2: {
    if (p.p2 < kConditionalThreshold) throw std::domain_error("conditional_expectation: P(2) vanishes");
    if (op.rows() != size || op.cols() != size)
      throw std::invalid_argument("conditional_expectation: operator shape mismatch");
    const double num =
        h * h * (op.array() * state.psi2.amplitudes.cwiseAbs2().array().cast<Complex>()).sum().real();
    return num / p.p2;
  }
  default:
    throw std::domain_error("conditional_expectation: block must be 0, 1 or 2");
  }
}

double overlap_initial(const TwoBodyState &psi2_t, const TwoBodyState &psi2_0, const Grid &grid) {
  if (psi2_t.amplitudes.rows() != psi2_0.amplitudes.rows() ||
      psi2_t.amplitudes.cols() != psi2_0.amplitudes.cols())
    throw std::invalid_argument("overlap_initial: shape mismatch");
  const double h = grid.spacing();
  const Complex ov = h * h * (psi2_0.amplitudes.conjugate().cwiseProduct(psi2_t.amplitudes)).sum();
  return std::norm(ov);
}

ObservableRow compute_observables(const SystemState &state, const Grid &grid,
                                  const TwoBodyState &initial, bool with_spectrum) {
  ObservableRow row;
  const auto p = partial_traces(state, grid);
  row.t = state.time;
  row.p2 = p.p2;
  row.p1 = p.p1;
  row.p0 = p.p0;
  row.n_expect = 2.0 * p.p2 + p.p1;
  row.purity = purity(state, grid);
  row.cond_purity_1 = p.p1 >= kConditionalThreshold ? cond_purity(state, grid, 1) : kNaN;
  row.overlap_initial = overlap_initial(state.psi2, initial, grid);
  row.trace_drift = std::abs(p.p2 + p.p1 + p.p0 - 1.0);
  row.p0_from_constraint = 1.0 - p.p2 - p.p1;
  row.hermiticity_rho1 = (state.rho1.matrix - state.rho1.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (with_spectrum) {
    const RVector spec = rho1_spectrum(state.rho1, grid);
    row.entropy = entropy_from(p, spec);
    row.min_eigenvalue_rho1 = spec.minCoeff();
  } else {
    row.entropy = kNaN;
    row.min_eigenvalue_rho1 = kNaN;
  }
  return row;
}

} // namespace fockcap
