#include "fockcap/state.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace fockcap {

std::array<double, 2> OneBodyDensity::spinor() const {
  if (spin.projection > 0) return {1.0, 0.0};
  if (spin.projection < 0) return {0.0, 1.0};
  const double r = 1.0 / std::sqrt(2.0);
  return {r, (spin.total % 2 == 0) ? r : -r};
}

SpinLabel spin_for(Exchange s) {
  return s == Exchange::symmetric ? SpinLabel{0, 0} : SpinLabel{1, 1};
}

double two_body_norm(const CMatrix &psi2, const Grid &grid) {
  const double h = grid.spacing();
  return h * h * psi2.squaredNorm();
}

double one_body_trace(const CMatrix &rho1, const Grid &grid) {
  return grid.spacing() * rho1.diagonal().real().sum();
}

TwoBodyState build_product_state(const CVector &alpha, const CVector &beta, Exchange s,
                                 const Grid &grid) {
  const int n = grid.size();
  if (alpha.size() != n || beta.size() != n)
    throw std::invalid_argument("build_product_state: orbital length mismatch");
  const double h = grid.spacing();
  const double na = h * alpha.squaredNorm();
  const double nb = h * beta.squaredNorm();
  if (std::abs(na - 1.0) > 1e-8 || std::abs(nb - 1.0) > 1e-8)
    throw std::invalid_argument("build_product_state: orbitals must be normalised (h*sum|.|^2 = 1)");

  const double sg = sign_of(s);
  const Complex overlap = h * alpha.dot(beta);
  const double norm_sq = 2.0 * (1.0 + sg * std::norm(overlap));

  TwoBodyState out;
  out.exchange = s;
  out.spin = spin_for(s);
  if (norm_sq < 1e-12) {
    out.amplitudes = CMatrix::Zero(n, n);
    return out;
  }
  out.amplitudes = (alpha * beta.transpose() + sg * beta * alpha.transpose()) / std::sqrt(norm_sq);
  return out;
}

CVector gaussian_packet(const Grid &grid, double center, double k0, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
  const int n = grid.size();
  CVector v(n);
  for (int j = 0; j < n; ++j) {
    const double d = grid.x(j) - center;
    v(j) = std::exp(-d * d / (4.0 * width * width)) * std::polar(1.0, k0 * grid.x(j));
  }
  const double norm = std::sqrt(grid.spacing() * v.squaredNorm());
  return v / norm;
}

SystemState make_system_state(TwoBodyState psi2, double time) {
  const auto n = psi2.amplitudes.rows();
  SystemState st;
  st.rho1.matrix = CMatrix::Zero(n, n);
  st.rho1.spin = psi2.spin;
  st.psi2 = std::move(psi2);
  st.p0 = 0.0;
  st.time = time;
  return st;
}

CMatrix source_matrix(const TwoBodyState &psi2, const RVector &gamma, const Grid &grid) {
  const int n = grid.size();
  const CMatrix &psi = psi2.amplitudes;
  if (psi.rows() != n || psi.cols() != n || gamma.size() != n)
    throw std::invalid_argument("source_matrix: shape mismatch");

  std::vector<int> rows;
  for (int j = 0; j < n; ++j)
    if (gamma(j) > 0.0) rows.push_back(j);
  if (rows.empty()) return CMatrix::Zero(n, n);

  // B = sqrt(Gamma) psi restricted to absorbing rows; rho_S = 2h conj(B^H B).
  CMatrix b(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    b.row(static_cast<Eigen::Index>(r)) = std::sqrt(gamma(rows[r])) * psi.row(rows[r]);
  CMatrix gram = CMatrix::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(b.adjoint());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.adjoint();
  return (2.0 * grid.spacing()) * gram.conjugate();
}

InvariantReport enforce_invariants(SystemState &state, const Grid &grid,
                                   const InvariantOptions &options) {
  InvariantReport rep;
  CMatrix &psi = state.psi2.amplitudes;
  const double sg = sign_of(state.psi2.exchange);
  {
    const CMatrix sym = 0.5 * (psi + sg * psi.transpose());
    rep.exchange_defect = (psi - sym).cwiseAbs().maxCoeff();
    psi = sym;
  }
  CMatrix &rho = state.rho1.matrix;
  {
    const CMatrix herm = 0.5 * (rho + rho.adjoint());
    rep.hermiticity_defect = (rho - herm).cwiseAbs().maxCoeff();
    rho = herm;
  }
  const double total = two_body_norm(psi, grid) + one_body_trace(rho, grid) + state.p0;
  rep.trace_drift = std::abs(total - 1.0);
  if (options.eigen_check) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(grid.spacing() * rho, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  if (!(rep.trace_drift <= options.trace_drift_bound))
    throw TraceDriftError("trace drift " + std::to_string(rep.trace_drift) +
                          " exceeds bound " + std::to_string(options.trace_drift_bound) +
                          " at t = " + std::to_string(state.time));
  return rep;
}

} // namespace fockcap
