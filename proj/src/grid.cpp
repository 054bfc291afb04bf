#include "fockcap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fftw3.h>

namespace fockcap {

Grid make_grid(double x_max, int n_points, double x_offset) {
  if (!(x_max > 0.0) || !std::isfinite(x_max))
    throw std::invalid_argument("make_grid: x_max must be positive, got " + std::to_string(x_max));
  if (n_points < 4)
    throw std::invalid_argument("make_grid: need at least 4 points, got " + std::to_string(n_points));
  if (!std::isfinite(x_offset))
    throw std::invalid_argument("make_grid: x_offset must be finite");

  Grid g;
  g.x_max_ = x_max;
  g.x_offset_ = x_offset;
  g.n_points_ = n_points;
  g.spacing_ = x_max / n_points;
  g.points_.resize(static_cast<std::size_t>(n_points));
  g.wavenumbers_.resize(static_cast<std::size_t>(n_points));
  const double dk = 2.0 * std::numbers::pi / x_max;
  for (int j = 0; j < n_points; ++j) {
    g.points_[static_cast<std::size_t>(j)] = x_offset + j * g.spacing_;
    const int m = (j < (n_points + 1) / 2) ? j : j - n_points;
    g.wavenumbers_[static_cast<std::size_t>(j)] = m * dk;
  }
  return g;
}

namespace {

// The FFTW planner is not reentrant.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s *p) const {
    if (p) fftw_destroy_plan(p);
  }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

fftw_complex *as_fftw(Complex *p) { return reinterpret_cast<fftw_complex *>(p); }

} // namespace

struct SpectralTransform::Plans {
  PlanPtr fwd, inv, fwd_cols, inv_cols;
};

SpectralTransform::SpectralTransform(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 1) throw std::invalid_argument("SpectralTransform: size must be positive");
  // Estimated plans are chosen without timing, so repeated runs round identically.
  constexpr unsigned flags = FFTW_ESTIMATE;
  CVector vec(n);
  CMatrix mat(n, n);
  auto *pv = as_fftw(vec.data());
  auto *pm = as_fftw(mat.data());

  std::lock_guard lock(planner_mutex());
  plans_->fwd.reset(fftw_plan_dft_1d(n, pv, pv, FFTW_FORWARD, flags));
  plans_->inv.reset(fftw_plan_dft_1d(n, pv, pv, FFTW_BACKWARD, flags));
  int len[] = {n};
  plans_->fwd_cols.reset(
      fftw_plan_many_dft(1, len, n, pm, nullptr, 1, n, pm, nullptr, 1, n, FFTW_FORWARD, flags));
  plans_->inv_cols.reset(
      fftw_plan_many_dft(1, len, n, pm, nullptr, 1, n, pm, nullptr, 1, n, FFTW_BACKWARD, flags));
  if (!plans_->fwd || !plans_->inv || !plans_->fwd_cols || !plans_->inv_cols)
    throw std::runtime_error("SpectralTransform: FFTW planning failed");
}

SpectralTransform::~SpectralTransform() {
  if (plans_) {
    std::lock_guard lock(planner_mutex());
    plans_.reset();
  }
}

SpectralTransform::SpectralTransform(SpectralTransform &&) noexcept = default;
SpectralTransform &SpectralTransform::operator=(SpectralTransform &&) noexcept = default;

namespace {

void check_vector(const CVector &v, int n) {
  if (v.size() != n) throw std::invalid_argument("SpectralTransform: vector length mismatch");
}
void check_matrix(const CMatrix &m, int n) {
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("SpectralTransform: matrix shape mismatch");
}

void transpose_in_place(CMatrix &m) {
  constexpr Eigen::Index b = 32;
  const Eigen::Index n = m.rows();
  Complex *d = m.data();
  for (Eigen::Index i0 = 0; i0 < n; i0 += b) {
    for (Eigen::Index j0 = i0; j0 < n; j0 += b) {
      const Eigen::Index i1 = std::min(i0 + b, n), j1 = std::min(j0 + b, n);
      for (Eigen::Index i = i0; i < i1; ++i)
        for (Eigen::Index j = (i0 == j0 ? i + 1 : j0); j < j1; ++j) std::swap(d[i * n + j], d[j * n + i]);
    }
  }
}

} // namespace

void SpectralTransform::forward(CVector &v) const {
  check_vector(v, n_);
  fftw_execute_dft(plans_->fwd.get(), as_fftw(v.data()), as_fftw(v.data()));
}
void SpectralTransform::inverse(CVector &v) const {
  check_vector(v, n_);
  fftw_execute_dft(plans_->inv.get(), as_fftw(v.data()), as_fftw(v.data()));
}
void SpectralTransform::forward_columns(CMatrix &m) const {
  if (m.rows() != n_) throw std::invalid_argument("SpectralTransform: matrix shape mismatch");
  if (m.cols() == n_) {
    fftw_execute_dft(plans_->fwd_cols.get(), as_fftw(m.data()), as_fftw(m.data()));
    return;
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    fftw_execute_dft(plans_->fwd.get(), as_fftw(m.col(c).data()), as_fftw(m.col(c).data()));
}
void SpectralTransform::inverse_columns(CMatrix &m) const {
  if (m.rows() != n_) throw std::invalid_argument("SpectralTransform: matrix shape mismatch");
  if (m.cols() == n_) {
    fftw_execute_dft(plans_->inv_cols.get(), as_fftw(m.data()), as_fftw(m.data()));
    return;
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    fftw_execute_dft(plans_->inv.get(), as_fftw(m.col(c).data()), as_fftw(m.col(c).data()));
}
void SpectralTransform::forward_2d_transposed(CMatrix &m) const {
  check_matrix(m, n_);
  fftw_execute_dft(plans_->fwd_cols.get(), as_fftw(m.data()), as_fftw(m.data()));
  transpose_in_place(m);
  fftw_execute_dft(plans_->fwd_cols.get(), as_fftw(m.data()), as_fftw(m.data()));
}
void SpectralTransform::inverse_2d_transposed(CMatrix &m) const {
  check_matrix(m, n_);
  fftw_execute_dft(plans_->inv_cols.get(), as_fftw(m.data()), as_fftw(m.data()));
  transpose_in_place(m);
  fftw_execute_dft(plans_->inv_cols.get(), as_fftw(m.data()), as_fftw(m.data()));
}
void SpectralTransform::forward_2d(CMatrix &m) const {
  forward_2d_transposed(m);
  transpose_in_place(m);
}
void SpectralTransform::inverse_2d(CMatrix &m) const {
  transpose_in_place(m);
  inverse_2d_transposed(m);
}

namespace {

RVector kinetic_symbol(const Grid &grid, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("kinetic operator: mass must be positive");
  const int n = grid.size();
  RVector t(n);
  for (int j = 0; j < n; ++j) t(j) = kHbar * kHbar * grid.k(j) * grid.k(j) / (2.0 * mass);
  return t;
}

} // namespace

CVector apply_kinetic_1d(const CVector &v, const Grid &grid, double mass) {
  const int n = grid.size();
  if (v.size() != n) throw std::invalid_argument("apply_kinetic_1d: length mismatch");
  const RVector t = kinetic_symbol(grid, mass) / static_cast<double>(n);
  SpectralTransform fft(n);
  CVector out = v;
  fft.forward(out);
  out.array() *= t.array().cast<Complex>();
  fft.inverse(out);
  return out;
}

CMatrix apply_kinetic_2d(const CMatrix &m, const Grid &grid, double mass) {
  const int n = grid.size();
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("apply_kinetic_2d: shape mismatch");
  const RVector t = kinetic_symbol(grid, mass);
  const double norm = 1.0 / (static_cast<double>(n) * n);
  SpectralTransform fft(n);
  CMatrix out = m;
  fft.forward_2d(out);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) out(r, c) *= (t(r) + t(c)) * norm;
  fft.inverse_2d(out);
  return out;
}

RMatrix dense_kinetic_matrix(const Grid &grid, double mass) {
  const int n = grid.size();
  const RVector t = kinetic_symbol(grid, mass);
  const double h = grid.spacing();
  RMatrix dense(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      double sum = 0.0;
      for (int q = 0; q < n; ++q) sum += t(q) * std::cos(grid.k(q) * (j - l) * h);
      dense(j, l) = sum / n;
    }
  }
  return dense;
}

} // namespace fockcap
