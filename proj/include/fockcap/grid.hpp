#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fockcap/types.hpp"

namespace fockcap {

/// Uniform periodic lattice x_j = x_offset + j*h on [x_offset, x_offset + x_max)
/// together with the DFT angular frequencies for spacing h.
class Grid {
public:
  int size() const { return n_points_; }
  double spacing() const { return spacing_; }
  double length() const { return x_max_; }
  double lower() const { return x_offset_; }
  double upper() const { return x_offset_ + x_max_; }

  double x(int j) const { return points_[static_cast<std::size_t>(j)]; }
  double k(int j) const { return wavenumbers_[static_cast<std::size_t>(j)]; }
  std::span<const double> points() const { return points_; }
  /// Non-negative frequencies first, then negative ones (numpy fftfreq order).
  std::span<const double> wavenumbers() const { return wavenumbers_; }

  friend Grid make_grid(double x_max, int n_points, double x_offset);

private:
  Grid() = default;
  double x_max_ = 0.0;
  double x_offset_ = 0.0;
  double spacing_ = 0.0;
  int n_points_ = 0;
  std::vector<double> points_;
  std::vector<double> wavenumbers_;
};

Grid make_grid(double x_max, int n_points, double x_offset = 0.0);

/// FFTW plans for in-place, unnormalised transforms of length-n vectors,
/// n x n column batches and n x n two-dimensional arrays. Plans are created
/// once; executing them is thread-safe.
class SpectralTransform {
public:
  explicit SpectralTransform(int n);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform &) = delete;
  SpectralTransform &operator=(const SpectralTransform &) = delete;
  SpectralTransform(SpectralTransform &&) noexcept;
  SpectralTransform &operator=(SpectralTransform &&) noexcept;

  int size() const { return n_; }

  void forward(CVector &v) const;
  void inverse(CVector &v) const;
  // Transform along the first index of every column; any column count.
  void forward_columns(CMatrix &m) const;
  void inverse_columns(CMatrix &m) const;
  void forward_2d(CMatrix &m) const;
  void inverse_2d(CMatrix &m) const;
  /// m <- (F m F)^T, skipping the final transpose of forward_2d.
  void forward_2d_transposed(CMatrix &m) const;
  /// Inverse of forward_2d_transposed: takes (F m F)^T back to m (times n^2).
  void inverse_2d_transposed(CMatrix &m) const;

private:
  struct Plans;
  int n_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// Applies -hbar^2/(2m) d^2/dx^2 spectrally.
CVector apply_kinetic_1d(const CVector &v, const Grid &grid, double mass = 1.0);

/// (T x 1 + 1 x T) m: kinetic energy of both coordinates of a two-body amplitude.
CMatrix apply_kinetic_2d(const CMatrix &m, const Grid &grid, double mass = 1.0);

/// Dense n x n matrix of the spectral kinetic operator, F^-1 diag(k^2/2m) F.
RMatrix dense_kinetic_matrix(const Grid &grid, double mass = 1.0);

} // namespace fockcap
