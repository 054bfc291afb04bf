#pragma once

#include <string_view>

#include "fockcap/grid.hpp"

namespace fockcap {

enum class CapKind { none, power, manolopoulos };

/// Complex absorbing potential -i Gamma(x) with Gamma >= 0, active within
/// `onset` of either domain edge.
///
/// power:        Gamma = strength * (xi / onset)^order, xi the depth into the
///               absorbing layer measured from the domain edges [lower, upper).
/// manolopoulos: the transmission-free profile E_min * y(2 accuracy k_min u)
///               with y(z) = a z - b z^3 + 4/(c-z)^2 - 4/(c+z)^2. The layer is
///               centred on the periodic seam (half a spacing outside the
///               outermost points). k_min <= 0 places the singularity exactly
///               on the seam.
struct CapSpec {
  CapKind kind = CapKind::none;
  double strength = 0.0;
  int order = 3;
  double onset = 5.0;
  double accuracy = 0.2;
  double k_min = 0.0;

  void validate(const Grid &domain) const;
  bool operator==(const CapSpec &) const = default;
};

inline constexpr double kManolopoulosC = 2.62206;

double eval_power_cap(const CapSpec &spec, double x, const Grid &domain);
double eval_manolopoulos_cap(const CapSpec &spec, double x, const Grid &domain, double mass = 1.0);

/// Gamma sampled on every grid point; validates the spec against the grid.
RVector cap_on_grid(const CapSpec &spec, const Grid &grid, double mass = 1.0);

/// Momentum scale of the Manolopoulos profile (resolves the automatic choice).
double manolopoulos_k_min(const CapSpec &spec);

std::string_view to_string(CapKind kind);
CapKind cap_kind_from_string(std::string_view name);

} // namespace fockcap
