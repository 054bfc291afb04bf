#include "fockcap/cap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fockcap {

namespace {

// Depth into the Manolopoulos layer; edges sit on the periodic seam.
double seam_depth(const CapSpec &spec, double x, const Grid &domain) {
  const double half = 0.5 * domain.spacing();
  const double lo = domain.lower() - half;
  const double hi = domain.upper() - half;
  return std::max({0.0, spec.onset - (x - lo), x - (hi - spec.onset)});
}

double manolopoulos_profile(double z) {
  constexpr double c = kManolopoulosC;
  const double c3 = c * c * c;
  const double a = 1.0 - 16.0 / c3;
  const double b = (1.0 - 17.0 / c3) / (c * c);
  return a * z - b * z * z * z + 4.0 / ((c - z) * (c - z)) - 4.0 / ((c + z) * (c + z));
}

} // namespace

double manolopoulos_k_min(const CapSpec &spec) {
  if (spec.k_min > 0.0) return spec.k_min;
  return kManolopoulosC / (2.0 * spec.accuracy * spec.onset);
}

void CapSpec::validate(const Grid &domain) const {
  if (kind == CapKind::none) return;
  if (!(onset > 0.0)) throw std::invalid_argument("cap: onset must be positive");
  if (!(2.0 * onset < domain.length()))
    throw std::invalid_argument("cap: 2*onset must be smaller than the domain length");
  if (kind == CapKind::power) {
    if (!(strength >= 0.0)) throw std::invalid_argument("cap: strength must be non-negative");
    if (order < 1) throw std::invalid_argument("cap: power order must be >= 1");
  }
  if (kind == CapKind::manolopoulos) {
    if (!(accuracy > 0.0)) throw std::invalid_argument("cap: accuracy parameter must be positive");
    if (k_min < 0.0) throw std::invalid_argument("cap: k_min must be non-negative");
    const double singular_depth = kManolopoulosC / (2.0 * accuracy * manolopoulos_k_min(*this));
    const double tol = 1e-9 * domain.spacing();
    for (double x : domain.points()) {
      if (seam_depth(*this, x, domain) >= singular_depth - tol)
        throw std::invalid_argument(
            "cap: Manolopoulos singular endpoint lies on or inside the grid (x = " +
            std::to_string(x) + ")");
    }
  }
}

double eval_power_cap(const CapSpec &spec, double x, const Grid &domain) {
  const double xi =
      std::max({0.0, spec.onset - (x - domain.lower()), x - (domain.upper() - spec.onset)});
  if (xi == 0.0) return 0.0;
  return spec.strength * std::pow(xi / spec.onset, spec.order);
}

double eval_manolopoulos_cap(const CapSpec &spec, double x, const Grid &domain, double mass) {
  const double u = seam_depth(spec, x, domain);
  if (u == 0.0) return 0.0;
  const double k_min = manolopoulos_k_min(spec);
  const double e_min = kHbar * kHbar * k_min * k_min / (2.0 * mass);
  return e_min * manolopoulos_profile(2.0 * spec.accuracy * k_min * u);
}

RVector cap_on_grid(const CapSpec &spec, const Grid &grid, double mass) {
  spec.validate(grid);
  RVector gamma = RVector::Zero(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    switch (spec.kind) {
    case CapKind::power: gamma(j) = eval_power_cap(spec, grid.x(j), grid); break;
    case CapKind::manolopoulos: gamma(j) = eval_manolopoulos_cap(spec, grid.x(j), grid, mass); break;
    case CapKind::none: break;
    }
  }
  return gamma;
}

std::string_view to_string(CapKind kind) {
  switch (kind) {
  case CapKind::none: return "none";
  case CapKind::power: return "power";
  case CapKind::manolopoulos: return "manolopoulos";
  }
  return "none";
}

CapKind cap_kind_from_string(std::string_view name) {
  if (name == "none") return CapKind::none;
  if (name == "power") return CapKind::power;
  if (name == "manolopoulos") return CapKind::manolopoulos;
  throw std::invalid_argument("unknown cap kind '" + std::string(name) + "'");
}

} // namespace fockcap
