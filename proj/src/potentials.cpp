#include "fockcap/potentials.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fockcap {

void PotentialSpec::validate() const {
  if (kind == PotentialKind::gaussian_well && !(width > 0.0))
    throw std::invalid_argument("gaussian_well: width must be positive");
  if (kind == PotentialKind::soft_coulomb_nuclear && !(softening_sq > 0.0))
    throw std::invalid_argument("soft_coulomb_nuclear: softening_sq must be positive");
}

void InteractionSpec::validate() const {
  if (!(softening > 0.0)) throw std::invalid_argument("interaction: softening must be positive");
}

void PulseSpec::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("pulse: duration must be positive");
}

PulseSpec pulse_from_cycles(double peak_field, double frequency, double n_cycles) {
  if (!(frequency > 0.0) || !(n_cycles > 0.0))
    throw std::invalid_argument("pulse: frequency and cycle count must be positive");
  return {peak_field, frequency, n_cycles * 2.0 * std::numbers::pi / frequency};
}

double eval_static_potential(const PotentialSpec &spec, double x) {
  switch (spec.kind) {
  case PotentialKind::gaussian_well: {
    const double d = x - spec.center;
    return -spec.depth * std::exp(-d * d / (2.0 * spec.width * spec.width));
  }
  case PotentialKind::soft_coulomb_nuclear:
    return -2.0 / std::sqrt(x * x + spec.softening_sq);
  case PotentialKind::none:
    return 0.0;
  }
  return 0.0;
}

double eval_interaction(const InteractionSpec &spec, double x1, double x2) {
  const double d = x1 - x2;
  return spec.strength / std::sqrt(d * d + spec.softening * spec.softening);
}

double eval_pulse(const PulseSpec &spec, double t) {
  if (t < 0.0 || t > spec.duration) return 0.0;
  const double s = std::sin(std::numbers::pi * t / spec.duration);
  return spec.peak_field * s * s * std::cos(spec.frequency * t);
}

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
  case PotentialKind::none: return "none";
  case PotentialKind::gaussian_well: return "gaussian_well";
  case PotentialKind::soft_coulomb_nuclear: return "soft_coulomb_nuclear";
  }
  return "none";
}

PotentialKind potential_kind_from_string(std::string_view name) {
  if (name == "none") return PotentialKind::none;
  if (name == "gaussian_well") return PotentialKind::gaussian_well;
  if (name == "soft_coulomb_nuclear") return PotentialKind::soft_coulomb_nuclear;
  throw std::invalid_argument("unknown potential kind '" + std::string(name) + "'");
}

} // namespace fockcap
