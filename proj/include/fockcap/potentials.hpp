#pragma once

#include <string_view>

namespace fockcap {

enum class PotentialKind { none, gaussian_well, soft_coulomb_nuclear };

/// Static one-body potential.
///   gaussian_well:        -depth * exp(-(x - center)^2 / (2 width^2))
///   soft_coulomb_nuclear: -2 / sqrt(x^2 + softening_sq)
struct PotentialSpec {
  PotentialKind kind = PotentialKind::none;
  double depth = 0.0;
  double center = 0.0;
  double width = 1.0;
  double softening_sq = 0.5;

  void validate() const;
  bool operator==(const PotentialSpec &) const = default;
};

/// Softened Coulomb repulsion strength / sqrt((x1 - x2)^2 + softening^2).
struct InteractionSpec {
  double strength = 0.0;
  double softening = 1.0;

  void validate() const;
  bool operator==(const InteractionSpec &) const = default;
};

/// E(t) = peak_field * sin^2(pi t / duration) * cos(frequency t) on [0, duration].
struct PulseSpec {
  double peak_field = 0.0;
  double frequency = 1.0;
  double duration = 1.0;

  void validate() const;
  bool operator==(const PulseSpec &) const = default;
};

/// Pulse whose duration spans n_cycles optical periods 2 pi / frequency.
PulseSpec pulse_from_cycles(double peak_field, double frequency, double n_cycles);

double eval_static_potential(const PotentialSpec &spec, double x);
double eval_interaction(const InteractionSpec &spec, double x1, double x2);
double eval_pulse(const PulseSpec &spec, double t);

/// Length-gauge dipole coupling for charge -1: adds x * E(t) to the potential.
inline double length_gauge_term(double x, double field) { return x * field; }

std::string_view to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(std::string_view name);

} // namespace fockcap
