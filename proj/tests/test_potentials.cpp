#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fockcap/potentials.hpp"

using namespace fockcap;
using doctest::Approx;

TEST_CASE("static potentials") {
  const PotentialSpec well{PotentialKind::gaussian_well, 4.0, 20.0, 0.75, 0.5};
  CHECK(eval_static_potential(well, 20.0) == Approx(-4.0));
  CHECK(eval_static_potential(well, 20.75) == Approx(-2.42612).epsilon(1e-5));
  CHECK(eval_static_potential(well, 19.25) == Approx(-2.42612).epsilon(1e-5));

  const PotentialSpec nuc{PotentialKind::soft_coulomb_nuclear, 0.0, 0.0, 1.0, 0.5};
  CHECK(eval_static_potential(nuc, 0.0) == Approx(-2.828427).epsilon(1e-6));
  CHECK(eval_static_potential(nuc, 3.0) == Approx(-2.0 / std::sqrt(9.5)));

  CHECK(eval_static_potential(PotentialSpec{}, 1.0) == 0.0);
  CHECK_THROWS(PotentialSpec{PotentialKind::gaussian_well, 1.0, 0.0, 0.0, 0.5}.validate());
  CHECK_THROWS(PotentialSpec{PotentialKind::soft_coulomb_nuclear, 0.0, 0.0, 1.0, 0.0}.validate());
}

TEST_CASE("softened interaction") {
  const InteractionSpec coll{5.0, 0.1};
  CHECK(eval_interaction(coll, 3.0, 3.0) == Approx(50.0));
  const InteractionSpec he{1.0, 0.5735};
  CHECK(eval_interaction(he, -1.0, -1.0) == Approx(1.7437).epsilon(1e-4));
  for (double a : {-2.0, 0.3, 7.0})
    for (double b : {-1.0, 0.0, 4.5}) {
      CHECK(eval_interaction(coll, a, b) == eval_interaction(coll, b, a));
      CHECK(eval_interaction(coll, a + 1.5, b + 1.5) == Approx(eval_interaction(coll, a, b)));
    }
  CHECK_THROWS(InteractionSpec{1.0, 0.0}.validate());
}

TEST_CASE("sine-squared pulse") {
  const PulseSpec p = pulse_from_cycles(5.0, 3.2, 3.0);
  CHECK(p.duration == Approx(3.0 * 2.0 * std::numbers::pi / 3.2));
  CHECK(eval_pulse(p, 0.0) == Approx(0.0));
  CHECK(std::abs(eval_pulse(p, p.duration)) < 1e-12);
  CHECK(eval_pulse(p, 0.5 * p.duration) == Approx(5.0 * std::cos(1.6 * p.duration)));
  CHECK(eval_pulse(p, -0.1) == 0.0);
  CHECK(eval_pulse(p, p.duration + 0.1) == 0.0);
  CHECK(std::abs(eval_pulse(p, 1e-9)) < 1e-15);
  CHECK_THROWS(pulse_from_cycles(5.0, 0.0, 3.0));

  const PulseSpec five = pulse_from_cycles(5.0, 3.2, 5.0);
  CHECK(five.duration == Approx(5.0 / 3.0 * p.duration));
}

TEST_CASE("length gauge") {
  CHECK(length_gauge_term(2.0, 5.0) == 10.0);
  CHECK(length_gauge_term(0.0, 5.0) == 0.0);
  CHECK(length_gauge_term(3.0, 0.0) == 0.0);
}
