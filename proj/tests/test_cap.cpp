#include "doctest.h"

#include "fockcap/cap.hpp"

using namespace fockcap;
using doctest::Approx;

TEST_CASE("power absorber") {
  const Grid g = make_grid(40.0, 400);
  CapSpec c;
  c.kind = CapKind::power;
  c.strength = 4.0;
  c.order = 3;
  c.onset = 5.0;
  CHECK(eval_power_cap(c, 20.0, g) == 0.0);
  CHECK(eval_power_cap(c, 5.0, g) == 0.0);
  CHECK(eval_power_cap(c, 0.0, g) == Approx(4.0));
  CHECK(eval_power_cap(c, 2.5, g) == Approx(0.5));
  CHECK(eval_power_cap(c, 37.5, g) == Approx(0.5));
  const RVector gamma = cap_on_grid(c, g);
  CHECK(gamma.minCoeff() >= 0.0);
  for (int j = 0; j < g.size(); ++j)
    if (g.x(j) > 5.0 && g.x(j) < 35.0) CHECK(gamma(j) == 0.0);

  c.onset = 20.0;
  CHECK_THROWS(c.validate(g));
  c.onset = 5.0;
  c.order = 0;
  CHECK_THROWS(c.validate(g));
}

TEST_CASE("transmission-free absorber") {
  const Grid g = make_grid(68.0, 512, -34.0);
  CapSpec c;
  c.kind = CapKind::manolopoulos;
  c.onset = 5.0;
  c.accuracy = 0.2;
  const RVector gamma = cap_on_grid(c, g);
  CHECK(gamma.minCoeff() >= 0.0);
  CHECK(gamma.allFinite());
  const int mid = g.size() / 2;
  CHECK(gamma(mid) == 0.0);
  // nondecreasing towards each edge
  for (int j = mid; j + 1 < g.size(); ++j) CHECK(gamma(j + 1) >= gamma(j));
  for (int j = mid; j > 0; --j) CHECK(gamma(j - 1) >= gamma(j));
  // the seam is symmetric: first and last points sit h/2 from it
  CHECK(gamma(0) == Approx(gamma(g.size() - 1)));
  // the layer is 5 deep from the seam at 34 - h/2
  const double seam = 34.0 - 0.5 * g.spacing();
  for (int j = 0; j < g.size(); ++j) {
    const double to_seam = std::min(seam - g.x(j), g.x(j) + 68.0 - seam);
    if (to_seam > 5.0 + 1e-9) CHECK(gamma(j) == 0.0);
    if (to_seam < 5.0 - 1e-9) CHECK(gamma(j) > 0.0);
  }

  // a larger k_min pulls the singular point inside the grid
  const double k_auto = manolopoulos_k_min(c);
  c.k_min = 2.0 * k_auto;
  CHECK_THROWS(c.validate(g));
  c.k_min = 0.5 * k_auto;
  CHECK_NOTHROW(c.validate(g));
}

TEST_CASE("absorber names") {
  CHECK(cap_kind_from_string("power") == CapKind::power);
  CHECK(to_string(CapKind::manolopoulos) == "manolopoulos");
  CHECK_THROWS(cap_kind_from_string("mask"));
}
