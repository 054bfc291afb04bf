#include "doctest.h"

#include <cmath>

#include "fockcap/dynamics.hpp"
#include "fockcap/observables.hpp"

using namespace fockcap;
using doctest::Approx;

namespace {

struct Fixture {
  Grid g = make_grid(20.0, 64);
  CVector a = gaussian_packet(g, 8.0, 0.0, 0.7);
  CVector b;
  Fixture() {
    b.resize(g.size());
    for (int j = 0; j < g.size(); ++j) b(j) = (g.x(j) - 8.0) * a(j);
    b /= std::sqrt(g.spacing() * b.squaredNorm());
  }
};

} // namespace

TEST_CASE("partial traces, particle number and purity of simple states") {
  Fixture f;
  SystemState st = make_system_state(build_product_state(f.a, f.b, Exchange::antisymmetric, f.g));
  auto p = partial_traces(st, f.g);
  CHECK(p.p2 == Approx(1.0));
  CHECK(p.p1 == 0.0);
  CHECK(p.p0 == 0.0);
  CHECK(particle_number(st, f.g) == Approx(2.0));
  CHECK(purity(st, f.g) == Approx(1.0));
  CHECK(entropy(st, f.g) == Approx(0.0).epsilon(1e-12));
  CHECK(cond_purity(st, f.g, 2) == 1.0);
  CHECK_THROWS_AS(cond_purity(st, f.g, 1), std::domain_error);
  CHECK_THROWS_AS(cond_purity(st, f.g, 0), std::domain_error);
  CHECK_THROWS_AS(cond_purity(st, f.g, 3), std::domain_error);

  // P = (0.5, 0.3, 0.2)
  st.psi2.amplitudes *= std::sqrt(0.5);
  st.rho1.matrix = 0.3 * f.a * f.a.adjoint();
  st.p0 = 0.2;
  p = partial_traces(st, f.g);
  CHECK(p.p2 == Approx(0.5));
  CHECK(p.p1 == Approx(0.3));
  CHECK(particle_number(st, f.g) == Approx(1.3));
  CHECK(purity(st, f.g) == Approx(0.25 + 0.09 + 0.04));
  CHECK(cond_purity(st, f.g, 1) == Approx(1.0)); // rank-1 rho1
  const double s_expect = -(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2));
  CHECK(entropy(st, f.g) == Approx(s_expect));

  const Densities d = densities(st, f.g);
  CHECK(f.g.spacing() * d.total.sum() == Approx(particle_number(st, f.g)).epsilon(1e-10));
}

TEST_CASE("maximal two-outcome mixing") {
  Fixture f;
  SystemState st = make_system_state(build_product_state(f.a, f.b, Exchange::antisymmetric, f.g));
  st.psi2.amplitudes *= std::sqrt(0.5);
  st.p0 = 0.5;
  CHECK(entropy(st, f.g) == Approx(std::log(2.0)));
  CHECK(purity(st, f.g) == Approx(0.5));

  // mixed rho1: conditional purity below one
  st.p0 = 0.0;
  st.rho1.matrix = 0.25 * (f.a * f.a.adjoint() + f.b * f.b.adjoint());
  CHECK(cond_purity(st, f.g, 1) == Approx(0.5));
}

TEST_CASE("conditional expectations") {
  Fixture f;
  SystemState st = make_system_state(build_product_state(f.a, f.b, Exchange::antisymmetric, f.g));
  st.psi2.amplitudes *= std::sqrt(0.6);
  st.rho1.matrix = 0.4 * f.a * f.a.adjoint();
  const int n = f.g.size();
  const CMatrix id = CMatrix::Identity(n, n);
  CHECK(conditional_expectation(st, f.g, id, 1) == Approx(1.0));
  CHECK(conditional_expectation(st, f.g, CMatrix::Ones(n, n), 2) == Approx(1.0));
  CMatrix x = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) x(j, j) = f.g.x(j);
  CHECK(conditional_expectation(st, f.g, x, 1) == Approx(8.0).epsilon(1e-10));
  CHECK_THROWS_AS(conditional_expectation(st, f.g, id, 0), std::domain_error);
  CHECK_THROWS_AS(conditional_expectation(st, f.g, id, 4), std::domain_error);

  // <Gamma>_1 = (hbar/2) dp0/dt / P(1)
  CapSpec cap;
  cap.kind = CapKind::power;
  cap.strength = 2.0;
  cap.onset = 7.0;
  const DiscreteModel model = sample_model(f.g, 1.0, PotentialSpec{}, InteractionSpec{0.0, 1.0}, cap);
  const Propagator prop(model, 0.01);
  const CMatrix gam = model.cap.cast<Complex>().asDiagonal();
  const double lhs = conditional_expectation(st, f.g, gam, 1);
  const double rhs = 0.5 * kHbar * prop.vacuum_feed_rate(st.rho1.matrix) / 0.4;
  CHECK(lhs == Approx(rhs).epsilon(1e-12));
}

TEST_CASE("overlap with the initial state") {
  Fixture f;
  const TwoBodyState s0 = build_product_state(f.a, f.b, Exchange::antisymmetric, f.g);
  CHECK(overlap_initial(s0, s0, f.g) == Approx(1.0));
  const CVector c = gaussian_packet(f.g, 15.0, 0.0, 0.4);
  const TwoBodyState far = build_product_state(f.a, c, Exchange::antisymmetric, f.g);
  CVector c_odd = c;
  for (int j = 0; j < f.g.size(); ++j) c_odd(j) *= (f.g.x(j) - 15.0);
  c_odd /= std::sqrt(f.g.spacing() * c_odd.squaredNorm());
  const TwoBodyState disjoint = build_product_state(c, c_odd, Exchange::antisymmetric, f.g);
  CHECK(overlap_initial(disjoint, s0, f.g) < 1e-20);
  CHECK(overlap_initial(far, s0, f.g) < 1.0);
}
