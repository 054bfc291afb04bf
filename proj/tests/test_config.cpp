#include "doctest.h"

#include <string>

#include "fockcap/config.hpp"

using namespace fockcap;
using doctest::Approx;

namespace {

const std::string kDir = std::string(FOCKCAP_SOURCE_DIR) + "/configs/";

const char *kMinimal = R"(
[grid]
x_max = 10
n_points = 16

[initial]
kind = slater
spin = singlet
alpha.kind = gaussian
alpha.center = 5
alpha.width = 1
beta.kind = gaussian
beta.center = 4
beta.width = 0.5

[time]
dt = 0.01
t_end = 1
)";

std::string with_line(const std::string &section_line, const std::string &extra) {
  std::string s = kMinimal;
  const auto at = s.find(section_line);
  return s.insert(at + section_line.size() + 1, extra + "\n");
}

} // namespace

TEST_CASE("bundled collision config") {
  const ExperimentConfig c = load_config(kDir + "collision.cfg");
  CHECK(c.potential.kind == PotentialKind::gaussian_well);
  CHECK(c.potential.depth == 4.0);
  CHECK(c.potential.width == 0.75);
  CHECK(c.interaction.strength == 5.0);
  CHECK(c.interaction.softening == 0.1);
  CHECK(c.cap.kind == CapKind::power);
  CHECK(c.cap.order == 3);
  CHECK(c.cap.strength == 4.0);
  CHECK(c.cap.onset == 5.0);
  CHECK(c.initial.beta.k0 == 2.0);
  CHECK(c.grid.x_offset == 0.0);
  CHECK(c.grid.x_max == 40.0);
  CHECK(c.initial.exchange == Exchange::antisymmetric);
}

TEST_CASE("bundled helium config") {
  const ExperimentConfig c = load_config(kDir + "helium.cfg");
  CHECK(c.potential.kind == PotentialKind::soft_coulomb_nuclear);
  CHECK(c.potential.softening_sq == 0.5);
  CHECK(c.interaction.softening == 0.5735);
  CHECK(c.pulse.enabled);
  CHECK(c.pulse.peak_field == 5.0);
  CHECK(c.pulse.frequency == 3.2);
  CHECK((c.pulse.n_cycles == 3.0 || c.pulse.n_cycles == 5.0));
  CHECK(c.cap.kind == CapKind::manolopoulos);
  CHECK(c.initial.exchange == Exchange::symmetric);
  CHECK(c.sweep.values == std::vector<std::string>{"3", "5"});
}

TEST_CASE("round trip is exact") {
  for (const char *name : {"collision.cfg", "helium.cfg", "separability.cfg", "oracle.cfg"}) {
    const ExperimentConfig c = load_config(kDir + name);
    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
  ExperimentConfig c = parse_config(kMinimal);
  c.time.dt = 0.1 + 0.2; // not representable in short decimal form
  c.initial.alpha.center = 1.0 / 3.0;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("errors carry line numbers") {
  CHECK_NOTHROW(parse_config(kMinimal));
  try {
    parse_config(with_line("[grid]", "bogus = 1"));
    FAIL("expected an error");
  } catch (const ConfigError &e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  try {
    parse_config(with_line("[grid]", "mass = heavy"));
    FAIL("expected an error");
  } catch (const ConfigError &e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_config(with_line("[grid]", "n_points = 2.5")), ConfigError);
  CHECK_THROWS_AS(parse_config(with_line("[grid]", "x_max = 3")), ConfigError); // duplicate
  CHECK_THROWS_AS(parse_config("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(with_line("[time]", "output_stride = 0")), ConfigError);
}

TEST_CASE("constraint violations") {
  // absorber wider than half the domain
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[cap]\nkind = power\nstrength = 1\nonset = 5\n"),
                  ConfigError);
  CHECK_NOTHROW(parse_config(std::string(kMinimal) + "[cap]\nkind = power\nstrength = 1\nonset = 4.9\n"));
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[interaction]\nsoftening = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[oracle]\nmodes = 9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[sweep]\nkey = grid.nope\nvalues = 1\n"), ConfigError);
}

TEST_CASE("empty file lists the required keys") {
  try {
    parse_config("");
    FAIL("expected an error");
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    for (const auto &k : required_keys()) CHECK(msg.find(k) != std::string::npos);
  }
  CHECK(required_keys().size() >= 5);
}

TEST_CASE("overrides") {
  const ExperimentConfig c = load_config(kDir + "helium.cfg");
  const ExperimentConfig five = with_override(c, "pulse.n_cycles", "5");
  CHECK(five.pulse.n_cycles == 5.0);
  CHECK(five.pulse_spec()->duration == Approx(5.0 * 2.0 * 3.14159265358979 / 3.2));
  CHECK_THROWS_AS(with_override(c, "pulse.cycles", "5"), ConfigError);
  CHECK_THROWS_AS(with_override(c, "grid.n_points", "2"), ConfigError);
}
