#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "oneshot/entropy.hpp"
#include "oneshot/typical.hpp"

using namespace oneshot;

TEST_CASE("xi bounds") {
  const Pmf u4(Alphabet::indexed(4), {0.25, 0.25, 0.25, 0.25});
  const XiBounds b = xi_bounds(JointPmf::from_pmf("X", u4), 0.1);
  CHECK(b.xi_min == doctest::Approx(1.8));
  CHECK(b.xi_max == doctest::Approx(2.2));
  CHECK(b.entropy == doctest::Approx(2.0));

  // single-symbol alphabet: the slack term vanishes with log2(1) = 0
  const XiBounds point = xi_bounds(JointPmf::from_pmf("X", Pmf(Alphabet({"only"}), {1.0})), 0.3);
  CHECK(point.xi_min == doctest::Approx(0.0));
  CHECK(point.xi_max == doctest::Approx(0.0));

  const XiBounds u2 = xi_bounds(JointPmf::from_pmf("X", testutil::bern(0.5)), 0.0);
  CHECK(u2.xi_min == doctest::Approx(1.0));
  CHECK(u2.xi_max == doctest::Approx(1.0));

  RngStream rng(41, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const XiBounds r = xi_bounds(JointPmf::from_pmf("X", testutil::random_pmf(rng, 6)), 0.05);
    CHECK(r.xi_min <= r.entropy + 1e-12);
    CHECK(r.xi_max >= r.entropy - 1e-12);
  }
}

TEST_CASE("epsilon budget") {
  const EpsilonBudget b = EpsilonBudget::equal_split(0.2);
  CHECK(b.parts[0] == doctest::Approx(0.05));
  CHECK_THROWS_AS(EpsilonBudget::with_parts(0.2, 0.1, 0.1, 0.1, 0.1), DomainError);
  CHECK_THROWS_AS(EpsilonBudget::with_parts(0.2, 0.0, 0.1, 0.05, 0.05), DomainError);
}

TEST_CASE("uniform joints are fully typical") {
  const JointPmf u22 = testutil::independent_bits();
  for (double delta : {0.0, 0.1, 0.3}) {
    const TypicalSet set(u22, delta);
    CHECK(set.members().size() == 4);
    CHECK(set.tail() == doctest::Approx(0.0));
  }
}

TEST_CASE("typical set by brute enumeration") {
  const JointPmf cube = iid_extension(JointPmf::from_pmf("X", testutil::bern(0.3)), 3);
  const double delta = 0.1;
  const TypicalSet set(cube, delta);

  // independent re-evaluation of the defining inequalities over all 8 strings
  const XiBounds b = xi_bounds(cube, delta);
  double tail = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < cube.size(); ++i) {
    const double m = cube.mass(i);
    const double s = -std::log2(m);
    const bool inside = s >= b.xi_min - 1e-9 && s <= b.xi_max + 1e-9;
    if (inside)
      ++count;
    else
      tail += m;
    CHECK(set.contains(i) == inside);
  }
  CHECK(set.members().size() == count);
  CHECK(set.tail() == doctest::Approx(tail).epsilon(1e-9));
}

TEST_CASE("product of point masses") {
  const JointPmf point = product(Pmf(Alphabet::binary(), {1.0, 0.0}),
                                 Pmf(Alphabet::binary(), {0.0, 1.0}));
  const TypicalSet set(point, 0.05);
  CHECK(set.members().size() == 1);
  CHECK(set.tail() == doctest::Approx(0.0));
}

TEST_CASE("membership closure over marginals") {
  RngStream rng(42, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const JointPmf joint = testutil::random_joint(rng, 4, 4);
    for (double delta : {0.0, 0.05, 0.1}) {
      const TypicalSet set(joint, delta);
      const TypicalSet set_x(marginalize(joint, {"X"}), delta);
      const TypicalSet set_y(marginalize(joint, {"Y"}), delta);
      for (std::size_t flat : set.members()) {
        CHECK(set_x.contains(flat / 4));
        CHECK(set_y.contains(flat % 4));
      }
    }
  }
}

TEST_CASE("member mass bracket") {
  RngStream rng(43, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const JointPmf joint = testutil::random_joint(rng, 5, 3);
    const TypicalSet set(joint, 0.05);
    const XiBounds& b = set.bounds_for("XY");
    for (std::size_t flat : set.members()) {
      CHECK(joint.mass(flat) <= std::exp2(-b.xi_min + 1e-6));
      CHECK(joint.mass(flat) >= std::exp2(-b.xi_max - 1e-6));
    }
  }
}

TEST_CASE("pair tail dominates the surprisal-only tail") {
  RngStream rng(44, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const JointPmf joint = testutil::random_joint(rng, 4, 4);
    for (double delta : {0.02, 0.08}) {
      const TypicalSet set(joint, delta);
      const XiBounds b = xi_bounds(joint, delta);
      double joint_only_tail = 0.0;
      for (std::size_t i = 0; i < joint.size(); ++i) {
        const double m = joint.mass(i);
        if (m <= 0.0) continue;
        const double s = -std::log2(m);
        if (s < b.xi_min - 1e-9 || s > b.xi_max + 1e-9) joint_only_tail += m;
      }
      CHECK(set.tail() >= joint_only_tail - 1e-9);
    }
  }
}

TEST_CASE("conditional slices") {
  const TypicalSet coupled(testutil::correlated_bits(0.0), 0.0);
  CHECK(coupled.conditional_slice("0") == std::vector<std::size_t>{0});
  CHECK(coupled.conditional_slice("1") == std::vector<std::size_t>{1});

  const TypicalSet indep(testutil::independent_bits(), 0.0);
  CHECK(indep.conditional_slice("1").size() == 2);
  CHECK_THROWS_AS(indep.conditional_slice("q"), DomainError);
}

TEST_CASE("conditional slice cardinality bound") {
  RngStream rng(45, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const JointPmf joint = testutil::random_joint(rng, 4, 4);
    for (double delta : {0.0, 0.04, 0.1, 0.2}) {
      const TypicalSet set(joint, delta);
      const TypicalSet set_y(marginalize(joint, {"Y"}), delta);
      const double cap =
          std::exp2(set.bounds_for("XY").xi_max - set.bounds_for("Y").xi_min + 4e-9);
      for (std::size_t y = 0; y < 4; ++y) {
        if (!set_y.contains(y)) continue;
        CHECK(static_cast<double>(set.conditional_slice(y).size()) <= cap + 1e-6);
      }
    }
  }
}

TEST_CASE("triple sets enforce pair and singleton memberships") {
  RngStream rng(46, 0);
  std::vector<double> mass(2 * 2 * 3);
  double sum = 0.0;
  for (double& m : mass) {
    m = -std::log(1.0 - rng.next_unit());
    sum += m;
  }
  for (double& m : mass) m /= sum;
  const JointPmf triple({Axis{"X", Alphabet::binary()}, Axis{"Y", Alphabet::binary()},
                         Axis{"Z", Alphabet::indexed(3, "z")}},
                        mass);
  for (double delta : {0.0, 0.05, 0.15}) {
    const TypicalSet set(triple, delta);
    const TypicalSet set_xy(marginalize(triple, {"X", "Y"}), delta);
    const TypicalSet set_xz(marginalize(triple, {"X", "Z"}), delta);
    const TypicalSet set_yz(marginalize(triple, {"Y", "Z"}), delta);
    for (std::size_t flat : set.members()) {
      const std::size_t z = flat % 3, y = (flat / 3) % 2, x = flat / 6;
      CHECK(set_xy.contains(x * 2 + y));
      CHECK(set_xz.contains(x * 3 + z));
      CHECK(set_yz.contains(y * 3 + z));
    }
  }
}

TEST_CASE("find_delta") {
  const JointPmf u22 = testutil::independent_bits();
  CHECK(find_delta(u22, 0.05, 0.01) == doctest::Approx(0.0));

  // cross-check with an independent finer scan
  const JointPmf cube = iid_extension(JointPmf::from_pmf("X", testutil::bern(0.3)), 3);
  const double coarse = find_delta(cube, 0.05, 0.01);
  const double fine = find_delta(cube, 0.05, 0.002);
  CHECK(fine <= coarse + 1e-12);
  CHECK(coarse - fine <= 0.01 + 1e-12);
  CHECK(TypicalSet(cube, coarse).tail() <= 0.05);

  // at delta = 0 the window spans the whole support, so the scan's first grid
  // point always qualifies, even for near-deterministic sources
  const JointPmf skew({Axis{"X", Alphabet::binary()}, Axis{"Y", Alphabet::binary()}},
                      {1.0 - 3e-9, 1e-9, 1e-9, 1e-9});
  CHECK(find_delta(skew, 1e-9, 0.25) == doctest::Approx(0.0));

  CHECK_THROWS_AS(find_delta(u22, 0.0, 0.01), DomainError);
  CHECK_THROWS_AS(find_delta(u22, 0.05, 0.0), DomainError);
}

TEST_CASE("typical set respects the enumeration cap") {
  EnumCaps tiny;
  tiny.joint = 2;
  CHECK_THROWS_AS(TypicalSet(testutil::independent_bits(), 0.0, tiny), ResourceCapError);
}
