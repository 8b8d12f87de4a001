#include "robustsum/oracle.hpp"
#include "robustsum/subaffine.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace rsum;
using th::s;
using th::v;

namespace {

SubaffineEntry interval(double lo, double hi, double t) { return {Polytope({s(lo), s(hi)}), t}; }
SubaffineEntry point(double p, double t) { return {Polytope({s(p)}), t}; }

SubaffineFamily abs_pair() { return SubaffineFamily({interval(-1, 1, 0), interval(-1, 1, -1)}); }

}  // namespace

TEST_SUITE("subaffine") {

TEST_CASE("minkowski_contains") {
  const Polytope u({s(-1), s(1)});
  CHECK(minkowski_contains({u, u}, s(1.5)));
  CHECK_FALSE(minkowski_contains({u, u}, s(2.5)));
  CHECK(minkowski_contains({Polytope({s(1)}), Polytope({s(-2)})}, s(-1)));
}

TEST_CASE("A_inverse") {
  CHECK(A_inverse(SubaffineFamily({point(1, 0), point(-2, 0)}), s(-1)) == std::vector<SubsetJ>{{0, 1}});
  CHECK(A_inverse(abs_pair(), s(0)) == std::vector<SubsetJ>{{0}, {1}, {0, 1}});
  CHECK(A_inverse(SubaffineFamily({point(1, 0)}), s(0)).empty());
}

TEST_CASE("conjugate_via_selection") {
  CHECK(conjugate_via_selection(abs_pair(), s(0)) == doctest::Approx(-1.0));
  const auto grid_min = oracle::brute_minimize(
      [](const Vector& x) { return 2 * std::abs(x(0)) + 1; }, oracle::GridSpec(s(-3), s(3), 601));
  CHECK(conjugate_via_selection(abs_pair(), s(0)) == doctest::Approx(-grid_min.value));
  CHECK(conjugate_via_selection(SubaffineFamily({point(1, -1)}), s(1)) == doctest::Approx(-1.0));
  CHECK(is_pos_inf(conjugate_via_selection(SubaffineFamily({point(1, -1), point(-2, -1)}), s(0))));
}

TEST_CASE("support_argmax") {
  const Polytope u({s(-1), s(1)});
  const auto a = support_argmax(u, s(2));
  REQUIRE(a.vertices.size() == 1);
  CHECK(a.vertices[0](0) == 1.0);
  CHECK(support_argmax(u, s(0)).vertices.size() == 2);
  const auto seg = support_argmax(Polytope({v({1, 0}), v({0, 1})}), v({1, 1}));
  CHECK(seg.vertices.size() == 2);
}

TEST_CASE("check_prop_conditions") {
  const auto ok = check_prop_conditions(abs_pair(), s(0));
  CHECK(ok.zero_in_all);
  CHECK(ok.sup_t_nonpositive);
  CHECK(ok.ri_condition);
  CHECK(ok.all_pass());

  const auto edge = check_prop_conditions(abs_pair(), s(2));
  CHECK_FALSE(edge.ri_condition);
  CHECK_FALSE(edge.all_pass());

  const auto pos = check_prop_conditions(SubaffineFamily({interval(-1, 1, 0.5), interval(-1, 1, -1)}), s(0));
  CHECK_FALSE(pos.sup_t_nonpositive);
  CHECK_FALSE(pos.all_pass());
}

TEST_CASE("selection formula matches the conjugate when the conditions hold") {
  const auto sfam = abs_pair();
  const auto fam = sfam.to_family();
  for (double y : {-1.5, -0.5, 0.0, 0.7, 1.9}) {
    const auto conds = check_prop_conditions(sfam, s(y));
    REQUIRE(conds.all_pass());
    // f = 2|x| + 1, so f*(y) = -1 on [-2, 2]
    CHECK(conjugate_via_selection(sfam, s(y)) == doctest::Approx(-1.0));
    CHECK(-solve_dual(fam, s(y)).value == doctest::Approx(-1.0));
  }
}

TEST_CASE("subaffine_subdifferential") {
  const auto set = subaffine_subdifferential(abs_pair(), s(0));
  CHECK(set.contains(s(-2), 1e-9));
  CHECK(set.contains(s(1.5), 1e-9));
  CHECK_FALSE(set.contains(s(2.1), 1e-9));
  const auto right = subaffine_subdifferential(abs_pair(), s(1));
  CHECK(right.contains(s(2), 1e-9));
  CHECK_FALSE(right.contains(s(1), 1e-9));
}

TEST_CASE("family construction validates dimensions") {
  CHECK_THROWS_AS(SubaffineFamily({point(1, 0), {Polytope({v({1, 1})}), 0}}), DimensionError);
  CHECK_THROWS(SubaffineFamily({}));
}

}
