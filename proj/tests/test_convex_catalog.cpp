#include "robustsum/convex_function.hpp"

#include "generators.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace rsum;
using th::s;
using th::v;

TEST_SUITE("convex_catalog") {

TEST_CASE("eval") {
  CHECK(eval(th::line(1, 1), s(0)) == 1.0);
  CHECK(eval(th::abs_minus(0), s(0)) == 0.0);
  CHECK(eval(th::abs_minus(0), s(-2)) == 2.0);
  CHECK(eval(ConvexFunction::quadratic(Matrix::Identity(1, 1), s(0), 0), s(3)) == doctest::Approx(4.5));
  const auto m = ConvexFunction::max_affine({{s(1), 0}, {s(-1), 0}});
  CHECK(eval(m, s(-3)) == 3.0);
}

TEST_CASE("conjugate_eval") {
  CHECK(conjugate_eval(th::line(1, 1), s(1)) == -1.0);
  CHECK(is_pos_inf(conjugate_eval(th::line(1, 1), s(0))));
  CHECK(conjugate_eval(th::abs_minus(0), s(0.5)) == 0.0);
  CHECK(is_pos_inf(conjugate_eval(th::abs_minus(0), s(2))));
  CHECK(conjugate_eval(th::abs_minus(-1), s(0)) == -1.0);
  const auto q = ConvexFunction::quadratic(Matrix::Identity(1, 1), s(0), 0);
  CHECK(conjugate_eval(q, s(2)) == doctest::Approx(2.0));
  // max(x, -x) has conjugate the indicator of [-1, 1]
  const auto m = ConvexFunction::max_affine({{s(1), 0}, {s(-1), 0}});
  CHECK(conjugate_eval(m, s(0.25)) == doctest::Approx(0.0));
  CHECK(is_pos_inf(conjugate_eval(m, s(1.5))));
}

TEST_CASE("subdiff") {
  const auto a = subdiff(th::abs_minus(0), s(0));
  CHECK(support(a, s(1)) == doctest::Approx(1.0));
  CHECK(support(a, s(-1)) == doctest::Approx(1.0));

  const auto g = subdiff(ConvexFunction::affine(v({2, 3}), 0), v({5, -1}));
  for (const auto& p : g.vertices) CHECK((p - v({2, 3})).norm() == doctest::Approx(0.0));

  // directional derivatives of max(x, -x) at 0 in the +1 and -1 directions
  const auto m = ConvexFunction::max_affine({{s(1), 0}, {s(-1), 0}});
  const double h = 1e-7;
  const double right = (eval(m, s(h)) - eval(m, s(0))) / h;
  const double left = (eval(m, s(-h)) - eval(m, s(0))) / h;
  const auto pm = subdiff(m, s(0));
  CHECK(support(pm, s(1)) == doctest::Approx(right));
  CHECK(support(pm, s(-1)) == doctest::Approx(left));
}

TEST_CASE("subdiff_contains") {
  CHECK(subdiff_contains(th::abs_minus(0), s(0), s(0.3)));
  CHECK_FALSE(subdiff_contains(th::abs_minus(0), s(1), s(-1)));
  CHECK(subdiff_contains(ConvexFunction::quadratic(Matrix::Identity(1, 1), s(0), 0), s(2), s(2)));
}

TEST_CASE("polar") {
  const Polytope cross({v({1, 0}), v({0, 1}), v({-1, 0}), v({0, -1})});
  const auto box = polar(cross);
  CHECK(box.contains(v({1, 1})));
  CHECK(box.contains(v({-1, 0.5})));
  CHECK_FALSE(box.contains(v({1.01, 0})));

  const auto whole = polar(Polytope({s(0)}));
  CHECK(whole.contains(s(1e6)));

  const auto half = polar(Polytope({s(2)}));
  CHECK(half.contains(s(0.5)));
  CHECK_FALSE(half.contains(s(0.51)));
  CHECK(half.contains(s(-100)));
}

TEST_CASE("factories reject bad data") {
  CHECK_THROWS_AS(ConvexFunction::quadratic(-Matrix::Identity(1, 1), s(0), 0), DomainError);
  CHECK_THROWS_AS(ConvexFunction::max_affine({}), DomainError);
  CHECK_THROWS_AS(ConvexFunction::max_affine({{s(1), 0}, {v({1, 2}), 0}}), DimensionError);
  CHECK_THROWS_AS(eval(th::line(1, 0), v({1, 2})), DimensionError);
}

TEST_CASE("scaled stays in the catalog") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_member(rng, 2);
    const auto g = scaled(f, 0.5);
    CHECK(g.kind() == f.kind());
    const Vector x = gen::int_vector(rng, 2, -3, 3);
    CHECK(eval(g, x) == doctest::Approx(0.5 * eval(f, x)));
  }
}

TEST_CASE("Fenchel-Young on random members") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = gen::uniform_int(rng, 1, 3);
    const auto f = gen::random_member(rng, n);
    const Vector x = gen::int_vector(rng, n, -4, 4);
    const Vector y = gen::int_vector(rng, n, -4, 4);
    const double fx = eval(f, x);
    const double fy = conjugate_eval(f, y);
    if (!is_pos_inf(fy)) CHECK(fx + fy >= y.dot(x) - 1e-9);
    // equality at a subgradient
    const Vector g = some_subgradient(f, x);
    CHECK(fx + conjugate_eval(f, g) == doctest::Approx(g.dot(x)).epsilon(1e-9));
    CHECK(subdiff_contains(f, x, g, 1e-8));
    CHECK(conjugate_subdiff_contains(f, g, x, 1e-8));
    for (const auto& p : subdiff(f, x).vertices) CHECK(subdiff_contains(f, x, p, 1e-8));
  }
}

TEST_CASE("polar agrees with the support function") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    std::vector<Vector> vs;
    const int k = gen::uniform_int(rng, 1, 5);
    for (int p = 0; p < k; ++p) vs.push_back(gen::int_vector(rng, 2, -3, 3));
    const Polytope a(vs);
    const auto p = polar(a);
    const Vector x = gen::int_vector(rng, 2, -4, 4) / 4.0;
    CHECK(p.contains(x) == (support(a, x) <= 1.0 + 1e-9));
  }
}

}
