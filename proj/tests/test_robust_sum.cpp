#include "robustsum/oracle.hpp"
#include "robustsum/robust_sum.hpp"

#include "generators.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace rsum;
using th::s;

namespace {

std::vector<SubsetJ> subsets(std::initializer_list<SubsetJ> l) { return l; }

}  // namespace

TEST_SUITE("robust_sum") {

TEST_CASE("robust_sum_eval") {
  const auto neg = th::family({th::line(1, -2), th::line(-1, -2)});
  CHECK(robust_sum_eval(neg, s(0)) == -2.0);
  CHECK(robust_sum_eval(th::gap_family(), s(0)) == 2.0);
  CHECK(robust_sum_eval(th::gap_family(), s(0)) == oracle::brute_robust_sum(th::gap_family(), s(0)));
  const auto single = th::family({th::abs_minus(-1)});
  CHECK(robust_sum_eval(single, s(-3)) == 4.0);
}

TEST_CASE("sup_function_eval") {
  CHECK(sup_function_eval(th::gap_family(), s(0)) == 1.0);
  CHECK(sup_function_eval(th::family({th::line(1, -2), th::line(-1, -2)}), s(5)) == 3.0);
  CHECK(sup_function_eval(th::family({th::abs_minus(0)}), s(-2)) == 2.0);
}

TEST_CASE("in_S_f") {
  CHECK(in_S_f(th::gap_family(), s(0), {0, 1}));
  CHECK_FALSE(in_S_f(th::gap_family(), s(0), {0}));
  const auto three = th::family({th::line(1, 0), th::line(-1, 0), th::line(1, -1)});
  CHECK(in_S_f(three, s(0), {0, 1}));
}

TEST_CASE("canonical_S_f matches enumeration") {
  const auto neg = th::family({th::line(1, -2), th::line(-1, -2)});
  CHECK(canonical_S_f(neg, s(0)).sets == subsets({{0}, {1}}));
  CHECK(oracle::brute_S_f(neg, s(0)) == subsets({{0}, {1}}));

  const auto three = th::family({th::line(1, 0), th::line(-1, 0), th::line(1, -1)});
  CHECK(canonical_S_f(three, s(0)).sets == subsets({{0}, {1}, {0, 1}}));
  CHECK(oracle::brute_S_f(three, s(0)) == subsets({{0}, {1}, {0, 1}}));

  const auto at_half = canonical_S_f(th::gap_family(), s(0.5));
  CHECK(at_half.sets == subsets({{0}, {0, 1}}));
  CHECK(at_half.minimal == SubsetJ{0});
  CHECK(oracle::brute_S_f(th::gap_family(), s(0.5)) == at_half.sets);
}

TEST_CASE("canonical_S_f agrees with brute enumeration on random families") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto fam = gen::affine_family(rng, 1, static_cast<std::size_t>(gen::uniform_int(rng, 1, 6)));
    const Vector x = s(gen::uniform_int(rng, -3, 3));
    CHECK(canonical_S_f(fam, x).sets == oracle::brute_S_f(fam, x));
  }
}

TEST_CASE("robust_sum_eval agrees with brute enumeration on mixed families") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = gen::uniform_int(rng, 1, 3);
    const auto fam = gen::mixed_family(rng, n, static_cast<std::size_t>(gen::uniform_int(rng, 1, 8)));
    for (const auto& x : gen::grid(n, -2, 2, 3)) {
      CHECK(robust_sum_eval(fam, x) == doctest::Approx(oracle::brute_robust_sum(fam, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("robust sum dominates the supremum function") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto fam = gen::mixed_family(rng, 2, 4);
    const Vector x = gen::int_vector(rng, 2, -3, 3);
    CHECK(robust_sum_eval(fam, x) >= sup_function_eval(fam, x));
  }
}

TEST_CASE("truncated_lower_bound is monotone and converges") {
  FamilyGenerator g{1, [](std::size_t i) {
                      return scaled(th::line(1, -1), std::ldexp(1.0, -static_cast<int>(i)));
                    }};
  CHECK(truncated_lower_bound(g, s(3), 1) == doctest::Approx(1.0));
  CHECK(truncated_lower_bound(g, s(3), 4) == doctest::Approx(1.875));
  double prev = -kInf;
  for (std::size_t n = 1; n <= 30; ++n) {
    const double val = truncated_lower_bound(g, s(3), n);
    CHECK(val >= prev);
    CHECK(val == doctest::Approx(2.0 * (1.0 - std::ldexp(1.0, -static_cast<int>(n)))));
    prev = val;
  }
  CHECK(std::abs(prev - 2.0) < 1e-8);
}

TEST_CASE("robust_sum_subgradient satisfies the subgradient inequality") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const auto fam = gen::mixed_family(rng, 2, 4);
    const Vector x = gen::int_vector(rng, 2, -2, 2);
    const Vector g = robust_sum_subgradient(fam, x);
    const double fx = robust_sum_eval(fam, x);
    for (const auto& z : gen::grid(2, -3, 3, 5)) {
      CHECK(robust_sum_eval(fam, z) >= fx + g.dot(z - x) - 1e-9);
    }
  }
}

TEST_CASE("all_subsets is shortlex") {
  const auto a = all_subsets(3);
  CHECK(a == subsets({{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}}));
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(th::family({th::line(1, 0), ConvexFunction::affine(th::v({1, 2}), 0)}), DimensionError);
  CHECK_THROWS_AS(th::gap_family().position("nope"), DomainError);
}

}
