#include "robustsum/optimality.hpp"
#include "robustsum/oracle.hpp"

#include "generators.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace rsum;
using th::s;

TEST_SUITE("optimality") {

TEST_CASE("certify_pair on the zero-gap instance") {
  const auto fam = th::gap_family();
  const auto r = certify_pair(fam, s(-1), s(0), th::cand({0, 1}, {1, -2}));
  CHECK(r.candidate_feasible);
  CHECK(r.statement_i.holds);
  CHECK(r.statement_ii.holds);
  CHECK(r.statement_iii.holds);
  CHECK(r.statement_iv.holds);
  CHECK(r.conclusion);
  CHECK(r.consistent);
}

TEST_CASE("certify_pair rejects a point outside the realizing region") {
  const auto fam = th::gap_family();
  const auto r = certify_pair(fam, s(-1), s(0.7), th::cand({0, 1}, {1, -2}));
  CHECK_FALSE(r.statement_i.holds);
  CHECK_FALSE(r.statement_ii.holds);
  CHECK_FALSE(r.conclusion);
  CHECK(r.consistent);
}

TEST_CASE("certify_pair on a quadratic") {
  const auto r = certify_pair(th::half_square(), s(0), s(0), th::cand({0}, {0}));
  CHECK(r.statement_i.holds);
  CHECK(r.statement_ii.holds);
  CHECK(r.statement_iii.holds);
  CHECK(r.statement_iv.holds);
}

TEST_CASE("primal_solset_from_dual") {
  const auto fam = th::gap_family();
  const auto p = primal_solset_from_dual(fam, s(-1), th::cand({0, 1}, {1, -2}));
  REQUIRE(p.interval);
  CHECK(p.interval->first == doctest::Approx(-1.0));
  CHECK(p.interval->second == doctest::Approx(0.5));
  CHECK(p.set.contains(s(0.2), 1e-9));
  CHECK_FALSE(p.set.contains(s(0.6), 1e-9));

  const auto q = primal_solset_from_dual(th::half_square(), s(0), th::cand({0}, {0}));
  CHECK(q.set.contains(s(0), 1e-9));
  CHECK_FALSE(q.set.contains(s(0.1), 1e-9));

  const auto a = primal_solset_from_dual(th::abs_family(), s(0), th::cand({1}, {0}));
  CHECK(a.set.contains(s(0), 1e-9));
  CHECK_FALSE(a.set.contains(s(0.5), 1e-9));
  CHECK_FALSE(a.set.contains(s(-0.5), 1e-9));

  CHECK_THROWS_AS(primal_solset_from_dual(fam, s(0), th::cand({0}, {0})), PreconditionError);
}

TEST_CASE("primal solution set matches the grid argmin") {
  const auto fam = th::gap_family();
  const auto p = primal_solset_from_dual(fam, s(-1), th::cand({0, 1}, {1, -2}));
  const auto obj = [&](const Vector& x) { return oracle::brute_robust_sum(fam, x) + x(0); };
  const auto pts = oracle::brute_argmin_set(obj, oracle::GridSpec(s(-3), s(3), 601), 1e-9);
  REQUIRE_FALSE(pts.empty());
  CHECK(pts.front()(0) == doctest::Approx(-1.0));
  CHECK(pts.back()(0) == doctest::Approx(0.5));
  for (const auto& x : pts) CHECK(p.set.contains(x, 1e-9));
}

TEST_CASE("dual_solset_from_primal") {
  const auto d = dual_solset_from_primal(th::gap_family(), s(-1), s(0));
  REQUIRE(d.candidates.size() == 1);
  CHECK(d.candidates[0].J == SubsetJ{0, 1});
  CHECK(d.candidates[0].slopes[0](0) == doctest::Approx(1.0));
  CHECK(d.candidates[0].slopes[1](0) == doctest::Approx(-2.0));

  const auto a = dual_solset_from_primal(th::abs_family(), s(0), s(0));
  std::vector<SubsetJ> js;
  for (const auto& e : a.entries) js.push_back(e.J);
  CHECK(js == std::vector<SubsetJ>{{1}, {0, 1}});
  for (const auto& c : a.candidates) {
    const auto v = evaluate_dual_candidate(th::abs_family(), s(0), c);
    CHECK(v.feasible);
    CHECK(v.objective == doctest::Approx(1.0));
  }

  const auto h = dual_solset_from_primal(th::half_square(), s(0), s(0));
  REQUIRE(h.candidates.size() == 1);
  CHECK(h.candidates[0].slopes[0](0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(dual_solset_from_primal(th::gap_family(), s(0), s(0.5)), PreconditionError);
}

TEST_CASE("robust_subdifferential") {
  const auto a = robust_subdifferential(th::abs_family(), s(0));
  REQUIRE(a.hull_interval);
  CHECK(a.hull_interval->first == doctest::Approx(-2.0));
  CHECK(a.hull_interval->second == doctest::Approx(2.0));
  CHECK(a.validity);
  const auto brute = oracle::brute_subdiff_1d(
      [](double x) { return oracle::brute_robust_sum(th::abs_family(), s(x)); }, 0.0);
  CHECK(brute.lower == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(brute.upper == doctest::Approx(2.0).epsilon(1e-6));

  const auto g = robust_subdifferential(th::gap_family(), s(0.5));
  CHECK(g.set.contains(s(1), 1e-9));
  CHECK(g.set.contains(s(-1), 1e-9));
  CHECK_FALSE(g.set.contains(s(0), 1e-9));
  CHECK_FALSE(g.validity);

  const auto f = robust_subdifferential(th::family({th::line(3, -7)}), s(1));
  CHECK(f.set.contains(s(3), 1e-9));
  CHECK_FALSE(f.set.contains(s(2.9), 1e-9));
  CHECK(f.validity);
}

TEST_CASE("subdifferential formula agrees with directional derivatives under validity") {
  std::mt19937_64 rng(13);
  int valid = 0;
  for (int t = 0; t < 60; ++t) {
    const auto fam = gen::mixed_family(rng, 1, static_cast<std::size_t>(gen::uniform_int(rng, 1, 3)));
    const Vector x = s(gen::uniform_int(rng, -2, 2));
    SubdiffOptions opts;
    opts.random_samples = 4;
    const auto r = robust_subdifferential(fam, x, opts);
    const auto b =
        oracle::brute_subdiff_1d([&](double z) { return oracle::brute_robust_sum(fam, s(z)); }, x(0));
    REQUIRE(r.hull_interval);
    // the formula set always lies inside the subdifferential
    CHECK(r.hull_interval->first >= b.lower - 1e-5);
    CHECK(r.hull_interval->second <= b.upper + 1e-5);
    if (r.validity) {
      ++valid;
      CHECK(r.hull_interval->first == doctest::Approx(b.lower).epsilon(1e-5));
      CHECK(r.hull_interval->second == doctest::Approx(b.upper).epsilon(1e-5));
    }
  }
  CHECK(valid > 0);
}

}
