#include "robustsum/duality.hpp"
#include "robustsum/oracle.hpp"

#include "generators.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace rsum;
using th::s;

namespace {

// Independent dual for 1-D all-affine families: enumerate subsets whose slopes
// sum to xbar*, value -sum f*_j = sum c_j.
double enumerate_affine_dual(const std::vector<std::pair<double, double>>& ac, double xbar) {
  double best = -kInf;
  const std::size_t m = ac.size();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double slope = 0, cost = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        slope += ac[i].first;
        cost += ac[i].second;
      }
    }
    if (std::abs(slope - xbar) < 1e-12) best = std::max(best, cost);
  }
  return best;
}

// Lower envelope at 0 of the convex hull of points (p, q), brute force over pairs.
double hull_section_at(const std::vector<std::pair<double, double>>& pts, double at) {
  double best = kInf;
  for (const auto& a : pts) {
    if (a.first == at) best = std::min(best, a.second);
    for (const auto& b : pts) {
      if (a.first < at && b.first > at) {
        const double w = (b.first - at) / (b.first - a.first);
        best = std::min(best, w * a.second + (1 - w) * b.second);
      }
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("duality") {

TEST_CASE("evaluate_dual_candidate") {
  const auto fam = th::gap_family();
  const auto c = evaluate_dual_candidate(fam, s(-1), th::cand({0, 1}, {1, -2}));
  CHECK(c.feasible);
  CHECK(c.objective == doctest::Approx(2.0));
  const auto off = evaluate_dual_candidate(fam, s(0), th::cand({0}, {0}));
  CHECK(off.feasible);
  CHECK(is_neg_inf(off.objective));
  const auto q = evaluate_dual_candidate(th::half_square(), s(0), th::cand({0}, {0}));
  CHECK(q.feasible);
  CHECK(q.objective == doctest::Approx(0.0));
  const auto bad = evaluate_dual_candidate(fam, s(0), th::cand({0}, {1}));
  CHECK_FALSE(bad.feasible);
}

TEST_CASE("phi_eval") {
  const auto fam = th::gap_family();
  CHECK(phi_eval(fam, s(-1), s(0)).value == doctest::Approx(-2.0));
  CHECK(is_pos_inf(phi_eval(fam, s(0), s(0)).value));
  CHECK(phi_eval(th::family({th::abs_minus(0)}), s(0), s(0.5)).value == doctest::Approx(0.0));
}

TEST_CASE("solve_dual") {
  const auto fam = th::gap_family();
  const auto d = solve_dual(fam, s(-1));
  CHECK(d.value == doctest::Approx(2.0));
  REQUIRE(d.best);
  CHECK(d.best->J == SubsetJ{0, 1});
  CHECK(d.best->slopes[0](0) == doctest::Approx(1.0));
  CHECK(d.best->slopes[1](0) == doctest::Approx(-2.0));

  const auto none = solve_dual(fam, s(0));
  CHECK(is_neg_inf(none.value));
  CHECK_FALSE(none.best);

  const auto a = solve_dual(th::abs_family(), s(0));
  CHECK(a.value == doctest::Approx(1.0));
  REQUIRE(a.best);
  CHECK(a.best->J == SubsetJ{1});
}

TEST_CASE("solve_primal") {
  const auto fam = th::gap_family();
  const auto p = solve_primal(fam, s(-1));
  CHECK(p.value == doctest::Approx(2.0));
  REQUIRE(p.x);
  CHECK((*p.x)(0) >= -1 - 1e-9);
  CHECK((*p.x)(0) <= 0.5 + 1e-9);

  const auto q = solve_primal(fam, s(0));
  CHECK(q.value == doctest::Approx(1.5));
  CHECK((*q.x)(0) == doctest::Approx(0.5));

  const auto h = solve_primal(th::half_square(), s(0));
  CHECK(std::abs(h.value) < 1e-6);
  CHECK(h.method == "subgradient");
}

TEST_CASE("gap_report") {
  const auto fam = th::gap_family();
  const auto g0 = gap_report(fam, s(0));
  CHECK(g0.primal_value == doctest::Approx(1.5));
  CHECK(is_neg_inf(g0.dual_value));
  CHECK(is_pos_inf(g0.gap));
  CHECK_FALSE(g0.strong_duality);

  const auto g1 = gap_report(fam, s(-1));
  CHECK(g1.primal_value == doctest::Approx(2.0));
  CHECK(g1.dual_value == doctest::Approx(2.0));
  CHECK(g1.strong_duality);

  const auto ga = gap_report(th::abs_family(), s(0));
  CHECK(ga.primal_value == doctest::Approx(1.0));
  CHECK(ga.dual_value == doctest::Approx(1.0));
  CHECK(ga.strong_duality);
}

TEST_CASE("a_line_section") {
  const auto fam = th::gap_family();
  // generator points (slope sum, cost sum) for J = {1}, {2}, {1,2}
  const std::vector<std::pair<double, double>> pts = {{1, -1}, {-2, -1}, {-1, -2}};

  const auto l0 = a_line_section(fam, s(0));
  CHECK(is_pos_inf(l0.section_inf));
  CHECK(l0.clco_section_inf == doctest::Approx(hull_section_at(pts, 0)));
  CHECK(l0.clco_section_inf == doctest::Approx(-1.5));
  CHECK_FALSE(l0.closed_convex_regarding);

  const auto l1 = a_line_section(fam, s(-1));
  CHECK(l1.section_inf == doctest::Approx(-2.0));
  CHECK(l1.clco_section_inf == doctest::Approx(hull_section_at(pts, -1)));
  CHECK(l1.closed_convex_regarding);

  const auto la = a_line_section(th::family({th::abs_minus(0)}), s(0));
  CHECK(la.section_inf == doctest::Approx(0.0));
  CHECK(la.clco_section_inf == doctest::Approx(0.0));
  CHECK(la.closed_convex_regarding);

  CHECK_THROWS_AS(a_line_section(th::half_square(), s(0)), UnsupportedVariant);
}

TEST_CASE("ri_membership") {
  const std::vector<Vector> tri = {th::v({0, 0}), th::v({1, 0}), th::v({0, 1})};
  CHECK(ri_membership(tri, th::v({0.25, 0.25})));
  CHECK_FALSE(ri_membership(tri, th::v({0.5, 0})));
  CHECK(ri_membership({th::v({1, 1})}, th::v({1, 1})));
  const std::vector<Vector> seg = {th::v({-1, 0}), th::v({1, 0})};
  CHECK(ri_membership(seg, th::v({0, 0})));
  CHECK_FALSE(ri_membership(seg, th::v({1, 0})));
}

TEST_CASE("ri_condition") {
  CHECK(ri_condition(th::abs_family(), s(0)));
  CHECK_FALSE(ri_condition(th::abs_family(), s(2)));
  CHECK(ri_condition(th::half_square(), s(7)));
}

TEST_CASE("min_split for quadratics matches the infimal convolution") {
  // (1/2 q1 x^2)* # (1/2 q2 x^2)* at y is y^2 / (2 (q1 + q2))
  const auto fam = th::family({ConvexFunction::quadratic(Matrix::Constant(1, 1, 2.0), s(0), 0),
                               ConvexFunction::quadratic(Matrix::Constant(1, 1, 3.0), s(0), 0)});
  const auto r = min_split(fam, {0, 1}, s(4));
  CHECK(r.exact);
  CHECK(r.value == doctest::Approx(16.0 / 10.0));
  CHECK((r.slopes[0] + r.slopes[1])(0) == doctest::Approx(4.0));
}

TEST_CASE("min_split with mixed members") {
  // |x|* = indicator of [-1,1]; (1/2 x^2)*(y) = y^2/2. Split of 3: y1 = 1, y2 = 2.
  const auto fam = th::family({th::abs_minus(0), ConvexFunction::quadratic(Matrix::Identity(1, 1), s(0), 0)});
  const auto r = min_split(fam, {0, 1}, s(3));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("1-D affine dual agrees with subset enumeration") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = static_cast<std::size_t>(gen::uniform_int(rng, 1, 6));
    std::vector<std::pair<double, double>> ac;
    std::vector<ConvexFunction> fs;
    for (std::size_t i = 0; i < m; ++i) {
      ac.emplace_back(gen::uniform_int(rng, -5, 5), gen::uniform_int(rng, -5, 5));
      fs.push_back(th::line(ac.back().first, ac.back().second));
    }
    const double xbar = gen::uniform_int(rng, -6, 6);
    const auto d = solve_dual(th::family(fs), s(xbar));
    const double expect = enumerate_affine_dual(ac, xbar);
    if (is_neg_inf(expect)) {
      CHECK(is_neg_inf(d.value));
    } else {
      CHECK(d.value == doctest::Approx(expect));
    }
  }
}

TEST_CASE("weak duality and oracle primal on random mixed families") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 40; ++t) {
    const auto fam = gen::mixed_family(rng, 1, static_cast<std::size_t>(gen::uniform_int(rng, 1, 4)));
    const Vector xbar = s(gen::uniform_int(rng, -3, 3));
    const auto g = gap_report(fam, xbar);
    CHECK(g.weak_duality_ok);
    if (g.dual_value > -kInf && g.primal_value < kInf) CHECK(g.dual_value <= g.primal_value + 1e-6);
    if (!std::isfinite(g.primal_value)) continue;
    const auto obj = [&](const Vector& x) { return oracle::brute_robust_sum(fam, x) - xbar.dot(x); };
    const auto grid_min = oracle::brute_minimize(obj, oracle::GridSpec(s(-10), s(10), 2001));
    CHECK(g.primal_value <= grid_min.value + 1e-6);
  }
}

}
