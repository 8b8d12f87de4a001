#include "robustsum/cli.hpp"
#include "robustsum/problem_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace rsum;

namespace {

std::string problem(const char* name) { return std::string(DATA_DIR) + "/problems/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json body(const Run& r) { return nlohmann::json::parse(r.out); }

void check_parse_error(const std::string& text, const std::string& needle) {
  try {
    parse_problem(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
  }
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse_problem accepts a minimal file") {
  const auto p = parse_problem(R"({"space_dim": 1, "family": [{"type": "affine", "a": [1], "c": 1}]})");
  CHECK(p.space_dim == 1);
  CHECK(p.family.size() == 1);
  CHECK(p.family[0].label == "1");
  CHECK_FALSE(p.xbar_star);
}

TEST_CASE("parse_problem diagnostics") {
  check_parse_error(R"({"space_dim": 2, "family": [{"type": "subaffine", "vertices": [[1, 0], [1]], "t": 0}]})",
                    "family[0].vertices[1]");
  check_parse_error(R"({"space_dim": 1, "family": [{"type": "quadratic", "Q": [[-1]], "a": [0], "c": 0}]})",
                    "not positive definite");
  check_parse_error(R"({"space_dim": 1, "family": [{"type": "affine", "a": [1], "c": 1, "extra": 2}]})",
                    "extra");
  check_parse_error("{\"space_dim\": 1,\n  \"family\": [}", "line 2");
  check_parse_error(R"({"space_dim": 1, "family": [{"type": "cubic"}]})", "family[0]");
}

TEST_CASE("serialize round trip is stable") {
  for (const char* name : {"gap_instance.json", "zero_gap.json", "abs_pair.json", "quadratic.json", "geometric.json"}) {
    const auto p = parse_problem_file(problem(name));
    const auto once = serialize_problem(p);
    const auto twice = serialize_problem(parse_problem(once));
    CHECK(once == twice);
  }
}

TEST_CASE("gap reports +inf and exits 2") {
  const auto r = run({"gap", problem("gap_instance.json")});
  CHECK(r.code == cli::kConditionFailed);
  const auto j = body(r);
  CHECK(j["gap"]["gap"] == "+inf");
  CHECK(j["gap"]["dual_value"] == "-inf");
}

TEST_CASE("approx linf exits 0 with value 1") {
  const auto r = run({"approx", problem("gap_instance.json"), "--norm", "linf"});
  CHECK(r.code == cli::kOk);
  CHECK(body(r)["approx"]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("eval reports the robust sum") {
  const auto r = run({"eval", problem("gap_instance.json")});
  CHECK(r.code == cli::kOk);
  CHECK(body(r)["robust_sum"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("infinite values are encoded as strings") {
  const auto r = run({"dual", problem("gap_instance.json")});
  CHECK(r.code == cli::kOk);
  CHECK(body(r)["dual"]["value"] == "-inf");
}

TEST_CASE("certify on the zero-gap instance") {
  const auto r = run({"certify", problem("zero_gap.json"), "--oracle"});
  CHECK(r.code == cli::kOk);
  const auto j = body(r);
  CHECK(j["optimality"]["conclusion"] == true);
  CHECK(j["primal_solution_set"]["interval"][1].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("csv residual table") {
  const auto r = run({"eval", problem("gap_instance.json"), "--out", "csv"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "index,label,f_i(x),f_i+(x)\n1,1,1.5,1.5\n2,2,0,0\n");
}

TEST_CASE("input errors exit 1") {
  CHECK(run({"gap", problem("missing.json")}).code == cli::kError);
  CHECK(run({"frobnicate", problem("gap_instance.json")}).code == cli::kError);
  CHECK(run({}).code == cli::kError);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const char* cmd : {"eval", "dual", "gap", "condition", "certify", "subdiff", "approx"}) {
    const auto a = run({cmd, problem("zero_gap.json"), "--seed", "5"});
    const auto b = run({cmd, problem("zero_gap.json"), "--seed", "5"});
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
  }
}

}
