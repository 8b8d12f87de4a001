#pragma once

#include "robustsum/duality.hpp"

#include <optional>
#include <string>

namespace rsum {

/// f_i = ratio^i * base for i = 1..truncation.
struct GeneratorSpec {
  ConvexFunction base;
  double ratio = 1.0;
  std::size_t truncation = 1;

  FamilyGenerator generator() const;
};

struct ProblemFile {
  Eigen::Index space_dim = 0;
  FunctionFamily family;
  std::optional<GeneratorSpec> generator;
  std::optional<Vector> xbar_star;
  std::optional<Vector> x;
  /// Candidate with labels resolved to family positions.
  std::optional<DualCandidate> candidate;
};

/// Thrown for malformed input. `where` is "line L, column C" for syntax
/// errors and a JSON path such as family[2].vertices[0] for schema errors.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile parse_problem_file(const std::string& path);

/// Canonical JSON text of a problem; parse_problem(serialize(p)) == p.
std::string serialize_problem(const ProblemFile& p);

}  // namespace rsum
