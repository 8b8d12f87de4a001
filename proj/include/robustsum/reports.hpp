#pragma once

#include "robustsum/approx.hpp"
#include "robustsum/optimality.hpp"
#include "robustsum/subaffine.hpp"

#include <json.hpp>

namespace rsum::report {

using Json = nlohmann::ordered_json;

/// Finite values as numbers, infinities as "+inf" / "-inf".
Json ext(ExtReal v);
Json vec(const Vector& v);
Json labels(const FunctionFamily& fam, const SubsetJ& j);
Json candidate(const FunctionFamily& fam, const DualCandidate& c);

Json to_json(const FunctionFamily& fam, const DualSolution& d);
Json to_json(const FunctionFamily& fam, const GapReport& g);
Json to_json(const LineSection& s);
Json to_json(const OptimalityReport& r);
Json to_json(const FunctionFamily& fam, const DualSolutionSet& s);
Json to_json(const PrimalSolutionSet& s);
Json to_json(const FunctionFamily& fam, const RobustSubdifferential& s);
Json to_json(const FunctionFamily& fam, const ApproxReport& r);
Json to_json(const PropConditions& c);
Json to_json(const SetExpr& e);

}  // namespace rsum::report
