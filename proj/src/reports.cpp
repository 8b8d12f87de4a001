#include "robustsum/reports.hpp"

namespace rsum::report {

Json ext(ExtReal v) {
  if (is_pos_inf(v)) return "+inf";
  if (is_neg_inf(v)) return "-inf";
  return v;
}

Json vec(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Json labels(const FunctionFamily& fam, const SubsetJ& j) {
  Json a = Json::array();
  for (auto i : j) a.push_back(fam[i].label);
  return a;
}

Json candidate(const FunctionFamily& fam, const DualCandidate& c) {
  Json slopes = Json::array();
  for (const auto& s : c.slopes) slopes.push_back(vec(s));
  return Json{{"J", labels(fam, c.J)}, {"slopes", slopes}};
}

Json to_json(const FunctionFamily& fam, const DualSolution& d) {
  Json j;
  j["value"] = ext(d.value);
  j["attained"] = d.best.has_value();
  j["best"] = d.best ? candidate(fam, *d.best) : Json(nullptr);
  j["exact"] = d.exact;
  j["feasible_subsets"] = d.feasible_subsets;
  return j;
}

Json to_json(const FunctionFamily& fam, const GapReport& g) {
  Json j;
  j["primal_value"] = ext(g.primal_value);
  j["dual_value"] = ext(g.dual_value);
  j["gap"] = ext(g.gap);
  j["primal_attained"] = g.primal_attained;
  j["dual_attained"] = g.dual_attained;
  j["weak_duality_ok"] = g.weak_duality_ok;
  j["zero_gap"] = g.zero_gap;
  j["strong_duality"] = g.strong_duality;
  j["exact"] = g.exact;
  j["primal_witness"] = g.primal_witness ? vec(*g.primal_witness) : Json(nullptr);
  j["dual_witness"] = g.dual_witness ? candidate(fam, *g.dual_witness) : Json(nullptr);
  return j;
}

Json to_json(const LineSection& s) {
  return Json{{"section_inf", ext(s.section_inf)},
              {"clco_section_inf", ext(s.clco_section_inf)},
              {"closed_convex_regarding", s.closed_convex_regarding}};
}

Json to_json(const OptimalityReport& r) {
  auto st = [](const Statement& s) { return Json{{"holds", s.holds}, {"residual", ext(s.residual)}}; };
  Json j;
  j["candidate_feasible"] = r.candidate_feasible;
  j["statement_i"] = st(r.statement_i);
  j["statement_ii"] = st(r.statement_ii);
  j["statement_iii"] = st(r.statement_iii);
  j["statement_iv"] = st(r.statement_iv);
  j["conclusion"] = r.conclusion;
  j["consistent"] = r.consistent;
  j["reason"] = r.reason;
  return j;
}

Json to_json(const FunctionFamily& fam, const DualSolutionSet& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json factors = Json::array();
    for (const auto& p : e.factors) {
      Json vs = Json::array();
      for (const auto& v : p.vertices) vs.push_back(vec(v));
      factors.push_back(vs);
    }
    entries.push_back(Json{{"J", labels(fam, e.J)},
                           {"subdifferential_vertices", factors},
                           {"representative", e.representative ? candidate(fam, *e.representative) : Json(nullptr)}});
  }
  return Json{{"witness_path", s.witness_path}, {"entries", entries}};
}

Json to_json(const SetExpr& e) {
  Json j;
  j["kind"] = to_string(e.kind());
  switch (e.kind()) {
    case SetExpr::Kind::Poly: {
      Json vs = Json::array();
      for (const auto& v : e.polytope().vertices) vs.push_back(vec(v));
      j["vertices"] = vs;
      break;
    }
    case SetExpr::Kind::MinkSum:
    case SetExpr::Kind::Union: {
      Json cs = Json::array();
      for (const auto& c : e.children()) cs.push_back(to_json(c));
      j["terms"] = cs;
      break;
    }
    case SetExpr::Kind::HalfspaceCut: {
      Json rows = Json::array();
      for (const auto& r : e.halfspaces().rows) rows.push_back(Json{{"normal", vec(r.normal)}, {"rhs", r.rhs}});
      j["inner"] = to_json(e.children().front());
      j["halfspaces"] = rows;
      break;
    }
    case SetExpr::Kind::Predicate:
      j["description"] = e.description();
      break;
    case SetExpr::Kind::Whole:
    case SetExpr::Kind::Empty:
      break;
  }
  j["dim"] = e.dim();
  return j;
}

Json to_json(const PrimalSolutionSet& s) {
  Json j;
  j["set"] = to_json(s.set);
  if (s.interval) j["interval"] = Json::array({ext(s.interval->first), ext(s.interval->second)});
  return j;
}

Json to_json(const FunctionFamily& fam, const RobustSubdifferential& s) {
  Json subsets = Json::array();
  for (const auto& j : s.subsets) subsets.push_back(labels(fam, j));
  Json j;
  j["S_f"] = subsets;
  j["set"] = to_json(s.set);
  if (s.hull_interval) j["hull_interval"] = Json::array({s.hull_interval->first, s.hull_interval->second});
  j["validity"] = s.validity;
  j["samples_checked"] = s.samples_checked;
  j["samples_failed"] = s.samples_failed;
  j["first_failure"] = s.first_failure ? vec(*s.first_failure) : Json(nullptr);
  return j;
}

Json to_json(const FunctionFamily& fam, const ApproxReport& r) {
  Json j;
  j["norm"] = to_string(r.norm);
  j["value"] = ext(r.value);
  j["solution"] = r.solution ? vec(*r.solution) : Json(nullptr);
  j["exact"] = r.exact;
  j["inconsistent"] = r.consistency.inconsistent;
  j["inconsistency_decided"] = r.consistency.decided;
  j["inf_f0"] = ext(r.consistency.inf_f0);
  Json lin = Json::array();
  for (const auto& d : r.lineality_directions) lin.push_back(vec(d));
  j["lineality_directions"] = lin;
  j["face_bounded_mod_lineality"] = r.face_bounded_mod_lineality;
  j["dual_value"] = ext(r.dual_value);
  j["dual_exact"] = r.dual_exact;
  if (r.dual_weights) {
    Json w = Json::object();
    for (const auto& [i, v] : r.dual_weights->weights()) w[fam[i].label] = v;
    j["dual_weights"] = w;
  }
  if (r.norm == ApproxNorm::L1) {
    j["dual_candidate"] = r.dual_candidate ? candidate(fam, *r.dual_candidate) : Json(nullptr);
  }
  j["strong_duality"] = r.strong_duality;
  if (r.diagnosis) {
    j["diagnosis"] = Json{{"condition_holds", r.diagnosis->condition_holds},
                          {"dual_attained", r.diagnosis->dual_attained},
                          {"statement", r.diagnosis->statement}};
  }
  return j;
}

Json to_json(const PropConditions& c) {
  return Json{{"zero_in_all", c.zero_in_all},     {"sup_t", ext(c.sup_t)},
              {"sup_t_nonpositive", c.sup_t_nonpositive}, {"ri_condition", c.ri_condition},
              {"union_collapsed", c.union_collapsed}, {"all_pass", c.all_pass()}};
}

}  // namespace rsum::report
