#include "robustsum/problem_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rsum {

using Json = nlohmann::ordered_json;

namespace {

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw ParseError(path, "unknown field '" + k + "'");
  }
}

const Json& need(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ParseError(path, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path, "expected a finite number");
  return v;
}

Vector vector_of(const Json& j, const std::string& path, Eigen::Index n) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  if (static_cast<Eigen::Index>(j.size()) != n) {
    throw ParseError(path, "dimension mismatch: expected " + std::to_string(n) + " entries, got " +
                               std::to_string(j.size()));
  }
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v(k) = number(j[static_cast<std::size_t>(k)], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

ConvexFunction function_of(const Json& j, const std::string& path, Eigen::Index n) {
  if (!j.is_object()) throw ParseError(path, "expected a function record");
  const auto& type = need(j, path, "type");
  if (!type.is_string()) throw ParseError(path + ".type", "expected a string");
  const auto t = type.get<std::string>();
  try {
    if (t == "affine") {
      only_keys(j, path, {"type", "label", "a", "c"});
      return ConvexFunction::affine(vector_of(need(j, path, "a"), path + ".a", n),
                                    number(need(j, path, "c"), path + ".c"));
    }
    if (t == "max_affine") {
      only_keys(j, path, {"type", "label", "pieces"});
      const auto& ps = need(j, path, "pieces");
      if (!ps.is_array() || ps.empty()) throw ParseError(path + ".pieces", "expected a nonempty array");
      std::vector<AffinePiece> pieces;
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const auto p = path + ".pieces[" + std::to_string(k) + "]";
        only_keys(ps[k], p, {"a", "c"});
        pieces.push_back({vector_of(need(ps[k], p, "a"), p + ".a", n), number(need(ps[k], p, "c"), p + ".c")});
      }
      return ConvexFunction::max_affine(std::move(pieces));
    }
    if (t == "subaffine") {
      only_keys(j, path, {"type", "label", "vertices", "t"});
      const auto& vs = need(j, path, "vertices");
      if (!vs.is_array() || vs.empty()) throw ParseError(path + ".vertices", "expected a nonempty array");
      std::vector<Vector> verts;
      for (std::size_t k = 0; k < vs.size(); ++k) {
        verts.push_back(vector_of(vs[k], path + ".vertices[" + std::to_string(k) + "]", n));
      }
      return ConvexFunction::subaffine(Polytope(std::move(verts)), number(need(j, path, "t"), path + ".t"));
    }
    if (t == "quadratic") {
      only_keys(j, path, {"type", "label", "Q", "a", "c"});
      const auto& qj = need(j, path, "Q");
      if (!qj.is_array() || static_cast<Eigen::Index>(qj.size()) != n) {
        throw ParseError(path + ".Q", "expected " + std::to_string(n) + " rows");
      }
      Matrix q(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        q.row(r) = vector_of(qj[static_cast<std::size_t>(r)], path + ".Q[" + std::to_string(r) + "]", n).transpose();
      }
      return ConvexFunction::quadratic(std::move(q), vector_of(need(j, path, "a"), path + ".a", n),
                                       number(need(j, path, "c"), path + ".c"));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path + ".type", "unknown function type '" + t + "'");
}

Json function_json(const ConvexFunction& f) {
  Json j;
  j["type"] = to_string(f.kind());
  if (const auto* a = std::get_if<Affine>(&f.variant())) {
    j["a"] = vector_json(a->a);
    j["c"] = a->c;
  } else if (const auto* m = std::get_if<MaxAffine>(&f.variant())) {
    Json ps = Json::array();
    for (const auto& p : m->pieces) ps.push_back(Json{{"a", vector_json(p.a)}, {"c", p.c}});
    j["pieces"] = ps;
  } else if (const auto* s = std::get_if<SubAffine>(&f.variant())) {
    Json vs = Json::array();
    for (const auto& v : s->set.vertices) vs.push_back(vector_json(v));
    j["vertices"] = vs;
    j["t"] = s->t;
  } else {
    const auto& q = std::get<Quadratic>(f.variant());
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < q.q.rows(); ++r) rows.push_back(vector_json(q.q.row(r).transpose()));
    j["Q"] = rows;
    j["a"] = vector_json(q.a);
    j["c"] = q.c;
  }
  return j;
}

}  // namespace

FamilyGenerator GeneratorSpec::generator() const {
  const auto base_f = base;
  const double r = ratio;
  return {base.dim(), [base_f, r](std::size_t i) { return scaled(base_f, std::pow(r, static_cast<double>(i))); }};
}

ProblemFile parse_problem(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    const auto cut = msg.find("syntax error");
    throw ParseError(location(text, e.byte == 0 ? 0 : e.byte - 1),
                     cut == std::string::npos ? msg : msg.substr(cut));
  }
  only_keys(root, "$", {"space_dim", "family", "generator", "xbar_star", "x", "candidate"});

  ProblemFile p;
  const auto& nd = need(root, "$", "space_dim");
  if (!nd.is_number_integer() || nd.get<long long>() < 1) {
    throw ParseError("space_dim", "expected a positive integer");
  }
  p.space_dim = nd.get<Eigen::Index>();
  const Eigen::Index n = p.space_dim;

  if (root.contains("family") == root.contains("generator")) {
    throw ParseError("$", "exactly one of 'family' and 'generator' is required");
  }
  if (root.contains("family")) {
    const auto& fam = root.at("family");
    if (!fam.is_array() || fam.empty()) throw ParseError("family", "expected a nonempty array");
    std::vector<Member> members;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const auto path = "family[" + std::to_string(i) + "]";
      std::string label = std::to_string(i + 1);
      if (fam[i].is_object() && fam[i].contains("label")) {
        if (!fam[i].at("label").is_string()) throw ParseError(path + ".label", "expected a string");
        label = fam[i].at("label").get<std::string>();
      }
      members.push_back({label, function_of(fam[i], path, n)});
    }
    try {
      p.family = FunctionFamily(std::move(members));
    } catch (const Error& e) {
      throw ParseError("family", e.what());
    }
  } else {
    const auto& g = root.at("generator");
    only_keys(g, "generator", {"base", "ratio", "truncation"});
    const auto& tr = need(g, "generator", "truncation");
    if (!tr.is_number_integer() || tr.get<long long>() < 1) {
      throw ParseError("generator.truncation", "expected a positive integer");
    }
    const double ratio = number(need(g, "generator", "ratio"), "generator.ratio");
    if (!(ratio > 0.0)) throw ParseError("generator.ratio", "expected a positive number");
    p.generator = GeneratorSpec{function_of(need(g, "generator", "base"), "generator.base", n), ratio,
                                tr.get<std::size_t>()};
    p.family = p.generator->generator().truncate(p.generator->truncation);
  }

  if (root.contains("xbar_star")) p.xbar_star = vector_of(root.at("xbar_star"), "xbar_star", n);
  if (root.contains("x")) p.x = vector_of(root.at("x"), "x", n);
  if (root.contains("candidate")) {
    const auto& c = root.at("candidate");
    only_keys(c, "candidate", {"J", "slopes"});
    const auto& js = need(c, "candidate", "J");
    const auto& ss = need(c, "candidate", "slopes");
    if (!js.is_array() || js.empty()) throw ParseError("candidate.J", "expected a nonempty array of labels");
    if (!ss.is_array() || ss.size() != js.size()) {
      throw ParseError("candidate.slopes", "expected one slope per entry of J");
    }
    DualCandidate cand;
    for (std::size_t k = 0; k < js.size(); ++k) {
      const auto path = "candidate.J[" + std::to_string(k) + "]";
      if (!js[k].is_string()) throw ParseError(path, "expected a label string");
      try {
        cand.J.push_back(p.family.position(js[k].get<std::string>()));
      } catch (const Error& e) {
        throw ParseError(path, e.what());
      }
      cand.slopes.push_back(vector_of(ss[k], "candidate.slopes[" + std::to_string(k) + "]", n));
    }
    p.candidate = std::move(cand);
  }
  return p;
}

ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string serialize_problem(const ProblemFile& p) {
  Json root;
  root["space_dim"] = p.space_dim;
  if (p.generator) {
    root["generator"] = Json{{"base", function_json(p.generator->base)},
                             {"ratio", p.generator->ratio},
                             {"truncation", p.generator->truncation}};
  } else {
    Json fam = Json::array();
    for (const auto& m : p.family.members()) {
      Json f = function_json(m.f);
      Json rec;
      rec["type"] = f["type"];
      rec["label"] = m.label;
      for (const auto& [k, v] : f.items()) {
        if (k != "type") rec[k] = v;
      }
      fam.push_back(rec);
    }
    root["family"] = fam;
  }
  if (p.xbar_star) root["xbar_star"] = vector_json(*p.xbar_star);
  if (p.x) root["x"] = vector_json(*p.x);
  if (p.candidate) {
    Json js = Json::array();
    Json ss = Json::array();
    for (std::size_t k = 0; k < p.candidate->J.size(); ++k) {
      js.push_back(p.family[p.candidate->J[k]].label);
      ss.push_back(vector_json(p.candidate->slopes[k]));
    }
    root["candidate"] = Json{{"J", js}, {"slopes", ss}};
  }
  return root.dump(2) + "\n";
}

}  // namespace rsum
