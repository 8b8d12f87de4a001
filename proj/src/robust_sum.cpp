#include "robustsum/robust_sum.hpp"

#include <algorithm>
#include <cmath>

namespace rsum {

std::vector<SubsetJ> all_subsets(std::size_t m) {
  if (m >= 63) throw CapExceeded("all_subsets: family too large");
  std::vector<SubsetJ> out;
  out.reserve((std::size_t{1} << m) - 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    SubsetJ j;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) j.push_back(i);
    }
    out.push_back(std::move(j));
  }
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

FunctionFamily::FunctionFamily(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("function family must be nonempty");
  dim_ = members_.front().f.dim();
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].f.dim() != dim_) {
      throw DimensionError("family member '" + members_[i].label + "' has dimension " +
                           std::to_string(members_[i].f.dim()) + ", expected " +
                           std::to_string(dim_));
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (members_[k].label == members_[i].label) {
        throw DomainError("duplicate family label '" + members_[i].label + "'");
      }
    }
  }
}

FunctionFamily FunctionFamily::from_functions(std::vector<ConvexFunction> fs) {
  std::vector<Member> ms;
  ms.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) ms.push_back({std::to_string(i + 1), std::move(fs[i])});
  return FunctionFamily(std::move(ms));
}

bool FunctionFamily::all_polyhedral() const {
  return std::all_of(members_.begin(), members_.end(),
                     [](const Member& m) { return m.f.is_polyhedral(); });
}

bool FunctionFamily::all_affine() const {
  return std::all_of(members_.begin(), members_.end(),
                     [](const Member& m) { return m.f.kind() == FunctionKind::Affine; });
}

std::size_t FunctionFamily::position(const std::string& label) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].label == label) return i;
  }
  throw DomainError("unknown family label '" + label + "'");
}

FunctionFamily FamilyGenerator::truncate(std::size_t n) const {
  if (n == 0) throw DomainError("truncation must be positive");
  std::vector<Member> ms;
  for (std::size_t i = 1; i <= n; ++i) {
    auto f = make(i);
    if (f.dim() != dim) throw DimensionError("generator produced wrong dimension");
    ms.push_back({std::to_string(i), std::move(f)});
  }
  return FunctionFamily(std::move(ms));
}

std::vector<double> member_values(const FunctionFamily& fam, const Vector& x) {
  require_dim(x, fam.dim(), "member_values");
  std::vector<double> v;
  v.reserve(fam.size());
  for (const auto& m : fam.members()) v.push_back(eval(m.f, x));
  return v;
}

ExtReal sup_function_eval(const FunctionFamily& fam, const Vector& x) {
  const auto v = member_values(fam, x);
  return *std::max_element(v.begin(), v.end());
}

ExtReal robust_sum_eval(const FunctionFamily& fam, const Vector& x) {
  const auto v = member_values(fam, x);
  double f0 = -kInf;
  for (double fi : v) {
    if (is_pos_inf(fi)) return kInf;
    f0 = std::max(f0, fi);
  }
  if (f0 <= 0.0) return f0;
  double sum = 0.0;
  for (double fi : v) sum += std::max(fi, 0.0);
  return sum;
}

bool in_S_f(const FunctionFamily& fam, const Vector& x, const SubsetJ& j, double tol) {
  if (j.empty()) return false;
  const ExtReal f = robust_sum_eval(fam, x);
  if (!std::isfinite(f)) return false;
  double s = 0.0;
  for (auto i : j) {
    if (i >= fam.size()) throw DomainError("in_S_f: index outside family");
    s += eval(fam.f(i), x);
  }
  return std::abs(s - f) <= tol;
}

CanonicalSubsets canonical_S_f(const FunctionFamily& fam, const Vector& x, double tol,
                               std::size_t zero_cap) {
  CanonicalSubsets out;
  const auto v = member_values(fam, x);
  const ExtReal f = robust_sum_eval(fam, x);
  if (!std::isfinite(f)) return out;
  const double f0 = *std::max_element(v.begin(), v.end());

  SubsetJ zeros;
  SubsetJ positive;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= tol) zeros.push_back(i);
    else if (v[i] > 0.0) positive.push_back(i);
  }

  // Subsets of the zero set, optionally prefixed by a fixed base set.
  auto zero_closure = [&](const SubsetJ& base, bool include_empty) {
    const std::size_t z = std::min(zeros.size(), zero_cap);
    if (z < zeros.size()) out.complete = false;
    for (std::uint64_t mask = include_empty ? 0 : 1; mask < (std::uint64_t{1} << z); ++mask) {
      SubsetJ j = base;
      for (std::size_t b = 0; b < z; ++b) {
        if (mask & (std::uint64_t{1} << b)) j.push_back(zeros[b]);
      }
      std::sort(j.begin(), j.end());
      out.sets.push_back(std::move(j));
    }
  };

  if (positive.empty() && f0 < -tol) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::abs(v[i] - f0) <= tol) out.sets.push_back({i});
    }
  } else if (positive.empty()) {
    zero_closure({}, false);
  } else {
    out.minimal = positive;
    zero_closure(positive, true);
  }
  std::sort(out.sets.begin(), out.sets.end(), shortlex_less);
  return out;
}

double truncated_lower_bound(const FamilyGenerator& gen, const Vector& x, std::size_t n) {
  return robust_sum_eval(gen.truncate(n), x);
}

Vector robust_sum_subgradient(const FunctionFamily& fam, const Vector& x) {
  const auto v = member_values(fam, x);
  const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  if (v[best] <= 0.0) return some_subgradient(fam.f(best), x);
  Vector g = Vector::Zero(fam.dim());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) g += some_subgradient(fam.f(i), x);
  }
  return g;
}

}  // namespace rsum
