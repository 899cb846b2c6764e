#include "rwam/index_set.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rwam/error.hpp"

namespace rwam {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::rank: return "rank";
    case ErrorKind::envelope: return "envelope";
    case ErrorKind::efficiency: return "efficiency";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::level_too_small: return "level-too-small";
    case ErrorKind::shape: return "shape";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::fit: return "fit";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

int degree(const MultiIndex& alpha) noexcept { return std::accumulate(alpha.begin(), alpha.end(), 0); }

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) noexcept {
  const int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

IndexSet::IndexSet(std::vector<MultiIndex> indices, int level) : indices_(std::move(indices)), level_(level) {
  require(!indices_.empty(), ErrorKind::precondition, "index set must be nonempty");
  const std::size_t d = indices_.front().size();
  require(d >= 1, ErrorKind::precondition, "multi-indices must have dimension >= 1");
  for (const auto& a : indices_) {
    require(a.size() == d, ErrorKind::precondition, "multi-indices have inconsistent dimension");
    for (int e : a) require(e >= 0, ErrorKind::precondition, "multi-index entries must be nonnegative");
  }
  std::sort(indices_.begin(), indices_.end(), graded_lex_less);
  const auto dup = std::adjacent_find(indices_.begin(), indices_.end());
  require(dup == indices_.end(), ErrorKind::precondition, "duplicate multi-index in index set");
}

int IndexSet::max_degree() const noexcept {
  int m = 0;
  for (const auto& a : indices_) m = std::max(m, degree(a));
  return m;
}

int IndexSet::max_axis_degree() const noexcept {
  int m = 0;
  for (const auto& a : indices_)
    for (int e : a) m = std::max(m, e);
  return m;
}

namespace {

// Appends every alpha of total degree exactly `remaining` over axes [axis, d),
// in lexicographic order.
void enumerate_degree(int remaining, int axis, MultiIndex& cur, std::vector<MultiIndex>& out) {
  const int d = static_cast<int>(cur.size());
  if (axis == d - 1) {
    cur[axis] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[axis] = e;
    enumerate_degree(remaining - e, axis + 1, cur, out);
  }
}

}  // namespace

IndexSet total_degree_set(int n, int d) {
  require(n >= 0, ErrorKind::precondition, "level n must be >= 0");
  require(d >= 1, ErrorKind::precondition, "dimension d must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(binomial(n + d, d));
  MultiIndex cur(d, 0);
  for (int k = 0; k <= n; ++k) enumerate_degree(k, 0, cur, out);
  return IndexSet(std::move(out), n);
}

std::uint64_t binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace rwam
