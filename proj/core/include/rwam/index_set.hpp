#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rwam {

/// Nonnegative d-dimensional multi-index.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& alpha) noexcept;

/// Graded lexicographic order: total degree first, ties broken
/// lexicographically.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) noexcept;

/// Ordered, duplicate-free list of multi-indices for one hierarchy level.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts into graded-lex order; throws on duplicates, negative entries or
  /// ragged dimensions.
  IndexSet(std::vector<MultiIndex> indices, int level);

  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  int dim() const noexcept { return indices_.empty() ? 0 : static_cast<int>(indices_.front().size()); }
  int level() const noexcept { return level_; }
  int max_degree() const noexcept;
  /// Largest single-axis entry.
  int max_axis_degree() const noexcept;
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }

 private:
  std::vector<MultiIndex> indices_;
  int level_ = 0;
};

/// All alpha with |alpha| <= n, in graded-lex order; size C(n+d, d).
IndexSet total_degree_set(int n, int d);

std::uint64_t binomial(int n, int k) noexcept;

}  // namespace rwam
