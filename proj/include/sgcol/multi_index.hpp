#pragma once

// Multi-indices over countably many dimensions (1-based), monotone sets,
// neighbour sets, TD/HC generators, combination-technique coefficients and
// sparse-grid node bookkeeping.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sgcol {

/// Finitely supported map dimension -> level. Only nonzero entries are
/// stored, sorted by dimension; comparison is lexicographic on that canonical
/// list of (dimension, level) pairs, so e_1 < 2e_1 < e_2 and 0 is smallest.
class MultiIndex {
 public:
  using Entry = std::pair<int, int>;  // (dimension >= 1, level >= 1)

  MultiIndex() = default;
  /// Dense constructor: levels[m-1] is the level of dimension m.
  static MultiIndex dense(std::initializer_list<int> levels);
  static MultiIndex dense(std::span<const int> levels);
  static MultiIndex unit(int dim, int level = 1);

  int operator[](int dim) const noexcept;
  void set(int dim, int level);

  MultiIndex plus_unit(int dim) const;
  MultiIndex minus_unit(int dim) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  int l1() const noexcept;
  int support_size() const noexcept { return static_cast<int>(entries_.size()); }
  /// Largest active dimension, 0 for the zero index.
  int max_dim() const noexcept { return entries_.empty() ? 0 : entries_.back().first; }
  /// prod_m (1 + nu_m): cardinality of the envelope and of the tensor grid.
  std::size_t tensor_size() const noexcept;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

 private:
  std::vector<Entry> entries_;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& nu) const noexcept;
};

/// Componentwise a <= b.
bool leq(const MultiIndex& a, const MultiIndex& b);

/// Downward-closed finite set of multi-indices. Members are kept in
/// insertion order; `sorted()` gives the lexicographic order.
class MonotoneSet {
 public:
  MonotoneSet() = default;

  /// Validates downward closure; throws ContractError otherwise.
  static MonotoneSet from(std::vector<MultiIndex> members);
  /// {0}.
  static MonotoneSet origin();

  /// Adds nu; throws ContractError if the result would not be monotone.
  void insert(const MultiIndex& nu);
  /// True if nu is absent and all its backward neighbours are present.
  bool admissible(const MultiIndex& nu) const;

  bool contains(const MultiIndex& nu) const { return index_.contains(nu); }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<MultiIndex>& members() const noexcept { return members_; }
  std::vector<MultiIndex> sorted() const;
  /// max(supp(Lambda)); 0 when no dimension is active.
  int max_dim() const noexcept { return max_dim_; }
  /// Number of dimensions m with nu_m > 0 for some member.
  int active_dims() const;

 private:
  std::vector<MultiIndex> members_;
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> index_;
  int max_dim_ = 0;
};

/// Rectangular envelope R_nu = {i : i <= nu}.
MonotoneSet envelope(const MultiIndex& nu);

/// Admissible neighbours of a nonempty monotone set, restricted to dimensions
/// m <= max_dim(lambda) + m_buffer (and m <= dim_cap when dim_cap > 0),
/// sorted lexicographically.
std::vector<MultiIndex> neighbors(const MonotoneSet& lambda, int m_buffer, int dim_cap = 0);

/// Total degree set {nu : |nu|_1 <= w, supp(nu) in 1..M}.
MonotoneSet td_set(int w, int M);

/// Hyperbolic cross {nu : prod (nu_m + 1) <= w, supp(nu) in 1..M}.
MonotoneSet hc_set(int w, int M);

/// Nonzero combination-technique coefficients c_k of sum_{i in Lambda} Delta_i
/// = sum_k c_k U_k, in lexicographic order of k.
using CombinationCoefficients = std::vector<std::pair<MultiIndex, int>>;
CombinationCoefficients combination_coefficients(const MonotoneSet& lambda);

/// Inclusion-exclusion terms of Delta_nu = sum_{z in {0,1}^supp} (-1)^|z| U_{nu-z}.
CombinationCoefficients detail_terms(const MultiIndex& nu);

/// One coordinate of a sparse-grid node: node `index` of the `rule_size`-point
/// rule in dimension `dim`. The origin is never stored (it is the centre of
/// every odd rule and the value of every inactive dimension).
struct NodeCoord {
  int dim;
  int rule_size;
  int index;
  friend bool operator==(const NodeCoord&, const NodeCoord&) = default;
  friend auto operator<=>(const NodeCoord&, const NodeCoord&) = default;
};

/// Symbolic identity of a sparse-grid point: its nonzero coordinates sorted by dimension.
struct GridPoint {
  std::vector<NodeCoord> coords;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint& a, const GridPoint& b) { return a.coords <=> b.coords; }

  /// Dense coordinates of length `dims` (at least the largest stored dimension).
  std::vector<double> coordinates(int dims = 0) const;
};

struct GridPointHash {
  std::size_t operator()(const GridPoint& p) const noexcept;
};

/// Xi^(k): the tensor grid of rules with k_m + 1 points, enumerated with the
/// last active dimension varying fastest.
std::vector<GridPoint> tensor_grid(const MultiIndex& k);

/// Xi_Lambda: deduplicated union of tensor grids, sorted.
std::vector<GridPoint> sparse_grid_points(const MonotoneSet& lambda);

struct PointCount {
  std::size_t exact;
  std::size_t bound;  // |Lambda| (|Lambda| + 1) / 2
};
PointCount count_points(const MonotoneSet& lambda);

}  // namespace sgcol
