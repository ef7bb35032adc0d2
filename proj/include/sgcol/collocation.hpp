#pragma once

// Sparse collocation U_Lambda = sum_{i in Lambda} Delta_i over Gauss-Hermite
// nodes for vector-valued models, in combination-technique form.

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "sgcol/multi_index.hpp"

namespace sgcol {

using Vector = Eigen::VectorXd;

/// Model xi -> f(xi). xi is dense with implicit zeros beyond its length
/// (coordinate m at index m-1). Must be safe to call concurrently.
using Model = std::function<Vector(std::span<const double>)>;

/// Norm on the model's output space.
using NormFn = std::function<double(const Vector&)>;

inline double euclidean_norm(const Vector& v) { return v.norm(); }

/// Number of worker threads used for model evaluation (0 = hardware concurrency).
void set_worker_threads(int n);
int worker_threads();

/// Model outputs keyed by symbolic grid point. Every point is evaluated at
/// most once; batches of missing points may be evaluated concurrently but are
/// inserted in sorted point order, so contents are independent of scheduling.
class ValueStore {
 public:
  /// The model receives at least `min_dims` coordinates (trailing zeros).
  explicit ValueStore(int min_dims = 0) : min_dims_(min_dims) {}

  /// Evaluates `model` at the points of `points` not yet stored.
  void ensure(std::span<const GridPoint> points, const Model& model);

  /// Index of a stored point, or -1.
  std::ptrdiff_t find(const GridPoint& p) const;
  std::size_t index_of(const GridPoint& p) const;

  const Vector& value(std::size_t idx) const { return values_[idx]; }
  const GridPoint& point(std::size_t idx) const { return points_[idx]; }
  std::size_t size() const noexcept { return values_.size(); }
  /// Output length, 0 while empty.
  Eigen::Index output_size() const noexcept { return values_.empty() ? 0 : values_.front().size(); }
  int min_dims() const noexcept { return min_dims_; }

 private:
  int min_dims_ = 0;
  std::unordered_map<GridPoint, std::size_t, GridPointHash> index_;
  std::vector<GridPoint> points_;
  std::vector<Vector> values_;
};

/// Signed integer combination sum_k c_k U_k of full tensor interpolants with
/// nodal values taken from a shared store.
class TensorCombination {
 public:
  TensorCombination() = default;
  /// Makes sure every tensor grid of `terms` is in `store`, evaluating `model` where needed.
  TensorCombination(CombinationCoefficients terms, std::shared_ptr<ValueStore> store, const Model& model);

  Vector evaluate(std::span<const double> xi) const;

  const CombinationCoefficients& terms() const noexcept { return terms_; }
  const ValueStore& store() const noexcept { return *store_; }
  std::shared_ptr<ValueStore> shared_store() const noexcept { return store_; }
  /// Indices into store() of the distinct points referenced by the terms.
  const std::vector<std::size_t>& support() const noexcept { return support_; }

  struct TermLayout {
    std::vector<int> dims;         // active dimensions of k
    std::vector<int> rule_sizes;   // k_m + 1
    std::vector<std::size_t> local;  // tensor-grid order -> position in support()
  };
  const std::vector<TermLayout>& layouts() const noexcept { return layouts_; }

 private:
  CombinationCoefficients terms_;
  std::shared_ptr<ValueStore> store_;
  std::vector<std::size_t> support_;
  std::vector<TermLayout> layouts_;
};

class SparseCollocation {
 public:
  /// Evaluates the model once per point of Xi_Lambda that `store` lacks. A
  /// fresh store passes lambda.max_dim() coordinates to the model.
  static SparseCollocation build(const MonotoneSet& lambda, const Model& model,
                                 std::shared_ptr<ValueStore> store = nullptr);

  Vector evaluate(std::span<const double> xi) const { return combination_.evaluate(xi); }

  const MonotoneSet& lambda() const noexcept { return lambda_; }
  const CombinationCoefficients& coefficients() const noexcept { return combination_.terms(); }
  const TensorCombination& combination() const noexcept { return combination_; }
  const ValueStore& store() const noexcept { return combination_.store(); }
  int dims_active() const noexcept { return lambda_.max_dim(); }
  /// |Xi_Lambda|
  std::size_t grid_size() const noexcept { return grid_size_; }

 private:
  MonotoneSet lambda_;
  TensorCombination combination_;
  std::size_t grid_size_ = 0;
};

/// Delta_nu f as a combination of at most 2^{|nu|_0} tensor interpolants.
TensorCombination delta_apply(const MultiIndex& nu, const Model& model,
                              std::shared_ptr<ValueStore> store = nullptr);

/// Hermite (polynomial chaos) form sum_nu f_nu H_nu.
struct HermiteExpansion {
  std::map<MultiIndex, Vector> terms;

  Vector evaluate(std::span<const double> xi) const;
  /// Copy keeping only the listed indices.
  HermiteExpansion restricted(std::span<const MultiIndex> keep) const;
};

/// Exact conversion of a combination of tensor interpolants to Hermite form.
HermiteExpansion to_hermite(const TensorCombination& combination);
inline HermiteExpansion to_hermite(const SparseCollocation& sc) { return to_hermite(sc.combination()); }

/// Term indices sorted by decreasing coefficient norm (ties: lexicographic).
std::vector<MultiIndex> order_by_norm(const HermiteExpansion& he, const NormFn& norm);

struct BestNTermPoint {
  std::size_t n;
  double error;
};

/// Errors of the truncations to the N largest terms, N = 1..min(n_limit, #terms)
/// (all terms when n_limit == 0).
std::vector<BestNTermPoint> best_n_term_curve(const HermiteExpansion& he, const NormFn& coeff_norm,
                                              const std::function<double(const HermiteExpansion&)>& error_metric,
                                              std::size_t n_limit = 0);

/// Largest envelope c_nu_bruteforce accepts.
inline constexpr std::size_t kMaxBruteForceEnvelope = 12;

/// c_nu = max over all subsets Lambda of R_nu of ||sum_{i in R_nu \ Lambda} Delta_i H_nu||.
double c_nu_bruteforce(const MultiIndex& nu);

/// sum_{i in R_nu} ||Delta_i H_nu||.
double sum_delta_norms(const MultiIndex& nu);

/// prod_m (1 + K nu_m)^{theta+1}, K = 2 c sqrt(e).
double c_nu_product_bound(const MultiIndex& nu, double theta = 1.0);

}  // namespace sgcol
