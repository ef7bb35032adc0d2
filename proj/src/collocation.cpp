#include "sgcol/collocation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <unordered_set>

#include "sgcol/errors.hpp"
#include "sgcol/hermite.hpp"
#include "sgcol/parallel.hpp"

namespace sgcol {

namespace {

std::atomic<int> g_threads{0};

// Lagrange basis values at xi for every (dimension, rule size) used in one evaluation.
class BasisCache {
 public:
  explicit BasisCache(std::span<const double> xi) : xi_(xi) {}

  const std::vector<double>& get(int dim, int rule_size) {
    auto& slot = cache_[{dim, rule_size}];
    if (slot.empty()) {
      const auto& rule = gauss_hermite(rule_size);
      slot.resize(rule_size);
      const double x = dim <= int(xi_.size()) ? xi_[dim - 1] : 0.0;
      lagrange_basis(rule, x, slot);
    }
    return slot;
  }

 private:
  std::span<const double> xi_;
  std::map<std::pair<int, int>, std::vector<double>> cache_;
};

}  // namespace

void set_worker_threads(int n) { g_threads = std::max(0, n); }

int worker_threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

void ValueStore::ensure(std::span<const GridPoint> points, const Model& model) {
  std::vector<GridPoint> missing;
  {
    std::unordered_set<GridPoint, GridPointHash> queued;
    for (const auto& p : points) {
      if (!index_.contains(p) && queued.insert(p).second) missing.push_back(p);
    }
  }
  if (missing.empty()) return;
  std::sort(missing.begin(), missing.end());

  std::vector<Vector> results(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) {
    const std::vector<double> xi = missing[i].coordinates(min_dims_);
    try {
      results[i] = model(xi);
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      throw ModelError(std::string("model evaluation failed: ") + e.what(), xi);
    }
    if (!results[i].allFinite()) throw ModelError("model returned non-finite values", xi);
  });

  for (std::size_t i = 0; i < missing.size(); ++i) {
    if (!values_.empty() && results[i].size() != values_.front().size()) {
      throw ModelError("model output length changed between evaluations", missing[i].coordinates(min_dims_));
    }
    index_.emplace(missing[i], values_.size());
    points_.push_back(std::move(missing[i]));
    values_.push_back(std::move(results[i]));
  }
}

std::ptrdiff_t ValueStore::find(const GridPoint& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : std::ptrdiff_t(it->second);
}

std::size_t ValueStore::index_of(const GridPoint& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) throw ContractError("ValueStore: point not evaluated");
  return it->second;
}

// ---------------------------------------------------------------------------

TensorCombination::TensorCombination(CombinationCoefficients terms, std::shared_ptr<ValueStore> store,
                                     const Model& model)
    : terms_(std::move(terms)), store_(std::move(store)) {
  if (!store_) {
    int dims = 0;
    for (const auto& [k, c] : terms_) dims = std::max(dims, k.max_dim());
    store_ = std::make_shared<ValueStore>(dims);
  }
  std::vector<std::vector<GridPoint>> grids;
  grids.reserve(terms_.size());
  std::vector<GridPoint> all;
  for (const auto& [k, c] : terms_) {
    grids.push_back(tensor_grid(k));
    all.insert(all.end(), grids.back().begin(), grids.back().end());
  }
  store_->ensure(all, model);

  std::unordered_map<std::size_t, std::size_t> local_of;
  layouts_.reserve(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    TermLayout layout;
    for (const auto& [m, l] : terms_[t].first.entries()) {
      layout.dims.push_back(m);
      layout.rule_sizes.push_back(l + 1);
    }
    layout.local.reserve(grids[t].size());
    for (const auto& p : grids[t]) {
      const std::size_t global = store_->index_of(p);
      auto [it, inserted] = local_of.emplace(global, support_.size());
      if (inserted) support_.push_back(global);
      layout.local.push_back(it->second);
    }
    layouts_.push_back(std::move(layout));
  }
}

Vector TensorCombination::evaluate(std::span<const double> xi) const {
  if (!store_ || store_->size() == 0) throw ContractError("TensorCombination: not built");
  std::vector<double> weights(support_.size(), 0.0);
  BasisCache basis(xi);

  std::vector<const std::vector<double>*> factors;
  std::vector<int> digit;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& layout = layouts_[t];
    const double c = terms_[t].second;
    const std::size_t d = layout.dims.size();
    factors.resize(d);
    for (std::size_t j = 0; j < d; ++j) factors[j] = &basis.get(layout.dims[j], layout.rule_sizes[j]);

    // Mixed-radix walk in tensor_grid order (last dimension fastest).
    digit.assign(d, 0);
    for (std::size_t flat = 0; flat < layout.local.size(); ++flat) {
      double w = c;
      for (std::size_t j = 0; j < d; ++j) w *= (*factors[j])[digit[j]];
      weights[layout.local[flat]] += w;
      for (std::size_t j = d; j-- > 0;) {
        if (++digit[j] < layout.rule_sizes[j]) break;
        digit[j] = 0;
      }
    }
  }

  Vector out = Vector::Zero(store_->output_size());
  for (std::size_t p = 0; p < support_.size(); ++p) {
    if (weights[p] != 0.0) out.noalias() += weights[p] * store_->value(support_[p]);
  }
  return out;
}

SparseCollocation SparseCollocation::build(const MonotoneSet& lambda, const Model& model,
                                           std::shared_ptr<ValueStore> store) {
  if (lambda.empty()) throw ContractError("SparseCollocation::build: empty index set");
  if (!store) store = std::make_shared<ValueStore>(lambda.max_dim());
  const auto grid = sparse_grid_points(lambda);
  store->ensure(grid, model);

  SparseCollocation sc;
  sc.lambda_ = lambda;
  sc.combination_ = TensorCombination(combination_coefficients(lambda), std::move(store), model);
  sc.grid_size_ = grid.size();
  return sc;
}

TensorCombination delta_apply(const MultiIndex& nu, const Model& model, std::shared_ptr<ValueStore> store) {
  return TensorCombination(detail_terms(nu), std::move(store), model);
}

// ---------------------------------------------------------------------------

Vector HermiteExpansion::evaluate(std::span<const double> xi) const {
  if (terms.empty()) throw ContractError("HermiteExpansion::evaluate: empty expansion");
  std::map<int, std::vector<double>> h;  // dimension -> H_0..H_top at xi_m
  for (const auto& [nu, f] : terms) {
    for (const auto& [m, l] : nu.entries()) {
      auto& v = h[m];
      if (int(v.size()) <= l) v.resize(l + 1);
    }
  }
  for (auto& [m, v] : h) hermite_values(m <= int(xi.size()) ? xi[m - 1] : 0.0, v);

  Vector out = Vector::Zero(terms.begin()->second.size());
  for (const auto& [nu, f] : terms) {
    double w = 1.0;
    for (const auto& [m, l] : nu.entries()) w *= h[m][l];
    out.noalias() += w * f;
  }
  return out;
}

HermiteExpansion HermiteExpansion::restricted(std::span<const MultiIndex> keep) const {
  HermiteExpansion r;
  for (const auto& nu : keep) {
    if (auto it = terms.find(nu); it != terms.end()) r.terms.emplace(nu, it->second);
  }
  return r;
}

HermiteExpansion to_hermite(const TensorCombination& combination) {
  HermiteExpansion he;
  const auto& store = combination.store();
  const auto& support = combination.support();
  const Eigen::Index len = store.output_size();

  for (std::size_t t = 0; t < combination.terms().size(); ++t) {
    const auto& [k, c] = combination.terms()[t];
    const auto& layout = combination.layouts()[t];
    const std::size_t d = layout.dims.size();

    // transform[j](a, p) = w_p H_a(x_p) for the (k_j+1)-point rule.
    std::vector<Eigen::MatrixXd> transform(d);
    for (std::size_t j = 0; j < d; ++j) {
      const int n = layout.rule_sizes[j];
      const auto& rule = gauss_hermite(n);
      transform[j].resize(n, n);
      std::vector<double> hv(n);
      for (int p = 0; p < n; ++p) {
        hermite_values(rule.nodes[p], hv);
        for (int a = 0; a < n; ++a) transform[j](a, p) = rule.weights[p] * hv[a];
      }
    }

    const std::size_t count = layout.local.size();
    std::vector<int> deg(d, 0);
    for (std::size_t out_flat = 0; out_flat < count; ++out_flat) {
      MultiIndex nu;
      for (std::size_t j = 0; j < d; ++j) nu.set(layout.dims[j], deg[j]);

      Vector coef = Vector::Zero(len);
      std::vector<int> node(d, 0);
      for (std::size_t in_flat = 0; in_flat < count; ++in_flat) {
        double w = c;
        for (std::size_t j = 0; j < d; ++j) w *= transform[j](deg[j], node[j]);
        coef.noalias() += w * store.value(support[layout.local[in_flat]]);
        for (std::size_t j = d; j-- > 0;) {
          if (++node[j] < layout.rule_sizes[j]) break;
          node[j] = 0;
        }
      }
      auto [it, inserted] = he.terms.try_emplace(nu, coef);
      if (!inserted) it->second += coef;

      for (std::size_t j = d; j-- > 0;) {
        if (++deg[j] < layout.rule_sizes[j]) break;
        deg[j] = 0;
      }
    }
  }
  return he;
}

std::vector<MultiIndex> order_by_norm(const HermiteExpansion& he, const NormFn& norm) {
  std::vector<std::pair<double, MultiIndex>> keyed;
  keyed.reserve(he.terms.size());
  for (const auto& [nu, f] : he.terms) keyed.emplace_back(norm(f), nu);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<MultiIndex> out;
  out.reserve(keyed.size());
  for (auto& [n, nu] : keyed) out.push_back(std::move(nu));
  return out;
}

std::vector<BestNTermPoint> best_n_term_curve(const HermiteExpansion& he, const NormFn& coeff_norm,
                                              const std::function<double(const HermiteExpansion&)>& error_metric,
                                              std::size_t n_limit) {
  if (he.terms.empty()) throw ContractError("best_n_term_curve: empty expansion");
  const auto order = order_by_norm(he, coeff_norm);
  const std::size_t top = n_limit == 0 ? order.size() : std::min(n_limit, order.size());
  std::vector<BestNTermPoint> curve;
  curve.reserve(top);
  for (std::size_t n = 1; n <= top; ++n) {
    const auto truncated = he.restricted(std::span<const MultiIndex>(order.data(), n));
    curve.push_back({n, error_metric(truncated)});
  }
  return curve;
}

// ---------------------------------------------------------------------------

double c_nu_bruteforce(const MultiIndex& nu) {
  const std::size_t size = nu.tensor_size();
  if (size > kMaxBruteForceEnvelope) {
    throw ContractError("c_nu_bruteforce: envelope has " + std::to_string(size) + " members, limit is " +
                        std::to_string(kMaxBruteForceEnvelope));
  }
  const auto members = envelope(nu).sorted();

  // Univariate Hermite coefficients of Delta_i H_{nu_m}, per active dimension.
  std::map<int, std::vector<std::vector<double>>> coeff;
  for (const auto& [m, l] : nu.entries()) {
    auto& per_level = coeff[m];
    for (int i = 0; i <= l; ++i) per_level.push_back(delta_hermite_coefficients(i, l));
  }
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) s += a[j] * b[j];
    return s;
  };

  // Gram matrix of the tensorized detail functions Delta_i H_nu, i in R_nu.
  Eigen::MatrixXd gram(size, size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double g = 1.0;
      for (const auto& [m, l] : nu.entries()) g *= dot(coeff[m][members[a][m]], coeff[m][members[b][m]]);
      gram(a, b) = gram(b, a) = g;
    }
  }

  double best = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << size); ++mask) {
    double s = 0.0;
    for (std::size_t a = 0; a < size; ++a) {
      if (!(mask >> a & 1)) continue;
      for (std::size_t b = 0; b < size; ++b) {
        if (mask >> b & 1) s += gram(a, b);
      }
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double sum_delta_norms(const MultiIndex& nu) {
  double total = 0.0;
  const MonotoneSet env = envelope(nu);
  for (const auto& i : env.members()) {
    double p = 1.0;
    for (const auto& [m, l] : nu.entries()) p *= norm_Delta_H(i[m], l);
    total += p;
  }
  return total;
}

double c_nu_product_bound(const MultiIndex& nu, double theta) {
  const double K = 2.0 * kCramerConstant * std::sqrt(std::numbers::e);
  double p = 1.0;
  for (const auto& [m, l] : nu.entries()) p *= std::pow(1.0 + K * l, theta + 1.0);
  return p;
}

}  // namespace sgcol
