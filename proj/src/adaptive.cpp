#include "sgcol/adaptive.hpp"

#include <cmath>
#include <map>
#include <unordered_set>

#include "sgcol/errors.hpp"

namespace sgcol {

APrioriWeights APrioriWeights::for_q(double q) {
  if (!(q > 1.0)) throw ConfigError("a-priori weights need q > 1");
  return APrioriWeights{q, 1.0, 10.0 + 4.0 * (q - 1.0)};
}

double APrioriWeights::tau(int m) const { return std::pow(double(m), q - 1.0); }

double c_hat(const MultiIndex& nu, const APrioriWeights& w) {
  const double expo = 2.0 * w.theta + 2.0 - w.r;
  double p = 1.0;
  for (const auto& [m, l] : nu.entries()) {
    const double t = w.tau(m);
    p *= std::pow(double(l), expo) / (t * t);
  }
  return p;
}

double b_weight(const MultiIndex& nu, const std::function<double(int)>& tau, int r) {
  if (r < 0) throw ContractError("b_weight: r must be >= 0");
  double p = 1.0;
  for (const auto& [m, l] : nu.entries()) {
    const double t2 = tau(m) * tau(m);
    double s = 0.0;
    double binom = 1.0;
    double pw = 1.0;
    for (int k = 0; k <= std::min(l, r); ++k) {
      s += binom * pw;
      binom = binom * (l - k) / (k + 1);
      pw *= t2;
    }
    p *= s;
  }
  return p;
}

MonotoneSet AdaptiveState::prefix(std::size_t n) const {
  if (n < 1 || n > history.size() + 1) throw ContractError("AdaptiveState::prefix: N out of range");
  MonotoneSet s = MonotoneSet::origin();
  for (std::size_t i = 0; i + 1 < n; ++i) s.insert(history[i].chosen);
  return s;
}

namespace {

void check_options(const AdaptiveOptions& opt) {
  if (opt.n_max < 1) throw ContractError("adaptive: n_max must be >= 1");
  if (opt.m_buffer < 1) throw ContractError("adaptive: m_buffer must be >= 1");
}

void add_grid(std::unordered_set<GridPoint, GridPointHash>& grid, const MultiIndex& nu) {
  for (auto& p : tensor_grid(nu)) grid.insert(std::move(p));
}

}  // namespace

AdaptiveState run_apriori(const APrioriWeights& w, const AdaptiveOptions& opt) {
  check_options(opt);
  AdaptiveState st;
  st.lambda = MonotoneSet::origin();
  std::unordered_set<GridPoint, GridPointHash> grid;
  add_grid(grid, MultiIndex{});

  for (int n = 2; n <= opt.n_max; ++n) {
    const auto cands = neighbors(st.lambda, opt.m_buffer, opt.dim_cap);
    if (cands.empty()) break;
    const MultiIndex* best = nullptr;
    double best_val = -1.0;
    for (const auto& nu : cands) {
      const double v = c_hat(nu, w);
      if (v > best_val) {
        best_val = v;
        best = &nu;
      }
    }
    st.lambda.insert(*best);
    add_grid(grid, *best);
    st.history.push_back(
        StepRecord{*best, best_val, st.lambda.size(), grid.size(), grid.size(), st.lambda.active_dims()});
  }
  return st;
}

double surplus_estimate(const MultiIndex& nu, const Model& model, const NormFn& norm,
                        const std::shared_ptr<ValueStore>& store) {
  const TensorCombination delta = delta_apply(nu, model, store);
  double best = 0.0;
  for (const auto& p : tensor_grid(nu)) {
    const std::vector<double> xi = p.coordinates();
    double sq = 0.0;
    for (double v : xi) sq += v * v;
    best = std::max(best, std::exp(-0.5 * sq) * norm(delta.evaluate(xi)));
  }
  return best;
}

AdaptiveState run_aposteriori(const Model& model, const AdaptiveOptions& opt, const NormFn& norm,
                              std::shared_ptr<ValueStore> store) {
  check_options(opt);
  if (!store) store = std::make_shared<ValueStore>(opt.dim_cap);
  AdaptiveState st;
  st.lambda = MonotoneSet::origin();
  const std::size_t stored_before = store->size();
  store->ensure(tensor_grid(MultiIndex{}), model);
  std::unordered_set<GridPoint, GridPointHash> grid;
  add_grid(grid, MultiIndex{});
  std::unordered_set<GridPoint, GridPointHash> extended = grid;

  // The surplus Delta_nu u depends only on nu and u, so a neighbour's profit
  // stays valid until it is selected.
  std::map<MultiIndex, double> profit;
  for (int n = 2; n <= opt.n_max; ++n) {
    const auto cands = neighbors(st.lambda, opt.m_buffer, opt.dim_cap);
    if (cands.empty()) break;
    if (opt.recompute_all) profit.clear();

    std::vector<GridPoint> fresh;
    for (const auto& nu : cands) {
      if (profit.contains(nu)) continue;
      auto g = tensor_grid(nu);
      fresh.insert(fresh.end(), std::make_move_iterator(g.begin()), std::make_move_iterator(g.end()));
    }
    store->ensure(fresh, model);
    extended.insert(fresh.begin(), fresh.end());
    for (const auto& nu : cands) {
      if (!profit.contains(nu)) {
        profit[nu] = surplus_estimate(nu, model, norm, store) / double(nu.tensor_size());
      }
    }

    const MultiIndex* best = nullptr;
    double best_val = -1.0;
    for (const auto& nu : cands) {
      const double v = profit.at(nu);
      if (v > best_val) {
        best_val = v;
        best = &nu;
      }
    }
    const MultiIndex chosen = *best;
    profit.erase(chosen);
    st.lambda.insert(chosen);
    add_grid(grid, chosen);
    st.history.push_back(
        StepRecord{chosen, best_val, st.lambda.size(), grid.size(), extended.size(), st.lambda.active_dims()});
  }
  st.evaluations = store->size() - stored_before;
  return st;
}

}  // namespace sgcol
