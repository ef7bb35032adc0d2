#pragma once

// Greedy construction of nested monotone index sets: a-priori selection on
// the dominating weights c_hat, and a-posteriori selection on the estimated
// profit ||Delta_nu u||_{L^inf_mu} / |Xi^(nu)|.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "sgcol/collocation.hpp"
#include "sgcol/multi_index.hpp"

namespace sgcol {

struct APrioriWeights {
  double q = 2.0;      // field decay exponent, > 1
  double theta = 1.0;  // growth exponent of ||Delta_i H_nu||
  double r = 14.0;     // differentiability order

  /// Weights used for the lognormal testbed: theta = 1, r = 10 + 4 (q - 1).
  static APrioriWeights for_q(double q);

  /// tau_m = m^{q-1}.
  double tau(int m) const;
};

/// c_hat_nu = prod_{m in supp nu} nu_m^{2 theta + 2 - r} tau_m^{-2}; 1 for nu = 0.
double c_hat(const MultiIndex& nu, const APrioriWeights& w);

/// b_nu = prod_m sum_{l=0}^{r} binom(nu_m, l) tau_m^{2l}.
double b_weight(const MultiIndex& nu, const std::function<double(int)>& tau, int r);

struct StepRecord {
  MultiIndex chosen;
  double criterion = 0.0;        // c_hat or profit of the chosen index
  std::size_t index_count = 0;   // |Lambda_N|
  std::size_t grid_size = 0;     // |Xi_{Lambda_N}|
  std::size_t extended_size = 0; // |Xi_{Lambda_N} u Xi_{N(Lambda_{N-1})}|; = grid_size for a-priori
  int active_dims = 0;
};

struct AdaptiveState {
  MonotoneSet lambda;
  /// One record per added index (steps N = 2..n_max).
  std::vector<StepRecord> history;
  /// Model evaluations consumed (0 for the a-priori algorithm).
  std::size_t evaluations = 0;

  /// Lambda_N for N = 1..|lambda|, replayed from the history.
  MonotoneSet prefix(std::size_t n) const;
};

struct AdaptiveOptions {
  int m_buffer = 5;
  int n_max = 1;
  /// Never activate dimensions above this (0 = unbounded).
  int dim_cap = 0;
  /// Recompute every neighbour's criterion each step instead of reusing cached values.
  bool recompute_all = false;
};

AdaptiveState run_apriori(const APrioriWeights& w, const AdaptiveOptions& opt);

/// `store` receives every model evaluation (the extended grid); pass one to
/// reuse the values afterwards. A fresh store pads points to opt.dim_cap.
AdaptiveState run_aposteriori(const Model& model, const AdaptiveOptions& opt, const NormFn& norm,
                              std::shared_ptr<ValueStore> store = nullptr);

/// Estimated ||Delta_nu u||_{L^inf_mu}: max over Xi^(nu) of rho(xi) ||Delta_nu u(xi)||,
/// rho(xi) = exp(-|xi|^2 / 2).
double surplus_estimate(const MultiIndex& nu, const Model& model, const NormFn& norm,
                        const std::shared_ptr<ValueStore>& store);

}  // namespace sgcol
