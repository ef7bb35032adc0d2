#include "sgcol/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>

#include "sgcol/errors.hpp"

namespace sgcol {

double hermite_eval(int nu, double xi) {
  if (nu <= 0) return 1.0;
  double prev = 1.0;
  double cur = xi;
  for (int n = 1; n < nu; ++n) {
    const double next = (xi * cur - std::sqrt(double(n)) * prev) / std::sqrt(double(n + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_values(double xi, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = xi;
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    out[n + 1] = (xi * out[n] - std::sqrt(double(n)) * out[n - 1]) / std::sqrt(double(n + 1));
  }
}

namespace {

// Newton step on H_n using H_n' = sqrt(n) H_{n-1}.
double polish_root(int n, double x) {
  for (int iter = 0; iter < 8; ++iter) {
    const double hn = hermite_eval(n, x);
    const double dn = std::sqrt(double(n)) * hermite_eval(n - 1, x);
    if (dn == 0.0) break;
    const double step = hn / dn;
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

GaussHermiteRule build_gauss_hermite(int n) {
  if (n < 1) throw ContractError("gauss_hermite: point count must be >= 1, got " + std::to_string(n));

  GaussHermiteRule rule;
  rule.n = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 1.0);
  rule.bary.assign(n, 1.0);
  if (n == 1) return rule;

  // Jacobi matrix of the orthonormal recurrence: zero diagonal, sqrt(k) off-diagonal.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("gauss_hermite: eigenvalue solve did not converge for n = " + std::to_string(n));
  }

  std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(x.begin(), x.end());
  for (double& xk : x) xk = polish_root(n, xk);

  // Symmetrize; the middle node of an odd rule is exactly 0.
  for (int k = 0; k < n / 2; ++k) {
    const double half = 0.5 * (x[n - 1 - k] - x[k]);
    x[k] = -half;
    x[n - 1 - k] = half;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  rule.nodes = x;

  // Christoffel numbers w_k = 1 / sum_{j<n} H_j(x_k)^2.
  std::vector<double> h(n);
  for (int k = 0; k < n; ++k) {
    hermite_values(x[k], h);
    double s = 0.0;
    for (double v : h) s += v * v;
    rule.weights[k] = 1.0 / s;
  }
  for (int k = 0; k < n / 2; ++k) {
    const double w = 0.5 * (rule.weights[k] + rule.weights[n - 1 - k]);
    rule.weights[k] = w;
    rule.weights[n - 1 - k] = w;
  }
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights) w /= total;

  // For Gauss rules the barycentric weights are proportional to (-1)^k sqrt(w_k).
  for (int k = 0; k < n; ++k) rule.bary[k] = (k % 2 == 0 ? 1.0 : -1.0) * std::sqrt(rule.weights[k]);
  return rule;
}

const GaussHermiteRule& gauss_hermite(int n) {
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return *it->second;
  }
  std::unique_lock lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    try {
      slot = std::make_unique<GaussHermiteRule>(build_gauss_hermite(n));
    } catch (...) {
      cache.erase(n);
      throw;
    }
  }
  return *slot;
}

void lagrange_basis(const GaussHermiteRule& rule, double xi, std::span<double> out) {
  if (out.size() != rule.nodes.size()) throw ContractError("lagrange_basis: output length mismatch");
  const int n = rule.n;
  for (int k = 0; k < n; ++k) {
    if (xi == rule.nodes[k]) {
      std::fill(out.begin(), out.end(), 0.0);
      out[k] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < n; ++k) {
    out[k] = rule.bary[k] / (xi - rule.nodes[k]);
    denom += out[k];
  }
  for (double& v : out) v /= denom;
}

double interp_univariate(int level, std::span<const double> values, double xi) {
  if (level < 0 || values.size() != std::size_t(level + 1)) {
    throw ContractError("interp_univariate: expected " + std::to_string(level + 1) + " values, got " +
                        std::to_string(values.size()));
  }
  const auto& rule = gauss_hermite(level + 1);
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k <= level; ++k) {
    if (xi == rule.nodes[k]) return values[k];
    const double t = rule.bary[k] / (xi - rule.nodes[k]);
    num += t * values[k];
    den += t;
  }
  return num / den;
}

std::vector<double> interpolant_to_hermite(int level, std::span<const double> values) {
  if (level < 0 || values.size() != std::size_t(level + 1)) {
    throw ContractError("interpolant_to_hermite: length mismatch");
  }
  const auto& rule = gauss_hermite(level + 1);
  std::vector<double> coeffs(level + 1, 0.0);
  std::vector<double> h(level + 1);
  for (int k = 0; k <= level; ++k) {
    hermite_values(rule.nodes[k], h);
    const double wv = rule.weights[k] * values[k];
    for (int j = 0; j <= level; ++j) coeffs[j] += wv * h[j];
  }
  return coeffs;
}

double norm_U_H(int i, int nu) {
  const auto& rule = gauss_hermite(i + 1);
  double s = 0.0;
  for (int k = 0; k <= i; ++k) {
    const double h = hermite_eval(nu, rule.nodes[k]);
    s += h * h * rule.weights[k];
  }
  return std::sqrt(s);
}

std::vector<double> delta_hermite_coefficients(int i, int nu) {
  const int top = std::max(i, nu);
  const auto& proj = gauss_hermite(top + 2);

  auto nodal = [nu](int level) {
    const auto& r = gauss_hermite(level + 1);
    std::vector<double> v(level + 1);
    for (int k = 0; k <= level; ++k) v[k] = hermite_eval(nu, r.nodes[k]);
    return v;
  };
  const std::vector<double> fine = nodal(i);
  const std::vector<double> coarse = i > 0 ? nodal(i - 1) : std::vector<double>{};

  std::vector<double> coeffs(top + 1, 0.0);
  std::vector<double> h(top + 1);
  for (int p = 0; p < proj.n; ++p) {
    const double y = proj.nodes[p];
    double d = interp_univariate(i, fine, y);
    if (i > 0) d -= interp_univariate(i - 1, coarse, y);
    hermite_values(y, h);
    for (int j = 0; j <= top; ++j) coeffs[j] += proj.weights[p] * d * h[j];
  }
  return coeffs;
}

double norm_Delta_H(int i, int nu) {
  const auto c = delta_hermite_coefficients(i, nu);
  double s = 0.0;
  for (double v : c) s += v * v;
  return std::sqrt(s);
}

}  // namespace sgcol
