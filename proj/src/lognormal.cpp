#include "sgcol/lognormal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sgcol/errors.hpp"

namespace sgcol {

void FieldConfig::validate() const {
  if (M < 1) throw ConfigError("field: M must be >= 1");
  if (!(sigma > 0.0)) throw ConfigError("field: sigma must be > 0");
  if (!(q >= 1.0)) throw ConfigError("field: q must be >= 1");
  if (nx < 16 || (nx & (nx - 1)) != 0) throw ConfigError("field: nx must be a power of two >= 16");
}

double default_forcing(double x) { return 0.03 * std::sin(2.0 * std::numbers::pi * x); }

DiffusionSolver::DiffusionSolver(const FieldConfig& cfg, Forcing f) : cfg_(cfg) {
  cfg_.validate();
  const int nx = cfg_.nx;
  const double dx = 1.0 / nx;
  const double pi = std::numbers::pi;

  modes_.resize(nx + 1, cfg_.M);
  for (int m = 1; m <= cfg_.M; ++m) {
    const double amp = std::sqrt(2.0) * std::pow(pi * m, -cfg_.q);
    for (int j = 0; j <= nx; ++j) modes_(j, m - 1) = amp * std::sin(m * pi * j * dx);
    // sin(m pi) is not exactly 0 in floating point.
    modes_(0, m - 1) = 0.0;
    modes_(nx, m - 1) = 0.0;
  }

  primitive_.resize(nx + 1);
  primitive_[0] = 0.0;
  double prev = f(0.0);
  for (int j = 1; j <= nx; ++j) {
    const double cur = f(j * dx);
    primitive_[j] = primitive_[j - 1] + 0.5 * dx * (prev + cur);
    prev = cur;
  }
}

DiffusionSolver::DiffusionSolver(const DiffusionSolver& other)
    : cfg_(other.cfg_), modes_(other.modes_), primitive_(other.primitive_), ignored_(other.ignored_.load()) {}

SpatialFunction DiffusionSolver::log_diffusion(std::span<const double> xi) const {
  const int used = std::min<int>(cfg_.M, int(xi.size()));
  for (std::size_t m = cfg_.M; m < xi.size(); ++m) {
    if (xi[m] != 0.0) {
      ++ignored_;
      break;
    }
  }
  SpatialFunction la = SpatialFunction::Zero(cfg_.nx + 1);
  for (int m = 0; m < used; ++m) {
    if (xi[m] != 0.0) la.noalias() += xi[m] * modes_.col(m);
  }
  return cfg_.sigma * la;
}

SpatialFunction DiffusionSolver::solve(std::span<const double> xi) const {
  try {
    return solve_field(log_diffusion(xi));
  } catch (const NumericalError& e) {
    double norm = 0.0;
    for (double v : xi) norm += v * v;
    throw NumericalError(std::string(e.what()) + " (|xi| = " + std::to_string(std::sqrt(norm)) + ")");
  }
}

SpatialFunction DiffusionSolver::solve_field(const SpatialFunction& log_a) const {
  const int nx = cfg_.nx;
  const double dx = 1.0 / nx;
  if (log_a.size() != nx + 1) throw ContractError("solve_field: field length does not match the grid");
  // exp overflows past ~709.78; Eigen's vectorized exp clamps instead of
  // returning inf/0, so check the exponent itself.
  const double max_log = 700.0;
  if (!log_a.allFinite() || log_a.cwiseAbs().maxCoeff() > max_log) {
    throw NumericalError("solve: diffusion coefficient not finite/positive, max |log a| = " +
                         std::to_string(log_a.cwiseAbs().maxCoeff()));
  }
  const SpatialFunction inv_a = (-log_a).array().exp();

  auto trapz = [dx, nx](const SpatialFunction& g) {
    return dx * (g.sum() - 0.5 * (g[0] + g[nx]));
  };
  const SpatialFunction f_over_a = primitive_.cwiseProduct(inv_a);
  const double K = trapz(f_over_a) / trapz(inv_a);

  // u(x_j) = int_0^{x_j} (K - F) / a, same trapezoidal rule; u(1) = 0 by the choice of K.
  const SpatialFunction g = K * inv_a - f_over_a;
  SpatialFunction u(nx + 1);
  u[0] = 0.0;
  for (int j = 1; j <= nx; ++j) u[j] = u[j - 1] + 0.5 * dx * (g[j - 1] + g[j]);
  return u;
}

SpatialFunction log_diffusion(const FieldConfig& cfg, std::span<const double> xi) {
  return DiffusionSolver(cfg).log_diffusion(xi);
}

SpatialFunction solve(const FieldConfig& cfg, const Forcing& f, std::span<const double> xi) {
  return DiffusionSolver(cfg, f).solve(xi);
}

double h10_norm(const SpatialFunction& v) {
  const Eigen::Index n = v.size() - 1;
  if (n < 1) return 0.0;
  const double dx = 1.0 / double(n);
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = (v[j + 1] - v[j]) / dx;
    s += d * d;
  }
  return std::sqrt(s * dx);
}

}  // namespace sgcol
