#pragma once

// 1D lognormal diffusion testbed on D = [0,1]:
//   -(a u')' = f,  u(0) = u(1) = 0,
//   log a(x, xi) = sigma * sum_{m<=M} sqrt(2) (pi m)^{-q} sin(m pi x) xi_m,
// solved through its exact integral representation with trapezoidal quadrature.

#include <Eigen/Core>

#include <atomic>
#include <functional>
#include <span>

namespace sgcol {

/// Nodal values on x_j = j / nx, j = 0..nx.
using SpatialFunction = Eigen::VectorXd;

struct FieldConfig {
  double q = 2.0;
  double sigma = 0.1;
  int M = 1;
  int nx = 1024;

  /// Throws ConfigError on M < 1, sigma <= 0, q < 1 or nx not a power of two >= 16.
  void validate() const;
};

using Forcing = std::function<double(double)>;

/// f(x) = 0.03 sin(2 pi x).
double default_forcing(double x);

/// Field evaluation and solver with the sine table and forcing primitive
/// precomputed. Immutable after construction apart from the warning counter.
class DiffusionSolver {
 public:
  explicit DiffusionSolver(const FieldConfig& cfg, Forcing f = default_forcing);
  DiffusionSolver(const DiffusionSolver& other);

  const FieldConfig& config() const noexcept { return cfg_; }

  SpatialFunction log_diffusion(std::span<const double> xi) const;
  /// Throws NumericalError when exp(log a) is not finite and positive.
  SpatialFunction solve(std::span<const double> xi) const;
  /// Solution for a given nodal log-diffusion field.
  SpatialFunction solve_field(const SpatialFunction& log_a) const;

  /// Number of calls that received nonzero coordinates beyond M.
  long ignored_coordinate_warnings() const noexcept { return ignored_.load(); }

 private:
  FieldConfig cfg_;
  Eigen::MatrixXd modes_;    // (nx+1) x M: sqrt(2) (pi m)^{-q} sin(m pi x_j)
  SpatialFunction primitive_;  // F(x_j) = int_0^{x_j} f, trapezoidal
  mutable std::atomic<long> ignored_{0};
};

SpatialFunction log_diffusion(const FieldConfig& cfg, std::span<const double> xi);
SpatialFunction solve(const FieldConfig& cfg, const Forcing& f, std::span<const double> xi);

/// sqrt(sum_j ((v_{j+1} - v_j)/dx)^2 dx) on the uniform grid of v.
double h10_norm(const SpatialFunction& v);

}  // namespace sgcol
