#pragma once

// Orthonormal (probabilists') Hermite polynomials and Gauss-Hermite rules for
// the standard Gaussian measure N(0,1).

#include <span>
#include <vector>

namespace sgcol {

/// H_nu(xi) of the L2(N(0,1))-orthonormal Hermite family, via
/// H_{n+1} = (xi H_n - sqrt(n) H_{n-1}) / sqrt(n+1).
double hermite_eval(int nu, double xi);

/// Fills out[j] = H_j(xi) for j = 0..out.size()-1.
void hermite_values(double xi, std::span<double> out);

/// n-point Gauss-Hermite rule for N(0,1); exact for polynomials of degree 2n-1.
struct GaussHermiteRule {
  int n = 0;
  std::vector<double> nodes;    // increasing, symmetric about 0
  std::vector<double> weights;  // positive, sum to 1
  std::vector<double> bary;     // barycentric interpolation weights

  /// Index of the node 0 for odd n, -1 otherwise.
  int center() const noexcept { return n % 2 == 1 ? (n - 1) / 2 : -1; }
};

/// Cached rule with n points (n >= 1). Thread-safe; each rule is built once
/// and the returned reference stays valid for the program lifetime.
const GaussHermiteRule& gauss_hermite(int n);

/// Uncached construction, exposed for tests.
GaussHermiteRule build_gauss_hermite(int n);

/// Values of the Lagrange basis L_k of `rule` at xi (barycentric form).
void lagrange_basis(const GaussHermiteRule& rule, double xi, std::span<double> out);

/// (U_level f)(xi) from the values of f at the (level+1)-point nodes.
double interp_univariate(int level, std::span<const double> values, double xi);

/// Hermite coefficients a_j = sum_k w_k f(x_k) H_j(x_k), j = 0..level, of the
/// degree-<=level interpolant with the given nodal values. Exact: the
/// interpolant times H_j has degree <= 2*level.
std::vector<double> interpolant_to_hermite(int level, std::span<const double> values);

/// ||U_i H_nu||_{L2_mu}.
double norm_U_H(int i, int nu);

/// Hermite coefficients of Delta_i H_nu = (U_i - U_{i-1}) H_nu, indices 0..max(i,nu).
/// The interpolants are sampled on a (max(i,nu)+2)-point projection rule.
std::vector<double> delta_hermite_coefficients(int i, int nu);

/// ||Delta_i H_nu||_{L2_mu} by Parseval on delta_hermite_coefficients.
double norm_Delta_H(int i, int nu);

/// Constant of Cramer's inequality for Hermite functions.
inline constexpr double kCramerConstant = 1.086435;

}  // namespace sgcol
