#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "levygen/types.hpp"

namespace levygen {

/// 20-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre20 {
  static constexpr int n = 20;
  static const std::array<double, n>& nodes();
  static const std::array<double, n>& weights();
};

/// Integral of f over [a, b] with one 20-point Gauss-Legendre panel.
template <class F>
auto gl_panel(F&& f, double a, double b) -> decltype(f(a)) {
  const auto& u = GaussLegendre20::nodes();
  const auto& w = GaussLegendre20::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  decltype(f(a)) s{};
  for (int j = 0; j < GaussLegendre20::n; ++j) s += w[j] * f(c + h * u[j]);
  return s * h;
}

/// Same, split into equal panels no wider than max_width.
template <class F>
auto gl_panels(F&& f, double a, double b, double max_width) -> decltype(f(a)) {
  long panels = 1;
  if (max_width > 0.0 && b - a > max_width) panels = static_cast<long>(std::ceil((b - a) / max_width));
  const double h = (b - a) / static_cast<double>(panels);
  decltype(f(a)) s{};
  for (long p = 0; p < panels; ++p) s += gl_panel(f, a + h * static_cast<double>(p), a + h * static_cast<double>(p + 1));
  return s;
}

/// Integral of rho(r) * exp(i*omega*r) over [a, b]. rho is interpolated at the
/// Gauss-Legendre nodes and the oscillatory factor is integrated exactly, so
/// the cost does not grow with omega*(b-a).
Complex filon(const std::function<double(double)>& rho, double a, double b, double omega);

/// Filon weights W_j(theta) with  int_{-1}^{1} p(u) e^{i theta u} du = sum_j p(u_j) W_j.
std::array<Complex, GaussLegendre20::n> filon_weights(double theta);

struct ShellOptions {
  double tol = 1e-10;          // relative stopping tolerance on the extrapolated sum
  double r_min = 1e-12;        // innermost radius for inward sweeps
  double r_max = 1099511627776.0;  // 2^40, outermost radius for outward sweeps
  double min_extent = 0.0;     // outward sweeps never stop before reaching this radius
  int min_shells = 6;
  bool extrapolate = true;     // geometric tail correction from the last shells
};

struct ShellResult {
  Complex value{};
  double abs_error = 0.0;
  long evaluations = 0;
  int shells = 0;
  bool divergent = false;
  double ratio = 0.0;          // fitted geometric ratio of the last shells
  Complex tail{};              // extrapolated remainder included in value
  std::vector<Complex> contributions;
};

/// Sum of shell integrals over [r_hi/2^{k+1}, r_hi/2^k], k = 0, 1, ...
/// `shell(a, b)` returns the integral over [a, b] and the number of
/// integrand evaluations it used.
using ShellFn = std::function<Complex(double a, double b, long& evals)>;
ShellResult inward_shells(const ShellFn& shell, double r_hi, const ShellOptions& opt);

/// Sum of shell integrals over [r_lo*2^k, r_lo*2^{k+1}] up to r_support
/// (exclusive of anything beyond it; may be infinite).
ShellResult outward_shells(const ShellFn& shell, double r_lo, double r_support, const ShellOptions& opt);

/// Limit estimate from the last m partial sums by Wynn's epsilon algorithm
/// (exact for sums of up to (m-1)/2 geometric sequences). Inward sweeps use it
/// because smooth integrands near 0 give shells that mix several power rates.
Complex wynn_epsilon(const std::vector<Complex>& sums, int m);

/// True when the last five magnitudes are nonzero and nondecreasing.
bool shells_nondecreasing(const std::vector<Complex>& c);

/// Geometric ratio of |c_k| from a log-linear least-squares fit over the last m entries.
double geometric_ratio(const std::vector<Complex>& c, int m);

double pairwise_sum(const double* v, std::size_t n);
Complex pairwise_sum(const Complex* v, std::size_t n);

}  // namespace levygen
