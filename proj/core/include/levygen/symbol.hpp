#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levygen/measure.hpp"
#include "levygen/types.hpp"

namespace levygen {

/// Drift b, Gaussian covariance Q and Levy measure nu.
struct LevyTriplet {
  Vector b;
  Matrix Q;
  LevyMeasureSpec nu = LevyMeasureSpec::zero(1);

  static LevyTriplet make(const Vector& b, const Matrix& Q, LevyMeasureSpec nu);
  static LevyTriplet pure_jump(LevyMeasureSpec nu);
  int dim() const { return static_cast<int>(b.size()); }
  /// Symmetry, eigenvalues of Q >= -1e-12, finite int min(|y|^2,1) nu(dy).
  void validate() const;
};

/// x -> (b(x), Q(x), nu(x, .)).
struct StateTriplet {
  int d = 1;
  VectorField b;
  MatrixField Q;
  std::function<LevyMeasureSpec(const Vector&)> nu;
  bool bounded_coefficients = false;
  double bound = 0.0;   // |q(x,xi)| <= bound (1 + |xi|^2) when bounded_coefficients

  LevyTriplet at(const Vector& x) const;
  static StateTriplet constant(const LevyTriplet& t);
};

/// Evaluatable symbol q(x, xi) with q(x, 0) = 0.
class Symbol {
 public:
  enum class Family { StableLike, Relativistic, TLPLike, Lamperti, LevyConstant, SDEComposed, TripletIntegrated, Custom };
  using Fn = std::function<Complex(const Vector& x, const Vector& xi)>;

  /// |xi|^{gamma(x)}, gamma in (0,2] (2 is the Brownian limit 2x the usual generator scale).
  static Symbol stable_like(int d, ScalarField gamma, std::string gamma_desc = "gamma(x)");
  static Symbol stable_like(int d, double gamma);
  /// (|xi|^2 + m^2)^{gamma/2} - m^gamma, gamma in (0,2), m > 0.
  static Symbol relativistic(int d, ScalarField m, ScalarField gamma, std::string desc = "");
  static Symbol relativistic(int d, double m, double gamma);
  /// (|xi|^2 + m^2)^{gamma/2} cos(gamma atan(|xi|/m)) - m^gamma, gamma in (0,1), m > 0.
  static Symbol tlp_like(int d, ScalarField m, ScalarField gamma, std::string desc = "");
  static Symbol tlp_like(int d, double m, double gamma);
  /// (|xi|^2 + m)_gamma - (m)_gamma with the Pochhammer symbol, gamma in (0,1), m > 0.
  static Symbol lamperti(int d, ScalarField m, ScalarField gamma, std::string desc = "");
  static Symbol lamperti(int d, double m, double gamma);
  /// Levy-Khintchine exponent of a fixed triplet in closed form where available
  /// (atoms, untruncated isotropic power, zero measure), quadrature otherwise.
  static Symbol levy_constant(const LevyTriplet& t);
  /// psi(sigma(x)^T xi) for a state-independent driver symbol psi on R^k, sigma(x) is d x k.
  static Symbol sde_composed(int d, const Symbol& driver, MatrixField sigma, std::string sigma_desc = "sigma(x)");
  /// q(x, xi) from quadrature of the triplet at x.
  static Symbol triplet_integrated(const StateTriplet& st);
  static Symbol custom(int d, Fn q, std::string name, bool state_independent = false);

  Complex operator()(const Vector& x, const Vector& xi) const;

  int dim() const;
  Family family() const;
  std::string family_name() const;
  std::string describe() const;
  bool state_independent() const;
  /// Whether characteristics(x) is available.
  bool has_characteristics() const;
  /// Triplet (b(x), Q(x), nu(x, .)) of the symbol at x. Throws ContractError when unknown.
  LevyTriplet characteristics(const Vector& x) const;
  /// State triplet wrapper around characteristics().
  StateTriplet state_triplet() const;
  /// Exponent of the stable-like order at x (StableLike only).
  double order_at(const Vector& x) const;
  double m_at(const Vector& x) const;
  Matrix sigma_at(const Vector& x) const;
  const Symbol& driver() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> p_;
};

Complex eval_symbol(const Symbol& sym, const Vector& x, const Vector& xi);

struct ExponentResult {
  Complex value{};
  double abs_error = 0.0;
  long evaluations = 0;
};

/// -i b.xi + xi.Q xi / 2 + int (1 - e^{i y.xi} + i y.xi 1_{|y|<1}) nu(dy).
/// Throws NonConvergence when a shell sweep diverges or misses `tol`.
ExponentResult exponent_from_triplet(const LevyTriplet& t, const Vector& xi, double tol = 1e-9);

struct SupGrid {
  int directions = 64;
  int radii = 128;
  double lowest_fraction = 1e-6;  // smallest radius = r * lowest_fraction
};

/// sup_{|xi| <= r} |q(x, xi)| on a radial-angular grid with a refinement pass.
double symbol_sup(const Symbol& sym, const Vector& x, double r, const SupGrid& grid = {});
/// Same with Re q in place of |q|.
double symbol_sup_real(const Symbol& sym, const Vector& x, double r, const SupGrid& grid = {});

struct BGIndexEstimate {
  double value = 0.0;
  double slope_stderr = 0.0;
  double band = 0.0;               // half-width used by gap checks
  bool bounded = false;            // all sups equal on the fitted radii
  std::vector<double> r_grid;
  std::vector<double> per_r_sup;
};

struct BGOptions {
  double r_max = 1048576.0;   // 2^20
  int points = 21;            // geometric grid from 1 to r_max
  SupGrid grid = {};
};

BGIndexEstimate bg_index_infinity(const Symbol& sym, const Vector& x, const BGOptions& opt = {});

struct SectorGrid {
  int directions = 64;
  int radii = 64;
  double r_min = 1.0 / 1024.0;
  double r_max = 1048576.0;
  std::string describe() const;
};

struct SectorReport {
  double constant = 0.0;
  bool unbounded = false;
  std::string grid;
  Vector argmax_xi;
  std::vector<double> ratio_by_radius;  // max over directions, per radius
};

SectorReport sector_constant(const Symbol& sym, const Vector& x, const SectorGrid& grid = {});

struct DiffusionEstimate {
  double value = 0.0;                // 2 Re q(r eta)/r^2 at the largest radius
  std::vector<double> radii;
  std::vector<double> values;
  std::string trend;                 // over the three largest radii: decreasing | increasing | flat | mixed
};

DiffusionEstimate diffusion_estimate(const Symbol& sym, const Vector& x, const Vector& eta, double r_max = 1048576.0);

struct GrowthCheckReport {
  bool pass = true;
  double C_K = 0.0;
  double worst_ratio = 0.0;
  Vector worst_x, worst_xi;
  std::string message;
};

/// |q(x,xi)| <= 2 C_K (1 + |xi|^2) with C_K = sup_{x in K} sup_{|xi| <= 1} |q(x, xi)|.
GrowthCheckReport quadratic_growth_check(const Symbol& sym, const std::vector<Vector>& K, const std::vector<Vector>& xis);

struct EquivalenceProbe {
  bool convergent = false;
  double ratio = 0.0;                 // fitted growth factor of the increments
  std::vector<double> upper_limits;   // 2^k
  std::vector<double> partial;        // int_1^{2^k} sup_{|xi|<=r} Re q dr / r^{1+kappa}
};

/// Convergence of int_1^infty sup_{|xi|<=r} Re q(x, xi) dr / r^{1+kappa} from partial integrals up to 2^20.
EquivalenceProbe aux1_equivalence_probe(const Symbol& sym, const Vector& x, double kappa);

/// Growth exponent of sup_{|xi|<=r} |Im q(x,xi)| over [2^10, 2^20]; exposes the drift
/// identification: below 1 when beta_infinity < 1 and b equals the compensator.
double imaginary_growth_index(const Symbol& sym, const Vector& x);

}  // namespace levygen
