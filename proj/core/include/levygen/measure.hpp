#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "levygen/quadrature.hpp"
#include "levygen/types.hpp"

namespace levygen {

struct Atom {
  Vector location;
  double weight;
};

/// How a density decays for large |y|; used to pick outward sweep limits.
enum class TailClass { Exponential, Power, Compact };

struct DensitySpec {
  ScalarField n;                 // Lebesgue density on R^d \ {0}, n >= 0
  double singularity = 0.0;      // n(y) ~ |y|^{-d-s} near 0 with s < 2
  TailClass tail = TailClass::Exponential;
  double tail_param = 1.0;       // exponential rate, power exponent p (n ~ |y|^{-d-p}), or support radius
  bool symmetric = false;        // n(-y) == n(y) declared by the caller
  std::string description;
};

/// One ray of the polar decomposition  nu(dy) = sum_i w_i rho_i(r) dr delta_{theta_i}.
struct Ray {
  Vector direction;
  double weight = 0.0;
  std::function<double(double)> rho;
  double support = kInf;   // rho vanishes for r > support
  int antipode = -1;       // ray carrying the mirrored mass, -1 if none
};

struct RayDecomposition {
  std::vector<Ray> rays;
  std::vector<Atom> atoms;
  bool symmetric = false;     // rays pair up with identical radial densities
  bool degenerate = false;    // some mass was mapped onto the origin by a pushforward
  double max_support() const;
};

/// Structured description of a Levy measure.
class LevyMeasureSpec {
 public:
  enum class Variant { Atoms, IsotropicPower, Density, Pushforward };

  static LevyMeasureSpec zero(int d);
  static LevyMeasureSpec atoms(int d, std::vector<Atom> atoms);
  /// c |y|^{-d-alpha} dy restricted to |y| <= r_trunc.
  static LevyMeasureSpec isotropic_power(int d, double intensity, double alpha, double r_trunc = kInf);
  static LevyMeasureSpec density(int d, DensitySpec spec);
  /// Image of `base` under y -> M y; M is (d_out x d_in).
  static LevyMeasureSpec pushforward(const LevyMeasureSpec& base, const Matrix& M);

  int dim() const { return d_; }
  Variant variant() const { return variant_; }
  bool is_zero() const;
  /// Structural symmetry: isotropic power, mirrored atom sets, declared-symmetric densities.
  bool is_symmetric() const { return rays_->symmetric && atoms_symmetric_; }
  /// True when the measure has finite total mass that is known exactly (atoms only).
  bool is_finite_atomic() const;
  bool degenerate() const { return rays_->degenerate; }
  double support_radius() const;

  const RayDecomposition& rays() const { return *rays_; }
  const std::vector<Atom>& atom_list() const { return rays_->atoms; }

  // Variant payloads (valid only for the matching variant).
  double power_intensity() const { return c_; }
  double power_alpha() const { return alpha_; }
  double power_truncation() const { return r_trunc_; }
  const DensitySpec& density_spec() const { return *density_; }
  const LevyMeasureSpec& base() const { return *base_; }
  const Matrix& map() const { return M_; }

  /// Singularity exponent at 0: alpha for power, declared s for densities,
  /// inherited for pushforwards, 0 for atoms.
  double singularity() const;
  std::string describe() const;

 private:
  LevyMeasureSpec() = default;
  int d_ = 1;
  Variant variant_ = Variant::Atoms;
  double c_ = 0.0, alpha_ = 0.0, r_trunc_ = kInf;
  std::shared_ptr<const DensitySpec> density_;
  std::shared_ptr<const LevyMeasureSpec> base_;
  Matrix M_;
  bool atoms_symmetric_ = true;
  std::shared_ptr<const RayDecomposition> rays_;
};

/// Spherical region used for integration and for atom membership.
struct Region {
  enum class Kind { Inside, Outside } kind = Kind::Inside;
  double radius = 1.0;
  bool closed = false;

  static Region ball_open(double R) { return {Kind::Inside, R, false}; }
  static Region ball_closed(double R) { return {Kind::Inside, R, true}; }
  static Region outside_open(double R) { return {Kind::Outside, R, false}; }
  static Region outside_closed(double R) { return {Kind::Outside, R, true}; }
  bool contains(double r) const;
};

struct IntegrationOptions {
  double tol = 1e-10;
  double panel_width = 0.0;      // max Gauss-Legendre panel width along a ray, 0 = one panel per shell
  double r_min = 1e-12;
  double r_max = 1099511627776.0;
  double min_extent = 0.0;
  bool extrapolate = true;
  bool pair_antipodes = false;   // hand mirrored rays to the segment function together
};

struct IntegralReport {
  Complex value{};
  double abs_error = 0.0;
  long evaluations = 0;
  bool divergent = false;
  int shells = 0;
};

/// Integral of rho along one ray piece [a, b]. `anti` is the mirrored ray when
/// antipodes are paired, in which case the function accounts for both.
using SegmentFn = std::function<Complex(const Ray& ray, const Ray* anti, double a, double b, long& evals)>;

/// Sum over rays of the segment function on shells covering [r_lo, r_hi].
/// r_lo == 0 runs inward shells with geometric extrapolation; otherwise outward.
IntegralReport integrate_rays(const RayDecomposition& rd, const SegmentFn& seg, double r_lo, double r_hi,
                              const IntegrationOptions& opt);

/// Integral of phi(y) nu(dy) over a region (rays and atoms).
IntegralReport integrate(const LevyMeasureSpec& nu, const std::function<Complex(const Vector&)>& phi,
                         const Region& region, const IntegrationOptions& opt = {});

struct MomentReport {
  double value = 0.0;
  bool infinite = false;
  double abs_error = 0.0;
  long nodes_used = 0;
};

/// int_region |y|^kappa nu(dy); region is |y| <= 1 (closed) or |y| > R.
MomentReport fractional_moment(const LevyMeasureSpec& nu, double kappa, const Region& region,
                               double tol = 1e-10);

/// nu({|y| > R}).
double tail_mass(const LevyMeasureSpec& nu, double R);

/// int_{|y|<1} y nu(dy). Exactly zero for structurally symmetric measures.
Vector compensator_drift(const LevyMeasureSpec& nu);

/// Normalising constant of the isotropic alpha-stable Levy measure in R^d.
double c_alpha(double alpha, int d);

/// int min(|y|^2, 1) nu(dy); throws DomainError when divergent.
double levy_integrability(const LevyMeasureSpec& nu);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  bool lhs_divergent = false;
  bool rhs_divergent = false;
};

/// |y|^alpha against c_alpha(alpha,1) int (1 - cos(y xi)) |xi|^{-1-alpha} dxi.
IdentityCheck kernel_identity_check(double y, double alpha);

/// int_{|y|<=1} |y|^kappa nu(dy) against
/// c_alpha(kappa,1) int (int (1 - cos(y xi)) nu(dy)) |xi|^{-1-kappa} dxi, d = 1.
IdentityCheck aux1_moment_identity(const LevyMeasureSpec& nu, double kappa);

/// int (1 - cos(y xi)) nu(dy) for d = 1 (exact for atoms, oscillatory quadrature otherwise).
double one_minus_cos_transform(const LevyMeasureSpec& nu, double xi);

/// Submultiplicative growth function (1+|y|)^p * exp(beta*|y|^kappa).
struct GrowthFunction {
  double p = 0.0;
  double beta = 0.0;
  double kappa = 1.0;
  double operator()(double r) const;
  std::string describe() const;
  void validate() const;
};

struct SubmultiplicativeReport {
  double M = 0.0;
  bool infinite = false;
  std::vector<double> R_grid;
  std::vector<double> M_R;
  bool tight = false;
  std::string verdict;
};

/// M = sup over states of int_{|y|>=1} g dnu and the tail curve M_R on R in R_grid.
SubmultiplicativeReport submultiplicative_bounds(const GrowthFunction& g, const std::vector<LevyMeasureSpec>& family,
                                                 std::vector<double> R_grid = {});

/// Set bounded away from the origin.
struct TargetSet {
  enum class Kind { Box, Annulus } kind = Kind::Box;
  Vector lo, hi;               // box corners
  double r_lo = 0.0, r_hi = 0.0;
  bool open = false;           // for reporting only; boundaries must be null sets
  static TargetSet box(const Vector& lo, const Vector& hi, bool open = false);
  static TargetSet annulus(int d, double r_lo, double r_hi, bool open = false);
  int dim() const;
  bool contains(const Vector& y) const;
  bool on_boundary(const Vector& y, double tol = 1e-12) const;
  double distance_from_origin() const;
  std::string describe() const;
};

/// nu(A) for A bounded away from 0. Throws ContractError when an atom sits on the boundary.
double measure_of_set(const LevyMeasureSpec& nu, const TargetSet& A);

}  // namespace levygen
