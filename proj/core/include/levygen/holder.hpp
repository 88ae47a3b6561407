#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levygen/expression.hpp"
#include "levygen/symbol.hpp"
#include "levygen/test_function.hpp"

namespace levygen {

/// Offsets y = r * theta used by the seminorm estimates.
struct ProbeSet {
  std::vector<double> radii;   // in (0, 1]
  int directions = 16;

  /// 24 geometric radii from 1e-4 to 1, 16 directions.
  static ProbeSet defaults();
  static ProbeSet geometric(double r_min, double r_max, int count, int directions = 16);
  std::string describe() const;
};

/// Ratio profile of a seminorm estimate, one entry per probe radius (max over directions).
struct SeminormProfile {
  double value = 0.0;                 // max over all offsets; a lower bound for the true sup
  std::vector<double> radii;
  std::vector<double> per_radius;
  /// Log-log slope of the ratio over the smallest radii whose numerators clear the
  /// rounding floor; negative means the ratio grows as |y| -> 0. NaN when too few remain.
  double small_radius_slope = 0.0;
};

/// max over offsets of |f(x+y) - f(x)| / |y|^alpha.
double local_holder_seminorm(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p = ProbeSet::defaults());
SeminormProfile holder_profile(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p = ProbeSet::defaults());

/// max over offsets of |f(x+y) - f(x) - g(x).y| / |y|^alpha, alpha in (1,2). Needs the gradient oracle.
double first_order_remainder_seminorm(const TestFunction& f, const Vector& x, double alpha,
                                      const ProbeSet& p = ProbeSet::defaults());
/// Same for alpha in (1,2]; order 2 is allowed here for the C^{1,1} case.
SeminormProfile remainder_profile(const TestFunction& f, const Vector& x, double alpha,
                                  const ProbeSet& p = ProbeSet::defaults());

/// Variable order alpha: R^d -> (0,2] with the gap eps and a continuity modulus.
struct VariableOrderFn {
  ScalarField alpha;
  double eps_gap = 0.05;
  double lower_bound = 0.0;                   // declared inf alpha; 0 means none declared
  std::function<double(double)> modulus;      // |alpha(x) - alpha(z)| <= modulus(|x - z|)
  bool modulus_analytic = false;              // false: sampled on a grid, heuristic
  std::string desc;

  double operator()(const Vector& x) const { return alpha(x); }

  static VariableOrderFn constant(double a, double eps = 0.05);
  /// base + amp * sin(freq * x_0), Lipschitz modulus |amp freq| t.
  static VariableOrderFn sine(double base, double amp, double freq = 1.0, double eps = 0.05);
  /// Field with a known Lipschitz constant.
  static VariableOrderFn lipschitz(ScalarField a, double lip, double lower, double eps = 0.05, std::string desc = "");
  /// Expression in x; the modulus is a Lipschitz fit over pairs of `sample` and flagged heuristic.
  static VariableOrderFn from_expression(const Expression& e, const std::vector<Vector>& sample, double eps = 0.05,
                                         std::string desc = "");
};

struct OrderCheck {
  bool ok = true;
  double inf = 0.0, sup = 0.0;
  double worst_modulus_excess = 0.0;   // max |alpha(x)-alpha(z)| - modulus(|x-z|) over pairs
  bool heuristic = false;
  std::string message;
};

/// Range (0,2], declared lower bound and modulus on every grid pair.
OrderCheck validate_order(const VariableOrderFn& a, const std::vector<Vector>& grid);

enum class HolderRegion { ZeroOrder, FirstOrder, SecondOrder };   // alpha <= 1, 1 < alpha < 2, alpha = 2
HolderRegion holder_region(double alpha);

struct StateMembership {
  Vector x;
  double alpha = 0.0;
  HolderRegion region = HolderRegion::ZeroOrder;
  double value = 0.0;          // seminorm estimate, or worst derivative mismatch for the order-2 region
  double slope = 0.0;          // small-radius slope of the ratio profile
  bool pass = false;
  std::string message;
};

struct RegionSummary {
  bool nonempty = false;
  bool pass = true;
  double sup = 0.0;
  std::string message;
};

struct MembershipReport {
  std::vector<StateMembership> states;
  RegionSummary holder;          // alpha <= 1: local Holder seminorm
  RegionSummary remainder;       // 1 < alpha < 2: differentiable with Holder remainder
  RegionSummary twice;           // alpha = 2: twice differentiable near x
  bool pass = true;
};

struct MembershipOptions {
  ProbeSet probes = ProbeSet::defaults();
  double cap = 1e6;              // seminorm estimates above this count as infinite
  double slope_tol = 0.05;       // ratio growing faster than r^{-slope_tol} near 0 counts as unbounded
};

/// Per-state regularity check of f against the variable order, aggregated per region.
MembershipReport membership_check(const TestFunction& f, const VariableOrderFn& a, const std::vector<Vector>& grid,
                                  const MembershipOptions& opt = {});

enum class DomainStatus { NotCertified, LevyConstantOrder, VariableZeroOrder, VariableFirstOrder, VariableGeneral };

/// Stable identifiers used in reports: certified-thm-app-3, certified-cor-app-11,
/// certified-cor-app-13, certified-thm-app-5, not-certified.
std::string to_string(DomainStatus s);

struct ConditionCheck {
  std::string route;       // status identifier of the route the check belongs to
  std::string name;
  bool pass = false;
  double margin = 0.0;     // positive iff pass
  std::string detail;
};

struct DomainVerdict {
  DomainStatus status = DomainStatus::NotCertified;
  std::vector<ConditionCheck> reasons;   // checks of the certified route, or of every route tried
  bool indeterminate_band = false;       // a Blumenthal-Getoor band straddled alpha(x) - eps
  bool certified() const { return status != DomainStatus::NotCertified; }
};

struct VerdictOptions {
  MembershipOptions membership = {};
  BGOptions bg = {};
  SectorGrid sector = {};
  double sector_cap = 1e6;
  double moment_cap = 1e12;
  double drift_tol = 1e-9;
  int workers = 1;
};

/// Strongest domain certificate for f among: constant-coefficient Holder spaces,
/// variable-order zero-order spaces, variable-order C^{1,alpha-1} spaces, and the
/// general per-region conditions. Never throws for numerical reasons.
DomainVerdict domain_verdict(const Symbol& sym, const StateTriplet& model, const TestFunction& f, const VariableOrderFn& a,
                             const std::vector<Vector>& grid, const VerdictOptions& opt = {});
DomainVerdict domain_verdict(const Symbol& sym, const TestFunction& f, const VariableOrderFn& a,
                             const std::vector<Vector>& grid, const VerdictOptions& opt = {});

}  // namespace levygen
