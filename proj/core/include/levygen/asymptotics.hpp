#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levygen/generator.hpp"
#include "levygen/holder.hpp"
#include "levygen/process.hpp"

namespace levygen {

/// Discretization of t -> 0 for one Monte Carlo statistic.
struct LimitExperiment {
  enum class Extrapolation { LastPoint, Richardson };
  std::vector<double> t_grid;   // strictly decreasing, positive
  long N = 100000;              // replicates per t, >= 1000
  Extrapolation extrapolation = Extrapolation::LastPoint;
  SeedPolicy seed;
  std::uint64_t tag = 0;        // experiment stream; t index i uses mix_tag({tag, i, ...})
  int workers = 1;
  int steps = 64;               // grid steps per t for path statistics and non-Levy models

  /// `points` geometric t values from t_max down to t_min.
  static LimitExperiment geometric(double t_max = 1e-1, double t_min = 1e-4, int points = 8, long N = 100000);
  void validate() const;
};

struct ConvergenceRow {
  double t = 0.0;
  MCEstimate estimate;
};

/// discrepancy = |limit - reference| / (3 se + 0.05 |reference| + 1e-6), pass iff <= 1.
struct ConvergenceReport {
  std::string statistic;
  std::vector<ConvergenceRow> rows;
  double limit = 0.0;
  double limit_std_error = 0.0;
  double reference = 0.0;
  double reference_error = 0.0;
  double stat_allowance = 0.0;    // 3 se
  double model_allowance = 0.0;   // 0.05 |reference| + 1e-6
  double discrepancy = 0.0;
  bool pass = false;
  std::string notes;

  double discrepancy_at(std::size_t i) const;
};

/// Extrapolated limit from the rows (t decreasing) and the pass rule against `reference`.
ConvergenceReport make_report(std::string statistic, std::vector<ConvergenceRow> rows, double reference,
                              LimitExperiment::Extrapolation ex, double reference_error = 0.0);

struct MomentOptions {
  std::optional<double> stop_radius;     // stop at the exit from the closed ball B(x, R)
  std::optional<GrowthFunction> growth;  // |f(x+y)| <= C g(|y|) certificate for unbounded f
  int steps = 64;
};

/// Bounded test functions need no stopping; others need a stopping ball or a growth certificate.
bool is_bounded(const TestFunction& f);

/// (1/t)(E^x f(X_{t ^ tau}) - f(x)).
MCEstimate small_time_generalized_moment(const ProcessModel& model, const TestFunction& f, const Vector& x, double t,
                                         long N, const SeedPolicy& seed, std::uint64_t tag, int workers = 1,
                                         const MomentOptions& opt = {});

/// Lf(x) from the characteristics at x. The form is the highest one the oracles of f allow
/// (Hessian: second order, gradient: first order, otherwise zero order with f's declared order).
GeneratorResult reference_generator(const ProcessModel& model, const TestFunction& f, const Vector& x,
                                    const GeneratorOptions& opt = {});

/// Small-time moments on the t-grid against `reference` (reference_generator when absent).
ConvergenceReport limit_study(const LimitExperiment& ex, const ProcessModel& model, const TestFunction& f,
                              const Vector& x, const MomentOptions& opt = {},
                              std::optional<double> reference = std::nullopt);

/// (1/t) P^x(X_t - x in A) on the t-grid against nu(x, A).
ConvergenceReport vague_convergence_experiment(const LimitExperiment& ex, const ProcessModel& model, const Vector& x,
                                               const TargetSet& A);

struct MaximalRow {
  double r = 0.0;
  std::vector<MCEstimate> per_t;   // (1/t) P(sup_{s<=t} |X_s - x| >= r), grid sup
  double rate = 0.0;               // max over the three smallest t (limsup proxy)
  double rate_std_error = 0.0;
  double bound = 0.0;              // sup_{|xi| <= 1/r} |q(x, xi)|
  double ratio = 0.0;
};

struct MaximalReport {
  std::vector<double> t_grid;
  std::vector<MaximalRow> rows;
  double slope = 0.0;              // log-log slope of rate against r (positive rates only)
  double bound_slope = 0.0;
  bool slope_defined = false;
  double max_ratio = 0.0;
  double ratio_cap = 50.0;
  double slope_tol = 0.15;
  bool ratio_ok = false;
  bool slope_ok = false;
  bool pass = false;
  std::string notes;
};

/// Crossing rates of the grid sup for every r from one set of paths per t.
MaximalReport maximal_inequality_experiment(const LimitExperiment& ex, const ProcessModel& model, const Vector& x,
                                            const std::vector<double>& r_grid);

struct MomentTailReport {
  double a = 0.0, R = 0.0;
  std::vector<ConvergenceRow> rows;   // (1/t) E[|X_t - x|^a 1{|X_t - x| > R}]
  double reference = 0.0;             // int_{|y|>R} |y|^a nu(x, dy)
  bool reference_divergent = false;
  double tail_term = 0.0;             // R^a nu(x, {|y| > R}) 1{R > 0}
  double liminf = 0.0;                // min over the three smallest t
  double liminf_std_error = 0.0;
  double margin = 0.0;                // tail_term + liminf + 3 se - reference; pass iff >= 0
  bool pass = false;
  std::string notes;
};

MomentTailReport moment_tail_bound_experiment(const LimitExperiment& ex, const ProcessModel& model, const Vector& x,
                                              double a, double R);

struct SweepRow {
  double t = 0.0;
  double sup_discrepancy = 0.0;   // max over states of |MC(x) - Lf(x)|
  double noise_floor = 0.0;       // 3 max se
  Vector worst_state;
};

struct SweepReport {
  DomainVerdict verdict;
  std::vector<Vector> states;
  std::vector<double> reference;   // Lf on the grid
  std::vector<SweepRow> rows;
  double scale = 0.0;              // max |Lf| over the grid
  bool pass = false;
  std::string notes;
};

/// sup_x |(1/t)(E^x f(X_t) - f(x)) - Lf(x)| on a state grid. Requires a certified domain verdict for (model, f, a).
/// Passes when each of the last three points either decreases or sits within its noise floor and the
/// last point is within the noise floor plus 5% of max |Lf|.
SweepReport uniform_limit_sweep(const LimitExperiment& ex, const ProcessModel& model, const TestFunction& f,
                                const VariableOrderFn& a, const std::vector<Vector>& grid,
                                const VerdictOptions& vopt = {});

}  // namespace levygen
