#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "levygen/montecarlo.hpp"
#include "levygen/symbol.hpp"

namespace levygen {

/// Symmetric standard stable variable with E exp(i xi S) = exp(-|xi|^alpha), alpha in (0,2],
/// by the Chambers-Mallows-Stuck transform.
double standard_stable(double alpha, Rng& rng);
/// Positive stable variable with E exp(-lambda A) = exp(-lambda^beta), beta in (0,1] (Kanter).
double positive_stable(double beta, Rng& rng);
/// Isotropic stable vector with E exp(i xi.S) = exp(-|xi|^alpha); d >= 2 by Gaussian subordination.
Vector isotropic_stable(int d, double alpha, Rng& rng);
/// Increment over time h of the Levy process with exponent (|xi|^2 + m^2)^{gamma/2} - m^gamma:
/// Brownian motion (variance 2 per unit time) at a tempered stable time drawn exactly by rejection.
Vector relativistic_increment(int d, double m, double gamma, double h, Rng& rng);

/// A jump of the path: time and displacement in state space.
struct Jump {
  double time = 0.0;
  Vector size;
};

struct SmallJumpOptions {
  enum class Mode { DropCompensated, GaussianSubstitute };
  Mode mode = Mode::DropCompensated;
  double cutoff = 0.0;              // jumps with |y| < cutoff are not simulated; 0 picks one automatically
  double variance_target = 1e-4;    // automatic cutoff: int_{|y|<cutoff} |y|^2 nu(dy) below this
  double max_rate = 1e4;            // automatic cutoff: nu(|y| >= cutoff) never above this
};

/// Exact or shell-based sampler of X_t - X_0 for a fixed triplet.
class LevySampler {
 public:
  enum class Route { Deterministic, Stable, CompoundPoisson, Shells };

  explicit LevySampler(const LevyTriplet& t, const SmallJumpOptions& opt = {});

  /// Increment over [t0, t0 + t]; jumps with explicit times are appended to `jumps` when given.
  Vector sample(double t, Rng& rng, std::vector<Jump>* jumps = nullptr, double t0 = 0.0) const;

  Route route() const { return route_; }
  std::string route_name() const;
  /// True when the increment law is exact (no small-jump handling involved).
  bool exact() const { return route_ != Route::Shells || (small_variance_ == 0.0 && neglected_rate_ == 0.0); }
  double cutoff() const { return cutoff_; }
  /// int_{|y|<cutoff} |y|^2 nu(dy): variance per unit time of the dropped or substituted jumps.
  double small_jump_variance() const { return small_variance_; }
  /// Mass beyond the largest simulated radius.
  double neglected_rate() const { return neglected_rate_; }
  double jump_rate() const { return rate_; }
  int dim() const { return d_; }

 private:
  struct Cell {
    Vector direction;
    double a = 0.0, b = 0.0, envelope = 0.0, mass = 0.0;
    double shell = kInf;   // lower edge of the dyadic shell; atoms sort first
    const Ray* ray = nullptr;
    int atom = -1;
  };
  int d_ = 1;
  Route route_ = Route::Deterministic;
  Vector drift_;              // effective velocity after compensation
  Matrix gauss_;              // square root of Q (plus the small-jump covariance when substituted)
  double stable_alpha_ = 0.0, stable_scale_ = 1.0;
  double cutoff_ = 0.0, small_variance_ = 0.0, neglected_rate_ = 0.0, rate_ = 0.0;
  struct Group {
    std::size_t first = 0, last = 0;
    double lo = 0.0, hi = 0.0;   // cumulative rate range
  };
  std::vector<Group> groups_;
  std::vector<Cell> cells_;
  std::vector<double> cumulative_;
  std::vector<Atom> atoms_;
  LevyMeasureSpec nu_ = LevyMeasureSpec::zero(1);

  Vector draw_jump(Rng& rng, const Group& g) const;
  void finish_cells();
};

/// Process families that can be simulated.
struct ProcessModel {
  enum class Kind { Levy, StableLike, RelativisticStableLike, SDE };
  Kind kind = Kind::Levy;
  int d = 1;
  LevyTriplet triplet;                          // Levy
  ScalarField gamma, m;                         // stable-like and relativistic stable-like
  MatrixField sigma;                            // SDE coefficient, d x k
  std::shared_ptr<const ProcessModel> driver;   // SDE driver, a Levy model on R^k
  double sigma_bound = 0.0, sigma_lipschitz = 0.0;
  SmallJumpOptions small_jumps;
  std::string desc;

  static ProcessModel levy(const LevyTriplet& t, const SmallJumpOptions& o = {});
  /// Exponent |xi|^alpha, alpha in (0,2]; alpha = 2 is Brownian motion with covariance 2I.
  static ProcessModel stable(int d, double alpha);
  /// Jumps at the atoms with their rates plus a straight-line velocity.
  static ProcessModel compound_poisson(std::vector<Atom> atoms, const Vector& velocity);
  /// Symbol |xi|^{gamma(x)}; inf gamma > 0 and sup gamma < 2 on `probe`.
  static ProcessModel stable_like(int d, ScalarField gamma, const std::vector<Vector>& probe, std::string desc = "");
  static ProcessModel relativistic_stable_like(int d, ScalarField m, ScalarField gamma, const std::vector<Vector>& probe,
                                               std::string desc = "");
  /// dX = sigma(X-) dL; `bound` and `lipschitz` are checked on `probe`.
  static ProcessModel sde(int d, MatrixField sigma, const ProcessModel& driver, double bound, double lipschitz,
                          const std::vector<Vector>& probe, std::string desc = "");
  /// Simulation model for a symbol family; throws ContractError naming the approximation route otherwise.
  static ProcessModel from_symbol(const Symbol& s, const std::vector<Vector>& probe);

  Symbol symbol() const;
  bool is_levy() const { return kind == Kind::Levy; }
};

struct PathSample {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<double> runsup;      // running sup of |X_s - x0| over grid points
  double exit_radius = kInf;
  double exit_time = kInf;         // first grid time with |X - x0| >= exit_radius
  std::vector<Jump> jumps;         // driver jumps with explicit times
  bool exited() const { return exit_time < kInf; }
};

struct PathOptions {
  double exit_radius = kInf;
  bool log_jumps = true;
};

/// Prepared simulator: one increment rule per model, reused across replicates.
class Simulator {
 public:
  explicit Simulator(const ProcessModel& model);

  /// X_{t0+h} - X_{t0} from state x.
  Vector step(const Vector& x, double h, Rng& rng, std::vector<Jump>* jumps = nullptr, double t0 = 0.0) const;
  /// Whether X_t can be drawn in one step exactly in time (Levy models).
  bool exact_in_time() const { return model_.is_levy(); }
  const ProcessModel& model() const { return model_; }
  const LevySampler* levy_sampler() const { return levy_.get(); }

  PathSample path(const Vector& x0, double T, double h, Rng& rng, const PathOptions& opt = {}) const;

  struct Endpoint {
    Vector x;
    double sup = 0.0;          // grid sup of |X_s - x0|
    bool stopped = false;      // left the stopping ball before T
  };
  /// X_T (or X_{T ^ tau} for the ball of radius stop_radius around stop_center) on `steps` equal steps;
  /// Levy models without stopping or sup use a single exact draw.
  Endpoint endpoint(const Vector& x0, double T, int steps, Rng& rng, bool need_sup = false, double stop_radius = kInf,
                    const Vector* stop_center = nullptr) const;

 private:
  ProcessModel model_;
  std::shared_ptr<const LevySampler> levy_;
};

/// Grid path with step h (last step shortened to land on T).
PathSample simulate_path(const ProcessModel& model, const Vector& x0, double T, double h, const SeedPolicy& seed,
                         std::uint64_t tag, const PathOptions& opt = {});

/// n i.i.d. increments over time t of a Levy model; increment i depends only on (seed, tag, i).
std::vector<Vector> sample_levy_increment(const ProcessModel& model, double t, long n, const SeedPolicy& seed,
                                          std::uint64_t tag, int workers = 1);

/// (1/t) P^x(X_t - x in A) with binomial standard error; non-Levy models step with h = t/steps.
MCEstimate empirical_hitting_rate(const ProcessModel& model, const Vector& x, const TargetSet& A, double t, long N,
                                  const SeedPolicy& seed, std::uint64_t tag, int workers = 1, int steps = 64);

}  // namespace levygen
