#include "levygen/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "levygen/parallel.hpp"

namespace levygen {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

constexpr double kMaxJumpRadius = 1099511627776.0;   // 2^40

Vector normal_vector(int d, Rng& rng) {
  Vector z(d);
  for (int i = 0; i < d; ++i) z[i] = rng.normal();
  return z;
}

// Symmetric square root of a positive semidefinite matrix (negative eigenvalues clipped).
Matrix psd_sqrt(const Matrix& Q) {
  const int d = static_cast<int>(Q.rows());
  if (d == 0 || Q.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

bool is_zero(const Matrix& M) { return M.size() == 0 || M.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

double standard_stable(double alpha, Rng& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable index must lie in (0,2], got " + fmt(alpha));
  if (alpha == 2.0) return std::sqrt(2.0) * rng.normal();
  const double v = kPi * (rng.uniform() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = rng.exponential();
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double positive_stable(double beta, Rng& rng) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("positive stable index must lie in (0,1], got " + fmt(beta));
  if (beta == 1.0) return 1.0;
  const double u = kPi * rng.uniform();
  const double w = rng.exponential();
  return std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta) * std::pow(std::sin((1.0 - beta) * u) / w, (1.0 - beta) / beta);
}

Vector isotropic_stable(int d, double alpha, Rng& rng) {
  if (d < 1 || d > kMaxDim) throw DomainError("dimension out of range");
  if (d == 1) {
    Vector v(1);
    v[0] = standard_stable(alpha, rng);
    return v;
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable index must lie in (0,2], got " + fmt(alpha));
  const double a = alpha == 2.0 ? 1.0 : positive_stable(0.5 * alpha, rng);
  return std::sqrt(2.0 * a) * normal_vector(d, rng);
}

Vector relativistic_increment(int d, double m, double gamma, double h, Rng& rng) {
  if (!(gamma > 0.0 && gamma <= 2.0)) throw DomainError("relativistic order must lie in (0,2], got " + fmt(gamma));
  if (!(m > 0.0)) throw DomainError("relativistic mass must be positive");
  if (!(h >= 0.0)) throw DomainError("time step must be >= 0");
  if (h == 0.0) return zeros(d);
  if (gamma == 2.0) return std::sqrt(2.0 * h) * normal_vector(d, rng);
  const double beta = 0.5 * gamma;
  // split h so each piece is accepted with probability >= e^{-1}
  const int pieces = std::max(1, static_cast<int>(std::ceil(h * std::pow(m, gamma))));
  const double hk = h / pieces;
  const double scale = std::pow(hk, 1.0 / beta);
  double time = 0.0;
  for (int k = 0; k < pieces; ++k) {
    for (;;) {
      double a = scale * positive_stable(beta, rng);
      if (rng.uniform() <= std::exp(-m * m * a)) {
        time += a;
        break;
      }
    }
  }
  return std::sqrt(2.0 * time) * normal_vector(d, rng);
}

LevySampler::LevySampler(const LevyTriplet& t, const SmallJumpOptions& opt) : d_(t.dim()), nu_(t.nu) {
  t.validate();
  drift_ = t.b;
  Matrix Q = t.Q.size() ? t.Q : Matrix::Zero(d_, d_);
  if (nu_.is_zero()) {
    route_ = Route::Deterministic;
    gauss_ = psd_sqrt(Q);
    return;
  }
  if (nu_.variant() == LevyMeasureSpec::Variant::IsotropicPower && !std::isfinite(nu_.power_truncation())) {
    route_ = Route::Stable;
    stable_alpha_ = nu_.power_alpha();
    stable_scale_ = std::pow(nu_.power_intensity() / c_alpha(stable_alpha_, d_), 1.0 / stable_alpha_);
    gauss_ = psd_sqrt(Q);
    return;
  }
  const auto& rd = nu_.rays();
  atoms_ = rd.atoms;
  if (rd.rays.empty()) {
    route_ = Route::CompoundPoisson;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      Cell c;
      c.atom = static_cast<int>(i);
      c.mass = atoms_[i].weight;
      cells_.push_back(c);
      if (atoms_[i].location.norm() < 1.0) drift_ -= atoms_[i].weight * atoms_[i].location;
    }
    gauss_ = psd_sqrt(Q);
    finish_cells();
    return;
  }

  route_ = Route::Shells;
  if (opt.cutoff > 0.0) {
    cutoff_ = std::min(opt.cutoff, 0.5);
  } else {
    cutoff_ = 0.5;
    for (int k = 1; k <= 60; ++k) {
      double eps = std::ldexp(1.0, -k);
      if (tail_mass(nu_, eps) > opt.max_rate) break;
      cutoff_ = eps;
      auto v = integrate(nu_, [](const Vector& y) { return Complex(y.squaredNorm(), 0.0); }, Region::ball_open(eps));
      if (!v.divergent && v.value.real() <= opt.variance_target) break;
    }
  }
  {
    auto v = integrate(nu_, [](const Vector& y) { return Complex(y.squaredNorm(), 0.0); }, Region::ball_open(cutoff_));
    small_variance_ = v.divergent ? kInf : v.value.real();
  }
  if (opt.mode == SmallJumpOptions::Mode::GaussianSubstitute && small_variance_ > 0.0) {
    Matrix S = Matrix::Zero(d_, d_);
    for (int i = 0; i < d_; ++i)
      for (int j = i; j < d_; ++j) {
        auto v = integrate(nu_, [i, j](const Vector& y) { return Complex(y[i] * y[j], 0.0); }, Region::ball_open(cutoff_));
        S(i, j) = S(j, i) = v.value.real();
      }
    Q += S;
  }
  gauss_ = psd_sqrt(Q);

  // ray cells on dyadic shells from the cutoff outward, split at |y| = 1 and into 8 sub-cells each
  Vector comp = zeros(d_);
  for (const auto& ray : rd.rays) {
    if (!(ray.weight > 0.0)) continue;
    const double r_max = std::min(ray.support, kMaxJumpRadius);
    std::vector<double> bounds{cutoff_};
    while (bounds.back() < r_max) {
      double next = std::min(2.0 * bounds.back(), r_max);
      if (bounds.back() < 1.0 && next > 1.0) next = 1.0;
      bounds.push_back(next);
    }
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      const double lo = bounds[s], hi = bounds[s + 1];
      const double q = std::pow(hi / lo, 1.0 / 8.0);
      double a = lo;
      for (int k = 0; k < 8; ++k) {
        double b = k == 7 ? hi : a * q;
        double mass = ray.weight * gl_panel(ray.rho, a, b);
        if (mass > 0.0) {
          Cell c;
          c.direction = ray.direction;
          c.a = a;
          c.b = b;
          c.ray = &ray;
          c.shell = lo;
          double peak = 0.0;
          for (int j = 0; j <= 4; ++j) peak = std::max(peak, ray.rho(a + (b - a) * j / 4.0));
          c.envelope = 1.3 * peak;
          c.mass = mass;
          cells_.push_back(c);
          if (hi <= 1.0) comp += ray.weight * gl_panel([&](double r) { return r * ray.rho(r); }, a, b) * ray.direction;
        }
        a = b;
      }
    }
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Cell c;
    c.atom = static_cast<int>(i);
    c.mass = atoms_[i].weight;
    cells_.push_back(c);
    if (atoms_[i].location.norm() < 1.0) comp += atoms_[i].weight * atoms_[i].location;
  }
  if (nu_.is_symmetric()) comp = zeros(d_);
  drift_ -= comp;
  neglected_rate_ = rd.max_support() > kMaxJumpRadius ? tail_mass(nu_, kMaxJumpRadius) : 0.0;
  finish_cells();
}

void LevySampler::finish_cells() {
  // One Poisson draw per dyadic shell, largest shell first: samplers that differ only in the cutoff
  // then share all common shells under a common stream.
  std::stable_sort(cells_.begin(), cells_.end(), [](const Cell& x, const Cell& y) { return x.shell > y.shell; });
  cumulative_.clear();
  groups_.clear();
  rate_ = 0.0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (groups_.empty() || cells_[i].shell != cells_[groups_.back().first].shell) groups_.push_back({i, i, rate_, rate_});
    rate_ += cells_[i].mass;
    cumulative_.push_back(rate_);
    groups_.back().last = i + 1;
    groups_.back().hi = rate_;
  }
}

std::string LevySampler::route_name() const {
  switch (route_) {
    case Route::Deterministic: return "deterministic+gaussian";
    case Route::Stable: return "stable";
    case Route::CompoundPoisson: return "compound-poisson";
    case Route::Shells: return "shell-jumps";
  }
  return "";
}

Vector LevySampler::draw_jump(Rng& rng, const Group& g) const {
  const double u = g.lo + rng.uniform() * (g.hi - g.lo);
  auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(g.first);
  auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(g.last);
  auto it = std::min(std::upper_bound(first, last, u), last - 1);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
  const Cell& c = cells_[k];
  if (c.atom >= 0) return atoms_[static_cast<std::size_t>(c.atom)].location;
  double r = 0.5 * (c.a + c.b);
  for (int tries = 0; tries < 1000; ++tries) {
    double cand = c.a + (c.b - c.a) * rng.uniform();
    if (rng.uniform() * c.envelope <= c.ray->rho(cand)) {
      r = cand;
      break;
    }
  }
  return r * c.direction;
}

Vector LevySampler::sample(double t, Rng& rng, std::vector<Jump>* jumps, double t0) const {
  if (!(t >= 0.0)) throw DomainError("time increment must be >= 0");
  Vector x = t * drift_;
  if (t == 0.0) return x;
  if (!is_zero(gauss_)) x += std::sqrt(t) * (gauss_ * normal_vector(d_, rng));
  switch (route_) {
    case Route::Deterministic: break;
    case Route::Stable: x += std::pow(t, 1.0 / stable_alpha_) * stable_scale_ * isotropic_stable(d_, stable_alpha_, rng); break;
    case Route::CompoundPoisson:
    case Route::Shells: {
      const std::size_t before = jumps ? jumps->size() : 0;
      for (const auto& g : groups_) {
        const double r = g.hi - g.lo;
        if (!(r > 0.0)) continue;
        const long n = rng.poisson(r * t);
        for (long i = 0; i < n; ++i) {
          double when = t0 + t * rng.uniform();
          Vector y = draw_jump(rng, g);
          x += y;
          if (jumps) jumps->push_back({when, y});
        }
      }
      if (jumps)
        std::sort(jumps->begin() + static_cast<std::ptrdiff_t>(before), jumps->end(),
                  [](const Jump& a, const Jump& b) { return a.time < b.time; });
      break;
    }
  }
  return x;
}

ProcessModel ProcessModel::levy(const LevyTriplet& t, const SmallJumpOptions& o) {
  t.validate();
  ProcessModel p;
  p.kind = Kind::Levy;
  p.d = t.dim();
  p.triplet = t;
  p.small_jumps = o;
  p.desc = "levy(" + t.nu.describe() + ")";
  return p;
}

ProcessModel ProcessModel::stable(int d, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable index must lie in (0,2], got " + fmt(alpha));
  if (alpha == 2.0) {
    auto p = levy(LevyTriplet::make(zeros(d), 2.0 * Matrix::Identity(d, d), LevyMeasureSpec::zero(d)));
    p.desc = "stable(2)";
    return p;
  }
  auto p = levy(LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(d, c_alpha(alpha, d), alpha)));
  p.desc = "stable(" + fmt(alpha) + ")";
  return p;
}

ProcessModel ProcessModel::compound_poisson(std::vector<Atom> atoms, const Vector& velocity) {
  if (atoms.empty()) throw DomainError("compound Poisson model needs at least one atom");
  const int d = static_cast<int>(atoms.front().location.size());
  auto nu = LevyMeasureSpec::atoms(d, std::move(atoms));
  Vector b = velocity;
  for (const auto& a : nu.atom_list())
    if (a.location.norm() < 1.0) b += a.weight * a.location;
  auto p = levy(LevyTriplet::pure_jump(nu));
  p.triplet.b = b;
  p.desc = "compound-poisson(" + nu.describe() + ")";
  return p;
}

namespace {

void check_order_field(const ScalarField& gamma, const std::vector<Vector>& probe, bool allow_two, const char* what) {
  if (probe.empty()) throw ContractError(std::string(what) + " needs a nonempty probe grid");
  double lo = kInf, hi = -kInf;
  for (const auto& x : probe) {
    double g = gamma(x);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (!(lo > 0.0) || !(allow_two ? hi <= 2.0 : hi < 2.0))
    throw ContractError(std::string(what) + " order must satisfy inf > 0 and sup " + (allow_two ? "<= 2" : "< 2") +
                        " on the probe grid; got [" + fmt(lo) + ", " + fmt(hi) + "]");
}

}  // namespace

ProcessModel ProcessModel::stable_like(int d, ScalarField gamma, const std::vector<Vector>& probe, std::string desc) {
  check_order_field(gamma, probe, false, "stable-like");
  ProcessModel p;
  p.kind = Kind::StableLike;
  p.d = d;
  p.gamma = std::move(gamma);
  p.desc = "stable-like(" + (desc.empty() ? std::string("gamma(x)") : desc) + ")";
  return p;
}

ProcessModel ProcessModel::relativistic_stable_like(int d, ScalarField m, ScalarField gamma, const std::vector<Vector>& probe,
                                                    std::string desc) {
  check_order_field(gamma, probe, false, "relativistic stable-like");
  for (const auto& x : probe)
    if (!(m(x) > 0.0)) throw ContractError("relativistic mass must be positive on the probe grid");
  ProcessModel p;
  p.kind = Kind::RelativisticStableLike;
  p.d = d;
  p.m = std::move(m);
  p.gamma = std::move(gamma);
  p.desc = "relativistic-stable-like(" + (desc.empty() ? std::string("m(x), gamma(x)") : desc) + ")";
  return p;
}

ProcessModel ProcessModel::sde(int d, MatrixField sigma, const ProcessModel& driver, double bound, double lipschitz,
                               const std::vector<Vector>& probe, std::string desc) {
  if (!driver.is_levy()) throw ContractError("SDE driver must be a Levy model");
  if (probe.empty()) throw ContractError("SDE model needs a nonempty probe grid");
  std::vector<Matrix> s;
  for (const auto& x : probe) {
    Matrix m = sigma(x);
    if (m.rows() != d || m.cols() != driver.d)
      throw ContractError("sigma(x) must be " + std::to_string(d) + " x " + std::to_string(driver.d));
    if (m.norm() > bound * (1.0 + 1e-12))
      throw ContractError("|sigma(x)| = " + fmt(m.norm()) + " exceeds the declared bound " + fmt(bound));
    s.push_back(m);
  }
  for (std::size_t i = 0; i < probe.size(); ++i)
    for (std::size_t j = i + 1; j < probe.size(); ++j) {
      double dist = (probe[i] - probe[j]).norm();
      if ((s[i] - s[j]).norm() > lipschitz * dist * (1.0 + 1e-12) + 1e-14)
        throw ContractError("sigma violates the declared Lipschitz constant " + fmt(lipschitz));
    }
  ProcessModel p;
  p.kind = Kind::SDE;
  p.d = d;
  p.sigma = std::move(sigma);
  p.driver = std::make_shared<const ProcessModel>(driver);
  p.sigma_bound = bound;
  p.sigma_lipschitz = lipschitz;
  p.desc = "sde(" + (desc.empty() ? std::string("sigma(x)") : desc) + ", " + driver.desc + ")";
  return p;
}

ProcessModel ProcessModel::from_symbol(const Symbol& s, const std::vector<Vector>& probe) {
  if (probe.empty()) throw ContractError("model construction needs a nonempty probe grid");
  const int d = s.dim();
  using F = Symbol::Family;
  switch (s.family()) {
    case F::StableLike:
      if (s.state_independent()) {
        auto p = levy(s.characteristics(probe.front()));
        p.desc = s.describe();
        return p;
      }
      return stable_like(d, [s](const Vector& x) { return s.order_at(x); }, probe, s.describe());
    case F::Relativistic:
      return relativistic_stable_like(
          d, [s](const Vector& x) { return s.m_at(x); }, [s](const Vector& x) { return s.order_at(x); }, probe, s.describe());
    case F::SDEComposed: {
      auto drv = from_symbol(s.driver(), {zeros(s.driver().dim())});
      double bound = 0.0, lip = 0.0;
      for (std::size_t i = 0; i < probe.size(); ++i) {
        Matrix a = s.sigma_at(probe[i]);
        bound = std::max(bound, a.norm());
        for (std::size_t j = i + 1; j < probe.size(); ++j) {
          double dist = (probe[i] - probe[j]).norm();
          if (dist > 0.0) lip = std::max(lip, (a - s.sigma_at(probe[j])).norm() / dist);
        }
      }
      return sde(d, [s](const Vector& x) { return s.sigma_at(x); }, drv, bound, lip, probe, s.describe());
    }
    default:
      if (s.state_independent() && s.has_characteristics()) {
        auto p = levy(s.characteristics(probe.front()));
        p.desc = s.describe();
        return p;
      }
      throw ContractError(s.family_name() +
                          " symbol has no exact sampler; simulate a Levy model built from its characteristics "
                          "(shell-jump approximation) or a frozen-coefficient scheme");
  }
}

Symbol ProcessModel::symbol() const {
  switch (kind) {
    case Kind::Levy: return Symbol::levy_constant(triplet);
    case Kind::StableLike: return Symbol::stable_like(d, gamma, desc);
    case Kind::RelativisticStableLike: return Symbol::relativistic(d, m, gamma, desc);
    case Kind::SDE: return Symbol::sde_composed(d, driver->symbol(), sigma, desc);
  }
  throw ContractError("unknown process model");
}

Simulator::Simulator(const ProcessModel& model) : model_(model) {
  if (model_.kind == ProcessModel::Kind::Levy)
    levy_ = std::make_shared<const LevySampler>(model_.triplet, model_.small_jumps);
  else if (model_.kind == ProcessModel::Kind::SDE)
    levy_ = std::make_shared<const LevySampler>(model_.driver->triplet, model_.driver->small_jumps);
}

Vector Simulator::step(const Vector& x, double h, Rng& rng, std::vector<Jump>* jumps, double t0) const {
  switch (model_.kind) {
    case ProcessModel::Kind::Levy: return levy_->sample(h, rng, jumps, t0);
    case ProcessModel::Kind::StableLike: {
      double g = model_.gamma(x);
      return std::pow(h, 1.0 / g) * isotropic_stable(model_.d, g, rng);
    }
    case ProcessModel::Kind::RelativisticStableLike:
      return relativistic_increment(model_.d, model_.m(x), model_.gamma(x), h, rng);
    case ProcessModel::Kind::SDE: {
      Matrix s = model_.sigma(x);
      std::size_t before = jumps ? jumps->size() : 0;
      Vector dl = levy_->sample(h, rng, jumps, t0);
      if (jumps)
        for (std::size_t i = before; i < jumps->size(); ++i) (*jumps)[i].size = s * (*jumps)[i].size;
      return s * dl;
    }
  }
  throw ContractError("unknown process model");
}

PathSample Simulator::path(const Vector& x0, double T, double h, Rng& rng, const PathOptions& opt) const {
  if (x0.size() != model_.d) throw DomainError("start point dimension differs from the model");
  if (!(T > 0.0) || !(h > 0.0) || h > T * (1.0 + 1e-12))
    throw ContractError("path needs 0 < h <= T; got h = " + fmt(h) + ", T = " + fmt(T));
  const long n = std::max(1L, static_cast<long>(std::ceil(T / h - 1e-9)));
  PathSample p;
  p.exit_radius = opt.exit_radius;
  p.t.reserve(n + 1);
  p.x.reserve(n + 1);
  p.runsup.reserve(n + 1);
  p.t.push_back(0.0);
  p.x.push_back(x0);
  p.runsup.push_back(0.0);
  if (opt.exit_radius <= 0.0) p.exit_time = 0.0;
  Vector x = x0;
  double sup = 0.0;
  for (long k = 0; k < n; ++k) {
    const double t0 = k * h;
    const double t1 = k + 1 == n ? T : (k + 1) * h;
    x += step(x, t1 - t0, rng, opt.log_jumps ? &p.jumps : nullptr, t0);
    sup = std::max(sup, (x - x0).norm());
    p.t.push_back(t1);
    p.x.push_back(x);
    p.runsup.push_back(sup);
    if (!p.exited() && sup >= opt.exit_radius) p.exit_time = t1;
  }
  return p;
}

Simulator::Endpoint Simulator::endpoint(const Vector& x0, double T, int steps, Rng& rng, bool need_sup, double stop_radius,
                                        const Vector* stop_center) const {
  if (!(T > 0.0)) throw ContractError("horizon must be positive");
  if (steps < 1) throw ContractError("at least one step is needed");
  Endpoint e;
  const bool stopping = std::isfinite(stop_radius);
  if (exact_in_time() && !need_sup && !stopping) {
    e.x = x0 + step(x0, T, rng);
    e.sup = (e.x - x0).norm();
    return e;
  }
  const Vector center = stop_center ? *stop_center : x0;
  Vector x = x0;
  const double h = T / steps;
  for (int k = 0; k < steps; ++k) {
    x += step(x, h, rng, nullptr, k * h);
    e.sup = std::max(e.sup, (x - x0).norm());
    if (stopping && (x - center).norm() >= stop_radius) {
      e.stopped = true;
      break;
    }
  }
  e.x = x;
  return e;
}

PathSample simulate_path(const ProcessModel& model, const Vector& x0, double T, double h, const SeedPolicy& seed,
                         std::uint64_t tag, const PathOptions& opt) {
  Simulator sim(model);
  Rng rng(seed.master, tag, 0);
  return sim.path(x0, T, h, rng, opt);
}

std::vector<Vector> sample_levy_increment(const ProcessModel& model, double t, long n, const SeedPolicy& seed,
                                          std::uint64_t tag, int workers) {
  if (!model.is_levy()) throw ContractError("increments are i.i.d. only for Levy models; use simulate_path");
  if (!(t > 0.0)) throw DomainError("time must be positive");
  if (n < 0) throw DomainError("count must be >= 0");
  Simulator sim(model);
  std::vector<Vector> out(static_cast<std::size_t>(n));
  const long block = SeedPolicy::kBlock;
  const std::size_t blocks = static_cast<std::size_t>((n + block - 1) / block);
  parallel_for(blocks, workers, [&](std::size_t b) {
    const long lo = static_cast<long>(b) * block, hi = std::min(n, lo + block);
    for (long i = lo; i < hi; ++i) {
      Rng rng(seed.master, tag, static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = sim.step(zeros(model.d), t, rng);
    }
  });
  return out;
}

MCEstimate empirical_hitting_rate(const ProcessModel& model, const Vector& x, const TargetSet& A, double t, long N,
                                  const SeedPolicy& seed, std::uint64_t tag, int workers, int steps) {
  if (A.dim() != model.d) throw DomainError("target set dimension differs from the model");
  if (!(A.distance_from_origin() > 0.0)) throw ContractError("target set must be bounded away from the origin");
  if (!(t > 0.0)) throw DomainError("time must be positive");
  Simulator sim(model);
  const double inv = 1.0 / t;
  return mc_mean(N, seed, tag, workers, [&](Rng& rng) {
    auto e = sim.endpoint(x, t, steps, rng);
    return A.contains(e.x - x) ? inv : 0.0;
  });
}

}  // namespace levygen
