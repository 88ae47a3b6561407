#include "levygen/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levygen/parallel.hpp"

namespace levygen {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt_vec(const Vector& x) {
  std::string s = "(";
  for (int i = 0; i < x.size(); ++i) s += (i ? ", " : "") + fmt(x[i]);
  return s + ")";
}

LevyTriplet triplet_at(const ProcessModel& model, const Vector& x) {
  return model.is_levy() ? model.triplet : model.symbol().characteristics(x);
}

double model_allowance(double reference) { return 0.05 * std::abs(reference) + 1e-6; }

// Index of the largest (or smallest) mean among the last three rows.
std::size_t tail_extreme(const std::vector<MCEstimate>& v, bool largest) {
  const std::size_t start = v.size() > 3 ? v.size() - 3 : 0;
  std::size_t best = start;
  for (std::size_t i = start + 1; i < v.size(); ++i)
    if (largest ? v[i].mean > v[best].mean : v[i].mean < v[best].mean) best = i;
  return best;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

LimitExperiment LimitExperiment::geometric(double t_max, double t_min, int points, long N) {
  if (!(t_max > t_min && t_min > 0.0) || points < 2) throw ContractError("geometric t-grid needs t_max > t_min > 0 and >= 2 points");
  LimitExperiment ex;
  for (int i = 0; i < points; ++i) ex.t_grid.push_back(t_max * std::pow(t_min / t_max, double(i) / (points - 1)));
  ex.N = N;
  return ex;
}

void LimitExperiment::validate() const {
  if (t_grid.empty()) throw ContractError("t-grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw ContractError("t-grid values must be positive");
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) throw ContractError("t-grid must be strictly decreasing");
  }
  if (N < 1000) throw ContractError("N per t must be >= 1000, got " + std::to_string(N));
  if (steps < 1) throw ContractError("steps per t must be >= 1");
  if (extrapolation == Extrapolation::Richardson && t_grid.size() < 2)
    throw ContractError("Richardson extrapolation needs two t values");
}

double ConvergenceReport::discrepancy_at(std::size_t i) const {
  const auto& e = rows.at(i).estimate;
  return std::abs(e.mean - reference) / (3.0 * e.std_error + model_allowance);
}

ConvergenceReport make_report(std::string statistic, std::vector<ConvergenceRow> rows, double reference,
                              LimitExperiment::Extrapolation ex, double reference_error) {
  if (rows.empty()) throw ContractError("convergence report needs at least one row");
  ConvergenceReport r;
  r.statistic = std::move(statistic);
  r.rows = std::move(rows);
  r.reference = reference;
  r.reference_error = reference_error;
  const auto& last = r.rows.back();
  if (ex == LimitExperiment::Extrapolation::Richardson && r.rows.size() >= 2) {
    // first-order Richardson on the last two points, assuming an O(t) bias
    const auto& prev = r.rows[r.rows.size() - 2];
    const double t1 = prev.t, t2 = last.t;
    r.limit = (t1 * last.estimate.mean - t2 * prev.estimate.mean) / (t1 - t2);
    r.limit_std_error = std::hypot(t1 * last.estimate.std_error, t2 * prev.estimate.std_error) / (t1 - t2);
    r.notes = "richardson on the last two t";
  } else {
    r.limit = last.estimate.mean;
    r.limit_std_error = last.estimate.std_error;
    r.notes = "last-point estimate";
  }
  r.stat_allowance = 3.0 * r.limit_std_error;
  r.model_allowance = model_allowance(reference);
  r.discrepancy = std::abs(r.limit - reference) / (r.stat_allowance + r.model_allowance);
  r.pass = r.discrepancy <= 1.0;
  return r;
}

bool is_bounded(const TestFunction& f) { return f.known_zero || f.vanishes_at_infinity || f.frequency.has_value(); }

MCEstimate small_time_generalized_moment(const ProcessModel& model, const TestFunction& f, const Vector& x, double t,
                                         long N, const SeedPolicy& seed, std::uint64_t tag, int workers,
                                         const MomentOptions& opt) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  if (x.size() != model.d || f.d != model.d) throw DomainError("state, function and model dimensions differ");
  double stop = kInf;
  if (opt.stop_radius) {
    if (!(*opt.stop_radius > 0.0)) throw ContractError("stopping radius must be positive");
    stop = *opt.stop_radius;
  }
  if (!is_bounded(f) && !opt.stop_radius) {
    if (!opt.growth)
      throw ContractError("f = " + f.name +
                          " is unbounded: the moment needs a compact stopping set or a submultiplicative growth bound");
    if (!model.is_levy()) throw ContractError("growth certificates are only checked for Levy models; supply a stopping ball");
    opt.growth->validate();
    auto rep = submultiplicative_bounds(*opt.growth, {model.triplet.nu});
    if (rep.infinite)
      throw ContractError("growth bound fails: int_{|y|>=1} g dnu diverges for g = " + opt.growth->describe());
    // |f(x+y)| / g(|y|) must stay bounded along the coordinate rays
    double early = 0.0, late = 0.0;
    for (int i = 0; i < model.d; ++i)
      for (double sgn : {-1.0, 1.0})
        for (double r = 1.0; r <= 1024.0; r *= 2.0) {
          Vector y = zeros(model.d);
          y[i] = sgn * r;
          double ratio = std::abs(f(x + y)) / (*opt.growth)(r);
          (r < 128.0 ? early : late) = std::max(r < 128.0 ? early : late, ratio);
        }
    if (!std::isfinite(late) || late > 10.0 * std::max(early, 1e-300) + 1.0)
      throw ContractError("growth bound fails: f grows faster than " + opt.growth->describe());
  }
  Simulator sim(model);
  const double fx = f(x);
  const int steps = opt.steps;
  return mc_mean(N, seed, tag, workers, [&](Rng& rng) {
    auto e = sim.endpoint(x, t, steps, rng, false, stop);
    return (f(e.x) - fx) / t;
  });
}

GeneratorResult reference_generator(const ProcessModel& model, const TestFunction& f, const Vector& x,
                                    const GeneratorOptions& opt) {
  LevyTriplet tr = triplet_at(model, x);
  GeneratorOptions o = opt;
  GeneratorForm form = GeneratorForm::ZeroOrder;
  if (f.has_hessian())
    form = GeneratorForm::SecondOrder;
  else if (f.has_gradient())
    form = GeneratorForm::FirstOrder;
  else if (f.holder_order && o.order == 0.0)
    o.order = f.holder_order(x);
  return apply_pointwise(tr, f, x, form, o);
}

ConvergenceReport limit_study(const LimitExperiment& ex, const ProcessModel& model, const TestFunction& f,
                              const Vector& x, const MomentOptions& opt, std::optional<double> reference) {
  ex.validate();
  double ref_err = 0.0;
  std::string ref_note = "reference supplied";
  if (!reference) {
    auto g = reference_generator(model, f, x);
    reference = g.value;
    ref_err = g.abs_error;
    ref_note = "reference " + to_string(g.form) + " quadrature";
  }
  MomentOptions o = opt;
  o.steps = ex.steps;
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < ex.t_grid.size(); ++i) {
    const double t = ex.t_grid[i];
    rows.push_back({t, small_time_generalized_moment(model, f, x, t, ex.N, ex.seed, mix_tag({ex.tag, i}), ex.workers, o)});
  }
  auto r = make_report("generalized-moment f=" + f.name + " x=" + fmt_vec(x), std::move(rows), *reference,
                       ex.extrapolation, ref_err);
  r.notes += "; " + ref_note;
  if (opt.stop_radius) r.notes += "; stopped at exit from B(x, " + fmt(*opt.stop_radius) + ") on the grid";
  return r;
}

ConvergenceReport vague_convergence_experiment(const LimitExperiment& ex, const ProcessModel& model, const Vector& x,
                                               const TargetSet& A) {
  ex.validate();
  const double reference = measure_of_set(triplet_at(model, x).nu, A);
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < ex.t_grid.size(); ++i) {
    const double t = ex.t_grid[i];
    rows.push_back({t, empirical_hitting_rate(model, x, A, t, ex.N, ex.seed, mix_tag({ex.tag, i}), ex.workers, ex.steps)});
  }
  return make_report("hitting-rate A=" + A.describe() + " x=" + fmt_vec(x), std::move(rows), reference, ex.extrapolation);
}

MaximalReport maximal_inequality_experiment(const LimitExperiment& ex, const ProcessModel& model, const Vector& x,
                                            const std::vector<double>& r_grid) {
  ex.validate();
  if (r_grid.empty()) throw ContractError("r-grid is empty");
  for (double r : r_grid)
    if (!(r > 0.0) || !std::isfinite(r)) throw ContractError("r-grid values must be positive and finite");
  Simulator sim(model);
  const Symbol sym = model.symbol();
  MaximalReport rep;
  rep.t_grid = ex.t_grid;
  rep.rows.resize(r_grid.size());
  for (std::size_t k = 0; k < r_grid.size(); ++k) rep.rows[k].r = r_grid[k];

  std::vector<double> sups(static_cast<std::size_t>(ex.N));
  const long block = SeedPolicy::kBlock;
  for (std::size_t i = 0; i < ex.t_grid.size(); ++i) {
    const double t = ex.t_grid[i];
    const std::uint64_t tag = mix_tag({ex.tag, i});
    const std::size_t blocks = static_cast<std::size_t>((ex.N + block - 1) / block);
    parallel_for(blocks, ex.workers, [&](std::size_t b) {
      const long lo = static_cast<long>(b) * block, hi = std::min(ex.N, lo + block);
      for (long j = lo; j < hi; ++j) {
        Rng rng(ex.seed.master, tag, static_cast<std::uint64_t>(j));
        sups[static_cast<std::size_t>(j)] = sim.endpoint(x, t, ex.steps, rng, true).sup;
      }
    });
    for (auto& row : rep.rows) {
      RunningStats s;
      for (double v : sups) s.add(v >= row.r ? 1.0 / t : 0.0);
      row.per_t.push_back(s.estimate());
    }
  }

  std::vector<double> rs, rates, all_r, bounds;
  rep.ratio_ok = true;
  for (auto& row : rep.rows) {
    auto best = tail_extreme(row.per_t, true);
    row.rate = row.per_t[best].mean;
    row.rate_std_error = row.per_t[best].std_error;
    row.bound = symbol_sup(sym, x, 1.0 / row.r);
    row.ratio = row.bound > 0.0 ? row.rate / row.bound : (row.rate > 0.0 ? kInf : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    if (!std::isfinite(row.ratio) || row.ratio > rep.ratio_cap) rep.ratio_ok = false;
    if (row.rate > 0.0) {
      rs.push_back(row.r);
      rates.push_back(row.rate);
    }
    if (row.bound > 0.0) {
      all_r.push_back(row.r);
      bounds.push_back(row.bound);
    }
  }
  rep.slope_defined = rs.size() >= 2 && all_r.size() >= 2;
  if (rep.slope_defined) {
    rep.slope = loglog_slope(rs, rates);
    rep.bound_slope = loglog_slope(all_r, bounds);
    rep.slope_ok = std::abs(rep.slope - rep.bound_slope) <= rep.slope_tol;
  } else {
    rep.notes = "slope undefined: fewer than two positive crossing rates";
  }
  rep.pass = rep.ratio_ok && (rep.slope_ok || !rep.slope_defined);
  rep.notes += std::string(rep.notes.empty() ? "" : "; ") +
               "grid sup on " + std::to_string(ex.steps) + " steps per t (lower bound); limsup proxied by the max over the three smallest t";
  return rep;
}

MomentTailReport moment_tail_bound_experiment(const LimitExperiment& ex, const ProcessModel& model, const Vector& x,
                                              double a, double R) {
  ex.validate();
  if (!(a > 0.0)) throw ContractError("moment order must be positive");
  if (!(R > 0.0)) throw ContractError("tail radius must be positive");
  MomentTailReport rep;
  rep.a = a;
  rep.R = R;
  const auto nu = triplet_at(model, x).nu;
  auto m = fractional_moment(nu, a, Region::outside_open(R));
  rep.reference = m.value;
  rep.reference_divergent = m.infinite;
  rep.tail_term = std::pow(R, a) * tail_mass(nu, R);

  Simulator sim(model);
  std::vector<MCEstimate> ests;
  for (std::size_t i = 0; i < ex.t_grid.size(); ++i) {
    const double t = ex.t_grid[i];
    auto e = mc_mean(ex.N, ex.seed, mix_tag({ex.tag, i}), ex.workers, [&](Rng& rng) {
      double r = (sim.endpoint(x, t, ex.steps, rng).x - x).norm();
      return r > R ? std::pow(r, a) / t : 0.0;
    });
    rep.rows.push_back({t, e});
    ests.push_back(e);
  }
  auto k = tail_extreme(ests, false);
  rep.liminf = ests[k].mean;
  rep.liminf_std_error = ests[k].std_error;
  if (rep.reference_divergent) {
    rep.pass = false;
    rep.margin = -kInf;
    rep.notes = "reference moment diverges; MC curve reported only";
  } else {
    rep.margin = rep.tail_term + rep.liminf + 3.0 * rep.liminf_std_error - rep.reference;
    rep.pass = rep.margin >= 0.0;
    rep.notes = "liminf proxied by the min over the three smallest t";
  }
  return rep;
}

SweepReport uniform_limit_sweep(const LimitExperiment& ex, const ProcessModel& model, const TestFunction& f,
                                const VariableOrderFn& a, const std::vector<Vector>& grid, const VerdictOptions& vopt) {
  ex.validate();
  if (grid.empty()) throw ContractError("state grid is empty");
  SweepReport rep;
  const Symbol sym = model.symbol();
  rep.verdict = domain_verdict(sym, f, a, grid, vopt);
  if (!rep.verdict.certified()) {
    std::string why = rep.verdict.reasons.empty() ? "" : ": " + rep.verdict.reasons.front().detail;
    throw ContractError("uniform sweep needs a certified domain verdict, got " + to_string(rep.verdict.status) + why);
  }
  rep.states = grid;
  if (f.is_zero()) {
    rep.reference.assign(grid.size(), 0.0);
  } else {
    auto g = apply_on_grid(sym.state_triplet(), a.alpha, f, grid, {}, ex.workers);
    for (const auto& row : g.rows) {
      if (!row.ok) throw NonConvergence("reference Lf failed at x = " + fmt_vec(row.x) + ": " + row.status, row.value, row.abs_error);
      rep.reference.push_back(row.value);
    }
  }
  for (double v : rep.reference) rep.scale = std::max(rep.scale, std::abs(v));

  MomentOptions o;
  o.steps = ex.steps;
  for (std::size_t i = 0; i < ex.t_grid.size(); ++i) {
    SweepRow row;
    row.t = ex.t_grid[i];
    row.worst_state = grid.front();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      auto e = small_time_generalized_moment(model, f, grid[j], row.t, ex.N, ex.seed, mix_tag({ex.tag, i, j}), ex.workers, o);
      double dev = std::abs(e.mean - rep.reference[j]);
      if (dev > row.sup_discrepancy) {
        row.sup_discrepancy = dev;
        row.worst_state = grid[j];
      }
      row.noise_floor = std::max(row.noise_floor, 3.0 * e.std_error);
    }
    rep.rows.push_back(row);
  }
  const std::size_t n = rep.rows.size();
  const std::size_t start = n > 3 ? n - 3 : 0;
  bool ok = true;
  for (std::size_t i = start + 1; i < n; ++i)
    ok = ok && rep.rows[i].sup_discrepancy <= std::max(rep.rows[i - 1].sup_discrepancy, rep.rows[i].noise_floor);
  ok = ok && rep.rows.back().sup_discrepancy <= rep.rows.back().noise_floor + 0.05 * rep.scale;
  rep.pass = ok;
  rep.notes = "verdict " + to_string(rep.verdict.status) + "; reference Lf from the per-state form of alpha(x)";
  return rep;
}

}  // namespace levygen
