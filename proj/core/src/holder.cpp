#include "levygen/holder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "levygen/directions.hpp"
#include "levygen/parallel.hpp"

namespace levygen {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt(const Vector& x) {
  std::ostringstream os;
  os.precision(6);
  if (x.size() == 1) {
    os << x[0];
    return os.str();
  }
  os << '(';
  for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

// Least-squares slope of log(ratio) against log(r) over the smallest radii with a clean ratio.
double small_radius_slope(const std::vector<double>& radii, const std::vector<double>& clean) {
  std::vector<std::size_t> idx(radii.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });
  std::vector<double> lx, ly;
  for (std::size_t i : idx) {
    if (!(clean[i] > 0.0)) continue;
    lx.push_back(std::log(radii[i]));
    ly.push_back(std::log(clean[i]));
    if (lx.size() == 6) break;
  }
  if (lx.size() < 3) return kNaN;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= lx.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

// numer(y) returns {|numerator|, rounding floor of the numerator}.
template <class Numer>
SeminormProfile profile_impl(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p, Numer numer) {
  if (p.radii.empty()) throw DomainError("probe radii are empty");
  for (double r : p.radii)
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("probe radii must lie in (0,1], got " + fmt(r));
  if (x.size() != f.d) throw DomainError("state and test function dimensions differ");
  auto dirs = probe_directions(f.d, p.directions);
  SeminormProfile out;
  out.radii = p.radii;
  out.per_radius.assign(p.radii.size(), 0.0);
  std::vector<double> clean(p.radii.size(), 0.0);
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    const double r = p.radii[i];
    const double scale = std::pow(r, alpha);
    for (const auto& th : dirs) {
      auto [num, floor] = numer(Vector(r * th));
      double ratio = num / scale;
      out.per_radius[i] = std::max(out.per_radius[i], ratio);
      if (num > floor) clean[i] = std::max(clean[i], ratio);
    }
    out.value = std::max(out.value, out.per_radius[i]);
  }
  out.small_radius_slope = small_radius_slope(out.radii, clean);
  return out;
}

bool growing(const SeminormProfile& p, double tol) { return std::isfinite(p.small_radius_slope) && p.small_radius_slope < -tol; }

}  // namespace

ProbeSet ProbeSet::defaults() { return geometric(1e-4, 1.0, 24, 16); }

ProbeSet ProbeSet::geometric(double r_min, double r_max, int count, int directions) {
  if (!(r_min > 0.0 && r_max <= 1.0 && r_min <= r_max && count >= 1))
    throw DomainError("probe radii need 0 < r_min <= r_max <= 1 and count >= 1");
  ProbeSet p;
  p.directions = directions;
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    p.radii.push_back(r_min * std::pow(r_max / r_min, t));
  }
  p.radii.back() = r_max;
  return p;
}

std::string ProbeSet::describe() const {
  double lo = radii.empty() ? 0.0 : *std::min_element(radii.begin(), radii.end());
  double hi = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  return std::to_string(radii.size()) + " radii in [" + fmt(lo) + ", " + fmt(hi) + "] x " + std::to_string(directions) +
         " directions";
}

SeminormProfile holder_profile(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("Holder order must lie in (0,2], got " + fmt(alpha));
  const double fx = f.f(x);
  return profile_impl(f, x, alpha, p, [&](const Vector& y) {
    double fy = f.f(x + y);
    return std::pair<double, double>{std::abs(fy - fx), 64.0 * kEps * (std::abs(fy) + std::abs(fx))};
  });
}

double local_holder_seminorm(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p) {
  return holder_profile(f, x, alpha, p).value;
}

SeminormProfile remainder_profile(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p) {
  if (!f.g) throw ContractError("remainder seminorm requires a gradient oracle");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("remainder order must lie in (1,2], got " + fmt(alpha));
  const double fx = f.f(x);
  const Vector gx = f.g(x);
  return profile_impl(f, x, alpha, p, [&](const Vector& y) {
    double fy = f.f(x + y);
    double lin = gx.dot(y);
    return std::pair<double, double>{std::abs(fy - fx - lin),
                                     64.0 * kEps * (std::abs(fy) + std::abs(fx) + std::abs(lin))};
  });
}

double first_order_remainder_seminorm(const TestFunction& f, const Vector& x, double alpha, const ProbeSet& p) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("first-order remainder order must lie in (1,2), got " + fmt(alpha));
  return remainder_profile(f, x, alpha, p).value;
}

VariableOrderFn VariableOrderFn::constant(double a, double eps) {
  if (!(a > 0.0 && a <= 2.0)) throw DomainError("order must lie in (0,2], got " + fmt(a));
  VariableOrderFn v;
  v.alpha = [a](const Vector&) { return a; };
  v.eps_gap = eps;
  v.lower_bound = a;
  v.modulus = [](double) { return 0.0; };
  v.modulus_analytic = true;
  v.desc = fmt(a);
  return v;
}

VariableOrderFn VariableOrderFn::sine(double base, double amp, double freq, double eps) {
  double lo = base - std::abs(amp), hi = base + std::abs(amp);
  if (!(lo > 0.0 && hi <= 2.0)) throw DomainError("base +- amp must stay in (0,2]");
  VariableOrderFn v;
  v.alpha = [base, amp, freq](const Vector& x) { return base + amp * std::sin(freq * x[0]); };
  v.eps_gap = eps;
  v.lower_bound = lo;
  double lip = std::abs(amp * freq);
  v.modulus = [lip](double t) { return lip * t; };
  v.modulus_analytic = true;
  v.desc = fmt(base) + (amp < 0 ? "-" : "+") + fmt(std::abs(amp)) + " sin(" + fmt(freq) + " x)";
  return v;
}

VariableOrderFn VariableOrderFn::lipschitz(ScalarField a, double lip, double lower, double eps, std::string desc) {
  VariableOrderFn v;
  v.alpha = std::move(a);
  v.eps_gap = eps;
  v.lower_bound = lower;
  v.modulus = [lip](double t) { return lip * t; };
  v.modulus_analytic = true;
  v.desc = desc.empty() ? "alpha(x)" : std::move(desc);
  return v;
}

VariableOrderFn VariableOrderFn::from_expression(const Expression& e, const std::vector<Vector>& sample, double eps,
                                                 std::string desc) {
  VariableOrderFn v;
  v.alpha = [e](const Vector& x) { return e(x); };
  v.eps_gap = eps;
  double lip = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      double dist = (sample[i] - sample[j]).norm();
      if (dist > 0.0) lip = std::max(lip, std::abs(e(sample[i]) - e(sample[j])) / dist);
    }
  v.modulus = [lip](double t) { return lip * t; };
  v.modulus_analytic = false;
  v.desc = desc.empty() ? "alpha(x)" : std::move(desc);
  return v;
}

OrderCheck validate_order(const VariableOrderFn& a, const std::vector<Vector>& grid) {
  OrderCheck c;
  c.heuristic = !a.modulus_analytic;
  if (grid.empty()) {
    c.ok = false;
    c.message = "order grid is empty";
    return c;
  }
  std::vector<double> vals(grid.size());
  c.inf = kInf;
  c.sup = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = a(grid[i]);
    c.inf = std::min(c.inf, vals[i]);
    c.sup = std::max(c.sup, vals[i]);
    if (!(vals[i] > 0.0 && vals[i] <= 2.0)) {
      c.ok = false;
      c.message = "alpha(" + fmt(grid[i]) + ") = " + fmt(vals[i]) + " outside (0,2]";
      return c;
    }
  }
  if (a.lower_bound > 0.0 && c.inf < a.lower_bound - 1e-12) {
    c.ok = false;
    c.message = "alpha drops to " + fmt(c.inf) + " below the declared bound " + fmt(a.lower_bound);
    return c;
  }
  c.worst_modulus_excess = -kInf;
  if (!a.modulus) {
    c.ok = false;
    c.message = "no continuity modulus";
    return c;
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      double ex = std::abs(vals[i] - vals[j]) - a.modulus((grid[i] - grid[j]).norm());
      c.worst_modulus_excess = std::max(c.worst_modulus_excess, ex);
    }
  if (grid.size() < 2) c.worst_modulus_excess = 0.0;
  if (c.worst_modulus_excess > 1e-12) {
    c.ok = false;
    c.message = "modulus violated by " + fmt(c.worst_modulus_excess);
    return c;
  }
  c.message = std::string("alpha in [") + fmt(c.inf) + ", " + fmt(c.sup) + "], modulus " +
              (c.heuristic ? "sampled (heuristic)" : "analytic");
  return c;
}

HolderRegion holder_region(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("order must lie in (0,2], got " + fmt(alpha));
  if (alpha <= 1.0) return HolderRegion::ZeroOrder;
  if (alpha < 2.0) return HolderRegion::FirstOrder;
  return HolderRegion::SecondOrder;
}

namespace {

StateMembership check_state(const TestFunction& f, const Vector& x, double alpha, const MembershipOptions& opt,
                            bool order_two_by_remainder) {
  StateMembership s;
  s.x = x;
  s.alpha = alpha;
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    s.message = "alpha = " + fmt(alpha) + " outside (0,2]";
    return s;
  }
  s.region = holder_region(alpha);
  auto judge = [&](const SeminormProfile& p, const char* what) {
    s.value = p.value;
    s.slope = p.small_radius_slope;
    if (!(p.value <= opt.cap)) {
      s.message = std::string(what) + " estimate " + fmt(p.value) + " exceeds cap " + fmt(opt.cap);
    } else if (growing(p, opt.slope_tol)) {
      s.message = std::string(what) + " ratio grows like r^" + fmt(p.small_radius_slope) + " as r -> 0";
    } else {
      s.pass = true;
      s.message = std::string(what) + " " + fmt(p.value);
    }
  };
  if (s.region == HolderRegion::ZeroOrder) {
    judge(holder_profile(f, x, alpha, opt.probes), "Holder seminorm");
    return s;
  }
  if (!f.g) {
    s.message = s.region == HolderRegion::FirstOrder ? "order (1,2) region requires a gradient oracle"
                                                     : "order-2 region requires a gradient oracle";
    return s;
  }
  TestFunction grad_only = f;
  grad_only.h = nullptr;
  if (s.region == HolderRegion::FirstOrder || order_two_by_remainder) {
    auto dc = check_derivatives(grad_only, {x});
    if (!dc.ok) {
      s.message = "gradient oracle disagrees with finite differences (" + fmt(dc.worst_gradient) + ")";
      return s;
    }
    judge(remainder_profile(f, x, alpha, opt.probes), "remainder seminorm");
    return s;
  }
  if (!f.h) {
    s.message = "order-2 region requires a Hessian oracle";
    return s;
  }
  // twice differentiable near x: oracles consistent at x and at nearby points
  std::vector<Vector> near{x};
  for (int i = 0; i < x.size(); ++i)
    for (double sgn : {-1.0, 1.0}) {
      Vector z = x;
      z[i] += sgn * 1e-2;
      near.push_back(z);
    }
  auto dc = check_derivatives(f, near);
  s.value = std::max(dc.worst_gradient, dc.worst_hessian);
  s.pass = dc.ok;
  s.message = dc.message;
  return s;
}

MembershipReport membership_impl(const TestFunction& f, const ScalarField& alpha, const std::vector<Vector>& grid,
                                 const MembershipOptions& opt, bool order_two_by_remainder, int workers) {
  MembershipReport rep;
  if (grid.empty()) {
    rep.pass = false;
    rep.holder.pass = false;
    rep.holder.message = "grid is empty";
    return rep;
  }
  rep.states.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    try {
      rep.states[i] = check_state(f, grid[i], alpha(grid[i]), opt, order_two_by_remainder);
    } catch (const Error& e) {
      rep.states[i].x = grid[i];
      rep.states[i].pass = false;
      rep.states[i].message = e.what();
    }
  });
  for (const auto& s : rep.states) {
    RegionSummary& r = s.region == HolderRegion::ZeroOrder    ? rep.holder
                       : s.region == HolderRegion::FirstOrder ? rep.remainder
                                                              : rep.twice;
    r.nonempty = true;
    r.sup = std::max(r.sup, s.value);
    if (!s.pass && r.pass) {
      r.pass = false;
      r.message = "at x = " + fmt(s.x) + ": " + s.message;
    }
  }
  for (RegionSummary* r : {&rep.holder, &rep.remainder, &rep.twice}) {
    if (r->pass) r->message = r->nonempty ? "sup " + fmt(r->sup) : "region empty on the grid";
    rep.pass = rep.pass && r->pass;
  }
  return rep;
}

}  // namespace

MembershipReport membership_check(const TestFunction& f, const VariableOrderFn& a, const std::vector<Vector>& grid,
                                  const MembershipOptions& opt) {
  return membership_impl(f, a.alpha, grid, opt, false, 1);
}

std::string to_string(DomainStatus s) {
  switch (s) {
    case DomainStatus::LevyConstantOrder: return "certified-thm-app-3";
    case DomainStatus::VariableZeroOrder: return "certified-cor-app-11";
    case DomainStatus::VariableFirstOrder: return "certified-cor-app-13";
    case DomainStatus::VariableGeneral: return "certified-thm-app-5";
    case DomainStatus::NotCertified: return "not-certified";
  }
  return "not-certified";
}

namespace {

struct State {
  Vector x;
  double alpha = 0.0;
  bool have = false;
  LevyTriplet t;
  std::string error;
};

// Lazily computed per-state symbol diagnostics shared between routes.
struct Context {
  const Symbol& sym;
  const StateTriplet& model;
  const TestFunction& f;
  const VariableOrderFn& a;
  const std::vector<Vector>& grid;
  const VerdictOptions& opt;
  std::vector<State> states;
  std::vector<std::optional<SectorReport>> sector;
  std::vector<std::optional<BGIndexEstimate>> bg;
  std::vector<std::string> sector_err, bg_err;
  bool indeterminate = false;

  std::size_t slot(std::size_t i) const { return sym.state_independent() ? 0 : i; }

  const SectorReport* sector_at(std::size_t i) {
    std::size_t k = slot(i);
    if (!sector[k] && sector_err[k].empty()) {
      try {
        sector[k] = sector_constant(sym, states[i].x, opt.sector);
      } catch (const Error& e) {
        sector_err[k] = e.what();
      }
    }
    return sector[k] ? &*sector[k] : nullptr;
  }
  const BGIndexEstimate* bg_at(std::size_t i) {
    std::size_t k = slot(i);
    if (!bg[k] && bg_err[k].empty()) {
      try {
        bg[k] = bg_index_infinity(sym, states[i].x, opt.bg);
      } catch (const Error& e) {
        bg_err[k] = e.what();
      }
    }
    return bg[k] ? &*bg[k] : nullptr;
  }
};

ConditionCheck make(const std::string& route, std::string name, bool pass, double margin, std::string detail) {
  ConditionCheck c;
  c.route = route;
  c.name = std::move(name);
  c.pass = pass;
  c.margin = pass ? (margin > 0.0 ? margin : 1.0) : (margin < 0.0 ? margin : -1.0);
  c.detail = std::move(detail);
  return c;
}

ConditionCheck check_decay(const std::string& route, const TestFunction& f) {
  bool ok = f.vanishes_at_infinity || f.is_zero();
  return make(route, "f vanishes at infinity", ok, ok ? 1.0 : -1.0,
              ok ? "declared" : "f is not declared to vanish at infinity");
}

ConditionCheck check_characteristics(const std::string& route, const Context& c) {
  for (const auto& s : c.states)
    if (!s.have) return make(route, "characteristics available", false, -1.0, "at x = " + fmt(s.x) + ": " + s.error);
  return make(route, "characteristics available", true, 1.0, "at every grid state");
}

ConditionCheck check_bounded(const std::string& route, const Context& c) {
  bool ok = c.sym.state_independent() || c.model.bounded_coefficients;
  return make(route, "bounded coefficients", ok, ok ? 1.0 : -1.0,
              c.sym.state_independent() ? "constant coefficients"
              : ok                      ? "declared bound " + fmt(c.model.bound)
                                        : "model does not declare bounded coefficients");
}

ConditionCheck check_q_zero(const std::string& route, const Context& c) {
  double worst = 0.0;
  Vector at;
  for (const auto& s : c.states) {
    if (!s.have) continue;
    double q = s.t.Q.size() ? s.t.Q.cwiseAbs().maxCoeff() : 0.0;
    if (q > worst) {
      worst = q;
      at = s.x;
    }
  }
  bool ok = worst == 0.0;
  return make(route, "no diffusion part", ok, ok ? 1.0 : -worst, ok ? "Q = 0 on the grid" : "|Q| = " + fmt(worst) + " at x = " + fmt(at));
}

ConditionCheck check_drift(const std::string& route, const Context& c) {
  double worst = 0.0;
  for (const auto& s : c.states) {
    if (!s.have) continue;
    double gap;
    try {
      gap = (s.t.b - compensator_drift(s.t.nu)).norm();
    } catch (const ContractError&) {
      gap = s.t.b.norm() == 0.0 ? 0.0 : kInf;
    }
    if (gap > c.opt.drift_tol)
      return make(route, "drift equals the compensator", false, c.opt.drift_tol - gap,
                  "|b - int_{|y|<1} y nu(dy)| = " + fmt(gap) + " at x = " + fmt(s.x));
    worst = std::max(worst, gap);
  }
  return make(route, "drift equals the compensator", true, c.opt.drift_tol - worst,
              "max gap " + fmt(worst) + " <= " + fmt(c.opt.drift_tol));
}

double moment_at(const LevyMeasureSpec& nu, double kappa) {
  if (kappa > 0.0) {
    auto m = fractional_moment(nu, kappa, Region::ball_closed(1.0));
    return m.infinite ? kInf : m.value;
  }
  auto rep = integrate(nu, [](const Vector&) { return Complex(1.0, 0.0); }, Region::ball_closed(1.0));
  return rep.divergent ? kInf : rep.value.real();
}

// sup_x int_{|y|<=1} |y|^{kappa(x)} nu(x, dy)
ConditionCheck check_moment(const std::string& route, const Context& c, const std::function<double(const State&)>& kappa,
                            const std::string& order_desc) {
  const std::string name = "moment of order " + order_desc + " on |y| <= 1";
  double sup = 0.0;
  for (const auto& s : c.states) {
    if (!s.have) continue;
    double k = kappa(s);
    double m;
    try {
      m = moment_at(s.t.nu, k);
    } catch (const Error&) {
      m = kInf;
    }
    if (!(m <= c.opt.moment_cap))
      return make(route, name, false, -1.0, "moment condition diverges at x=" + fmt(s.x) + " (order " + fmt(k) + ")");
    sup = std::max(sup, m);
  }
  return make(route, name, true, c.opt.moment_cap - sup, "sup " + fmt(sup));
}

ConditionCheck check_range(const std::string& route, const Context& c, double lo, bool lo_closed, double hi) {
  std::string name = std::string("alpha in ") + (lo_closed ? "[" : "(") + fmt(lo) + ", " + fmt(hi) + "]";
  for (const auto& s : c.states) {
    bool ok = (lo_closed ? s.alpha >= lo : s.alpha > lo) && s.alpha <= hi;
    if (!ok) return make(route, name, false, -1.0, "alpha(" + fmt(s.x) + ") = " + fmt(s.alpha));
  }
  return make(route, name, true, 1.0, "on every grid state");
}

ConditionCheck check_continuity(const std::string& route, const Context& c) {
  auto oc = validate_order(c.a, c.grid);
  return make(route, "alpha uniformly continuous", oc.ok, oc.ok ? 1.0 : -1.0, oc.message);
}

// Blumenthal-Getoor gap alpha(x) - eps >= beta + band at state i; sets the indeterminate flag on a straddle.
bool bg_gap_at(Context& c, std::size_t i, double& gap, std::string& why) {
  const auto* b = c.bg_at(i);
  if (!b) {
    why = "index unavailable: " + c.bg_err[c.slot(i)];
    gap = -1.0;
    return false;
  }
  const double lhs = c.states[i].alpha - c.a.eps_gap;
  gap = lhs - (b->value + b->band);
  if (gap >= 0.0) return true;
  if (lhs >= b->value - b->band) {
    c.indeterminate = true;
    why = "indeterminate band: alpha - eps = " + fmt(lhs) + " within beta = " + fmt(b->value) + " +- " + fmt(b->band);
  } else {
    why = "alpha - eps = " + fmt(lhs) + " < beta = " + fmt(b->value) + " + band " + fmt(b->band);
  }
  return false;
}

ConditionCheck check_sector_or_bg(const std::string& route, Context& c) {
  const std::string name = "sector condition or index gap";
  double worst_gap = kInf, worst_sector = 0.0;
  int via_bg = 0;
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    const auto* s = c.sector_at(i);
    if (s && !s->unbounded && s->constant <= c.opt.sector_cap) {
      worst_sector = std::max(worst_sector, s->constant);
      continue;
    }
    double gap;
    std::string why;
    if (!bg_gap_at(c, i, gap, why))
      return make(route, name, false, gap, "at x = " + fmt(c.states[i].x) + ": sector fails and " + why);
    worst_gap = std::min(worst_gap, gap);
    ++via_bg;
  }
  std::string detail = "sector constant <= " + fmt(worst_sector);
  if (via_bg) detail += "; index gap >= " + fmt(worst_gap) + " at " + std::to_string(via_bg) + " states";
  return make(route, name, true, via_bg ? worst_gap : c.opt.sector_cap - worst_sector, detail);
}

ConditionCheck check_bg_gap(const std::string& route, Context& c) {
  const std::string name = "alpha >= min(beta_inf + eps, 2)";
  double worst = kInf;
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    if (c.states[i].alpha >= 2.0) continue;
    double gap;
    std::string why;
    if (!bg_gap_at(c, i, gap, why)) return make(route, name, false, gap, "at x = " + fmt(c.states[i].x) + ": " + why);
    worst = std::min(worst, gap);
  }
  return make(route, name, true, worst, std::isfinite(worst) ? "min gap " + fmt(worst) : "alpha = 2 on the grid");
}

ConditionCheck check_membership(const std::string& route, const Context& c, const ScalarField& alpha, bool two_by_remainder,
                                const std::string& name) {
  auto rep = membership_impl(c.f, alpha, c.grid, c.opt.membership, two_by_remainder, c.opt.workers);
  if (rep.pass) {
    double sup = std::max({rep.holder.sup, rep.remainder.sup, rep.twice.sup});
    return make(route, name, true, c.opt.membership.cap - sup, "seminorm sup " + fmt(sup));
  }
  for (const RegionSummary* r : {&rep.holder, &rep.remainder, &rep.twice})
    if (!r->pass) return make(route, name, false, -1.0, r->message);
  return make(route, name, false, -1.0, "membership failed");
}

bool all_pass(const std::vector<ConditionCheck>& v) {
  for (const auto& c : v)
    if (!c.pass) return false;
  return true;
}

// Each route appends checks until one fails.
struct Route {
  std::vector<ConditionCheck> checks;
  bool add(ConditionCheck c) {
    checks.push_back(std::move(c));
    return checks.back().pass;
  }
};

Route levy_route(Context& c) {
  const std::string id = to_string(DomainStatus::LevyConstantOrder);
  Route r;
  if (!r.add(make(id, "constant coefficients", c.sym.state_independent(), 1.0,
                  c.sym.state_independent() ? "symbol does not depend on x" : "symbol depends on x")))
    return r;
  if (!r.add(check_characteristics(id, c))) return r;
  if (!r.add(check_decay(id, c.f))) return r;
  double amin = kInf;
  for (const auto& s : c.states) amin = std::min(amin, s.alpha);
  const bool ok_range = amin > 0.0 && amin <= 2.0;
  if (!r.add(make(id, "alpha in (0,2]", ok_range, 1.0, "inf alpha over the grid = " + fmt(amin)))) return r;
  ScalarField constant = [amin](const Vector&) { return amin; };
  if (amin >= 2.0) {
    r.add(check_membership(id, c, constant, false, "f in C^2"));
    return r;
  }
  if (!r.add(check_q_zero(id, c))) return r;
  if (!r.add(check_moment(id, c, [amin](const State&) { return amin; }, fmt(amin)))) return r;
  if (amin <= 1.0) {
    if (!r.add(check_drift(id, c))) return r;
    r.add(check_membership(id, c, constant, false, "f Holder of order " + fmt(amin)));
  } else {
    r.add(check_membership(id, c, constant, false, "grad f Holder of order " + fmt(amin - 1.0)));
  }
  return r;
}

Route zero_order_route(Context& c) {
  const std::string id = to_string(DomainStatus::VariableZeroOrder);
  Route r;
  const double eps = c.a.eps_gap;
  if (!r.add(check_characteristics(id, c))) return r;
  if (!r.add(check_bounded(id, c))) return r;
  if (!r.add(check_decay(id, c.f))) return r;
  if (!r.add(check_range(id, c, eps, true, 1.0))) return r;
  if (!r.add(check_continuity(id, c))) return r;
  if (!r.add(check_q_zero(id, c))) return r;
  if (!r.add(check_drift(id, c))) return r;
  if (!r.add(check_moment(id, c, [eps](const State& s) { return s.alpha - eps; }, "alpha(x) - eps"))) return r;
  if (!r.add(check_sector_or_bg(id, c))) return r;
  r.add(check_membership(id, c, c.a.alpha, false, "f in C^{alpha(x)}"));
  return r;
}

Route first_order_route(Context& c) {
  const std::string id = to_string(DomainStatus::VariableFirstOrder);
  Route r;
  const double eps = c.a.eps_gap;
  if (!r.add(check_characteristics(id, c))) return r;
  if (!r.add(check_bounded(id, c))) return r;
  if (!r.add(check_decay(id, c.f))) return r;
  if (!r.add(check_range(id, c, eps, false, 2.0))) return r;
  if (!r.add(check_continuity(id, c))) return r;
  if (!r.add(check_q_zero(id, c))) return r;
  if (!r.add(make(id, "gradient oracle", static_cast<bool>(c.f.g), 1.0,
                  c.f.g ? "present" : "C^{1,alpha-1} membership needs grad f")))
    return r;
  if (!r.add(check_moment(id, c, [eps](const State& s) { return s.alpha - eps; }, "alpha(x) - eps"))) return r;
  if (!r.add(check_sector_or_bg(id, c))) return r;
  // alpha below 1 is lifted to 1: C^{1, alpha-1} only sees max(alpha, 1)
  ScalarField lifted = [al = c.a.alpha](const Vector& x) { return std::max(al(x), 1.0); };
  r.add(check_membership(id, c, lifted, true, "grad f in C^{max(alpha,1)-1}"));
  return r;
}

Route general_route(Context& c) {
  const std::string id = to_string(DomainStatus::VariableGeneral);
  Route r;
  const double eps = c.a.eps_gap;
  if (!r.add(check_characteristics(id, c))) return r;
  if (!r.add(check_bounded(id, c))) return r;
  if (!r.add(check_decay(id, c.f))) return r;
  if (!r.add(check_range(id, c, 0.0, false, 2.0))) return r;
  if (!r.add(check_continuity(id, c))) return r;
  if (!r.add(check_bg_gap(id, c))) return r;
  if (!r.add(check_moment(id, c, [eps](const State& s) { return s.alpha - eps; }, "alpha(x) - eps"))) return r;
  r.add(check_membership(id, c, c.a.alpha, false, "regularity per region"));
  return r;
}

}  // namespace

DomainVerdict domain_verdict(const Symbol& sym, const StateTriplet& model, const TestFunction& f, const VariableOrderFn& a,
                             const std::vector<Vector>& grid, const VerdictOptions& opt) {
  DomainVerdict v;
  if (grid.empty() || !a.alpha) {
    v.reasons.push_back(make("not-certified", "inputs", false, -1.0, grid.empty() ? "grid is empty" : "alpha missing"));
    return v;
  }
  Context c{sym, model, f, a, grid, opt, {}, {}, {}, {}, {}, false};
  const std::size_t slots = sym.state_independent() ? 1 : grid.size();
  c.sector.resize(slots);
  c.bg.resize(slots);
  c.sector_err.resize(slots);
  c.bg_err.resize(slots);
  c.states.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto& s = c.states[i];
    s.x = grid[i];
    try {
      s.alpha = a(grid[i]);
      s.t = model.at(grid[i]);
      s.have = true;
    } catch (const Error& e) {
      s.error = e.what();
    }
  }
  const std::pair<DomainStatus, Route (*)(Context&)> routes[] = {
      {DomainStatus::LevyConstantOrder, levy_route},
      {DomainStatus::VariableZeroOrder, zero_order_route},
      {DomainStatus::VariableFirstOrder, first_order_route},
      {DomainStatus::VariableGeneral, general_route},
  };
  std::vector<ConditionCheck> tried;
  for (const auto& [status, run] : routes) {
    Route r = run(c);
    if (all_pass(r.checks)) {
      v.status = status;
      v.reasons = std::move(r.checks);
      v.indeterminate_band = false;
      return v;
    }
    tried.insert(tried.end(), r.checks.begin(), r.checks.end());
  }
  v.reasons = std::move(tried);
  v.indeterminate_band = c.indeterminate;
  return v;
}

DomainVerdict domain_verdict(const Symbol& sym, const TestFunction& f, const VariableOrderFn& a,
                             const std::vector<Vector>& grid, const VerdictOptions& opt) {
  StateTriplet st;
  try {
    st = sym.state_triplet();
  } catch (const Error& e) {
    DomainVerdict v;
    v.reasons.push_back(make("not-certified", "characteristics available", false, -1.0, e.what()));
    return v;
  }
  return domain_verdict(sym, st, f, a, grid, opt);
}

}  // namespace levygen
