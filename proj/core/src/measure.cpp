#include "levygen/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levygen/directions.hpp"

namespace levygen {

double RayDecomposition::max_support() const {
  double s = 0.0;
  for (const auto& r : rays)
    if (r.weight > 0.0) s = std::max(s, r.support);
  return s;
}

namespace {

bool atoms_mirrored(const std::vector<Atom>& atoms) {
  for (const auto& a : atoms) {
    bool found = false;
    for (const auto& b : atoms) {
      if ((a.location + b.location).norm() <= 1e-14 * a.location.norm() &&
          std::abs(a.weight - b.weight) <= 1e-14 * a.weight) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

LevyMeasureSpec LevyMeasureSpec::zero(int d) { return atoms(d, {}); }

LevyMeasureSpec LevyMeasureSpec::atoms(int d, std::vector<Atom> list) {
  require_dimension(d);
  for (const auto& a : list) {
    if (a.location.size() != d) throw DomainError("atom location has wrong dimension");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw DomainError("atom weights must be positive and finite");
    if (a.location.norm() == 0.0) throw DomainError("atoms must exclude the origin");
  }
  LevyMeasureSpec m;
  m.d_ = d;
  m.variant_ = Variant::Atoms;
  m.atoms_symmetric_ = atoms_mirrored(list);
  auto rd = std::make_shared<RayDecomposition>();
  rd->atoms = std::move(list);
  rd->symmetric = true;
  m.rays_ = rd;
  return m;
}

LevyMeasureSpec LevyMeasureSpec::isotropic_power(int d, double intensity, double alpha, double r_trunc) {
  require_dimension(d);
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("isotropic-power exponent must lie in (0,2)");
  if (!(intensity > 0.0) || !std::isfinite(intensity)) throw DomainError("isotropic-power intensity must be positive");
  if (!(r_trunc > 0.0)) throw DomainError("truncation radius must be positive");
  LevyMeasureSpec m;
  m.d_ = d;
  m.variant_ = Variant::IsotropicPower;
  m.c_ = intensity;
  m.alpha_ = alpha;
  m.r_trunc_ = r_trunc;
  auto rd = std::make_shared<RayDecomposition>();
  const double c = intensity, e = -1.0 - alpha;
  for (const auto& node : sphere_rule(d)) {
    Ray ray;
    ray.direction = node.direction;
    ray.weight = node.weight;
    ray.rho = [c, e](double r) { return c * std::pow(r, e); };
    ray.support = r_trunc;
    ray.antipode = node.antipode;
    rd->rays.push_back(std::move(ray));
  }
  rd->symmetric = true;
  m.rays_ = rd;
  return m;
}

LevyMeasureSpec LevyMeasureSpec::density(int d, DensitySpec spec) {
  require_dimension(d);
  if (!spec.n) throw DomainError("density callable missing");
  if (!(spec.singularity < 2.0)) throw DomainError("density singularity exponent must be < 2");
  if (spec.tail == TailClass::Compact && !(spec.tail_param > 0.0))
    throw DomainError("compact density needs a positive support radius");
  LevyMeasureSpec m;
  m.d_ = d;
  m.variant_ = Variant::Density;
  m.density_ = std::make_shared<const DensitySpec>(std::move(spec));
  auto rd = std::make_shared<RayDecomposition>();
  const double support = m.density_->tail == TailClass::Compact ? m.density_->tail_param : kInf;
  for (const auto& node : sphere_rule(d)) {
    Ray ray;
    ray.direction = node.direction;
    ray.weight = node.weight;
    auto ds = m.density_;
    Vector th = node.direction;
    ray.rho = [ds, th, d](double r) {
      Vector y = r * th;
      double v = ds->n(y);
      return d == 1 ? v : v * std::pow(r, d - 1);
    };
    ray.support = support;
    ray.antipode = node.antipode;
    rd->rays.push_back(std::move(ray));
  }
  rd->symmetric = m.density_->symmetric;
  m.rays_ = rd;
  return m;
}

LevyMeasureSpec LevyMeasureSpec::pushforward(const LevyMeasureSpec& base, const Matrix& M) {
  if (M.cols() != base.dim()) throw DomainError("pushforward map has wrong number of columns");
  require_dimension(static_cast<int>(M.rows()));
  LevyMeasureSpec m;
  m.d_ = static_cast<int>(M.rows());
  m.variant_ = Variant::Pushforward;
  m.base_ = std::make_shared<const LevyMeasureSpec>(base);
  m.M_ = M;
  auto rd = std::make_shared<RayDecomposition>();
  const auto& b = base.rays();
  rd->symmetric = b.symmetric;
  rd->degenerate = b.degenerate;
  for (const auto& ray : b.rays) {
    Vector v = M * ray.direction;
    double s = v.norm();
    Ray out;
    if (s < 1e-14) {
      rd->degenerate = true;
      out.direction = Vector::Zero(m.d_);
      out.weight = 0.0;
      out.rho = [](double) { return 0.0; };
      out.support = 0.0;
    } else {
      out.direction = v / s;
      out.weight = ray.weight;
      auto rho = ray.rho;
      out.rho = [rho, s](double r) { return rho(r / s) / s; };
      out.support = ray.support * s;
    }
    out.antipode = ray.antipode;
    rd->rays.push_back(std::move(out));
  }
  for (const auto& a : b.atoms) {
    Vector y = M * a.location;
    if (y.norm() < 1e-14) {
      rd->degenerate = true;
      continue;
    }
    rd->atoms.push_back({y, a.weight});
  }
  m.atoms_symmetric_ = atoms_mirrored(rd->atoms);
  m.rays_ = rd;
  return m;
}

bool LevyMeasureSpec::is_zero() const {
  if (!rays_->atoms.empty()) return false;
  for (const auto& r : rays_->rays)
    if (r.weight > 0.0) return false;
  return true;
}

bool LevyMeasureSpec::is_finite_atomic() const {
  for (const auto& r : rays_->rays)
    if (r.weight > 0.0) return false;
  return true;
}

double LevyMeasureSpec::support_radius() const {
  double s = rays_->max_support();
  for (const auto& a : rays_->atoms) s = std::max(s, a.location.norm());
  return s;
}

double LevyMeasureSpec::singularity() const {
  switch (variant_) {
    case Variant::Atoms: return 0.0;
    case Variant::IsotropicPower: return alpha_;
    case Variant::Density: return density_->singularity;
    case Variant::Pushforward: return base_->singularity();
  }
  return 0.0;
}

std::string LevyMeasureSpec::describe() const {
  std::ostringstream os;
  switch (variant_) {
    case Variant::Atoms:
      os << "atoms(" << rays_->atoms.size() << ")";
      break;
    case Variant::IsotropicPower:
      os << "isotropic-power(c=" << c_ << ", alpha=" << alpha_;
      if (std::isfinite(r_trunc_)) os << ", R=" << r_trunc_;
      os << ")";
      break;
    case Variant::Density:
      os << "density(" << (density_->description.empty() ? "n" : density_->description) << ")";
      break;
    case Variant::Pushforward:
      os << "pushforward(" << base_->describe() << ")";
      break;
  }
  os << " in R^" << d_;
  return os.str();
}

bool Region::contains(double r) const {
  if (kind == Kind::Inside) return closed ? r <= radius : r < radius;
  return closed ? r >= radius : r > radius;
}

IntegralReport integrate_rays(const RayDecomposition& rd, const SegmentFn& seg, double r_lo, double r_hi,
                              const IntegrationOptions& opt) {
  IntegralReport rep;
  if (rd.rays.empty()) return rep;
  const double supp = rd.max_support();
  const bool pair = opt.pair_antipodes && rd.symmetric;
  ShellOptions so;
  so.tol = opt.tol;
  so.r_min = opt.r_min;
  so.r_max = opt.r_max;
  so.min_extent = opt.min_extent;
  so.extrapolate = opt.extrapolate;
  ShellFn shell = [&](double a, double b, long& ev) {
    Complex s{};
    for (std::size_t i = 0; i < rd.rays.size(); ++i) {
      const Ray& ray = rd.rays[i];
      if (ray.weight <= 0.0) continue;
      const Ray* anti = nullptr;
      if (pair && ray.antipode >= 0) {
        if (static_cast<std::size_t>(ray.antipode) < i) continue;
        anti = &rd.rays[static_cast<std::size_t>(ray.antipode)];
      }
      double hi = std::min(b, ray.support);
      if (hi <= a) continue;
      s += ray.weight * seg(ray, anti, a, hi, ev);
    }
    return s;
  };
  const double top = std::min(r_hi, supp);
  ShellResult r;
  if (r_lo <= 0.0) {
    if (!(top > 0.0)) return rep;
    if (!std::isfinite(top)) throw ContractError("inward sweep needs a finite upper radius");
    r = inward_shells(shell, top, so);
  } else {
    if (top <= r_lo) return rep;
    r = outward_shells(shell, r_lo, top, so);
  }
  rep.value = r.value;
  rep.abs_error = r.abs_error;
  rep.evaluations = r.evaluations;
  rep.divergent = r.divergent;
  rep.shells = r.shells;
  return rep;
}

IntegralReport integrate(const LevyMeasureSpec& nu, const std::function<Complex(const Vector&)>& phi,
                         const Region& region, const IntegrationOptions& opt) {
  SegmentFn seg = [&](const Ray& ray, const Ray*, double a, double b, long& ev) {
    auto f = [&](double r) -> Complex { return phi(r * ray.direction) * ray.rho(r); };
    long panels = opt.panel_width > 0.0 && b - a > opt.panel_width ? static_cast<long>(std::ceil((b - a) / opt.panel_width)) : 1;
    ev += panels * GaussLegendre20::n;
    return gl_panels(f, a, b, opt.panel_width);
  };
  IntegralReport rep;
  if (region.kind == Region::Kind::Inside) {
    rep = integrate_rays(nu.rays(), seg, 0.0, region.radius, opt);
  } else if (region.radius <= 0.0) {
    IntegralReport in = integrate_rays(nu.rays(), seg, 0.0, 1.0, opt);
    IntegralReport out = integrate_rays(nu.rays(), seg, 1.0, kInf, opt);
    rep.value = in.value + out.value;
    rep.abs_error = in.abs_error + out.abs_error;
    rep.evaluations = in.evaluations + out.evaluations;
    rep.divergent = in.divergent || out.divergent;
    rep.shells = in.shells + out.shells;
  } else {
    rep = integrate_rays(nu.rays(), seg, region.radius, kInf, opt);
  }
  if (rep.divergent) return rep;
  Complex atoms{};
  for (const auto& a : nu.atom_list()) {
    if (region.kind == Region::Kind::Outside && region.radius <= 0.0) {
      atoms += a.weight * phi(a.location);
      continue;
    }
    if (region.contains(a.location.norm())) atoms += a.weight * phi(a.location);
  }
  rep.value += atoms;
  return rep;
}

MomentReport fractional_moment(const LevyMeasureSpec& nu, double kappa, const Region& region, double tol) {
  if (!(kappa > 0.0)) throw DomainError("moment order must be positive");
  if (region.kind == Region::Kind::Outside && region.radius < 0.0) throw DomainError("tail radius must be >= 0");
  IntegrationOptions opt;
  opt.tol = tol;
  auto rep = integrate(nu, [kappa](const Vector& y) { return Complex(std::pow(y.norm(), kappa), 0.0); }, region, opt);
  MomentReport m;
  m.nodes_used = rep.evaluations;
  if (rep.divergent) {
    m.infinite = true;
    m.value = kInf;
    m.abs_error = kInf;
    return m;
  }
  m.value = rep.value.real();
  m.abs_error = rep.abs_error;
  return m;
}

double tail_mass(const LevyMeasureSpec& nu, double R) {
  if (!(R > 0.0)) throw DomainError("tail radius must be positive");
  auto rep = integrate(nu, [](const Vector&) { return Complex(1.0, 0.0); }, Region::outside_open(R));
  if (rep.divergent) return kInf;
  return rep.value.real();
}

Vector compensator_drift(const LevyMeasureSpec& nu) {
  const int d = nu.dim();
  if (nu.is_symmetric()) return Vector::Zero(d);
  auto m = fractional_moment(nu, 1.0, Region::ball_closed(1.0));
  if (m.infinite) throw ContractError("compensator undefined: first moment on |y|<=1 diverges");
  Vector b(d);
  for (int k = 0; k < d; ++k) {
    auto rep = integrate(nu, [k](const Vector& y) { return Complex(y[k], 0.0); }, Region::ball_open(1.0));
    b[k] = rep.value.real();
  }
  return b;
}

double c_alpha(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("c_alpha needs alpha in (0,2)");
  require_dimension(d);
  double lg = std::lgamma(0.5 * (alpha + d)) - std::lgamma(1.0 - 0.5 * alpha);
  return alpha * std::exp2(alpha - 1.0) * std::pow(kPi, -0.5 * d) * std::exp(lg);
}

double levy_integrability(const LevyMeasureSpec& nu) {
  auto inner = fractional_moment(nu, 2.0, Region::ball_closed(1.0));
  if (inner.infinite) throw DomainError("int min(|y|^2,1) nu(dy) diverges near the origin");
  double tail = tail_mass(nu, 1.0);
  if (!std::isfinite(tail)) throw DomainError("nu has infinite mass outside the unit ball");
  return inner.value + tail;
}

double one_minus_cos_transform(const LevyMeasureSpec& nu, double xi) {
  if (nu.dim() != 1) throw ContractError("one_minus_cos_transform is defined for d = 1");
  double w = std::abs(xi);
  if (w == 0.0) return 0.0;
  double out = 0.0;
  for (const auto& a : nu.atom_list()) {
    double h = std::sin(0.5 * a.location[0] * w);
    out += a.weight * 2.0 * h * h;
  }
  const auto& rd = nu.rays();
  if (rd.rays.empty()) return out;

  // below r = 1/w the integrand is evaluated directly; above it as mass minus cosine transform
  const double split = 1.0 / w;
  IntegrationOptions opt;
  opt.tol = 1e-11;
  SegmentFn inner = [w](const Ray& ray, const Ray*, double a, double b, long& ev) {
    ev += GaussLegendre20::n;
    return Complex(gl_panel([&](double r) {
                     double h = std::sin(0.5 * r * w);
                     return 2.0 * h * h * ray.rho(r);
                   }, a, b),
                   0.0);
  };
  SegmentFn outer = [w](const Ray& ray, const Ray*, double a, double b, long& ev) {
    ev += 2 * GaussLegendre20::n;
    double mass = gl_panel(ray.rho, a, b);
    return Complex(mass - filon(ray.rho, a, b, w).real(), 0.0);
  };
  auto in = integrate_rays(rd, inner, 0.0, split, opt);
  auto ou = integrate_rays(rd, outer, split, kInf, opt);
  if (in.divergent || ou.divergent) return kInf;
  return out + in.value.real() + ou.value.real();
}

IdentityCheck kernel_identity_check(double y, double alpha) {
  if (y == 0.0) throw DomainError("kernel identity needs y != 0");
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("kernel identity needs alpha in (0,2)");
  IdentityCheck ic;
  ic.lhs = std::pow(std::abs(y), alpha);
  auto unit = LevyMeasureSpec::isotropic_power(1, 1.0, alpha);
  ic.rhs = c_alpha(alpha, 1) * one_minus_cos_transform(unit, y);
  ic.rhs_divergent = !std::isfinite(ic.rhs);
  ic.rel_err = std::abs(ic.lhs - ic.rhs) / ic.lhs;
  return ic;
}

IdentityCheck aux1_moment_identity(const LevyMeasureSpec& nu, double kappa) {
  if (nu.dim() != 1) throw ContractError("aux1 identity is implemented for d = 1");
  if (!(kappa > 0.0 && kappa < 2.0)) throw DomainError("aux1 identity needs kappa in (0,2)");
  if (nu.support_radius() > 1.0 + 1e-12) throw ContractError("aux1 identity needs nu supported in |y| <= 1");
  IdentityCheck ic;
  auto lhs = fractional_moment(nu, kappa, Region::ball_closed(1.0), 1e-9);
  ic.lhs_divergent = lhs.infinite;
  ic.lhs = lhs.value;

  const double e = -1.0 - kappa;
  auto integrand = [&](double xi) { return one_minus_cos_transform(nu, xi) * std::pow(xi, e); };
  ShellOptions so;
  so.tol = 1e-7;
  ShellFn inner = [&](double a, double b, long& ev) {
    ev += GaussLegendre20::n;
    return Complex(gl_panel(integrand, a, b), 0.0);
  };
  // The transform oscillates with period >= 2*pi (support in |y| <= 1) but the
  // oscillating part decays like 1/xi, so far shells only need 16 panels.
  ShellFn outer = [&](double a, double b, long& ev) {
    double width = std::max(2.0 * kPi, (b - a) / 16.0);
    ev += GaussLegendre20::n * static_cast<long>(std::ceil((b - a) / width));
    return Complex(gl_panels(integrand, a, b, width), 0.0);
  };
  auto in = inward_shells(inner, 1.0, so);

  // Outer shells [2^k, 2^{k+1}] up to 2^16. For large xi the transform behaves
  // like A xi^s - B, s the singularity exponent of nu at 0, so shell
  // contributions follow A q1^k + B q2^k with q1 = 2^{s-kappa}, q2 = 2^{-kappa}.
  // Both amplitudes are fitted on the last shells and the tail summed in closed form.
  const int K = 16;
  std::vector<Complex> shells;
  long ev = 0;
  for (int k = 0; k < K; ++k) shells.push_back(outer(std::ldexp(1.0, k), std::ldexp(1.0, k + 1), ev));
  bool outer_divergent = shells_nondecreasing(shells);
  double outer_sum = 0.0;
  for (const auto& c : shells) outer_sum += c.real();
  const double sing = nu.singularity();
  const double q1 = std::exp2(sing - kappa), q2 = std::exp2(-kappa);
  if (q1 >= 1.0 - 1e-12) outer_divergent = true;
  if (!outer_divergent) {
    const int m = 6;
    double tail;
    if (sing > 0.05) {
      // least squares for (A, B) on k = K-m .. K-1
      double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
      for (int k = K - m; k < K; ++k) {
        double a1 = std::pow(q1, k - (K - 1)), a2 = std::pow(q2, k - (K - 1));
        s11 += a1 * a1;
        s12 += a1 * a2;
        s22 += a2 * a2;
        t1 += a1 * shells[k].real();
        t2 += a2 * shells[k].real();
      }
      double det = s11 * s22 - s12 * s12;
      double A = (t1 * s22 - t2 * s12) / det, B = (s11 * t2 - s12 * t1) / det;
      tail = A * q1 / (1.0 - q1) + B * q2 / (1.0 - q2);
    } else {
      tail = shells.back().real() * q2 / (1.0 - q2);
    }
    outer_sum += tail;
  }
  ic.rhs_divergent = in.divergent || outer_divergent;
  ic.rhs = ic.rhs_divergent ? kInf : 2.0 * c_alpha(kappa, 1) * (in.value.real() + outer_sum);
  if (ic.lhs_divergent || ic.rhs_divergent)
    ic.rel_err = ic.lhs_divergent == ic.rhs_divergent ? 0.0 : kInf;
  else
    ic.rel_err = ic.lhs > 0.0 ? std::abs(ic.lhs - ic.rhs) / ic.lhs : std::abs(ic.rhs);
  return ic;
}

double GrowthFunction::operator()(double r) const {
  double v = 1.0;
  if (p != 0.0) v *= std::pow(1.0 + r, p);
  if (beta != 0.0) v *= std::exp(beta * std::pow(r, kappa));
  return v;
}

std::string GrowthFunction::describe() const {
  std::ostringstream os;
  os << "(1+|y|)^" << p;
  if (beta != 0.0) os << " * exp(" << beta << "|y|^" << kappa << ")";
  return os.str();
}

void GrowthFunction::validate() const {
  if (!(p >= 0.0)) throw DomainError("growth function exponent p must be >= 0");
  if (!(beta >= 0.0)) throw DomainError("growth function rate beta must be >= 0");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("growth function kappa must lie in (0,1]");
}

SubmultiplicativeReport submultiplicative_bounds(const GrowthFunction& g, const std::vector<LevyMeasureSpec>& family,
                                                 std::vector<double> R_grid) {
  g.validate();
  if (family.empty()) throw ContractError("submultiplicative_bounds needs at least one probe state");
  if (R_grid.empty())
    for (int j = 0; j <= 20; ++j) R_grid.push_back(std::ldexp(1.0, j));
  SubmultiplicativeReport rep;
  rep.R_grid = R_grid;
  auto phi = [&](const Vector& y) { return Complex(g(y.norm()), 0.0); };
  for (const auto& nu : family) {
    auto r = integrate(nu, phi, Region::outside_closed(1.0));
    if (r.divergent || !std::isfinite(r.value.real())) {
      rep.infinite = true;
      rep.M = kInf;
      rep.verdict = "g not in Sigma(K): integral over |y|>=1 diverges";
      return rep;
    }
    rep.M = std::max(rep.M, r.value.real());
  }
  for (double R : R_grid) {
    double m = 0.0;
    for (const auto& nu : family) {
      auto r = integrate(nu, phi, Region::outside_closed(R));
      m = std::max(m, r.value.real());
    }
    rep.M_R.push_back(m);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rep.M_R.size(); ++i)
    if (rep.M_R[i] > rep.M_R[i - 1] * (1.0 + 1e-9) + 1e-300) monotone = false;
  rep.tight = rep.M == 0.0 || (monotone && rep.M_R.back() < 0.01 * rep.M);
  rep.verdict = rep.tight ? "g in Sigma(K), tight on grid" : "g integrable but M_R did not fall below 1% of M on grid";
  return rep;
}

TargetSet TargetSet::box(const Vector& lo, const Vector& hi, bool open) {
  if (lo.size() != hi.size()) throw ContractError("box corners differ in dimension");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw ContractError("box must have lo < hi componentwise");
  TargetSet s;
  s.kind = Kind::Box;
  s.lo = lo;
  s.hi = hi;
  s.open = open;
  return s;
}

TargetSet TargetSet::annulus(int d, double r_lo, double r_hi, bool open) {
  require_dimension(d);
  if (!(r_lo > 0.0 && r_hi > r_lo)) throw ContractError("annulus needs 0 < r_lo < r_hi");
  TargetSet s;
  s.kind = Kind::Annulus;
  s.lo = Vector::Zero(d);
  s.hi = Vector::Zero(d);
  s.r_lo = r_lo;
  s.r_hi = r_hi;
  s.open = open;
  return s;
}

int TargetSet::dim() const { return static_cast<int>(lo.size()); }

bool TargetSet::contains(const Vector& y) const {
  if (kind == Kind::Annulus) {
    double r = y.norm();
    return open ? (r > r_lo && r < r_hi) : (r >= r_lo && r <= r_hi);
  }
  for (int i = 0; i < y.size(); ++i) {
    if (open ? !(y[i] > lo[i] && y[i] < hi[i]) : !(y[i] >= lo[i] && y[i] <= hi[i])) return false;
  }
  return true;
}

bool TargetSet::on_boundary(const Vector& y, double tol) const {
  if (kind == Kind::Annulus) {
    double r = y.norm();
    return std::abs(r - r_lo) <= tol * std::max(1.0, r_lo) || std::abs(r - r_hi) <= tol * std::max(1.0, r_hi);
  }
  bool inside_closed = true, touches = false;
  for (int i = 0; i < y.size(); ++i) {
    double sc = tol * std::max(1.0, std::abs(y[i]));
    if (y[i] < lo[i] - sc || y[i] > hi[i] + sc) inside_closed = false;
    if (std::abs(y[i] - lo[i]) <= sc || std::abs(y[i] - hi[i]) <= sc) touches = true;
  }
  return inside_closed && touches;
}

double TargetSet::distance_from_origin() const {
  if (kind == Kind::Annulus) return r_lo;
  double s = 0.0;
  for (int i = 0; i < lo.size(); ++i) {
    double g = std::max({lo[i], 0.0, -hi[i]});
    s += g * g;
  }
  return std::sqrt(s);
}

std::string TargetSet::describe() const {
  std::ostringstream os;
  if (kind == Kind::Annulus) {
    os << (open ? "(" : "[") << r_lo << " <= |y| <= " << r_hi << (open ? ")" : "]");
  } else {
    for (int i = 0; i < lo.size(); ++i) {
      if (i) os << " x ";
      os << (open ? "(" : "[") << lo[i] << "," << hi[i] << (open ? ")" : "]");
    }
  }
  return os.str();
}

double measure_of_set(const LevyMeasureSpec& nu, const TargetSet& A) {
  if (A.dim() != nu.dim()) throw ContractError("set and measure differ in dimension");
  if (!(A.distance_from_origin() > 0.0)) throw ContractError("set must be bounded away from the origin");
  double total = 0.0;
  for (const auto& a : nu.atom_list()) {
    if (A.on_boundary(a.location)) throw ContractError("an atom of nu lies on the boundary of the set");
    if (A.contains(a.location)) total += a.weight;
  }
  ShellOptions so;
  so.tol = 1e-11;
  for (const auto& ray : nu.rays().rays) {
    if (ray.weight <= 0.0) continue;
    double t0 = 0.0, t1 = kInf;
    if (A.kind == TargetSet::Kind::Annulus) {
      t0 = A.r_lo;
      t1 = A.r_hi;
    } else {
      for (int i = 0; i < A.dim(); ++i) {
        double u = ray.direction[i];
        if (std::abs(u) < 1e-15) {
          if (0.0 < A.lo[i] || 0.0 > A.hi[i]) t1 = -1.0;
          continue;
        }
        double p = A.lo[i] / u, q = A.hi[i] / u;
        if (p > q) std::swap(p, q);
        t0 = std::max(t0, p);
        t1 = std::min(t1, q);
      }
    }
    t1 = std::min(t1, ray.support);
    if (!(t1 > t0)) continue;
    ShellFn shell = [&](double a, double b, long& ev) {
      ev += GaussLegendre20::n;
      return Complex(gl_panel(ray.rho, a, b), 0.0);
    };
    auto r = outward_shells(shell, t0, t1, so);
    if (r.divergent) return kInf;
    total += ray.weight * r.value.real();
  }
  return total;
}

}  // namespace levygen
