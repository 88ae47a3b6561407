#include "levygen/generator.hpp"

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

// Radii in (a, b) where the ray x + r*dir passes through a kink of f.
std::vector<double> kink_breaks(const TestFunction& f, const Vector& x, const Vector& dir, double a, double b) {
  std::vector<double> out;
  for (const auto& k : f.kinks) {
    Vector v = k - x;
    double r = v.dot(dir);
    if (r <= a || r >= b) continue;
    if ((v - r * dir).norm() <= 1e-12 * std::max(1.0, v.norm())) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class F>
double gl_split(F&& fn, double a, double b, const std::vector<double>& breaks, double width, long& ev) {
  double s = 0.0, lo = a;
  auto piece = [&](double p, double q) {
    long panels = width > 0.0 && q - p > width ? static_cast<long>(std::ceil((q - p) / width)) : 1;
    ev += panels * GaussLegendre20::n;
    s += gl_panels(fn, p, q, width);
  };
  for (double r : breaks) {
    piece(lo, r);
    lo = r;
  }
  piece(lo, b);
  return s;
}

struct Setup {
  const TestFunction& f;
  const Vector& x;
  double fx;
  Vector gx;
  bool compensate;
};

// int_a^b rho(r) [f(x + r dir) - f(x) - r g.dir] dr, or the paired version over dir and -dir.
Complex inner_segment(const Setup& s, const Ray& ray, const Ray* anti, double a, double b, long& ev) {
  const Vector& th = ray.direction;
  if (anti) {
    auto br = kink_breaks(s.f, s.x, th, a, b);
    auto br2 = kink_breaks(s.f, s.x, -th, a, b);
    br.insert(br.end(), br2.begin(), br2.end());
    std::sort(br.begin(), br.end());
    auto fn = [&](double r) { return (s.f.f(s.x + r * th) + s.f.f(s.x - r * th) - 2.0 * s.fx) * ray.rho(r); };
    return {gl_split(fn, a, b, br, 0.0, ev), 0.0};
  }
  double gd = s.compensate ? s.gx.dot(th) : 0.0;
  auto br = kink_breaks(s.f, s.x, th, a, b);
  auto fn = [&](double r) { return (s.f.f(s.x + r * th) - s.fx - r * gd) * ray.rho(r); };
  double v = gl_split(fn, a, b, br, 0.0, ev);
  if (s.compensate) return {v, 0.0};
  // ZeroOrder needs absolute convergence; mirrored rays would hide a divergent
  // linear part, so the absolute integrand rides along in the imaginary slot
  auto fa = [&](double r) { return std::abs(s.f.f(s.x + r * th) - s.fx) * ray.rho(r); };
  return {v, gl_split(fa, a, b, br, 0.0, ev)};
}

Complex outer_segment(const Setup& s, const Ray& ray, double a, double b, double panel, double detail, long& ev) {
  const Vector& th = ray.direction;
  const auto& F = s.f;
  ev += GaussLegendre20::n;
  double mass = gl_panel(ray.rho, a, b);
  if (F.frequency) {
    ev += GaussLegendre20::n;
    double w = F.frequency->dot(th);
    double psi = F.frequency->dot(s.x) + F.phase;
    Complex fl = filon(ray.rho, a, b, w);
    double part = F.amplitude * (std::exp(Complex(0.0, psi)) * fl).real();
    return {part - s.fx * mass, 0.0};
  }
  double width = a < s.x.norm() + detail ? panel : 0.0;
  auto fn = [&](double r) { return F.f(s.x + r * th) * ray.rho(r); };
  double part = gl_split(fn, a, b, kink_breaks(F, s.x, th, a, b), width, ev);
  return {part - s.fx * mass, 0.0};
}

bool is_zero_matrix(const Matrix& Q) { return Q.size() == 0 || Q.cwiseAbs().maxCoeff() == 0.0; }

GeneratorResult apply_impl(const LevyTriplet& t, const TestFunction& f, const Vector& x, GeneratorForm form,
                           const GeneratorOptions& opt, bool gradient_optional) {
  const int d = t.dim();
  if (x.size() != d || f.d != d) throw DomainError("state, triplet and test function dimensions differ");
  GeneratorResult res;
  res.form = form;
  const bool compensate = form != GeneratorForm::ZeroOrder;
  const bool symmetric_pairs = compensate && opt.pair_symmetric && t.nu.rays().symmetric;

  if (form == GeneratorForm::ZeroOrder || form == GeneratorForm::FirstOrder) {
    if (!is_zero_matrix(t.Q))
      throw ContractError(to_string(form) + " form requires Q = 0; use SecondOrder for a diffusion part");
  }
  if (compensate && !f.g && !(gradient_optional && symmetric_pairs && t.b.norm() == 0.0))
    throw ContractError(to_string(form) + " form requires a gradient oracle");
  if (form == GeneratorForm::SecondOrder && !f.h) throw ContractError("SecondOrder form requires a Hessian oracle");

  if (form == GeneratorForm::ZeroOrder) {
    Vector comp = zeros(d);
    bool known = true;
    try {
      comp = compensator_drift(t.nu);
    } catch (const ContractError&) {
      known = false;
    }
    if (!known && t.b.norm() != 0.0)
      throw ContractError("ZeroOrder form needs b = int_{|y|<1} y nu(dy), but the compensator diverges");
    if (known && (t.b - comp).norm() > opt.drift_tol * std::max(1.0, comp.norm()))
      throw ContractError("ZeroOrder form needs b = compensator drift; |b - compensator| = " + fmt((t.b - comp).norm()));
    if (opt.order > 0.0) {
      auto m = fractional_moment(t.nu, opt.order, Region::ball_closed(1.0));
      if (m.infinite)
        throw InsufficientRegularity("insufficient regularity at x for this form: int_{|y|<=1} |y|^" + fmt(opt.order) +
                                     " nu(dy) diverges");
    }
  }
  if (f.is_zero()) return res;

  Setup s{f, x, f.f(x), zeros(d), compensate};
  if (compensate && f.g) s.gx = f.g(x);

  // atoms exactly
  for (const auto& a : t.nu.atom_list()) {
    double v = f.f(x + a.location) - s.fx;
    if (compensate && a.location.norm() < 1.0) v -= s.gx.dot(a.location);
    res.atoms += a.weight * v;
  }
  if (compensate && f.g) res.drift_term = t.b.dot(s.gx);
  if (form == GeneratorForm::SecondOrder) res.diffusion_term = 0.5 * (t.Q.cwiseProduct(f.h(x))).sum();

  const auto& rd = t.nu.rays();
  if (!rd.rays.empty()) {
    IntegrationOptions io;
    io.tol = opt.tol;
    io.pair_antipodes = symmetric_pairs;
    io.r_min = compensate ? 1e-6 : 1e-10;
    SegmentFn inner = [&s, symmetric_pairs](const Ray& ray, const Ray* anti, double a, double b, long& ev) {
      return inner_segment(s, ray, symmetric_pairs ? anti : nullptr, a, b, ev);
    };
    auto in = integrate_rays(rd, inner, 0.0, 1.0, io);
    if (in.divergent || !std::isfinite(in.value.real()))
      throw InsufficientRegularity("insufficient regularity at x = " + fmt(x[0]) + (d > 1 ? ",..." : "") +
                                   " for the " + to_string(form) + " form: inner shells do not converge");
    IntegrationOptions oo;
    oo.tol = opt.tol;
    oo.min_extent = x.norm() + opt.detail_radius;
    const double panel = opt.panel, detail = opt.detail_radius;
    SegmentFn outer = [&s, panel, detail](const Ray& ray, const Ray*, double a, double b, long& ev) {
      return outer_segment(s, ray, a, b, panel, detail, ev);
    };
    auto out = integrate_rays(rd, outer, 1.0, kInf, oo);
    if (out.divergent || !std::isfinite(out.value.real()))
      throw NonConvergence("outer integral of f(x+y) - f(x) does not converge", in.value + out.value,
                           in.abs_error + out.abs_error);
    res.inner = in.value.real();
    res.outer = out.value.real();
    res.abs_error = in.abs_error + out.abs_error;
    res.evaluations = in.evaluations + out.evaluations;
  }
  res.value = res.inner + res.outer + res.atoms + res.drift_term + res.diffusion_term;
  return res;
}

}  // namespace

GeneratorForm select_form(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("order must lie in (0,2], got " + fmt(alpha));
  if (alpha <= 1.0) return GeneratorForm::ZeroOrder;
  if (alpha < 2.0) return GeneratorForm::FirstOrder;
  return GeneratorForm::SecondOrder;
}

std::string to_string(GeneratorForm form) {
  switch (form) {
    case GeneratorForm::ZeroOrder: return "ZeroOrder";
    case GeneratorForm::FirstOrder: return "FirstOrder";
    case GeneratorForm::SecondOrder: return "SecondOrder";
  }
  return "ZeroOrder";
}

GeneratorResult apply_pointwise(const LevyTriplet& t, const TestFunction& f, const Vector& x, GeneratorForm form,
                                const GeneratorOptions& opt) {
  return apply_impl(t, f, x, form, opt, false);
}

GeneratorResult fractional_laplacian(const TestFunction& f, const Vector& x, double alpha, const GeneratorOptions& opt) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("fractional Laplacian order must lie in (0,2)");
  const int d = f.d;
  auto t = LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(d, c_alpha(alpha, d), alpha));
  GeneratorOptions o = opt;
  o.pair_symmetric = true;
  return apply_impl(t, f, x, alpha < 1.0 ? GeneratorForm::ZeroOrder : GeneratorForm::FirstOrder, o, true);
}

GridReport apply_on_grid(const StateTriplet& model, const ScalarField& alpha, const TestFunction& f,
                         const std::vector<Vector>& grid, const GeneratorOptions& opt, int workers) {
  if (grid.empty()) throw ContractError("state grid is empty");
  GridReport rep;
  rep.rows.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    GridRow& row = rep.rows[i];
    row.x = grid[i];
    try {
      double a = alpha(grid[i]);
      row.form = select_form(a);
      GeneratorOptions o = opt;
      if (row.form == GeneratorForm::ZeroOrder) o.order = a;
      auto r = apply_pointwise(model.at(grid[i]), f, grid[i], row.form, o);
      row.value = r.value;
      row.abs_error = r.abs_error;
      row.ok = true;
      row.status = "ok";
    } catch (const Error& e) {
      row.ok = false;
      row.status = e.what();
    }
  });
  double maxall = 0.0, maxouter = 0.0, rmax = 0.0;
  for (const auto& r : rep.rows) rmax = std::max(rmax, r.x.norm());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    rep.all_ok = rep.all_ok && r.ok;
    if (!r.ok) continue;
    maxall = std::max(maxall, std::abs(r.value));
    if (r.x.norm() >= rmax * (1.0 - 1e-12)) maxouter = std::max(maxouter, std::abs(r.value));
    if (i + 1 < rep.rows.size() && rep.rows[i + 1].ok)
      rep.max_oscillation = std::max(rep.max_oscillation, std::abs(rep.rows[i + 1].value - r.value));
  }
  rep.outer_shell_ratio = maxall > 0.0 ? maxouter / maxall : 0.0;
  return rep;
}

}  // namespace levygen
