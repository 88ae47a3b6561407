#include "levygen/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "levygen/directions.hpp"

namespace levygen {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ScalarField constant_field(double v) {
  return [v](const Vector&) { return v; };
}

void check_xi(int d, const Vector& xi) {
  if (xi.size() != d)
    throw DomainError("frequency has dimension " + std::to_string(xi.size()) + ", symbol expects " + std::to_string(d));
}

double checked_order(double g, double lo, double hi, bool hi_closed, const char* family) {
  bool ok = g > lo && (hi_closed ? g <= hi : g < hi);
  if (!ok || !std::isfinite(g))
    throw DomainError(std::string(family) + " order " + fmt(g) + " outside (" + fmt(lo) + "," + fmt(hi) +
                      (hi_closed ? "]" : ")"));
  return g;
}

double checked_mass(double m, const char* family) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError(std::string(family) + " parameter m must be positive, got " + fmt(m));
  return m;
}

// (k^2 + m^2)^{g/2} - m^g without cancellation for small k.
double relativistic_value(double k, double m, double g) {
  double u = (k / m) * (k / m);
  return std::pow(m, g) * std::expm1(0.5 * g * std::log1p(u));
}

double tlp_value(double k, double m, double g) {
  double u = (k / m) * (k / m);
  double a = 0.5 * g * std::log1p(u);
  double phi = g * std::atan(k / m);
  double h = std::sin(0.5 * phi);
  return std::pow(m, g) * (std::expm1(a) * std::cos(phi) - 2.0 * h * h);
}

double lamperti_value(double k, double m, double g) {
  double z = k * k + m;
  double base = std::lgamma(m + g) - std::lgamma(m);
  double delta = (std::lgamma(z + g) - std::lgamma(z)) - base;
  return std::exp(base) * std::expm1(delta);
}

Complex atom_exponent(const std::vector<Atom>& atoms, const Vector& xi) {
  Complex s{};
  for (const auto& a : atoms) {
    double w = a.location.dot(xi);
    double h = std::sin(0.5 * w);
    double im = -std::sin(w);
    if (a.location.norm() < 1.0) im += w;
    s += a.weight * Complex(2.0 * h * h, im);
  }
  return s;
}

Complex gaussian_drift_part(const LevyTriplet& t, const Vector& xi) {
  return Complex(0.5 * xi.dot(t.Q * xi), -t.b.dot(xi));
}

// 1 - cos z and z - sin z for small z by series.
double one_minus_cos(double z) {
  double h = std::sin(0.5 * z);
  return 2.0 * h * h;
}

double z_minus_sin(double z) {
  if (std::abs(z) < 0.1) {
    double z2 = z * z;
    return z * z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)));
  }
  return z - std::sin(z);
}

// int_a^b rho(r) (1 - e^{i w r} + i w r [compensated]) dr
Complex ray_piece(const std::function<double(double)>& rho, double a, double b, double w, bool compensated, long& ev) {
  if (w == 0.0) return {};
  const auto& u = GaussLegendre20::nodes();
  const auto& wt = GaussLegendre20::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, GaussLegendre20::n> f{};
  for (int j = 0; j < GaussLegendre20::n; ++j) f[j] = rho(c + h * u[j]);
  ev += GaussLegendre20::n;
  if (std::abs(w) * b <= 2.0) {
    double re = 0.0, im = 0.0;
    for (int j = 0; j < GaussLegendre20::n; ++j) {
      double z = w * (c + h * u[j]);
      re += wt[j] * f[j] * one_minus_cos(z);
      im += wt[j] * f[j] * (compensated ? z_minus_sin(z) : -std::sin(z));
    }
    return Complex(re, im) * h;
  }
  double mass = 0.0, m1 = 0.0;
  for (int j = 0; j < GaussLegendre20::n; ++j) {
    mass += wt[j] * f[j];
    m1 += wt[j] * f[j] * (c + h * u[j]);
  }
  auto W = filon_weights(w * h);
  Complex F{};
  for (int j = 0; j < GaussLegendre20::n; ++j) F += f[j] * W[j];
  F *= h * std::exp(Complex(0.0, w * c));
  Complex out(mass * h, compensated ? w * m1 * h : 0.0);
  return out - F;
}

double golden_max(const std::function<double(double)>& f, double a, double b, int iters, double& arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    arg = x1;
    return f1;
  }
  arg = x2;
  return f2;
}

struct SlopeFit {
  double slope = 0.0, stderr_ = 0.0;
};

SlopeFit log_slope(const std::vector<double>& r, const std::vector<double>& v, std::size_t from) {
  std::vector<double> X, Y;
  for (std::size_t i = from; i < r.size(); ++i) {
    if (v[i] > 0.0) {
      X.push_back(std::log(r[i]));
      Y.push_back(std::log(v[i]));
    }
  }
  SlopeFit fit;
  const std::size_t n = X.size();
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  fit.slope = sxy / sxx;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = Y[i] - my - fit.slope * (X[i] - mx);
      ss += e * e;
    }
    fit.stderr_ = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

}  // namespace

// ---------------------------------------------------------------------------
// triplets

LevyTriplet LevyTriplet::make(const Vector& b, const Matrix& Q, LevyMeasureSpec nu) {
  LevyTriplet t{b, Q, std::move(nu)};
  t.validate();
  return t;
}

LevyTriplet LevyTriplet::pure_jump(LevyMeasureSpec nu) {
  int d = nu.dim();
  return make(zeros(d), Matrix::Zero(d, d), std::move(nu));
}

void LevyTriplet::validate() const {
  const int d = dim();
  require_dimension(d);
  if (Q.rows() != d || Q.cols() != d) throw DomainError("covariance must be d x d");
  if (nu.dim() != d) throw DomainError("Levy measure dimension does not match the drift");
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(b[i])) throw DomainError("drift must be finite");
  double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) throw DomainError("covariance must be positive semidefinite");
  levy_integrability(nu);
}

LevyTriplet StateTriplet::at(const Vector& x) const {
  if (x.size() != d) throw DomainError("state has wrong dimension");
  return LevyTriplet::make(b(x), Q(x), nu(x));
}

StateTriplet StateTriplet::constant(const LevyTriplet& t) {
  t.validate();
  StateTriplet st;
  st.d = t.dim();
  st.b = [b = t.b](const Vector&) { return b; };
  st.Q = [Q = t.Q](const Vector&) { return Q; };
  st.nu = [nu = t.nu](const Vector&) { return nu; };
  return st;
}

// ---------------------------------------------------------------------------
// symbol

struct Symbol::Impl {
  Family family = Family::Custom;
  int d = 1;
  ScalarField gamma, m;
  std::string desc;
  bool constant = false;
  LevyTriplet triplet;
  bool closed_form = false;
  std::shared_ptr<const Symbol> driver;
  MatrixField sigma;
  StateTriplet st;
  Fn fn;
};

Symbol Symbol::stable_like(int d, ScalarField gamma, std::string gamma_desc) {
  require_dimension(d);
  auto p = std::make_shared<Impl>();
  p->family = Family::StableLike;
  p->d = d;
  p->gamma = std::move(gamma);
  p->desc = "|xi|^{" + gamma_desc + "}";
  Symbol s;
  s.p_ = p;
  return s;
}

Symbol Symbol::stable_like(int d, double gamma) {
  checked_order(gamma, 0.0, 2.0, true, "stable-like");
  Symbol s = stable_like(d, constant_field(gamma), fmt(gamma));
  std::const_pointer_cast<Impl>(s.p_)->constant = true;
  return s;
}

namespace {

Symbol::Impl* tempered_impl(Symbol::Family f, int d, ScalarField m, ScalarField gamma, std::string desc) {
  require_dimension(d);
  auto* p = new Symbol::Impl;
  p->family = f;
  p->d = d;
  p->m = std::move(m);
  p->gamma = std::move(gamma);
  p->desc = std::move(desc);
  return p;
}

}  // namespace

Symbol Symbol::relativistic(int d, ScalarField m, ScalarField gamma, std::string desc) {
  Symbol s;
  s.p_.reset(tempered_impl(Family::Relativistic, d, std::move(m), std::move(gamma),
                           desc.empty() ? "(|xi|^2 + m^2)^{gamma/2} - m^gamma" : desc));
  return s;
}

Symbol Symbol::relativistic(int d, double m, double gamma) {
  checked_mass(m, "relativistic");
  checked_order(gamma, 0.0, 2.0, false, "relativistic");
  Symbol s = relativistic(d, constant_field(m), constant_field(gamma),
                          "(|xi|^2 + " + fmt(m * m) + ")^{" + fmt(gamma / 2) + "} - " + fmt(std::pow(m, gamma)));
  std::const_pointer_cast<Impl>(s.p_)->constant = true;
  return s;
}

Symbol Symbol::tlp_like(int d, ScalarField m, ScalarField gamma, std::string desc) {
  Symbol s;
  s.p_.reset(tempered_impl(Family::TLPLike, d, std::move(m), std::move(gamma),
                           desc.empty() ? "(|xi|^2 + m^2)^{gamma/2} cos(gamma atan(|xi|/m)) - m^gamma" : desc));
  return s;
}

Symbol Symbol::tlp_like(int d, double m, double gamma) {
  checked_mass(m, "tempered");
  checked_order(gamma, 0.0, 1.0, false, "tempered");
  Symbol s = tlp_like(d, constant_field(m), constant_field(gamma),
                      "tempered power m=" + fmt(m) + " gamma=" + fmt(gamma));
  std::const_pointer_cast<Impl>(s.p_)->constant = true;
  return s;
}

Symbol Symbol::lamperti(int d, ScalarField m, ScalarField gamma, std::string desc) {
  Symbol s;
  s.p_.reset(tempered_impl(Family::Lamperti, d, std::move(m), std::move(gamma),
                           desc.empty() ? "(|xi|^2 + m)_gamma - (m)_gamma" : desc));
  return s;
}

Symbol Symbol::lamperti(int d, double m, double gamma) {
  checked_mass(m, "Lamperti");
  checked_order(gamma, 0.0, 1.0, false, "Lamperti");
  Symbol s = lamperti(d, constant_field(m), constant_field(gamma),
                      "(|xi|^2 + " + fmt(m) + ")_" + fmt(gamma) + " - (" + fmt(m) + ")_" + fmt(gamma));
  std::const_pointer_cast<Impl>(s.p_)->constant = true;
  return s;
}

Symbol Symbol::levy_constant(const LevyTriplet& t) {
  t.validate();
  auto p = std::make_shared<Impl>();
  p->family = Family::LevyConstant;
  p->d = t.dim();
  p->triplet = t;
  p->constant = true;
  const auto v = t.nu.variant();
  p->closed_form = v == LevyMeasureSpec::Variant::Atoms ||
                   (v == LevyMeasureSpec::Variant::IsotropicPower && !std::isfinite(t.nu.power_truncation()));
  p->desc = "Levy triplet with " + t.nu.describe();
  Symbol s;
  s.p_ = p;
  return s;
}

Symbol Symbol::sde_composed(int d, const Symbol& driver, MatrixField sigma, std::string sigma_desc) {
  require_dimension(d);
  if (!driver.state_independent()) throw ContractError("SDE driver symbol must not depend on the state");
  auto p = std::make_shared<Impl>();
  p->family = Family::SDEComposed;
  p->d = d;
  p->driver = std::make_shared<const Symbol>(driver);
  p->sigma = std::move(sigma);
  p->desc = "psi(" + sigma_desc + "^T xi), psi = " + driver.describe();
  Symbol s;
  s.p_ = p;
  return s;
}

Symbol Symbol::triplet_integrated(const StateTriplet& st) {
  require_dimension(st.d);
  if (!st.b || !st.Q || !st.nu) throw ContractError("state triplet has unset components");
  auto p = std::make_shared<Impl>();
  p->family = Family::TripletIntegrated;
  p->d = st.d;
  p->st = st;
  p->desc = "quadrature of a state-dependent triplet";
  Symbol s;
  s.p_ = p;
  return s;
}

Symbol Symbol::custom(int d, Fn q, std::string name, bool state_independent) {
  require_dimension(d);
  if (!q) throw ContractError("custom symbol needs a function");
  auto p = std::make_shared<Impl>();
  p->family = Family::Custom;
  p->d = d;
  p->fn = std::move(q);
  p->desc = std::move(name);
  p->constant = state_independent;
  Symbol s;
  s.p_ = p;
  return s;
}

Complex Symbol::operator()(const Vector& x, const Vector& xi) const {
  const Impl& p = *p_;
  if (x.size() != p.d) throw DomainError("state has dimension " + std::to_string(x.size()) + ", symbol expects " + std::to_string(p.d));
  check_xi(p.d, xi);
  const double k = xi.norm();
  switch (p.family) {
    case Family::StableLike: {
      double g = checked_order(p.gamma(x), 0.0, 2.0, true, "stable-like");
      return k == 0.0 ? Complex{} : Complex(std::pow(k, g), 0.0);
    }
    case Family::Relativistic: {
      double m = checked_mass(p.m(x), "relativistic");
      double g = checked_order(p.gamma(x), 0.0, 2.0, false, "relativistic");
      return Complex(relativistic_value(k, m, g), 0.0);
    }
    case Family::TLPLike: {
      double m = checked_mass(p.m(x), "tempered");
      double g = checked_order(p.gamma(x), 0.0, 1.0, false, "tempered");
      return Complex(tlp_value(k, m, g), 0.0);
    }
    case Family::Lamperti: {
      double m = checked_mass(p.m(x), "Lamperti");
      double g = checked_order(p.gamma(x), 0.0, 1.0, false, "Lamperti");
      return Complex(lamperti_value(k, m, g), 0.0);
    }
    case Family::LevyConstant: {
      const LevyTriplet& t = p.triplet;
      if (!p.closed_form) return exponent_from_triplet(t, xi).value;
      Complex v = gaussian_drift_part(t, xi) + atom_exponent(t.nu.atom_list(), xi);
      if (t.nu.variant() == LevyMeasureSpec::Variant::IsotropicPower && k > 0.0)
        v += t.nu.power_intensity() / c_alpha(t.nu.power_alpha(), p.d) * std::pow(k, t.nu.power_alpha());
      return v;
    }
    case Family::SDEComposed: {
      Matrix s = p.sigma(x);
      const int kd = p.driver->dim();
      if (s.rows() != p.d || s.cols() != kd) throw DomainError("sigma(x) must be " + std::to_string(p.d) + " x " + std::to_string(kd));
      Vector eta = s.transpose() * xi;
      return (*p.driver)(zeros(kd), eta);
    }
    case Family::TripletIntegrated:
      return exponent_from_triplet(p.st.at(x), xi).value;
    case Family::Custom:
      return p.fn(x, xi);
  }
  return {};
}

int Symbol::dim() const { return p_->d; }
Symbol::Family Symbol::family() const { return p_->family; }

std::string Symbol::family_name() const {
  switch (p_->family) {
    case Family::StableLike: return "stable_like";
    case Family::Relativistic: return "relativistic";
    case Family::TLPLike: return "tlp_like";
    case Family::Lamperti: return "lamperti";
    case Family::LevyConstant: return "levy_constant";
    case Family::SDEComposed: return "sde_composed";
    case Family::TripletIntegrated: return "triplet_integrated";
    case Family::Custom: return "custom";
  }
  return "custom";
}

std::string Symbol::describe() const { return p_->desc; }
bool Symbol::state_independent() const { return p_->constant; }

bool Symbol::has_characteristics() const {
  switch (p_->family) {
    case Family::StableLike:
    case Family::Relativistic:
    case Family::LevyConstant:
    case Family::TripletIntegrated:
      return true;
    case Family::TLPLike:
      return p_->d == 1;
    case Family::SDEComposed:
      return p_->driver->has_characteristics();
    case Family::Lamperti:
    case Family::Custom:
      return false;
  }
  return false;
}

namespace {

LevyMeasureSpec relativistic_measure(int d, double m, double g) {
  const double nu = 0.5 * (d + g);
  const double C = g * std::pow(2.0, 0.5 * (g - d)) * std::pow(m, nu) / (std::pow(kPi, 0.5 * d) * std::tgamma(1.0 - 0.5 * g));
  DensitySpec ds;
  ds.n = [C, nu, m](const Vector& y) {
    double r = y.norm();
    if (r == 0.0) return 0.0;
    double z = m * r;
    if (z > 700.0) return 0.0;
    return C * std::pow(r, -nu) * std::cyl_bessel_k(nu, z);
  };
  ds.singularity = g;
  ds.tail = TailClass::Exponential;
  ds.tail_param = m;
  ds.symmetric = true;
  ds.description = "relativistic Bessel density m=" + fmt(m) + " gamma=" + fmt(g);
  return LevyMeasureSpec::density(d, ds);
}

LevyMeasureSpec tempered_measure(double m, double g) {
  const double C = g / (2.0 * std::tgamma(1.0 - g));
  DensitySpec ds;
  ds.n = [C, m, g](const Vector& y) {
    double r = std::abs(y[0]);
    if (r == 0.0) return 0.0;
    return C * std::exp(-m * r) * std::pow(r, -1.0 - g);
  };
  ds.singularity = g;
  ds.tail = TailClass::Exponential;
  ds.tail_param = m;
  ds.symmetric = true;
  ds.description = "tempered power density m=" + fmt(m) + " gamma=" + fmt(g);
  return LevyMeasureSpec::density(1, ds);
}

// int sigma y (1_{|sigma y|<1} - 1_{|y|<1}) nu(dy)
Vector sde_drift_correction(const LevyMeasureSpec& nu, const Matrix& sigma) {
  const int d = static_cast<int>(sigma.rows());
  Vector out = zeros(d);
  if (nu.is_symmetric()) return out;
  for (const auto& a : nu.atom_list()) {
    Vector sy = sigma * a.location;
    double ind = (sy.norm() < 1.0 ? 1.0 : 0.0) - (a.location.norm() < 1.0 ? 1.0 : 0.0);
    out += ind * a.weight * sy;
  }
  for (const auto& ray : nu.rays().rays) {
    if (ray.weight <= 0.0) continue;
    Vector st = sigma * ray.direction;
    double s = st.norm();
    if (s < 1e-14) continue;
    double lo = std::min(1.0, 1.0 / s), hi = std::max(1.0, 1.0 / s);
    hi = std::min(hi, ray.support);
    if (hi <= lo) continue;
    double sign = s < 1.0 ? 1.0 : -1.0;
    double m1 = gl_panels([&](double r) { return r * ray.rho(r); }, lo, hi, 0.25 * lo);
    out += sign * ray.weight * m1 * st;
  }
  return out;
}

}  // namespace

LevyTriplet Symbol::characteristics(const Vector& x) const {
  const Impl& p = *p_;
  if (x.size() != p.d) throw DomainError("state has wrong dimension");
  const int d = p.d;
  switch (p.family) {
    case Family::StableLike: {
      double g = checked_order(p.gamma(x), 0.0, 2.0, true, "stable-like");
      if (g == 2.0) return LevyTriplet::make(zeros(d), 2.0 * Matrix::Identity(d, d), LevyMeasureSpec::zero(d));
      return LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(d, c_alpha(g, d), g));
    }
    case Family::Relativistic: {
      double m = checked_mass(p.m(x), "relativistic");
      double g = checked_order(p.gamma(x), 0.0, 2.0, false, "relativistic");
      return LevyTriplet::pure_jump(relativistic_measure(d, m, g));
    }
    case Family::TLPLike: {
      if (d != 1) throw ContractError("tempered power characteristics are implemented for d = 1 only");
      double m = checked_mass(p.m(x), "tempered");
      double g = checked_order(p.gamma(x), 0.0, 1.0, false, "tempered");
      return LevyTriplet::pure_jump(tempered_measure(m, g));
    }
    case Family::LevyConstant:
      return p.triplet;
    case Family::TripletIntegrated:
      return p.st.at(x);
    case Family::SDEComposed: {
      Matrix s = p.sigma(x);
      LevyTriplet base = p.driver->characteristics(zeros(p.driver->dim()));
      if (s.rows() != d || s.cols() != base.dim()) throw DomainError("sigma(x) has wrong shape");
      Vector b = s * base.b + sde_drift_correction(base.nu, s);
      Matrix Q = s * base.Q * s.transpose();
      Q = 0.5 * (Q + Q.transpose());
      return LevyTriplet::make(b, Q, LevyMeasureSpec::pushforward(base.nu, s));
    }
    case Family::Lamperti:
      throw ContractError("Lamperti symbols have no characteristics in closed form");
    case Family::Custom:
      throw ContractError("custom symbol '" + p.desc + "' has no characteristics");
  }
  throw ContractError("no characteristics");
}

StateTriplet Symbol::state_triplet() const {
  if (!has_characteristics()) throw ContractError(family_name() + " symbol has no characteristics");
  Symbol self = *this;
  StateTriplet st;
  st.d = dim();
  st.b = [self](const Vector& x) { return self.characteristics(x).b; };
  st.Q = [self](const Vector& x) { return self.characteristics(x).Q; };
  st.nu = [self](const Vector& x) { return self.characteristics(x).nu; };
  // |xi|^gamma and (|xi|^2+m^2)^{gamma/2} - m^gamma are both <= 1 + |xi|^2
  if (family() == Family::StableLike || family() == Family::Relativistic) {
    st.bounded_coefficients = true;
    st.bound = 1.0;
  }
  return st;
}

double Symbol::order_at(const Vector& x) const {
  if (!p_->gamma) throw ContractError(family_name() + " symbol has no order field");
  return p_->gamma(x);
}

double Symbol::m_at(const Vector& x) const {
  if (!p_->m) throw ContractError(family_name() + " symbol has no m field");
  return p_->m(x);
}

Matrix Symbol::sigma_at(const Vector& x) const {
  if (!p_->sigma) throw ContractError(family_name() + " symbol has no sigma field");
  return p_->sigma(x);
}

const Symbol& Symbol::driver() const {
  if (!p_->driver) throw ContractError(family_name() + " symbol has no driver");
  return *p_->driver;
}

Complex eval_symbol(const Symbol& sym, const Vector& x, const Vector& xi) { return sym(x, xi); }

// ---------------------------------------------------------------------------
// exponent by quadrature

ExponentResult exponent_from_triplet(const LevyTriplet& t, const Vector& xi, double tol) {
  const int d = t.dim();
  check_xi(d, xi);
  ExponentResult res;
  res.value = gaussian_drift_part(t, xi) + atom_exponent(t.nu.atom_list(), xi);
  const auto& rd = t.nu.rays();
  if (rd.rays.empty() || xi.norm() == 0.0) return res;

  auto make_seg = [&xi](bool compensated) {
    return SegmentFn([&xi, compensated](const Ray& ray, const Ray* anti, double a, double b, long& ev) {
      double w = ray.direction.dot(xi);
      Complex v = ray_piece(ray.rho, a, b, w, compensated, ev);
      // mirrored rays carry the same radial density: imaginary parts cancel
      if (anti) return Complex(2.0 * v.real(), 0.0);
      return v;
    });
  };
  IntegrationOptions opt;
  opt.tol = tol;
  opt.pair_antipodes = true;
  auto in = integrate_rays(rd, make_seg(true), 0.0, 1.0, opt);
  auto out = integrate_rays(rd, make_seg(false), 1.0, kInf, opt);
  Complex partial = res.value + in.value + out.value;
  res.evaluations = in.evaluations + out.evaluations;
  res.abs_error = in.abs_error + out.abs_error;
  if (in.divergent || out.divergent || !std::isfinite(partial.real()) || !std::isfinite(partial.imag()))
    throw NonConvergence("Levy-Khintchine integral did not converge", partial, res.abs_error);
  double scale = std::max(1.0, std::abs(partial));
  if (res.abs_error > std::sqrt(tol) * scale)
    throw NonConvergence("Levy-Khintchine integral missed its tolerance", partial, res.abs_error);
  res.value = partial;
  return res;
}

// ---------------------------------------------------------------------------
// growth diagnostics

namespace {

double sup_impl(const Symbol& sym, const Vector& x, double r, const SupGrid& grid, bool real_part) {
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
  if (r == 0.0) return 0.0;
  const int d = sym.dim();
  auto val = [&](const Vector& xi) {
    Complex q = sym(x, xi);
    return real_part ? q.real() : std::abs(q);
  };
  const auto dirs = probe_directions(d, grid.directions);
  const int nr = std::max(grid.radii, 2);
  const double ratio = std::pow(grid.lowest_fraction, 1.0 / (nr - 1));
  std::vector<double> radii(nr);
  for (int j = 0; j < nr; ++j) radii[j] = r * std::pow(ratio, nr - 1 - j);
  radii[nr - 1] = r;
  double best = real_part ? 0.0 : 0.0;
  int bj = nr - 1;
  std::size_t bd = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (int j = 0; j < nr; ++j) {
      double v = val(radii[j] * dirs[i]);
      if (v > best) {
        best = v;
        bj = j;
        bd = i;
      }
    }
  }
  // refine the radius along the best direction
  double lo = bj > 0 ? radii[bj - 1] : 0.0;
  double hi = bj + 1 < nr ? radii[bj + 1] : r;
  double arg = 0.0;
  const Vector dir = dirs[bd];
  best = std::max(best, golden_max([&](double s) { return val(s * dir); }, lo, hi, 40, arg));
  if (d == 2) {
    double rb = std::max(arg, radii[bj]);
    double phi0 = std::atan2(dir[1], dir[0]);
    double dphi = 2.0 * kPi / static_cast<double>(dirs.size());
    double a2 = 0.0;
    best = std::max(best, golden_max([&](double phi) {
                      Vector v(2);
                      v << std::cos(phi), std::sin(phi);
                      return val(rb * v);
                    }, phi0 - dphi, phi0 + dphi, 40, a2));
  }
  return best;
}

}  // namespace

double symbol_sup(const Symbol& sym, const Vector& x, double r, const SupGrid& grid) {
  return sup_impl(sym, x, r, grid, false);
}

double symbol_sup_real(const Symbol& sym, const Vector& x, double r, const SupGrid& grid) {
  return sup_impl(sym, x, r, grid, true);
}

BGIndexEstimate bg_index_infinity(const Symbol& sym, const Vector& x, const BGOptions& opt) {
  if (!(opt.r_max > 1.0) || opt.points < 4) throw DomainError("BG index grid needs r_max > 1 and at least 4 points");
  BGIndexEstimate est;
  const int n = opt.points;
  double running = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = std::pow(opt.r_max, static_cast<double>(i) / (n - 1));
    running = std::max(running, symbol_sup(sym, x, r, opt.grid));
    est.r_grid.push_back(r);
    est.per_r_sup.push_back(running);
  }
  const std::size_t from = static_cast<std::size_t>(n / 2);
  double top = est.per_r_sup.back(), low = est.per_r_sup[from];
  if (top == 0.0 || (top - low) <= 1e-12 * top) {
    est.bounded = true;
    est.value = 0.0;
    est.band = 0.02;
    return est;
  }
  SlopeFit f = log_slope(est.r_grid, est.per_r_sup, from);
  est.value = std::clamp(f.slope, 0.0, 2.0);
  est.slope_stderr = f.stderr_;
  est.band = 0.02 + 3.0 * f.stderr_;
  return est;
}

std::string SectorGrid::describe() const {
  return std::to_string(directions) + " directions x " + std::to_string(radii) + " radii in [" + fmt(r_min) + ", " +
         fmt(r_max) + "]";
}

SectorReport sector_constant(const Symbol& sym, const Vector& x, const SectorGrid& grid) {
  if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min) || grid.radii < 3)
    throw DomainError("sector grid needs 0 < r_min < r_max and at least 3 radii");
  SectorReport rep;
  rep.grid = grid.describe();
  const int d = sym.dim();
  const auto dirs = probe_directions(d, grid.directions);
  rep.argmax_xi = zeros(d);
  for (int j = 0; j < grid.radii; ++j) {
    double r = grid.r_min * std::pow(grid.r_max / grid.r_min, static_cast<double>(j) / (grid.radii - 1));
    double rmax = 0.0;
    for (const auto& dir : dirs) {
      Vector xi = r * dir;
      Complex q = sym(x, xi);
      double ratio = q.imag() == 0.0 ? 0.0 : std::abs(q.imag()) / std::max(q.real(), 1e-300);
      if (ratio > rmax) rmax = ratio;
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.argmax_xi = xi;
      }
    }
    rep.ratio_by_radius.push_back(rmax);
  }
  const auto& v = rep.ratio_by_radius;
  std::size_t n = v.size();
  rep.unbounded = v[n - 1] > v[n - 2] && v[n - 2] > v[n - 3];
  return rep;
}

DiffusionEstimate diffusion_estimate(const Symbol& sym, const Vector& x, const Vector& eta, double r_max) {
  check_xi(sym.dim(), eta);
  if (std::abs(eta.norm() - 1.0) > 1e-9) throw ContractError("diffusion direction must be a unit vector");
  if (!(r_max > 1.0)) throw DomainError("diffusion estimate needs r_max > 1");
  DiffusionEstimate de;
  const int n = 21;
  for (int i = 0; i < n; ++i) {
    double r = std::pow(r_max, static_cast<double>(i) / (n - 1));
    de.radii.push_back(r);
    de.values.push_back(2.0 * sym(x, r * eta).real() / (r * r));
  }
  de.value = de.values.back();
  double a = de.values[n - 3], b = de.values[n - 2], c = de.values[n - 1];
  double tol = 1e-9 * std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  if (std::abs(b - a) <= tol && std::abs(c - b) <= tol)
    de.trend = "flat";
  else if (b < a && c < b)
    de.trend = "decreasing";
  else if (b > a && c > b)
    de.trend = "increasing";
  else
    de.trend = "mixed";
  return de;
}

GrowthCheckReport quadratic_growth_check(const Symbol& sym, const std::vector<Vector>& K, const std::vector<Vector>& xis) {
  if (K.empty() || xis.empty()) throw ContractError("growth check needs states and frequencies");
  GrowthCheckReport rep;
  for (const auto& x : K) rep.C_K = std::max(rep.C_K, symbol_sup(sym, x, 1.0));
  rep.worst_x = K.front();
  rep.worst_xi = xis.front();
  for (const auto& x : K) {
    for (const auto& xi : xis) {
      double q = std::abs(sym(x, xi));
      double bound = 2.0 * rep.C_K * (1.0 + xi.squaredNorm());
      double ratio = q == 0.0 ? 0.0 : (bound > 0.0 ? q / bound : kInf);
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_x = x;
        rep.worst_xi = xi;
      }
    }
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-12;
  rep.message = rep.pass ? "quadratic growth bound holds, C_K = " + fmt(rep.C_K)
                         : "quadratic growth bound violated: ratio " + fmt(rep.worst_ratio);
  return rep;
}

EquivalenceProbe aux1_equivalence_probe(const Symbol& sym, const Vector& x, double kappa) {
  if (!(kappa > 0.0 && kappa < 2.0)) throw DomainError("kappa must lie in (0,2)");
  const int d = sym.dim();
  const auto dirs = probe_directions(d, 64);
  const int per_octave = 8, octaves = 20;
  EquivalenceProbe ep;
  // S(r) = sup_{|xi|<=r} Re q, tracked as a running maximum along the radius grid
  double S = symbol_sup_real(sym, x, 1.0);
  auto integrand = [&](double r, double s) { return s * std::pow(r, -kappa); };  // in d log r
  double prev_r = 1.0, prev_f = integrand(1.0, S), acc = 0.0;
  std::vector<Complex> inc;
  double last_partial = 0.0;
  for (int j = 1; j <= per_octave * octaves; ++j) {
    double r = std::pow(2.0, static_cast<double>(j) / per_octave);
    for (const auto& dir : dirs) S = std::max(S, sym(x, r * dir).real());
    double f = integrand(r, S);
    acc += 0.5 * (f + prev_f) * std::log(r / prev_r);
    prev_r = r;
    prev_f = f;
    if (j % per_octave == 0) {
      ep.upper_limits.push_back(r);
      ep.partial.push_back(acc);
      inc.emplace_back(acc - last_partial, 0.0);
      last_partial = acc;
    }
  }
  ep.ratio = geometric_ratio(inc, 6);
  ep.convergent = ep.ratio < 1.0 && !shells_nondecreasing(inc);
  return ep;
}

double imaginary_growth_index(const Symbol& sym, const Vector& x) {
  const auto dirs = probe_directions(sym.dim(), 64);
  std::vector<double> r, v;
  double running = 0.0;
  for (int k = 0; k <= 10; ++k) {
    double rad = std::pow(2.0, 10 + k);
    for (const auto& dir : dirs)
      for (double f : {0.25, 0.5, 0.75, 1.0}) running = std::max(running, std::abs(sym(x, f * rad * dir).imag()));
    r.push_back(rad);
    v.push_back(running);
  }
  if (v.back() == 0.0) return 0.0;
  return std::max(0.0, log_slope(r, v, 0).slope);
}

}  // namespace levygen
