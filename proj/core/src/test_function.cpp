#include "levygen/test_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace levygen {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double nan_field(const Vector&) { return std::numeric_limits<double>::quiet_NaN(); }

// smooth step: 0 at u <= 0, 1 at u >= 1
struct SmoothStep {
  static double S(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
  }
  static double k(double u) { return 1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)); }
  static double dS(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double s = S(u);
    return s * (1.0 - s) * k(u);
  }
  static double d2S(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double s = S(u), p = s * (1.0 - s), ds = p * k(u);
    double dk = -2.0 / (u * u * u) + 2.0 / ((1.0 - u) * (1.0 - u) * (1.0 - u));
    return ds * (1.0 - 2.0 * s) * k(u) + p * dk;
  }
};

// Gradient and Hessian of a radial function phi(|x|) from phi', phi''.
Vector radial_gradient(const Vector& x, double dphi) {
  double r = x.norm();
  if (r == 0.0) return zeros(static_cast<int>(x.size()));
  return dphi / r * x;
}

Matrix radial_hessian(const Vector& x, double dphi, double d2phi) {
  const int d = static_cast<int>(x.size());
  double r = x.norm();
  Matrix I = Matrix::Identity(d, d);
  if (r == 0.0) return d2phi * I;
  Vector u = x / r;
  Matrix P = u * u.transpose();
  return d2phi * P + dphi / r * (I - P);
}

}  // namespace

TestFunction TestFunction::combine(double a, const TestFunction& f1, double b, const TestFunction& f2) {
  if (f1.d != f2.d) throw ContractError("combined test functions must share the dimension");
  TestFunction t;
  t.d = f1.d;
  t.name = fmt(a) + "*" + f1.name + " + " + fmt(b) + "*" + f2.name;
  t.f = [a, b, F1 = f1.f, F2 = f2.f](const Vector& x) { return a * F1(x) + b * F2(x); };
  if (f1.g && f2.g) t.g = [a, b, G1 = f1.g, G2 = f2.g](const Vector& x) { return Vector(a * G1(x) + b * G2(x)); };
  if (f1.h && f2.h) t.h = [a, b, H1 = f1.h, H2 = f2.h](const Vector& x) { return Matrix(a * H1(x) + b * H2(x)); };
  t.vanishes_at_infinity = f1.vanishes_at_infinity && f2.vanishes_at_infinity;
  t.kinks = f1.kinks;
  t.kinks.insert(t.kinks.end(), f2.kinks.begin(), f2.kinks.end());
  t.known_zero = (f1.known_zero || a == 0.0) && (f2.known_zero || b == 0.0);
  return t;
}

TestFunction TestFunction::from_expression(int d, const Expression& f, const std::vector<Expression>& grad,
                                           const std::vector<Expression>& hess, bool vanishes) {
  require_dimension(d);
  if (f.max_component() > d) throw ConfigError("", "expression '" + f.text() + "' refers to a component beyond d");
  if (!grad.empty() && static_cast<int>(grad.size()) != d) throw ConfigError("", "gradient needs d expressions");
  if (!hess.empty() && static_cast<int>(hess.size()) != d * d) throw ConfigError("", "Hessian needs d*d expressions");
  TestFunction t;
  t.d = d;
  t.name = f.text();
  t.f = [f](const Vector& x) { return f(x); };
  if (!grad.empty())
    t.g = [grad, d](const Vector& x) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v[i] = grad[static_cast<std::size_t>(i)](x);
      return v;
    };
  if (!hess.empty())
    t.h = [hess, d](const Vector& x) {
      Matrix m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = hess[static_cast<std::size_t>(i * d + j)](x);
      return m;
    };
  t.vanishes_at_infinity = vanishes;
  return t;
}

DerivativeCheck check_derivatives(const TestFunction& f, const std::vector<Vector>& probes) {
  DerivativeCheck dc;
  for (const auto& x : probes) {
    const int d = static_cast<int>(x.size());
    const double step = 1e-5 * std::max(1.0, x.norm());
    if (f.g) {
      Vector g = f.g(x);
      for (int i = 0; i < d; ++i) {
        Vector e = zeros(d);
        e[i] = step;
        double fd = (f.f(x + e) - f.f(x - e)) / (2.0 * step);
        double err = std::abs(g[i] - fd) / std::max(1e-6, 1e-4 * std::abs(g[i]));
        dc.worst_gradient = std::max(dc.worst_gradient, err);
      }
    }
    if (f.h && f.g) {
      Matrix h = f.h(x);
      dc.worst_asymmetry = std::max(dc.worst_asymmetry, (h - h.transpose()).cwiseAbs().maxCoeff());
      for (int i = 0; i < d; ++i) {
        Vector e = zeros(d);
        e[i] = step;
        Vector col = (f.g(x + e) - f.g(x - e)) / (2.0 * step);
        for (int j = 0; j < d; ++j) {
          double err = std::abs(h(j, i) - col[j]) / std::max(1e-6, 1e-4 * std::abs(h(j, i)));
          dc.worst_hessian = std::max(dc.worst_hessian, err);
        }
      }
    }
  }
  dc.ok = dc.worst_gradient <= 1.0 && dc.worst_hessian <= 1.0 && dc.worst_asymmetry <= 1e-12;
  dc.message = dc.ok ? "derivative oracles agree with central differences"
                     : "derivative oracle mismatch: gradient " + fmt(dc.worst_gradient) + ", Hessian " +
                           fmt(dc.worst_hessian) + ", asymmetry " + fmt(dc.worst_asymmetry);
  return dc;
}

namespace catalog {

TestFunction gaussian(int d) {
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "gaussian";
  t.f = [](const Vector& x) { return std::exp(-x.squaredNorm()); };
  t.g = [](const Vector& x) { return Vector(-2.0 * std::exp(-x.squaredNorm()) * x); };
  t.h = [d](const Vector& x) {
    double e = std::exp(-x.squaredNorm());
    return Matrix(e * (4.0 * x * x.transpose() - 2.0 * Matrix::Identity(d, d)));
  };
  t.vanishes_at_infinity = true;
  return t;
}

TestFunction bump(int d, double r0, double r1, const Vector* center) {
  require_dimension(d);
  if (!(r0 >= 0.0 && r1 > r0)) throw DomainError("bump needs 0 <= r0 < r1");
  Vector c = center ? *center : zeros(d);
  if (c.size() != d) throw DomainError("bump center has wrong dimension");
  const double L = r1 - r0;
  TestFunction t;
  t.d = d;
  t.name = "bump(" + fmt(r0) + "," + fmt(r1) + ")";
  t.f = [c, r1, L](const Vector& x) { return SmoothStep::S((r1 - (x - c).norm()) / L); };
  t.g = [c, r1, L](const Vector& x) {
    Vector y = x - c;
    return radial_gradient(y, -SmoothStep::dS((r1 - y.norm()) / L) / L);
  };
  t.h = [c, r1, L](const Vector& x) {
    Vector y = x - c;
    double u = (r1 - y.norm()) / L;
    return radial_hessian(y, -SmoothStep::dS(u) / L, SmoothStep::d2S(u) / (L * L));
  };
  t.vanishes_at_infinity = true;
  return t;
}

TestFunction holder_gaussian(int d, double beta) {
  require_dimension(d);
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("Holder exponent must lie in (0,2)");
  TestFunction t;
  t.d = d;
  t.name = "holder_gaussian(" + fmt(beta) + ")";
  t.f = [beta](const Vector& x) {
    double r2 = x.squaredNorm();
    return std::pow(r2, 0.5 * beta) * std::exp(-r2);
  };
  if (beta > 1.0) {
    t.g = [beta](const Vector& x) {
      double r = x.norm();
      if (r == 0.0) return Vector(zeros(static_cast<int>(x.size())));
      double e = std::exp(-r * r);
      return Vector((beta * std::pow(r, beta - 2.0) - 2.0 * std::pow(r, beta)) * e * x);
    };
  }
  t.vanishes_at_infinity = true;
  t.holder_order = [beta](const Vector&) { return beta; };
  t.holder_constant = [](const Vector& x) { return x.norm() == 0.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN(); };
  t.kinks.push_back(zeros(d));
  return t;
}

TestFunction smoothed_holder(int d, double beta, double delta) {
  require_dimension(d);
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("Holder exponent must lie in (0,2)");
  if (!(delta > 0.0)) throw DomainError("smoothing width must be positive");
  const double db = std::pow(delta, beta), d2 = delta * delta;
  TestFunction t;
  t.d = d;
  t.name = "smoothed_holder(" + fmt(beta) + "," + fmt(delta) + ")";
  t.f = [beta, db, d2](const Vector& x) {
    double r2 = x.squaredNorm();
    return (std::pow(r2 + d2, 0.5 * beta) - db) * std::exp(-r2);
  };
  t.g = [beta, db, d2](const Vector& x) {
    double r2 = x.squaredNorm(), s = r2 + d2, E = std::exp(-r2);
    double A = std::pow(s, 0.5 * beta) - db;
    return Vector((beta * std::pow(s, 0.5 * beta - 1.0) - 2.0 * A) * E * x);
  };
  t.h = [beta, db, d2, d](const Vector& x) {
    double r2 = x.squaredNorm(), s = r2 + d2, E = std::exp(-r2);
    double A = std::pow(s, 0.5 * beta) - db;
    Matrix I = Matrix::Identity(d, d), X = x * x.transpose();
    Matrix HA = beta * std::pow(s, 0.5 * beta - 1.0) * I + beta * (beta - 2.0) * std::pow(s, 0.5 * beta - 2.0) * X;
    Vector gA = beta * std::pow(s, 0.5 * beta - 1.0) * x;
    Vector gE = -2.0 * E * x;
    Matrix HE = E * (4.0 * X - 2.0 * I);
    return Matrix(E * HA + gA * gE.transpose() + gE * gA.transpose() + A * HE);
  };
  t.vanishes_at_infinity = true;
  t.holder_order = [beta](const Vector&) { return beta; };
  t.holder_constant = nan_field;
  return t;
}

TestFunction cosine(const Vector& xi0) {
  const int d = static_cast<int>(xi0.size());
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "cos";
  t.f = [xi0](const Vector& x) { return std::cos(xi0.dot(x)); };
  t.g = [xi0](const Vector& x) { return Vector(-std::sin(xi0.dot(x)) * xi0); };
  t.h = [xi0](const Vector& x) { return Matrix(-std::cos(xi0.dot(x)) * xi0 * xi0.transpose()); };
  t.frequency = xi0;
  return t;
}

TestFunction sine(const Vector& xi0) {
  const int d = static_cast<int>(xi0.size());
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "sin";
  t.f = [xi0](const Vector& x) { return std::sin(xi0.dot(x)); };
  t.g = [xi0](const Vector& x) { return Vector(std::cos(xi0.dot(x)) * xi0); };
  t.h = [xi0](const Vector& x) { return Matrix(-std::sin(xi0.dot(x)) * xi0 * xi0.transpose()); };
  t.frequency = xi0;
  t.phase = -0.5 * kPi;
  return t;
}

TestFunction zero(int d) {
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "zero";
  t.f = [](const Vector&) { return 0.0; };
  t.g = [d](const Vector&) { return Vector(zeros(d)); };
  t.h = [d](const Vector&) { return Matrix(Matrix::Zero(d, d)); };
  t.vanishes_at_infinity = true;
  t.known_zero = true;
  t.holder_order = [](const Vector&) { return 2.0; };
  t.holder_constant = [](const Vector&) { return 0.0; };
  return t;
}

TestFunction abs(int d) {
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "abs";
  t.f = [](const Vector& x) { return x.norm(); };
  t.holder_order = [](const Vector&) { return 1.0; };
  t.holder_constant = [](const Vector&) { return 1.0; };
  t.kinks.push_back(zeros(d));
  return t;
}

TestFunction quadratic(int d) {
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "quadratic";
  t.f = [](const Vector& x) { return x.squaredNorm(); };
  t.g = [](const Vector& x) { return Vector(2.0 * x); };
  t.h = [d](const Vector&) { return Matrix(2.0 * Matrix::Identity(d, d)); };
  return t;
}

TestFunction linear(const Vector& a) {
  const int d = static_cast<int>(a.size());
  require_dimension(d);
  TestFunction t;
  t.d = d;
  t.name = "linear";
  t.f = [a](const Vector& x) { return a.dot(x); };
  t.g = [a](const Vector&) { return a; };
  t.h = [d](const Vector&) { return Matrix(Matrix::Zero(d, d)); };
  t.holder_order = [](const Vector&) { return 1.0; };
  t.holder_constant = [n = a.norm()](const Vector&) { return n; };
  return t;
}

TestFunction by_name(const std::string& name, int d, double beta, const Vector* xi0) {
  Vector ones = Vector::Ones(d);
  const Vector& w = xi0 ? *xi0 : ones;
  if (name == "gaussian") return gaussian(d);
  if (name == "bump") return bump(d);
  if (name == "holder_gaussian") return holder_gaussian(d, beta);
  if (name == "smoothed_holder") return smoothed_holder(d, beta);
  if (name == "cos") return cosine(w);
  if (name == "sin") return sine(w);
  if (name == "zero") return zero(d);
  if (name == "abs") return abs(d);
  if (name == "quadratic") return quadratic(d);
  if (name == "linear") return linear(w);
  throw ConfigError("", "unknown catalog function '" + name + "'");
}

}  // namespace catalog

}  // namespace levygen
