#include <cmath>

#include "doctest.h"
#include "levygen/symbol.hpp"
#include "property.hpp"

using namespace levygen;

namespace {

Vector v1(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Symbol cp_two_atom() {
  return Symbol::levy_constant(LevyTriplet::pure_jump(LevyMeasureSpec::atoms(1, {{v1(1.0), 2.0}})));
}

Symbol stable_triplet(int d, double a) {
  return Symbol::levy_constant(LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(d, c_alpha(a, d), a)));
}

bool close(Complex a, Complex b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("closed-form family values") {
  CHECK(close(Symbol::stable_like(1, 0.5)(v1(0), v1(4.0)), Complex(2.0, 0.0), 1e-15));
  CHECK(close(Symbol::relativistic(1, 1.0, 1.0)(v1(0), v1(std::sqrt(3.0))), Complex(1.0, 0.0), 1e-15));
  CHECK(Symbol::relativistic(2, 1.0, 1.0)(v2(0, 0), v2(1.0, std::sqrt(2.0))).real() == doctest::Approx(1.0).epsilon(1e-14));
  // tempered: (k^2+m^2)^{g/2} cos(g atan(k/m)) - m^g at k = m = 1, g = 0.5
  double tl = std::pow(2.0, 0.25) * std::cos(0.5 * kPi / 4) - 1.0;
  CHECK(Symbol::tlp_like(1, 1.0, 0.5)(v1(0), v1(1.0)).real() == doctest::Approx(tl).epsilon(1e-14));
  // Pochhammer: (k^2+m)_g - (m)_g at k=1, m=1, g=0.5
  double lp = std::tgamma(2.5) / std::tgamma(2.0) - std::tgamma(1.5) / std::tgamma(1.0);
  CHECK(Symbol::lamperti(1, 1.0, 0.5)(v1(0), v1(1.0)).real() == doctest::Approx(lp).epsilon(1e-13));
  // small-frequency expansions stay accurate: relativistic ~ (g/2) m^{g-2} k^2
  CHECK(Symbol::relativistic(1, 1.0, 1.0)(v1(0), v1(1e-9)).real() == doctest::Approx(0.5e-18).epsilon(1e-9));
}

TEST_CASE("variable order and domain errors") {
  auto s = Symbol::stable_like(1, [](const Vector& x) { return 1.0 + 0.5 * std::tanh(x[0]); }, "1+tanh(x)/2");
  CHECK_FALSE(s.state_independent());
  CHECK(s(v1(0.0), v1(4.0)).real() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(s.order_at(v1(0.0)) == 1.0);
  auto bad = Symbol::stable_like(1, [](const Vector& x) { return x[0]; }, "x");
  CHECK_THROWS_AS(bad(v1(2.5), v1(1.0)), DomainError);
  CHECK_THROWS_AS(bad(v1(0.0), v1(1.0)), DomainError);
  CHECK_THROWS_AS(Symbol::stable_like(1, 2.5), DomainError);
  CHECK_THROWS_AS(Symbol::relativistic(1, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Symbol::tlp_like(1, 1.0, 1.2), DomainError);
  CHECK_THROWS_AS(Symbol::stable_like(1, 0.5)(v1(0), v2(1, 1)), DomainError);
}

TEST_CASE("exponent from triplet") {
  auto t = LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(1, c_alpha(0.5, 1), 0.5));
  for (double xi : {0.25, 1.0, 4.0}) {
    auto r = exponent_from_triplet(t, v1(xi));
    CAPTURE(xi);
    CHECK(std::abs(r.value - std::pow(xi, 0.5)) <= 5e-3 * std::pow(xi, 0.5));
    CHECK(r.value.imag() == 0.0);
  }
  auto cp = LevyTriplet::pure_jump(LevyMeasureSpec::atoms(1, {{v1(1.0), 2.0}}));
  CHECK(close(exponent_from_triplet(cp, v1(kPi)).value, Complex(4.0, 0.0), 1e-14));
  for (double xi : {0.3, 1.7, -2.2}) {
    Complex want = 2.0 * (1.0 - std::exp(Complex(0.0, xi)));
    CHECK(close(exponent_from_triplet(cp, v1(xi)).value, want, 1e-14));
  }
  auto bm = LevyTriplet::make(zeros(2), Matrix::Identity(2, 2), LevyMeasureSpec::zero(2));
  CHECK(close(exponent_from_triplet(bm, v2(1, 1)).value, Complex(1.0, 0.0), 1e-15));
  CHECK(exponent_from_triplet(t, v1(0.0)).value == Complex(0.0, 0.0));
}

TEST_CASE("exponent from triplet: one-sided and truncated measures") {
  // nu = c |y|^{-1-a} on (0,1]: q(xi) = c int_0^1 (1 - cos + i(xi y - sin)) y^{-1-a} dy, checked on a fine grid
  DensitySpec ds;
  const double a = 0.7;
  ds.n = [a](const Vector& y) { return y[0] > 0.0 && y[0] <= 1.0 ? std::pow(y[0], -1.0 - a) : 0.0; };
  ds.singularity = a;
  ds.tail = TailClass::Compact;
  ds.tail_param = 1.0;
  auto t = LevyTriplet::pure_jump(LevyMeasureSpec::density(1, ds));
  const double xi = 3.0;
  // oracle: series  sum_k (-1)^{k+1} xi^k i^k ... evaluated termwise: int_0^1 y^{k-1-a} dy = 1/(k-a)
  Complex want{};
  Complex term(1.0, 0.0);
  for (int k = 1; k < 60; ++k) {
    term *= Complex(0.0, xi) / static_cast<double>(k);
    if (k == 1) continue;  // the compensator removes the linear term
    want -= term / (k - a);
  }
  auto r = exponent_from_triplet(t, v1(xi));
  CHECK(std::abs(r.value - want) <= 1e-7 * std::abs(want));
  CHECK(r.value.imag() != 0.0);
}

TEST_CASE("characteristics reproduce closed forms") {
  struct Case {
    Symbol s;
    double kmax;
  };
  std::vector<Case> cases = {
      {Symbol::stable_like(1, 0.5), 8.0},  {Symbol::stable_like(1, 1.3), 8.0},
      {Symbol::relativistic(1, 1.0, 1.0), 8.0}, {Symbol::relativistic(1, 2.0, 1.5), 8.0},
      {Symbol::tlp_like(1, 1.0, 0.5), 8.0},  {Symbol::stable_like(2, 0.8), 8.0},
      {Symbol::relativistic(2, 1.0, 1.2), 8.0}, {Symbol::stable_like(3, 1.1), 4.0},
  };
  for (auto& c : cases) {
    CAPTURE(c.s.describe());
    auto t = c.s.characteristics(zeros(c.s.dim()));
    for (double k : {0.1, 1.0, 3.0, c.kmax}) {
      Vector xi = zeros(c.s.dim());
      xi[0] = k * 0.6;
      if (c.s.dim() > 1) xi[1] = k * 0.8;
      Complex want = c.s(zeros(c.s.dim()), xi);
      Complex got = exponent_from_triplet(t, xi).value;
      CAPTURE(k);
      CHECK(std::abs(got - want) <= 5e-3 * std::abs(want));
    }
  }
  CHECK_FALSE(Symbol::lamperti(1, 1.0, 0.5).has_characteristics());
  CHECK_THROWS_AS(Symbol::lamperti(1, 1.0, 0.5).characteristics(v1(0)), ContractError);
  CHECK_FALSE(Symbol::tlp_like(2, 1.0, 0.5).has_characteristics());
  auto bm = Symbol::stable_like(2, 2.0).characteristics(v2(0, 0));
  CHECK(bm.Q(0, 0) == 2.0);
  CHECK(bm.nu.is_zero());
}

TEST_CASE("levy constant: closed form against quadrature") {
  Matrix Q(2, 2);
  Q << 1.0, 0.3, 0.3, 0.5;
  Vector b = v2(0.2, -0.4);
  auto t = LevyTriplet::make(b, Q, LevyMeasureSpec::atoms(2, {{v2(0.5, 0.0), 1.0}, {v2(0.0, -2.0), 0.5}}));
  auto s = Symbol::levy_constant(t);
  Vector xi = v2(1.3, -0.7);
  Complex want = Complex(0.5 * xi.dot(Q * xi), -b.dot(xi)) +
                 1.0 * (1.0 - std::exp(Complex(0.0, 0.5 * 1.3)) + Complex(0.0, 0.5 * 1.3)) +
                 0.5 * (1.0 - std::exp(Complex(0.0, 1.4)));
  CHECK(close(s(v2(0, 0), xi), want, 1e-14));
  auto p = stable_triplet(1, 0.9);
  CHECK(p(v1(0), v1(5.0)).real() == doctest::Approx(std::pow(5.0, 0.9)).epsilon(1e-13));
  // truncated power goes through quadrature
  auto tr = Symbol::levy_constant(LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(1, 1.0, 0.9, 2.0)));
  auto full = Symbol::levy_constant(LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_power(1, 1.0, 0.9)));
  // difference is 2 int_2^inf (1 - cos(xi y)) y^{-1.9} dy > 0
  CHECK(tr(v1(0), v1(1.0)).real() < full(v1(0), v1(1.0)).real());
}

TEST_CASE("SDE composition") {
  auto drv = Symbol::stable_like(1, 1.2);
  Matrix s(2, 1);
  s << 1.0, 2.0;
  auto q = Symbol::sde_composed(2, drv, [s](const Vector&) { return s; }, "[1;2]");
  CHECK(q(v2(0, 0), v2(1.0, 1.0)).real() == doctest::Approx(std::pow(3.0, 1.2)).epsilon(1e-14));
  // characteristics of the composed symbol reproduce it by quadrature
  auto t = q.characteristics(v2(0, 0));
  CHECK(t.b.norm() == 0.0);
  for (auto xi : {v2(0.5, 0.1), v2(-1.0, 2.0)}) {
    Complex want = q(v2(0, 0), xi);
    CHECK(std::abs(exponent_from_triplet(t, xi).value - want) <= 5e-3 * std::abs(want));
  }
  // one-sided driver: drift correction from rescaling the small-jump cutoff
  auto cp = Symbol::levy_constant(LevyTriplet::pure_jump(LevyMeasureSpec::atoms(1, {{v1(0.8), 1.0}})));
  Matrix s2(1, 1);
  s2 << 2.0;
  auto q2 = Symbol::sde_composed(1, cp, [s2](const Vector&) { return s2; });
  auto t2 = q2.characteristics(v1(0));
  CHECK(t2.b[0] == doctest::Approx(-1.6));
  for (double xi : {0.4, 2.0}) CHECK(close(exponent_from_triplet(t2, v1(xi)).value, q2(v1(0), v1(xi)), 1e-13));
  CHECK_THROWS_AS(Symbol::sde_composed(1, Symbol::stable_like(1, [](const Vector&) { return 1.0; }), [s2](const Vector&) { return s2; }),
                  ContractError);
}

TEST_CASE("symbol sup") {
  auto s = Symbol::stable_like(1, 0.7);
  CHECK(symbol_sup(s, v1(0), 2.0) == doctest::Approx(std::pow(2.0, 0.7)).epsilon(1e-14));
  auto cp = cp_two_atom();
  CHECK(symbol_sup(cp, v1(0), 1.0) == doctest::Approx(4.0 * std::sin(0.5)).epsilon(1e-12));
  CHECK(symbol_sup(cp, v1(0), 4.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(symbol_sup(cp, v1(0), 100.0) <= 4.0 + 1e-12);
  CHECK(symbol_sup(cp, v1(0), 100.0) >= 4.0 - 1e-9);
  CHECK(symbol_sup(s, v1(0), 1e-12) < 1e-8);
  CHECK(symbol_sup(s, v1(0), 0.0) == 0.0);
  auto rel = Symbol::relativistic(2, 1.0, 1.0);
  CHECK(symbol_sup(rel, v2(0, 0), std::sqrt(3.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(symbol_sup_real(cp, v1(0), 4.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("BG index at infinity") {
  auto e = bg_index_infinity(Symbol::stable_like(1, 0.7), v1(0));
  CHECK(std::abs(e.value - 0.7) <= 0.02);
  CHECK_FALSE(e.bounded);
  for (std::size_t i = 1; i < e.per_r_sup.size(); ++i) CHECK(e.per_r_sup[i] >= e.per_r_sup[i - 1]);
  auto cp = bg_index_infinity(cp_two_atom(), v1(0));
  CHECK(cp.bounded);
  CHECK(cp.value == 0.0);
  auto rel = bg_index_infinity(Symbol::relativistic(1, 1.0, 1.5), v1(0));
  CHECK(std::abs(rel.value - 1.5) <= 0.05);
  auto d2 = bg_index_infinity(Symbol::stable_like(2, 1.3), v2(0.1, 0.2));
  CHECK(std::abs(d2.value - 1.3) <= 0.02);
  auto bm = bg_index_infinity(Symbol::stable_like(1, 2.0), v1(0));
  CHECK(bm.value == doctest::Approx(2.0));
}

TEST_CASE("sector constant") {
  CHECK(sector_constant(Symbol::stable_like(1, 0.8), v1(0)).constant == 0.0);
  CHECK(sector_constant(Symbol::relativistic(2, 1.0, 1.0), v2(0, 0)).constant == 0.0);
  auto bm = Symbol::levy_constant(LevyTriplet::make(zeros(1), Matrix::Identity(1, 1), LevyMeasureSpec::zero(1)));
  auto rb = sector_constant(bm, v1(0));
  CHECK(rb.constant == 0.0);
  CHECK_FALSE(rb.unbounded);
  auto drift = Symbol::custom(1, [](const Vector&, const Vector& xi) {
    return Complex(std::pow(std::abs(xi[0]), 0.5), -xi[0]);
  }, "-i xi + |xi|^0.5", true);
  auto rd = sector_constant(drift, v1(0));
  CHECK(rd.unbounded);
  CHECK(rd.constant == doctest::Approx(1024.0).epsilon(1e-9));
  // compound Poisson with one atom: |sin| / (1 - cos) blows up near xi = 2 pi k but stays finite on the grid
  auto cp = sector_constant(cp_two_atom(), v1(0));
  CHECK(cp.constant > 0.0);
  CHECK(std::isfinite(cp.constant));
}

TEST_CASE("diffusion estimate") {
  Matrix I = Matrix::Identity(2, 2);
  auto bm = Symbol::levy_constant(LevyTriplet::make(zeros(2), I, LevyMeasureSpec::zero(2)));
  auto e = diffusion_estimate(bm, v2(0, 0), v2(0.6, 0.8));
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.trend == "flat");
  auto st = diffusion_estimate(Symbol::stable_like(1, 1.5), v1(0), v1(1.0));
  CHECK(st.value <= 0.01);
  CHECK(st.trend == "decreasing");
  Matrix Q(2, 2);
  Q << 2.0, 0.0, 0.0, 0.0;
  auto dg = Symbol::levy_constant(LevyTriplet::make(zeros(2), Q, LevyMeasureSpec::zero(2)));
  CHECK(diffusion_estimate(dg, v2(0, 0), v2(0, 1)).value == 0.0);
  CHECK(diffusion_estimate(dg, v2(0, 0), v2(1, 0)).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(diffusion_estimate(bm, v2(0, 0), v2(1, 1)), ContractError);
}

TEST_CASE("quadratic growth check") {
  std::vector<Vector> K = {v1(-1), v1(0), v1(1)};
  std::vector<Vector> xis;
  for (int k = -20; k <= 20; ++k) xis.push_back(v1(std::ldexp(1.0, std::abs(k)) * (k < 0 ? -1 : 1)));
  auto vary = Symbol::stable_like(1, [](const Vector& x) { return 1.0 + 0.5 * std::tanh(x[0]); }, "1+tanh(x)/2");
  for (const auto& s : {Symbol::stable_like(1, 0.5), vary, Symbol::relativistic(1, 1.0, 1.5), cp_two_atom(),
                        Symbol::tlp_like(1, 2.0, 0.5), Symbol::lamperti(1, 1.0, 0.5)}) {
    auto r = quadratic_growth_check(s, K, xis);
    CAPTURE(s.describe());
    CHECK(r.pass);
  }
  auto bm = quadratic_growth_check(Symbol::stable_like(1, 2.0), K, xis);
  CHECK(bm.pass);
  CHECK(bm.C_K == doctest::Approx(1.0));
  CHECK(bm.worst_ratio < 0.5);
  auto zero = quadratic_growth_check(Symbol::stable_like(1, 0.5), K, {v1(0)});
  CHECK(zero.pass);
  CHECK(zero.worst_ratio == 0.0);
  auto cubic = Symbol::custom(1, [](const Vector&, const Vector& xi) { return Complex(std::pow(std::abs(xi[0]), 3.0), 0.0); }, "|xi|^3");
  auto bad = quadratic_growth_check(cubic, K, xis);
  CHECK_FALSE(bad.pass);
  CHECK(std::abs(bad.worst_xi[0]) == std::ldexp(1.0, 20));
  CHECK_THROWS_AS(quadratic_growth_check(cubic, {}, xis), ContractError);
}

TEST_CASE("equivalence probe and imaginary growth") {
  auto s = Symbol::stable_like(1, 0.5);
  CHECK(aux1_equivalence_probe(s, v1(0), 0.8).convergent);
  auto div = aux1_equivalence_probe(s, v1(0), 0.3);
  CHECK_FALSE(div.convergent);
  CHECK(div.ratio > 1.0);
  CHECK(aux1_equivalence_probe(cp_two_atom(), v1(0), 0.2).convergent);
  CHECK_THROWS_AS(aux1_equivalence_probe(s, v1(0), 2.0), DomainError);
  CHECK(imaginary_growth_index(s, v1(0)) == 0.0);
  auto drift = Symbol::custom(1, [](const Vector&, const Vector& xi) {
    return Complex(std::pow(std::abs(xi[0]), 0.5), -xi[0]);
  }, "-i xi + |xi|^0.5", true);
  CHECK(imaginary_growth_index(drift, v1(0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("property: symbols vanish at 0, are Hermitian, have nonnegative real part") {
  PROPERTY_CASES(60, 1001u, [](prop::Gen& g, int) {
    int d = g.integer(1, 3);
    int fam = g.integer(0, 4);
    Symbol s = Symbol::stable_like(d, g.uniform(0.1, 2.0));
    if (fam == 1) s = Symbol::relativistic(d, g.uniform(0.2, 3.0), g.uniform(0.1, 1.9));
    if (fam == 2) s = Symbol::tlp_like(d, g.uniform(0.2, 3.0), g.uniform(0.1, 0.9));
    if (fam == 3) s = Symbol::lamperti(d, g.uniform(0.2, 3.0), g.uniform(0.1, 0.9));
    if (fam == 4) {
      std::vector<Atom> at = g.atoms(d, 4, 3.0);
      Matrix A = Matrix::Zero(d, d);
      for (int i = 0; i < d; ++i) A(i, i) = g.uniform(0.0, 1.0);
      s = Symbol::levy_constant(LevyTriplet::make(g.vec(d, -1, 1), A, LevyMeasureSpec::atoms(d, at)));
    }
    Vector x = g.vec(d, -2, 2);
    CHECK(std::abs(s(x, zeros(d))) <= 1e-12);
    for (int k = 0; k < 5; ++k) {
      Vector xi = g.vec(d, -20, 20);
      Complex a = s(x, xi), b = s(x, -xi);
      CHECK(std::abs(a - std::conj(b)) <= 1e-9 * std::max(1.0, std::abs(a)));
      CHECK(a.real() >= -1e-9);
    }
  });
}

TEST_CASE("property: symbol_sup is monotone in the radius") {
  PROPERTY_CASES(12, 2002u, [](prop::Gen& g, int) {
    int d = g.integer(1, 2);
    Symbol s = g.coin() ? Symbol::relativistic(d, g.uniform(0.5, 2.0), g.uniform(0.2, 1.8))
                        : Symbol::levy_constant(LevyTriplet::pure_jump(LevyMeasureSpec::atoms(d, g.atoms(d, 3, 2.0))));
    Vector x = zeros(d);
    SupGrid grid{16, 32, 1e-6};
    double r1 = g.uniform(0.01, 10.0), r2 = r1 * g.uniform(1.0, 4.0);
    CHECK(symbol_sup(s, x, r1, grid) <= symbol_sup(s, x, r2, grid) + 1e-12);
  });
}

TEST_CASE("property: quadrature of characteristics matches closed forms") {
  PROPERTY_CASES(10, 3003u, [](prop::Gen& g, int) {
    int fam = g.integer(0, 2);
    Symbol s = Symbol::stable_like(1, g.uniform(0.2, 1.8));
    if (fam == 1) s = Symbol::relativistic(1, g.uniform(0.3, 2.0), g.uniform(0.2, 1.8));
    if (fam == 2) s = Symbol::tlp_like(1, g.uniform(0.3, 2.0), g.uniform(0.2, 0.8));
    auto t = s.characteristics(v1(0));
    double xi = g.uniform(-8.0, 8.0);
    Complex want = s(v1(0), v1(xi));
    CAPTURE(s.describe());
    CAPTURE(xi);
    CHECK(std::abs(exponent_from_triplet(t, v1(xi)).value - want) <= 5e-3 * std::abs(want));
  });
}
