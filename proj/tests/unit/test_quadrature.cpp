#include <cmath>

#include "doctest.h"
#include "levygen/quadrature.hpp"

using namespace levygen;

TEST_CASE("Gauss-Legendre panel is exact for degree 39") {
  auto f = [](double x) { return std::pow(x, 39) + 3.0 * std::pow(x, 12) - x; };
  double exact = (std::pow(2.0, 40) - 1.0) / 40.0 + 3.0 * (std::pow(2.0, 13) - 1.0) / 13.0 - 1.5;
  CHECK(gl_panel(f, 1.0, 2.0) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("Filon weights reproduce exact moments") {
  // int_{-1}^{1} e^{i theta u} du = 2 sin(theta)/theta
  // int_{-1}^{1} u^2 e^{i theta u} du = 2 sin/theta + 4 cos/theta^2 - 4 sin/theta^3
  for (double th : {5.0, -7.3, 25.0, 1000.5}) {
    auto W = filon_weights(th);
    const auto& u = GaussLegendre20::nodes();
    Complex m0{}, m2{};
    for (int j = 0; j < GaussLegendre20::n; ++j) {
      m0 += W[j];
      m2 += u[j] * u[j] * W[j];
    }
    double s = std::sin(th), c = std::cos(th);
    CHECK(m0.real() == doctest::Approx(2.0 * s / th).epsilon(1e-12));
    CHECK(std::abs(m0.imag()) < 1e-12);
    CHECK(m2.real() == doctest::Approx(2.0 * s / th + 4.0 * c / (th * th) - 4.0 * s / (th * th * th)).epsilon(1e-10));
  }
}

TEST_CASE("Filon against dense Gauss-Legendre") {
  auto rho = [](double r) { return std::pow(r, -1.5); };
  for (double w : {3.0, 40.0, 900.0}) {
    Complex f = filon(rho, 2.0, 4.0, w);
    Complex ref = gl_panels([&](double r) { return rho(r) * std::polar(1.0, w * r); }, 2.0, 4.0, 0.01);
    CHECK(std::abs(f - ref) < 1e-12);
  }
}

TEST_CASE("inward shells with geometric extrapolation") {
  ShellOptions opt;
  ShellFn f = [](double a, double b, long& ev) {
    ev += 20;
    return Complex(gl_panel([](double r) { return std::pow(r, -0.5); }, a, b), 0.0);
  };
  auto r = inward_shells(f, 1.0, opt);
  CHECK_FALSE(r.divergent);
  CHECK(r.value.real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.shells < 20);

  ShellFn g = [](double a, double b, long& ev) {
    ev += 20;
    return Complex(gl_panel([](double r) { return 1.0 / r; }, a, b), 0.0);
  };
  CHECK(inward_shells(g, 1.0, opt).divergent);
}

TEST_CASE("outward shells") {
  ShellOptions opt;
  ShellFn f = [](double a, double b, long& ev) {
    ev += 20;
    return Complex(gl_panel([](double r) { return std::pow(r, -1.5); }, a, b), 0.0);
  };
  CHECK(outward_shells(f, 1.0, kInf, opt).value.real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(outward_shells(f, 1.0, 4.0, opt).value.real() == doctest::Approx(2.0 - 1.0).epsilon(1e-13));
  ShellFn e = [](double a, double b, long& ev) {
    ev += 20;
    return Complex(gl_panel([](double r) { return std::exp(-r); }, a, b), 0.0);
  };
  CHECK(outward_shells(e, 1.0, kInf, opt).value.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  ShellFn grow = [](double a, double b, long& ev) {
    ev += 20;
    return Complex(gl_panel([](double r) { return std::pow(r, -0.9); }, a, b), 0.0);
  };
  CHECK(outward_shells(grow, 1.0, kInf, opt).divergent);
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(100.0).epsilon(1e-14));
}
