#include "levygen/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace levygen {

namespace {

struct GLTables {
  std::array<double, GaussLegendre20::n> u{}, w{};
  // Legendre polynomials P_k(u_j), k < n.
  std::array<std::array<double, GaussLegendre20::n>, GaussLegendre20::n> P{};

  GLTables() {
    using Rule = boost::math::quadrature::gauss<double, GaussLegendre20::n>;
    const auto& a = Rule::abscissa();
    const auto& wt = Rule::weights();
    constexpr int half = GaussLegendre20::n / 2;
    for (int i = 0; i < half; ++i) {
      u[half - 1 - i] = -a[i];
      w[half - 1 - i] = wt[i];
      u[half + i] = a[i];
      w[half + i] = wt[i];
    }
    for (int j = 0; j < GaussLegendre20::n; ++j) {
      double p0 = 1.0, p1 = u[j];
      P[0][j] = p0;
      P[1][j] = p1;
      for (int k = 1; k + 1 < GaussLegendre20::n; ++k) {
        double p2 = ((2.0 * k + 1.0) * u[j] * p1 - k * p0) / (k + 1.0);
        P[k + 1][j] = p2;
        p0 = p1;
        p1 = p2;
      }
    }
  }
};

const GLTables& tables() {
  static const GLTables t;
  return t;
}

// Spherical Bessel j_k(x), k < n, x >= 0.
void sph_bessel_all(double x, std::array<double, GaussLegendre20::n>& j) {
  constexpr int n = GaussLegendre20::n;
  if (x >= n) {
    // forward recurrence is stable while k < x
    j[0] = std::sin(x) / x;
    j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
    for (int k = 1; k + 1 < n; ++k) j[k + 1] = (2.0 * k + 1.0) / x * j[k] - j[k - 1];
  } else {
    for (int k = 0; k < n; ++k) j[k] = std::sph_bessel(static_cast<unsigned>(k), x);
  }
}

}  // namespace

const std::array<double, GaussLegendre20::n>& GaussLegendre20::nodes() { return tables().u; }
const std::array<double, GaussLegendre20::n>& GaussLegendre20::weights() { return tables().w; }

std::array<Complex, GaussLegendre20::n> filon_weights(double theta) {
  constexpr int n = GaussLegendre20::n;
  const auto& t = tables();
  std::array<double, n> jb{};
  sph_bessel_all(std::abs(theta), jb);
  // i^k with the sign of theta folded in: j_k(-x) = (-1)^k j_k(x)
  std::array<Complex, n> coef{};
  const double s = theta < 0 ? -1.0 : 1.0;
  for (int k = 0; k < n; ++k) {
    double mag = (2.0 * k + 1.0) * jb[k] * (k % 2 == 1 ? s : 1.0);
    switch (k % 4) {
      case 0: coef[k] = {mag, 0.0}; break;
      case 1: coef[k] = {0.0, mag}; break;
      case 2: coef[k] = {-mag, 0.0}; break;
      default: coef[k] = {0.0, -mag}; break;
    }
  }
  std::array<Complex, n> W{};
  for (int j = 0; j < n; ++j) {
    Complex acc{};
    for (int k = 0; k < n; ++k) acc += coef[k] * t.P[k][j];
    W[j] = t.w[j] * acc;
  }
  return W;
}

Complex filon(const std::function<double(double)>& rho, double a, double b, double omega) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double theta = omega * h;
  const auto& u = GaussLegendre20::nodes();
  if (std::abs(theta) <= 4.0) {
    const auto& w = GaussLegendre20::weights();
    Complex s{};
    for (int j = 0; j < GaussLegendre20::n; ++j) {
      double r = c + h * u[j];
      s += w[j] * rho(r) * std::polar(1.0, omega * r);
    }
    return s * h;
  }
  auto W = filon_weights(theta);
  Complex s{};
  for (int j = 0; j < GaussLegendre20::n; ++j) s += rho(c + h * u[j]) * W[j];
  return h * std::polar(1.0, omega * c) * s;
}

double geometric_ratio(const std::vector<Complex>& c, int m) {
  std::vector<double> xs, ys;
  int n = static_cast<int>(c.size());
  for (int i = std::max(0, n - m); i < n; ++i) {
    double a = std::abs(c[i]);
    if (a > 1e-300 && std::isfinite(a)) {
      xs.push_back(i);
      ys.push_back(std::log(a));
    }
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return std::exp(sxy / sxx);
}

Complex wynn_epsilon(const std::vector<Complex>& sums, int m) {
  const int n = static_cast<int>(sums.size());
  if (n == 0) return {};
  const int len = std::min(n, m);
  std::vector<Complex> prev(len + 1, Complex{}), cur(sums.end() - len, sums.end());
  Complex best = cur.back();
  for (int k = 1; k < len; ++k) {
    std::vector<Complex> next(len - k);
    for (int j = 0; j < len - k; ++j) {
      Complex diff = cur[j + 1] - cur[j];
      if (std::abs(diff) <= 1e-14 * std::max(std::abs(cur[j + 1]), 1e-300)) return k % 2 == 1 ? cur[j + 1] : best;
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    prev.assign(cur.begin(), cur.end());
    cur = std::move(next);
    if (k % 2 == 0) {
      if (!std::isfinite(cur.back().real()) || !std::isfinite(cur.back().imag())) return best;
      best = cur.back();
    }
  }
  return best;
}

bool shells_nondecreasing(const std::vector<Complex>& c) {
  if (c.size() < 5) return false;
  std::size_t n = c.size();
  for (std::size_t i = n - 5; i < n; ++i) {
    double a = std::abs(c[i]);
    if (!std::isfinite(a)) return true;
    if (a <= 1e-300) return false;
  }
  for (std::size_t i = n - 4; i < n; ++i)
    if (std::abs(c[i]) < std::abs(c[i - 1]) * (1.0 - 1e-9)) return false;
  return true;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

Complex pairwise_sum(const Complex* v, std::size_t n) {
  if (n <= 8) {
    Complex s{};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

namespace {

// Shared driver: `next(k, a, b)` yields the k-th shell bounds, returns false when exhausted.
template <class Bounds>
ShellResult run_shells(const ShellFn& shell, Bounds next, const ShellOptions& opt, bool outward) {
  ShellResult res;
  Complex partial{};
  std::vector<Complex> sums;
  Complex prev_est{}, prev_prev_est{};
  int settled = 0;
  bool stopped_at_boundary = false;
  // deep inward shells carry cancellation noise that extrapolation amplifies,
  // so the inward result is the estimate with the smallest recent change
  Complex best_est{};
  double best_change = kInf;
  for (int k = 0;; ++k) {
    double a = 0, b = 0;
    bool last = false;
    if (!next(k, a, b, last)) break;
    long ev = 0;
    Complex c = shell(a, b, ev);
    res.evaluations += ev;
    res.contributions.push_back(c);
    partial += c;
    sums.push_back(partial);
    res.shells = k + 1;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) break;
    if (last) {
      stopped_at_boundary = true;
      break;
    }

    Complex est = partial;
    double q = 0.0;
    if (opt.extrapolate && k >= 2) {
      q = geometric_ratio(res.contributions, 6);
      if (!outward && k >= 4 && q < 1.0)
        est = wynn_epsilon(sums, 9);
      else if (q < 1.0)
        est += c * (q / (1.0 - q));
    }
    const double scale = std::max(1.0, std::abs(est));
    if (!outward && opt.extrapolate && k >= 6) {
      double change = std::abs(est - prev_est) + std::abs(prev_est - prev_prev_est);
      if (change < best_change) {
        best_change = change;
        best_est = est;
      }
    }
    bool quiet;
    if (opt.extrapolate)
      quiet = k >= 2 && std::abs(est - prev_est) <= opt.tol * scale && std::abs(prev_est - prev_prev_est) <= opt.tol * scale;
    else
      quiet = std::abs(c) <= opt.tol * scale;
    settled = quiet ? settled + 1 : 0;
    prev_prev_est = prev_est;
    prev_est = est;
    bool extent_ok = !outward || b >= opt.min_extent;
    if (k + 1 >= opt.min_shells && extent_ok && settled >= 2) break;
  }

  const auto& cs = res.contributions;
  Complex sum = pairwise_sum(cs.data(), cs.size());
  if (!std::isfinite(std::abs(sum)) || (!stopped_at_boundary && shells_nondecreasing(cs)) ||
      (!stopped_at_boundary && opt.extrapolate && cs.size() >= 5 && geometric_ratio(cs, 5) >= 1.0 - 1e-9 &&
       std::abs(cs.back()) > 1e-300)) {
    res.divergent = true;
    res.value = Complex(kInf, 0.0);
    res.abs_error = kInf;
    return res;
  }
  if (!stopped_at_boundary && opt.extrapolate && cs.size() >= 3) {
    double q = geometric_ratio(cs, 6);
    res.ratio = q;
    if (q < 1.0) res.tail = !outward && cs.size() >= 5 ? wynn_epsilon(sums, 9) - sums.back() : cs.back() * (q / (1.0 - q));
  }
  res.value = sum + res.tail;
  if (!stopped_at_boundary && !outward && std::isfinite(best_change)) {
    double final_change = std::abs(res.value - prev_prev_est) + std::abs(prev_est - prev_prev_est);
    if (best_change < final_change) {
      res.tail = best_est - sum;
      res.value = best_est;
      res.abs_error = best_change + 1e-15 * std::abs(res.value);
      return res;
    }
  }
  double last_change = cs.size() >= 2 ? std::abs(cs.back()) : 0.0;
  if (opt.extrapolate && !stopped_at_boundary) last_change = std::abs(res.value - prev_prev_est);
  if (stopped_at_boundary) last_change = 0.0;
  res.abs_error = last_change + 1e-15 * std::abs(res.value);
  return res;
}

}  // namespace

ShellResult inward_shells(const ShellFn& shell, double r_hi, const ShellOptions& opt) {
  auto next = [&](int k, double& a, double& b, bool& last) {
    b = std::ldexp(r_hi, -k);
    a = 0.5 * b;
    last = false;
    return b > opt.r_min;
  };
  return run_shells(shell, next, opt, false);
}

ShellResult outward_shells(const ShellFn& shell, double r_lo, double r_support, const ShellOptions& opt) {
  auto next = [&](int k, double& a, double& b, bool& last) {
    a = std::ldexp(r_lo, k);
    if (a >= r_support || a >= opt.r_max) return false;
    b = 2.0 * a;
    last = false;
    if (b >= r_support) {
      b = r_support;
      last = true;
    }
    return true;
  };
  return run_shells(shell, next, opt, true);
}

}  // namespace levygen
