#include "levygen/directions.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace levygen {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

Vector quasi_normal_direction(int d, unsigned long i) {
  Vector v(d);
  for (int k = 0; k < d; ++k) {
    double u = radical_inverse(i + 1, kPrimes[k]);
    v[k] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
  }
  double n = v.norm();
  if (n < 1e-12) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / n;
}

std::vector<SphereNode> build_rule(int d) {
  std::vector<SphereNode> out;
  const double area = sphere_area(d);
  if (d == 1) {
    Vector p(1), m(1);
    p[0] = 1.0;
    m[0] = -1.0;
    out.push_back({p, 1.0, 1});
    out.push_back({m, 1.0, 0});
  } else if (d == 2) {
    const int n = 64;
    for (int j = 0; j < n; ++j) {
      double phi = 2.0 * kPi * j / n;
      Vector v(2);
      v << std::cos(phi), std::sin(phi);
      out.push_back({v, area / n, (j + n / 2) % n});
    }
  } else if (d == 3) {
    using Rule = boost::math::quadrature::gauss<double, 10>;
    const auto& a = Rule::abscissa();
    const auto& w = Rule::weights();
    std::array<double, 10> z{}, wz{};
    for (int i = 0; i < 5; ++i) {
      z[4 - i] = -a[i];
      wz[4 - i] = w[i];
      z[5 + i] = a[i];
      wz[5 + i] = w[i];
    }
    const int nphi = 20;
    for (int i = 0; i < 10; ++i) {
      double s = std::sqrt(1.0 - z[i] * z[i]);
      for (int j = 0; j < nphi; ++j) {
        double phi = 2.0 * kPi * (j + 0.5) / nphi;
        Vector v(3);
        v << s * std::cos(phi), s * std::sin(phi), z[i];
        int anti = (9 - i) * nphi + (j + nphi / 2) % nphi;
        out.push_back({v, wz[i] * 2.0 * kPi / nphi, anti});
      }
    }
  } else {
    const int half = 128;
    for (int i = 0; i < half; ++i) {
      Vector v = quasi_normal_direction(d, static_cast<unsigned long>(i));
      out.push_back({v, area / (2 * half), 2 * i + 1});
      out.push_back({-v, area / (2 * half), 2 * i});
    }
  }
  return out;
}

}  // namespace

double radical_inverse(unsigned long i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

double sphere_area(int d) {
  require_dimension(d);
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

const std::vector<SphereNode>& sphere_rule(int d) {
  require_dimension(d);
  static std::mutex mu;
  static std::map<int, std::vector<SphereNode>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build_rule(d)).first;
  return it->second;
}

std::vector<Vector> probe_directions(int d, int count) {
  require_dimension(d);
  std::vector<Vector> out;
  if (d == 1) {
    Vector p(1);
    p[0] = 1.0;
    out.push_back(p);
    out.push_back(-p);
    return out;
  }
  if (count < 1) count = 1;
  if (d == 2) {
    for (int j = 0; j < count; ++j) {
      double phi = 2.0 * kPi * j / count;
      Vector v(2);
      v << std::cos(phi), std::sin(phi);
      out.push_back(v);
    }
  } else if (d == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      double z = 1.0 - (2.0 * j + 1.0) / count;
      double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vector v(3);
      v << s * std::cos(golden * j), s * std::sin(golden * j), z;
      out.push_back(v);
    }
  } else {
    for (int j = 0; j < count; ++j) out.push_back(quasi_normal_direction(d, static_cast<unsigned long>(j)));
  }
  return out;
}

}  // namespace levygen
