#pragma once

// Minimal property-test helpers: a seeded generator and a loop that reports
// the failing case index so a failure can be replayed.

#include <cstdint>
#include <random>
#include <vector>

#include "levygen/measure.hpp"

namespace prop {

struct Gen {
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  std::mt19937_64 eng;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
  bool coin() { return integer(0, 1) == 1; }

  levygen::Vector vec(int d, double lo, double hi) {
    levygen::Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  levygen::Vector nonzero_vec(int d, double lo, double hi) {
    for (;;) {
      auto v = vec(d, lo, hi);
      if (v.norm() > 1e-3) return v;
    }
  }

  std::vector<levygen::Atom> atoms(int d, int max_count, double radius) {
    std::vector<levygen::Atom> out;
    int n = integer(1, max_count);
    for (int i = 0; i < n; ++i) out.push_back({nonzero_vec(d, -radius, radius), uniform(0.1, 3.0)});
    return out;
  }
};

}  // namespace prop

// Runs `body(gen, case_index)` for n cases with independent seeds.
#define PROPERTY_CASES(n, seed, ...)                           \
  for (int case_index = 0; case_index < (n); ++case_index) {  \
    prop::Gen gen((seed) + 7919u * case_index);               \
    CAPTURE(case_index);                                      \
    (__VA_ARGS__)(gen, case_index);                           \
  }
