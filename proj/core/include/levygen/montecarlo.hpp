#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>

namespace levygen {

/// xoshiro256++ stream. Cheap to construct, so every sample block gets its own stream.
class Rng {
 public:
  using result_type = std::uint64_t;
  /// State from splitmix64 over (seed, tag, index).
  Rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on (0, 1): never 0 or 1.
  double uniform();
  double normal();
  double exponential();
  /// Poisson count with the given mean (Boost's sampler).
  long poisson(double mean);

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Combines integers into one stream tag (order-sensitive).
std::uint64_t mix_tag(std::initializer_list<std::uint64_t> parts);

/// Master seed plus the stream rule: replicate i of experiment tag g draws from Rng(master, g, i).
/// Replicates are reduced in fixed blocks of kBlock, merged in block order.
struct SeedPolicy {
  static constexpr std::uint64_t kDefaultSeed = 0x4C455659;   // "LEVY"
  static constexpr long kBlock = 4096;
  std::uint64_t master = kDefaultSeed;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;   // sample standard deviation / sqrt(N)
  long n = 0;
};

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double v);
  void merge(const RunningStats& o);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  MCEstimate estimate() const;
};

/// Mean of N draws of sample(rng). Replicate i gets Rng(master, tag, i); replicates are accumulated
/// in fixed blocks of SeedPolicy::kBlock merged in index order, so the result does not depend on the
/// worker count.
MCEstimate mc_mean(long N, const SeedPolicy& seed, std::uint64_t tag, int workers,
                   const std::function<double(Rng&)>& sample);

}  // namespace levygen
