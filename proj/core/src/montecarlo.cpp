#include "levygen/montecarlo.hpp"

#include <cmath>
#include <vector>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "levygen/parallel.hpp"
#include "levygen/types.hpp"

namespace levygen {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_tag(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (auto p : parts) {
    std::uint64_t s = h ^ p;
    h = splitmix64(s);
  }
  return h;
}

Rng::Rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t st = seed;
  std::uint64_t a = splitmix64(st);
  st = a ^ tag;
  std::uint64_t b = splitmix64(st);
  st = b ^ index;
  for (auto& s : s_) s = splitmix64(st);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::normal() {
  boost::random::normal_distribution<double> n;
  return n(*this);
}

double Rng::exponential() { return -std::log(uniform()); }

long Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw DomainError("Poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  boost::random::poisson_distribution<long, double> p(mean);
  return p(*this);
}

void RunningStats::add(double v) {
  ++n;
  double delta = v - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (v - mean);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
  const double delta = o.mean - mean;
  const double tot = na + nb;
  mean += delta * nb / tot;
  m2 += o.m2 + delta * delta * na * nb / tot;
  n += o.n;
}

MCEstimate RunningStats::estimate() const {
  MCEstimate e;
  e.mean = mean;
  e.n = n;
  e.std_error = n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  return e;
}

MCEstimate mc_mean(long N, const SeedPolicy& seed, std::uint64_t tag, int workers,
                   const std::function<double(Rng&)>& sample) {
  if (N < 1) throw DomainError("sample count must be >= 1");
  const long block = SeedPolicy::kBlock;
  const long blocks = (N + block - 1) / block;
  std::vector<RunningStats> parts(static_cast<std::size_t>(blocks));
  parallel_for(parts.size(), workers, [&](std::size_t b) {
    const long lo = static_cast<long>(b) * block;
    const long hi = std::min(N, lo + block);
    RunningStats& s = parts[b];
    for (long i = lo; i < hi; ++i) {
      Rng rng(seed.master, tag, static_cast<std::uint64_t>(i));
      s.add(sample(rng));
    }
  });
  RunningStats total;
  for (const auto& p : parts) total.merge(p);
  return total.estimate();
}

}  // namespace levygen
