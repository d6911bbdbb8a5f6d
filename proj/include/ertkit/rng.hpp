#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ertkit
{
/// Seeded generator with explicit (library-independent) real mappings, so a
/// seed reproduces the same draws on every standard library implementation.
class Rng
{
public:
  explicit Rng(const uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of mantissa.
  double Uniform01()
  {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi]; returns lo when lo == hi.
  double Uniform(const double lo, const double hi)
  {
    return lo + (hi - lo) * Uniform01();
  }

  /// Uniform integer in [lo, hi] (inclusive), via rejection to avoid bias.
  int64_t UniformInt(const int64_t lo, const int64_t hi)
  {
    const uint64_t range = static_cast<uint64_t>(hi - lo) + 1u;
    if (range == 0u)
    {
      return static_cast<int64_t>(engine_());
    }
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
    uint64_t draw = engine_();
    while (draw >= limit)
    {
      draw = engine_();
    }
    return lo + static_cast<int64_t>(draw % range);
  }

  bool Bernoulli(const double p) { return Uniform01() < p; }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
inline uint64_t MixSeed(uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(const uint64_t base,
                           const std::initializer_list<uint64_t> indices)
{
  uint64_t seed = MixSeed(base);
  for (const uint64_t index : indices)
  {
    seed = MixSeed(seed ^ MixSeed(index + 0x632be59bd9b4e019ULL));
  }
  return seed;
}
}  // namespace ertkit
