#pragma once

#include <cstdint>
#include <random>

namespace netsig {

/// Random source used by every generator and initializer in the library.
///
/// The engine is MT19937-64 (std::mt19937_64, whose output sequence is fixed
/// by the C++ standard). Distributions are implemented here rather than taken
/// from <random>, because the standard leaves their algorithms to the vendor;
/// this keeps seeded output bit-identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// True with probability p. p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), unbiased (rejection on the top bits).
  std::uint64_t below(std::uint64_t bound);

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to (seed, stream); used to derive independent
/// seeds for sub-streams (periods, repetitions, models).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace netsig
