#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sbk {

/// Deterministic random stream. Every consumer derives its own Rng from an
/// explicit seed; no ambient entropy is used anywhere in the library.
///
/// The uniform/normal draws are implemented on top of the raw 64-bit stream
/// (53-bit mantissa scaling, Box-Muller) so sequences do not depend on the
/// standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform01();

  /// Standard normal draw.
  double normal();

  /// Uniform integer in {0, ..., n-1}; n must be positive.
  std::size_t uniform_below(std::size_t n);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes one value into a seed (splitmix64 finalizer). Chaining mix_seed
/// gives cell-indexed seeds that do not depend on evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value);

/// Chained mix over several values.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Bit pattern of a double, for hashing real-valued cell coordinates exactly.
std::uint64_t seed_bits(double v);

}  // namespace sbk
