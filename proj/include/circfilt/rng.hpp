#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

namespace circfilt {

/// Counter-based random generator.
///
/// Draw k of a stream is a pure function of (key, k), so any draw can be
/// addressed directly. This is what lets the parallel particle kernels
/// reproduce the serial ones bit for bit: particle j always consumes the
/// same counter slots regardless of which thread handles it.
///
/// Streams are derived with split(): the child key is a hash of the parent
/// key and a tag, so (seed, run index, purpose) names a stream uniquely.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return bits_at(key_, counter_++); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return uniform_at(key_, counter_++); }

  /// Standard normal. Consumes one pair slot.
  double normal() { return normal_pair_at(key_, counter_++).first; }

  [[nodiscard]] CounterRng split(std::uint64_t tag) const { return CounterRng(key_, tag); }
  [[nodiscard]] CounterRng split(std::string_view purpose) const;
  [[nodiscard]] CounterRng split(std::string_view purpose, std::uint64_t index) const {
    return split(purpose).split(index);
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  static std::uint64_t bits_at(std::uint64_t key, std::uint64_t index) {
    return mix(key ^ mix(index * 0x9e3779b97f4a7c15ULL + 0x3c6ef372fe94f82bULL));
  }

  static double uniform_at(std::uint64_t key, std::uint64_t index) {
    // 53 random mantissa bits, shifted by half an ulp so 0 is never produced.
    return (static_cast<double>(bits_at(key, index) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Two independent standard normals from counter slots 2i and 2i+1 (Box–Muller).
  static std::pair<double, double> normal_pair_at(std::uint64_t key, std::uint64_t index);

 private:
  CounterRng(std::uint64_t parent, std::uint64_t tag) : key_(mix(parent + mix(tag + 0x510e527fade682d1ULL))) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stable 64-bit FNV-1a hash, used to turn purpose names into stream tags.
std::uint64_t stream_tag(std::string_view purpose);

}  // namespace circfilt
