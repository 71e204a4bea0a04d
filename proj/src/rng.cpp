#include "circfilt/rng.hpp"

#include <cmath>
#include <numbers>

namespace circfilt {

std::uint64_t stream_tag(std::string_view purpose) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : purpose) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

CounterRng CounterRng::split(std::string_view purpose) const { return split(stream_tag(purpose)); }

std::pair<double, double> CounterRng::normal_pair_at(std::uint64_t key, std::uint64_t index) {
  const double u1 = uniform_at(key, 2 * index);
  const double u2 = uniform_at(key, 2 * index + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace circfilt
