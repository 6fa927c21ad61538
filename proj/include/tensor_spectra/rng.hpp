#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tensor_spectra {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: draw c of stream (seed, stream, substream) is a pure
// function of those four integers, so sample indices can be partitioned
// across any number of workers without changing a single draw.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_(derive_key(seed, stream, substream)) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return splitmix_finalize(splitmix_finalize(counter_) ^ key_);
  }

  // uniform on [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]; never zero, safe under log
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; pairs are cached so every entry costs
  // a fixed number of counter increments
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t substream) {
    std::uint64_t k = splitmix_finalize(seed + 0x9e3779b97f4a7c15ULL);
    k = splitmix_finalize(k ^ splitmix_finalize(stream + 0xd1b54a32d192ed03ULL));
    k = splitmix_finalize(k ^ splitmix_finalize(substream + 0x8bb84b93962eacc9ULL));
    return k;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tensor_spectra
