#pragma once

// Counter-based generator: draw i of stream k is a pure function of (k, i), so
// any sample can be regenerated independently of thread layout.

#include <tvkit/density_model.hpp>
#include <tvkit/errors.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tvkit {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  /// Key for an independent stream derived from a master seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed * kGamma ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  }

  void seek(std::uint64_t counter) { counter_ = counter; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() { return splitmix64(key_ + (++counter_) * kGamma); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal by Box-Muller (cosine branch only).
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// One draw from the normalised model (restrictions by rejection).
inline double sample(const DensityModel& model, CounterRng& rng) {
  switch (model.kind()) {
    case DensityKind::standard_gaussian: return rng.normal();
    case DensityKind::gaussian: return model.mean() + model.sigma() * rng.normal();
    case DensityKind::lebesgue: return model.support().lo + model.support().length() * rng.uniform();
    case DensityKind::restricted:
      for (int i = 0; i < 1000000; ++i) {
        const double x = sample(model.base(), rng);
        if (model.support().contains(x)) return x;
      }
      throw numeric_error("rejection sampling of restricted density failed");
  }
  return 0.0;
}

}  // namespace tvkit
