#pragma once

#include <cstdint>
#include <random>

namespace natred {

/// Seeded case generator. The engine output is fixed by the standard, and the
/// mapping to doubles is done here, so streams are identical on every platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }
  bool coin() { return (eng_() >> 63) != 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace natred
