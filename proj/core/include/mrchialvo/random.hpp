#pragma once

#include <cstdint>
#include <random>

namespace mrchialvo {

/// Seeded uniform stream built on MT19937-64 (std::mt19937_64 is specified
/// bit-exactly by the standard). A double is formed from the top 53 bits, so
/// any port that implements MT19937-64 reproduces the same values.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mrchialvo
