#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mrchialvo {

/// Parameter vector shared by the memristor and the neuron map.
///
/// `h` is the memristor material constant; it only enters the standalone
/// memristor (the neuron map absorbs it into k1).
struct MapParams {
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k = 0.0;
  double r = 0.0;
  double h = 1.0;

  bool operator==(const MapParams&) const = default;
};

enum class Param { k0, k1, k2, k, r, h };

Param parse_param(std::string_view name);
std::string_view param_name(Param p);

double get(const MapParams& p, Param which);
void set(MapParams& p, Param which, double value);

/// Throws InvalidArgument if any field is non-finite.
void validate(const MapParams& p);

struct NeuronState {
  double x = 0.0;
  double phi = 0.0;

  bool operator==(const NeuronState&) const = default;
};

inline bool finite(const NeuronState& s) {
  return std::isfinite(s.x) && std::isfinite(s.phi);
}

/// |x| beyond this is treated as divergence.
inline constexpr double kEscapeRadius = 1e6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Degenerate denominators, non-complex eigenvalues and similar.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mrchialvo
