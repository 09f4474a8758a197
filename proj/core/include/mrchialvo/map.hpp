#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "mrchialvo/types.hpp"

namespace mrchialvo {

/// The memristive reduced-Chialvo map, evaluated without escape checks.
inline NeuronState apply_map(const NeuronState& s, const MapParams& p) {
  return {s.x * s.x * std::exp(p.r - s.x) + p.k0 + p.k * s.x * std::cos(std::numbers::pi * s.phi),
          p.k1 * s.x - p.k2 * s.phi};
}

/// Reduced (1-D) Chialvo map x' = x^2 e^{r-x} + k0; the k = 0 limit of the
/// x-component.
inline double reduced_chialvo(double x, double r, double k0) {
  return x * x * std::exp(r - x) + k0;
}

struct StepResult {
  NeuronState state;
  bool escaped = false;
};

/// One map iteration. On escape (|x'| above the radius or non-finite) the
/// input state is returned unchanged with escaped = true.
StepResult step(const NeuronState& s, const MapParams& p, double escape_radius = kEscapeRadius);

struct Orbit {
  std::vector<NeuronState> states;
  std::size_t transient_len = 0;
  bool escaped = false;
  /// Number of map applications (transient included) after which the orbit
  /// left the escape radius.
  std::optional<std::size_t> escape_index;
};

Orbit iterate(const NeuronState& s0, const MapParams& p, std::size_t n_transient,
              std::size_t n_record, double escape_radius = kEscapeRadius);

/// Final state after n iterations, or nullopt on escape.
std::optional<NeuronState> advance(NeuronState s, const MapParams& p, std::size_t n,
                                   double escape_radius = kEscapeRadius);

struct FiringStats {
  std::size_t spike_count = 0;
  std::vector<std::size_t> inter_spike_intervals;
  double isi_cv = 0.0;
  double threshold = 0.0;
};

/// Midpoint between the 10th and 90th percentile of the recorded x values.
double default_spike_threshold(const Orbit& orbit);

/// Spikes are upward crossings of the threshold by x. Throws InvalidArgument
/// for escaped or empty orbits.
FiringStats firing_stats(const Orbit& orbit, std::optional<double> threshold = std::nullopt);

}  // namespace mrchialvo
