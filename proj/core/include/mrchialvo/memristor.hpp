#pragma once

#include <cstddef>
#include <vector>

#include "mrchialvo/types.hpp"

namespace mrchialvo {

/// Cosine memconductance W(phi) = cos(pi * phi).
double memristance(double phi);

struct MemristorStep {
  double current = 0.0;
  double phi_next = 0.0;
};

/// One step of the discrete flux-controlled memristor driven by voltage v.
MemristorStep memristor_step(double v, double phi, const MapParams& p);

/// Sinusoidal drive v_n = amplitude * sin(omega * n), n = 0 .. n_steps-1.
struct DriveSignal {
  double amplitude = 1.0;
  double omega = 1.0;
  std::size_t n_steps = 1;
};

struct PhlSample {
  double v = 0.0;
  double i = 0.0;
  double phi = 0.0;
};

struct PhlTrace {
  std::vector<PhlSample> samples;
  /// Enclosed area: sum of |area| of the v >= 0 and v < 0 lobes.
  double loop_area = 0.0;
  /// Shoelace area of the whole phase-ordered loop (lobes keep their sign).
  double signed_area = 0.0;
  std::size_t transient_steps = 0;
};

/// Number of leading samples discarded before measuring the loop
/// (ten drive periods, rounded up).
std::size_t phl_transient_steps(double omega);

/// Drives the memristor and measures the pinched hysteresis loop.
///
/// The drive phase omega*n is generally incommensurate with 2*pi, so the
/// post-transient samples are ordered by phase (omega*n mod 2*pi) to trace
/// one full period of the (v, i) loop before applying the shoelace formula.
/// If n_steps does not exceed the transient, the loop is measured on all
/// samples instead.
PhlTrace phl_trace(const DriveSignal& drive, const MapParams& p, double phi0 = 0.0);

}  // namespace mrchialvo
