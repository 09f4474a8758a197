#include "mrchialvo/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mrchialvo {

double memristance(double phi) { return std::cos(std::numbers::pi * phi); }

MemristorStep memristor_step(double v, double phi, const MapParams& p) {
  return {memristance(phi) * v, p.h * p.k1 * v - p.k2 * phi};
}

std::size_t phl_transient_steps(double omega) {
  if (omega == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(10.0 * 2.0 * std::numbers::pi / std::abs(omega)));
}

namespace {

struct Point {
  double v;
  double i;
};

// Shoelace area of a closed polygon.
double shoelace(const std::vector<Point>& pts) {
  if (pts.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    const auto& p = pts[a];
    const auto& q = pts[(a + 1) % pts.size()];
    twice += p.v * q.i - q.v * p.i;
  }
  return 0.5 * twice;
}

}  // namespace

PhlTrace phl_trace(const DriveSignal& drive, const MapParams& p, double phi0) {
  if (drive.n_steps < 1) throw InvalidArgument("drive needs at least one step");
  if (!std::isfinite(drive.amplitude) || !std::isfinite(drive.omega)) {
    throw InvalidArgument("drive amplitude and frequency must be finite");
  }
  validate(p);

  PhlTrace out;
  out.samples.reserve(drive.n_steps);
  double phi = phi0;
  for (std::size_t n = 0; n < drive.n_steps; ++n) {
    const double v = drive.amplitude * std::sin(drive.omega * static_cast<double>(n));
    const auto [i, next] = memristor_step(v, phi, p);
    out.samples.push_back({v, i, phi});
    phi = next;
  }

  out.transient_steps = phl_transient_steps(drive.omega);
  const std::size_t first = out.transient_steps < drive.n_steps ? out.transient_steps : 0;

  std::vector<std::size_t> order(drive.n_steps - first);
  std::iota(order.begin(), order.end(), first);
  const double two_pi = 2.0 * std::numbers::pi;
  auto phase = [&](std::size_t n) {
    const double t = std::fmod(drive.omega * static_cast<double>(n), two_pi);
    return t < 0.0 ? t + two_pi : t;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return phase(a) < phase(b); });

  std::vector<Point> loop;
  std::vector<Point> upper{{0.0, 0.0}};
  std::vector<Point> lower{{0.0, 0.0}};
  loop.reserve(order.size());
  for (std::size_t n : order) {
    const Point pt{out.samples[n].v, out.samples[n].i};
    loop.push_back(pt);
    (pt.v >= 0.0 ? upper : lower).push_back(pt);
  }
  out.signed_area = shoelace(loop);
  out.loop_area = std::abs(shoelace(upper)) + std::abs(shoelace(lower));
  return out;
}

}  // namespace mrchialvo
