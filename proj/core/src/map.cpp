#include "mrchialvo/map.hpp"

#include <algorithm>

namespace mrchialvo {

StepResult step(const NeuronState& s, const MapParams& p, double escape_radius) {
  const NeuronState next = apply_map(s, p);
  if (!finite(next) || std::abs(next.x) > escape_radius) return {s, true};
  return {next, false};
}

Orbit iterate(const NeuronState& s0, const MapParams& p, std::size_t n_transient,
              std::size_t n_record, double escape_radius) {
  Orbit orbit;
  orbit.transient_len = n_transient;
  orbit.states.reserve(n_record);
  NeuronState s = s0;
  const std::size_t total = n_transient + n_record;
  for (std::size_t n = 0; n < total; ++n) {
    const auto [next, escaped] = step(s, p, escape_radius);
    if (escaped) {
      orbit.escaped = true;
      orbit.escape_index = n + 1;
      break;
    }
    s = next;
    if (n >= n_transient) orbit.states.push_back(s);
  }
  return orbit;
}

std::optional<NeuronState> advance(NeuronState s, const MapParams& p, std::size_t n,
                                   double escape_radius) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto [next, escaped] = step(s, p, escape_radius);
    if (escaped) return std::nullopt;
    s = next;
  }
  return s;
}

namespace {

// Linear-interpolated percentile of sorted data, q in [0, 1].
double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double default_spike_threshold(const Orbit& orbit) {
  if (orbit.states.empty()) throw InvalidArgument("empty orbit");
  std::vector<double> xs;
  xs.reserve(orbit.states.size());
  for (const auto& s : orbit.states) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  return 0.5 * (percentile(xs, 0.1) + percentile(xs, 0.9));
}

FiringStats firing_stats(const Orbit& orbit, std::optional<double> threshold) {
  if (orbit.escaped) throw InvalidArgument("firing statistics need a bounded orbit");
  if (orbit.states.empty()) throw InvalidArgument("empty orbit");

  FiringStats out;
  out.threshold = threshold.value_or(default_spike_threshold(orbit));

  std::optional<std::size_t> last;
  for (std::size_t n = 1; n < orbit.states.size(); ++n) {
    if (orbit.states[n - 1].x < out.threshold && orbit.states[n].x >= out.threshold) {
      ++out.spike_count;
      if (last) out.inter_spike_intervals.push_back(n - *last);
      last = n;
    }
  }

  const auto& isi = out.inter_spike_intervals;
  if (isi.size() >= 2) {
    double mean = 0.0;
    for (auto d : isi) mean += static_cast<double>(d);
    mean /= static_cast<double>(isi.size());
    double var = 0.0;
    for (auto d : isi) var += (static_cast<double>(d) - mean) * (static_cast<double>(d) - mean);
    var /= static_cast<double>(isi.size());
    out.isi_cv = std::sqrt(var) / mean;
  }
  return out;
}

}  // namespace mrchialvo
