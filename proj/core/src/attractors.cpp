#include "mrchialvo/attractors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/map.hpp"
#include "mrchialvo/parallel.hpp"

namespace mrchialvo {

std::string_view to_string(AttractorKind k) {
  switch (k) {
    case AttractorKind::divergent: return "divergent";
    case AttractorKind::periodic: return "periodic";
    case AttractorKind::quasiperiodic: return "quasiperiodic";
    case AttractorKind::chaotic: return "chaotic";
  }
  return "?";
}

double largest_lyapunov(NeuronState s, const MapParams& p, std::size_t n, std::size_t transient,
                        double escape_radius) {
  if (n == 0) throw InvalidArgument("lyapunov needs at least one step");
  if (transient > 0) {
    const auto t = advance(s, p, transient, escape_radius);
    if (!t) throw NumericalFailure("orbit escaped during lyapunov transient");
    s = *t;
  }
  double v0 = 1.0 / std::sqrt(2.0), v1 = 1.0 / std::sqrt(2.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Mat2 j = jacobian(s, p);
    const double w0 = j[0][0] * v0 + j[0][1] * v1;
    const double w1 = j[1][0] * v0 + j[1][1] * v1;
    double norm = std::hypot(w0, w1);
    if (norm == 0.0 || !std::isfinite(norm)) {
      // Tangent vector annihilated; restart from a fresh direction.
      norm = std::numeric_limits<double>::min();
      v0 = 1.0 / std::sqrt(2.0);
      v1 = -v0;
    } else {
      v0 = w0 / norm;
      v1 = w1 / norm;
    }
    sum += std::log(norm);
    if (i + 1 == n) break;
    const StepResult r = step(s, p, escape_radius);
    if (r.escaped) throw NumericalFailure("orbit escaped during lyapunov estimate");
    s = r.state;
  }
  return sum / static_cast<double>(n);
}

namespace {

Box bounding_box(const std::vector<NeuronState>& pts) {
  Box b{pts.front().x, pts.front().x, pts.front().phi, pts.front().phi};
  for (const auto& s : pts) {
    b.x_lo = std::min(b.x_lo, s.x);
    b.x_hi = std::max(b.x_hi, s.x);
    b.phi_lo = std::min(b.phi_lo, s.phi);
    b.phi_hi = std::max(b.phi_hi, s.phi);
  }
  return b;
}

double dist(const NeuronState& a, const NeuronState& b) { return std::hypot(a.x - b.x, a.phi - b.phi); }

// Smallest P with every tail point repeating after P steps, or 0.
std::size_t detect_period(const std::vector<NeuronState>& tail, std::size_t max_period, double tol) {
  for (std::size_t per = 1; per <= max_period && per < tail.size(); ++per) {
    bool ok = true;
    for (std::size_t i = 0; i + per < tail.size() && ok; ++i) {
      ok = std::abs(tail[i + per].x - tail[i].x) <= tol && std::abs(tail[i + per].phi - tail[i].phi) <= tol;
    }
    if (ok) return per;
  }
  return 0;
}

// Period minimising the largest recurrence error over the tail.
std::size_t best_period(const std::vector<NeuronState>& tail, std::size_t max_period) {
  std::size_t best = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t per = 1; per <= max_period && per < tail.size(); ++per) {
    double err = 0.0;
    for (std::size_t i = 0; i + per < tail.size(); ++i) err = std::max(err, dist(tail[i + per], tail[i]));
    if (err < best_err) {
      best_err = err;
      best = per;
    }
  }
  return best;
}

}  // namespace

AttractorRecord classify_attractor(const NeuronState& s0, const MapParams& p, const ClassifyBudget& b) {
  if (b.tail < 2 * b.max_period) throw InvalidArgument("tail must cover two maximal periods");
  AttractorRecord rec;
  const auto start = advance(s0, p, b.transient, b.escape_radius);
  if (!start) return rec;

  NeuronState s = *start;
  std::vector<NeuronState> tail;
  for (std::size_t ext = 0;; ++ext) {
    const Orbit o = iterate(s, p, 0, b.tail, b.escape_radius);
    if (o.escaped) return rec;
    tail = o.states;

    const std::size_t per = detect_period(tail, b.max_period, b.period_tol);
    if (per > 0) {
      rec.kind = AttractorKind::periodic;
      rec.period = per;
      rec.representative.assign(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(per));
      rec.bounds = bounding_box(rec.representative);
      rec.lyapunov = largest_lyapunov(tail.front(), p, b.tail, 0, b.escape_radius);
      rec.converged = ext == 0 || rec.converged;
      return rec;
    }

    rec.lyapunov = largest_lyapunov(tail.front(), p, b.tail, 0, b.escape_radius);
    if (rec.lyapunov > b.lyap_threshold) {
      rec.kind = AttractorKind::chaotic;
      break;
    }
    if (rec.lyapunov >= -b.lyap_threshold) {
      rec.kind = AttractorKind::quasiperiodic;
      break;
    }
    // Contracting but not yet periodic within tolerance: keep iterating.
    rec.converged = false;
    s = tail.back();
    if (ext + 1 >= b.max_extensions) {
      rec.kind = AttractorKind::periodic;
      rec.period = best_period(tail, b.max_period);
      rec.representative.assign(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(rec.period));
      rec.bounds = bounding_box(rec.representative);
      return rec;
    }
  }

  rec.bounds = bounding_box(tail);
  const std::size_t m = std::min(b.representative_size, tail.size());
  rec.representative.reserve(m);
  for (std::size_t i = 0; i < m; ++i) rec.representative.push_back(tail[i * tail.size() / m]);
  return rec;
}

bool same_attractor(const AttractorRecord& a, const AttractorRecord& b, double tol, double box_rel_tol) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AttractorKind::divergent:
      return true;
    case AttractorKind::periodic: {
      if (a.period != b.period) return false;
      auto directed = [](const std::vector<NeuronState>& from, const std::vector<NeuronState>& to) {
        double worst = 0.0;
        for (const auto& s : from) {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& t : to) best = std::min(best, dist(s, t));
          worst = std::max(worst, best);
        }
        return worst;
      };
      return std::max(directed(a.representative, b.representative),
                      directed(b.representative, a.representative)) <= tol;
    }
    case AttractorKind::quasiperiodic:
    case AttractorKind::chaotic: {
      const auto diag = [](const Box& x) { return std::hypot(x.x_hi - x.x_lo, x.phi_hi - x.phi_lo); };
      const double t = box_rel_tol * std::max(diag(a.bounds), diag(b.bounds)) + tol;
      return std::abs(a.bounds.x_lo - b.bounds.x_lo) <= t && std::abs(a.bounds.x_hi - b.bounds.x_hi) <= t &&
             std::abs(a.bounds.phi_lo - b.bounds.phi_lo) <= t &&
             std::abs(a.bounds.phi_hi - b.bounds.phi_hi) <= t;
    }
  }
  return false;
}

NeuronState BasinGrid::cell_state(std::size_t ix, std::size_t iphi) const {
  auto lerp = [](double lo, double hi, std::size_t i, std::size_t n) {
    return n < 2 ? lo : (i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  };
  return {lerp(region.x_lo, region.x_hi, ix, nx), lerp(region.phi_lo, region.phi_hi, iphi, nphi)};
}

BasinGrid basin_grid(const GridRegion& region, std::size_t nx, std::size_t nphi, const MapParams& p,
                     const ClassifyBudget& budget, unsigned threads, double match_tol) {
  if (nx == 0 || nphi == 0) throw InvalidArgument("basin grid must have at least one cell");
  if (!(region.x_hi > region.x_lo) || !(region.phi_hi > region.phi_lo)) {
    throw InvalidArgument("basin region must have positive extent");
  }
  validate(p);
  BasinGrid g;
  g.region = region;
  g.nx = nx;
  g.nphi = nphi;
  g.labels.resize(nx * nphi);
  const unsigned nt = resolve_threads(threads);

  // Rows are classified in blocks to bound memory; labels are assigned
  // serially in row-major order.
  const std::size_t block_rows = std::max<std::size_t>(1, 4096 / nx + 1);
  std::vector<AttractorRecord> block;
  for (std::size_t row0 = 0; row0 < nphi; row0 += block_rows) {
    const std::size_t rows = std::min(block_rows, nphi - row0);
    block.assign(rows * nx, {});
    parallel_for(rows * nx, nt, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        block[c] = classify_attractor(g.cell_state(c % nx, row0 + c / nx), p, budget);
      }
    });
    for (std::size_t c = 0; c < block.size(); ++c) {
      std::uint32_t label = static_cast<std::uint32_t>(g.attractors.size());
      for (std::uint32_t l = 0; l < g.attractors.size(); ++l) {
        if (same_attractor(g.attractors[l], block[c], match_tol)) {
          label = l;
          break;
        }
      }
      if (label == g.attractors.size()) g.attractors.push_back(std::move(block[c]));
      g.labels[row0 * nx + c] = label;
    }
  }
  return g;
}

CorrelationResult correlation_dimension(const std::vector<NeuronState>& points, const CorrelationOptions& o) {
  if (points.size() < 2) throw InvalidArgument("correlation dimension needs at least 2 points");
  if (o.n_radii < 3 || !(o.radius_lo > 0.0) || !(o.radius_hi > o.radius_lo) || !(o.fit_hi > o.fit_lo)) {
    throw InvalidArgument("bad correlation-dimension options");
  }
  const std::size_t n = points.size();
  std::vector<double> xs(n), ps(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = points[i].x;
    ps[i] = points[i].phi;
  }
  if (o.standardize) {
    for (auto* v : {&xs, &ps}) {
      const double mean = std::accumulate(v->begin(), v->end(), 0.0) / static_cast<double>(n);
      double var = 0.0;
      for (double a : *v) var += (a - mean) * (a - mean);
      const double sd = std::sqrt(var / static_cast<double>(n));
      for (double& a : *v) a = sd > 0.0 ? (a - mean) / sd : a - mean;
    }
  }
  const Box box = [&] {
    std::vector<NeuronState> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = {xs[i], ps[i]};
    return bounding_box(z);
  }();
  const double diameter = std::hypot(box.x_hi - box.x_lo, box.phi_hi - box.phi_lo);

  CorrelationResult res;
  if (diameter == 0.0) return res;

  const std::size_t m = o.n_radii;
  const double log_lo = std::log(o.radius_lo * diameter);
  const double log_hi = std::log(o.radius_hi * diameter);
  const double dlog = (log_hi - log_lo) / static_cast<double>(m - 1);
  res.radii.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.radii[i] = std::exp(log_lo + dlog * static_cast<double>(i));

  // hist[b] counts pairs with radii[b-1] < d <= radii[b] (b = 0: d <= radii[0]).
  const unsigned nt = resolve_threads(o.threads);
  const std::size_t chunks = std::max<std::size_t>(nt, std::min<std::size_t>(n, 256));
  std::vector<std::vector<std::uint64_t>> part(chunks, std::vector<std::uint64_t>(m + 1, 0));
  parallel_for(chunks, nt, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      auto& h = part[c];
      // Interleaved rows balance the triangular workload across chunks.
      for (std::size_t i = c; i < n; i += chunks) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double d = std::hypot(xs[i] - xs[j], ps[i] - ps[j]);
          std::size_t bin;
          if (d <= res.radii[0]) {
            bin = 0;
          } else {
            bin = static_cast<std::size_t>(std::ceil((std::log(d) - log_lo) / dlog));
            if (bin > m) bin = m;
            while (bin > 0 && d <= res.radii[bin - 1]) --bin;
            while (bin < m && d > res.radii[bin]) ++bin;
          }
          ++h[bin];
        }
      }
    }
  });
  std::vector<std::uint64_t> total(m + 1, 0);
  for (const auto& h : part)
    for (std::size_t b = 0; b <= m; ++b) total[b] += h[b];

  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  res.correlation_sum.resize(m);
  std::uint64_t cum = 0;
  for (std::size_t b = 0; b < m; ++b) {
    cum += total[b];
    res.correlation_sum[b] = static_cast<double>(cum) / pairs;
  }
  if (total[m] == 0 && total[0] == static_cast<std::uint64_t>(pairs)) return res;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  const double w_lo = log_lo + o.fit_lo * (log_hi - log_lo) - 1e-12;
  const double w_hi = log_lo + o.fit_hi * (log_hi - log_lo) + 1e-12;
  for (std::size_t b = 0; b < m; ++b) {
    const double lr = log_lo + dlog * static_cast<double>(b);
    if (lr < w_lo || lr > w_hi || res.correlation_sum[b] <= 0.0) continue;
    const double lc = std::log(res.correlation_sum[b]);
    sx += lr;
    sy += lc;
    sxx += lr * lr;
    sxy += lr * lc;
    ++cnt;
  }
  if (cnt < 3) throw NumericalFailure("too few radii with nonzero correlation sum in the fit window");
  const double cn = static_cast<double>(cnt);
  res.dimension = (cn * sxy - sx * sy) / (cn * sxx - sx * sx);
  res.fit_points = cnt;
  return res;
}

std::vector<NeuronState> attractor_points(const NeuronState& s0, const MapParams& p, std::size_t n_transient,
                                          std::size_t n_points) {
  const Orbit o = iterate(s0, p, n_transient, n_points);
  if (o.escaped) throw NumericalFailure("orbit escaped before the attractor was sampled");
  return o.states;
}

}  // namespace mrchialvo
