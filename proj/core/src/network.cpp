#include "mrchialvo/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrchialvo/map.hpp"
#include "mrchialvo/parallel.hpp"
#include "mrchialvo/random.hpp"

namespace mrchialvo {

namespace {

// Below this many nodes per worker, starting threads costs more than the step.
constexpr std::size_t kMinNodesPerThread = 2048;

}  // namespace

void validate(const NetworkConfig& cfg) {
  if (cfg.n_nodes < 2) throw InvalidArgument("network needs at least 2 nodes");
  if (cfg.r_neighbors == 0 || 2 * cfg.r_neighbors >= cfg.n_nodes) {
    throw InvalidArgument("ring radius R must satisfy 1 <= R and 2R < N");
  }
  if (!(cfg.init_hi >= cfg.init_lo) || !std::isfinite(cfg.init_lo) || !std::isfinite(cfg.init_hi)) {
    throw InvalidArgument("bad initial-condition bounds");
  }
  if (!std::isfinite(cfg.sigma) || !std::isfinite(cfg.mu)) throw InvalidArgument("coupling must be finite");
  validate(cfg.map);
}

NetworkState initial_state(const NetworkConfig& cfg) {
  validate(cfg);
  UniformStream rng(cfg.seed);
  NetworkState s;
  s.x.resize(cfg.n_nodes);
  s.phi.assign(cfg.n_nodes, 0.0);
  for (auto& v : s.x) v = rng.next(cfg.init_lo, cfg.init_hi);
  if (cfg.random_phi) {
    for (auto& v : s.phi) v = rng.next(cfg.init_lo, cfg.init_hi);
  }
  return s;
}

bool network_step(NetworkState& s, const NetworkConfig& cfg, unsigned threads) {
  const std::size_t n = cfg.n_nodes;
  const std::size_t rr = cfg.r_neighbors;
  const auto& x = s.x;
  const auto& phi = s.phi;
  const MapParams& p = cfg.map;

  // Differences are summed directly so that equal states give exact zeros.
  double star_sum = 0.0;
  for (double v : x) star_sum += v - x[0];

  std::vector<double> nx(n), nphi(n);
  std::vector<char> bad(n, 0);
  const double ring = cfg.sigma / (2.0 * static_cast<double>(rr));
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      double acc = 0.0;
      for (std::size_t off = 1; off <= rr; ++off) {
        acc += (x[(m + n - off) % n] - x[m]) + (x[(m + off) % n] - x[m]);
      }
      double coupling = ring * acc;
      if (m == 0) {
        coupling += cfg.mu * star_sum;
      } else {
        coupling += cfg.mu * (x[m] - x[0]);
      }
      const NeuronState img = apply_map({x[m], phi[m]}, p);
      nx[m] = img.x + coupling;
      nphi[m] = img.phi;
      bad[m] = !(std::abs(nx[m]) <= cfg.escape_radius) || !std::isfinite(nphi[m]);
    }
  }, kMinNodesPerThread);
  if (std::any_of(bad.begin(), bad.end(), [](char b) { return b != 0; })) return false;
  s.x = std::move(nx);
  s.phi = std::move(nphi);
  return true;
}

NetworkHistory simulate(const NetworkConfig& cfg, std::size_t n_transient, std::size_t n_record,
                        unsigned threads) {
  NetworkState s = initial_state(cfg);
  NetworkHistory h;
  h.snapshots.reserve(n_record);
  for (std::size_t t = 0; t < n_transient + n_record; ++t) {
    if (!network_step(s, cfg, threads)) {
      h.escaped = true;
      h.escape_step = t + 1;
      return h;
    }
    if (t >= n_transient) h.snapshots.push_back(s);
  }
  return h;
}

namespace {

void require_snapshots(const NetworkHistory& h) {
  if (h.snapshots.empty()) throw InvalidArgument("network history has no recorded snapshots");
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double a : v) acc += a;
  return acc / static_cast<double>(v.size());
}

}  // namespace

double sync_error(const NetworkHistory& h) {
  require_snapshots(h);
  double acc = 0.0;
  for (const auto& s : h.snapshots) {
    const double mu = mean_of(s.x);
    double var = 0.0;
    for (double v : s.x) var += (v - mu) * (v - mu);
    acc += std::sqrt(var / static_cast<double>(s.x.size()));
  }
  return acc / static_cast<double>(h.snapshots.size());
}

CoherenceReport coherence_profile(const NetworkHistory& h, std::size_t window_radius, double tol,
                                  std::size_t min_run) {
  require_snapshots(h);
  const std::size_t n = h.snapshots.front().x.size();
  if (2 * window_radius + 1 > n) throw InvalidArgument("coherence window wider than the ring");
  CoherenceReport rep;
  rep.local_spread.assign(n, 0.0);
  const double w = static_cast<double>(2 * window_radius + 1);
  for (const auto& s : h.snapshots) {
    for (std::size_t m = 0; m < n; ++m) {
      double mu = 0.0;
      for (std::size_t o = 0; o <= 2 * window_radius; ++o) mu += s.x[(m + n - window_radius + o) % n];
      mu /= w;
      double var = 0.0;
      for (std::size_t o = 0; o <= 2 * window_radius; ++o) {
        const double d = s.x[(m + n - window_radius + o) % n] - mu;
        var += d * d;
      }
      rep.local_spread[m] += std::sqrt(var / w);
    }
  }
  std::size_t incoherent = 0;
  rep.coherent.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    rep.local_spread[m] /= static_cast<double>(h.snapshots.size());
    rep.coherent[m] = rep.local_spread[m] < tol;
    if (!rep.coherent[m]) ++incoherent;
  }
  rep.incoherent_fraction = static_cast<double>(incoherent) / static_cast<double>(n);

  if (incoherent == 0) {
    rep.groups.emplace_back(0, n);
    return rep;
  }
  // Start scanning just after an incoherent node so runs never wrap mid-way.
  std::size_t start = 0;
  while (rep.coherent[start]) ++start;
  std::size_t run_first = 0, run_len = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t m = (start + k) % n;
    if (rep.coherent[m]) {
      if (run_len == 0) run_first = m;
      ++run_len;
    } else {
      if (run_len >= min_run) rep.groups.emplace_back(run_first, run_len);
      run_len = 0;
    }
  }
  std::sort(rep.groups.begin(), rep.groups.end());
  return rep;
}

ClusterReport cluster_count(const NetworkHistory& h, double tol) {
  require_snapshots(h);
  std::vector<double> v = h.snapshots.back().x;
  std::sort(v.begin(), v.end());
  ClusterReport rep;
  double acc = v.front();
  std::size_t members = 1;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v[i] - v[i - 1] > tol) {
      rep.levels.push_back(acc / static_cast<double>(members));
      if (i == v.size()) break;
      acc = 0.0;
      members = 0;
    }
    acc += v[i];
    ++members;
  }
  rep.count = rep.levels.size();
  return rep;
}

std::string_view to_string(PatternClass c) {
  switch (c) {
    case PatternClass::synchronized: return "synchronized";
    case PatternClass::clustered: return "clustered";
    case PatternClass::chimera: return "chimera";
    case PatternClass::multi_chimera: return "multi_chimera";
    case PatternClass::imperfect_sync: return "imperfect_sync";
    case PatternClass::unsynchronized: return "unsynchronized";
  }
  return "?";
}

std::size_t deviating_node_count(const NetworkHistory& h) {
  const double se = sync_error(h);
  const std::size_t n = h.snapshots.front().x.size();
  std::vector<double> dev(n, 0.0);
  for (const auto& s : h.snapshots) {
    const double mu = mean_of(s.x);
    for (std::size_t m = 0; m < n; ++m) dev[m] += std::abs(s.x[m] - mu);
  }
  std::size_t count = 0;
  for (double d : dev) {
    if (d / static_cast<double>(h.snapshots.size()) > 3.0 * se) ++count;
  }
  return count;
}

PatternMetrics analyze(const NetworkHistory& h, double cluster_tol) {
  PatternMetrics m;
  m.sync_error = sync_error(h);
  m.coherence = coherence_profile(h);
  m.clusters = cluster_count(h, cluster_tol);
  m.deviating_nodes = deviating_node_count(h);
  m.n_nodes = h.snapshots.front().x.size();
  m.pattern = classify_pattern(m);
  return m;
}

PatternClass classify_pattern(const PatternMetrics& m) {
  const double inc = m.coherence.incoherent_fraction;
  if (m.sync_error < 1e-3) return PatternClass::synchronized;
  if (m.clusters.count >= 2 && inc < 0.05) return PatternClass::clustered;
  if (m.coherence.groups.size() == 1 && inc > 0.05 && inc < 0.95) return PatternClass::chimera;
  if (m.coherence.groups.size() >= 2 && inc > 0.0) return PatternClass::multi_chimera;
  if (m.sync_error < 0.05 && m.deviating_nodes >= 1 &&
      static_cast<double>(m.deviating_nodes) <= 0.05 * static_cast<double>(m.n_nodes)) {
    return PatternClass::imperfect_sync;
  }
  return PatternClass::unsynchronized;
}

}  // namespace mrchialvo
