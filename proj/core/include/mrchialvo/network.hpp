#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mrchialvo/types.hpp"

namespace mrchialvo {

/// Ring of N neurons with R-neighbour nonlocal coupling plus a hub (node 0)
/// star-coupled to all others.
struct NetworkConfig {
  std::size_t n_nodes = 100;
  std::size_t r_neighbors = 10;
  double sigma = 0.0;  ///< ring coupling strength
  double mu = 0.0;     ///< star coupling strength
  MapParams map{};
  std::uint64_t seed = 0;
  double init_lo = 0.0;
  double init_hi = 1.0;
  bool random_phi = true;  ///< false: every phi starts at 0
  double escape_radius = kEscapeRadius;
};

/// Throws InvalidArgument for N < 2, R = 0, 2R >= N or bad init bounds.
void validate(const NetworkConfig& cfg);

struct NetworkState {
  std::vector<double> x;
  std::vector<double> phi;
};

/// Initial state drawn from the seeded stream: all x first, then all phi.
NetworkState initial_state(const NetworkConfig& cfg);

/// One synchronous update. Every node, hub included, gets the ring term
/// sigma/(2R) sum_{i=m-R}^{m+R} (x_i - x_m) over ring indices mod N. The hub
/// adds mu sum_i (x_i - x_0); every other node adds mu (x_m - x_0).
/// Returns false (state untouched) if any node leaves the escape radius.
bool network_step(NetworkState& s, const NetworkConfig& cfg, unsigned threads = 1);

struct NetworkHistory {
  std::vector<NetworkState> snapshots;  ///< recorded after the transient
  bool escaped = false;
  std::optional<std::size_t> escape_step;
};

NetworkHistory simulate(const NetworkConfig& cfg, std::size_t n_transient, std::size_t n_record,
                        unsigned threads = 1);

/// Time average of the across-node standard deviation of x.
double sync_error(const NetworkHistory& h);

struct CoherenceReport {
  std::vector<double> local_spread;  ///< per-node time-averaged local std of x
  std::vector<bool> coherent;
  /// Maximal circular runs of >= min_run coherent nodes: (first node, length).
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  double incoherent_fraction = 0.0;
};

CoherenceReport coherence_profile(const NetworkHistory& h, std::size_t window_radius = 2,
                                  double tol = 0.01, std::size_t min_run = 3);

struct ClusterReport {
  std::size_t count = 0;
  std::vector<double> levels;  ///< mean x of each cluster, ascending
};

/// Single-linkage clusters of the final snapshot's x values.
ClusterReport cluster_count(const NetworkHistory& h, double tol = 0.05);

enum class PatternClass { synchronized, clustered, chimera, multi_chimera, imperfect_sync, unsynchronized };

std::string_view to_string(PatternClass c);

struct PatternMetrics {
  double sync_error = 0.0;
  CoherenceReport coherence;
  ClusterReport clusters;
  std::size_t deviating_nodes = 0;
  std::size_t n_nodes = 0;
  PatternClass pattern = PatternClass::unsynchronized;
};

/// Time-averaged |x_m - mean(x)| above 3 sync_error.
std::size_t deviating_node_count(const NetworkHistory& h);

PatternMetrics analyze(const NetworkHistory& h, double cluster_tol = 0.05);

PatternClass classify_pattern(const PatternMetrics& m);

}  // namespace mrchialvo
