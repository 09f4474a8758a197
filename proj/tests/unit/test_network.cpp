#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mrchialvo/map.hpp"
#include "mrchialvo/network.hpp"
#include "mrchialvo/random.hpp"

using namespace mrchialvo;

namespace {

NetworkConfig ring_config() {
  NetworkConfig cfg;
  cfg.map = {2, 0.3, 0.5, -0.5, 1.2};
  cfg.sigma = 0.1;
  return cfg;
}

// Direct transcription of the coupled update for a brute-force comparison.
NetworkState brute_step(const NetworkState& s, const NetworkConfig& cfg) {
  const long n = static_cast<long>(s.x.size());
  const long r = static_cast<long>(cfg.r_neighbors);
  NetworkState out = s;
  for (long m = 0; m < n; ++m) {
    const NeuronState own = apply_map({s.x[m], s.phi[m]}, cfg.map);
    double ring = 0.0;
    for (long i = m - r; i <= m + r; ++i) ring += s.x[((i % n) + n) % n] - s.x[m];
    double star = 0.0;
    if (m == 0) {
      for (long i = 0; i < n; ++i) star += s.x[i] - s.x[0];
    } else {
      star = s.x[m] - s.x[0];
    }
    out.x[m] = own.x + cfg.sigma / (2.0 * r) * ring + cfg.mu * star;
    out.phi[m] = own.phi;
  }
  return out;
}

NetworkHistory history_of(std::vector<std::vector<double>> xs) {
  NetworkHistory h;
  for (auto& x : xs) h.snapshots.push_back({x, std::vector<double>(x.size(), 0.0)});
  return h;
}

}  // namespace

TEST_CASE("configuration is validated") {
  NetworkConfig cfg = ring_config();
  cfg.n_nodes = 1;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg = ring_config();
  cfg.r_neighbors = 50;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg.r_neighbors = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg = ring_config();
  cfg.init_lo = 1.0;
  cfg.init_hi = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
}

TEST_CASE("initial state draws x first, then phi") {
  NetworkConfig cfg = ring_config();
  cfg.n_nodes = 5;
  cfg.r_neighbors = 1;
  cfg.seed = 7;
  const auto s = initial_state(cfg);
  UniformStream rng(7);
  for (double x : s.x) CHECK(x == rng.next(0.0, 1.0));
  for (double phi : s.phi) CHECK(phi == rng.next(0.0, 1.0));
}

TEST_CASE("zero coupling reproduces independent maps bit-exactly") {
  NetworkConfig cfg = ring_config();
  cfg.sigma = 0.0;
  cfg.mu = 0.0;
  NetworkState s = initial_state(cfg);
  std::vector<NeuronState> solo;
  for (std::size_t m = 0; m < s.x.size(); ++m) solo.push_back({s.x[m], s.phi[m]});
  for (int t = 0; t < 500; ++t) {
    REQUIRE(network_step(s, cfg));
    for (auto& n : solo) n = apply_map(n, cfg.map);
  }
  for (std::size_t m = 0; m < s.x.size(); ++m) {
    CHECK(s.x[m] == solo[m].x);
    CHECK(s.phi[m] == solo[m].phi);
  }
}

TEST_CASE("synchronization manifold is invariant") {
  NetworkConfig cfg = ring_config();
  cfg.mu = 0.001;
  NetworkState s{std::vector<double>(cfg.n_nodes, 0.4), std::vector<double>(cfg.n_nodes, 0.1)};
  NeuronState solo{0.4, 0.1};
  for (int t = 0; t < 500; ++t) {
    REQUIRE(network_step(s, cfg));
    solo = apply_map(solo, cfg.map);
    REQUIRE(std::all_of(s.x.begin(), s.x.end(), [&](double x) { return x == solo.x; }));
    REQUIRE(std::all_of(s.phi.begin(), s.phi.end(), [&](double p) { return p == solo.phi; }));
  }
}

TEST_CASE("small network matches a brute-force update") {
  NetworkConfig cfg;
  cfg.n_nodes = 7;
  cfg.r_neighbors = 2;
  cfg.sigma = 0.3;
  cfg.mu = 0.002;
  cfg.map = {2, 0.3, 0.5, -0.5, 1.2};
  cfg.seed = 3;
  NetworkState s = initial_state(cfg);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const NetworkState b = brute_step(s, cfg);
    REQUIRE(network_step(s, cfg));
    for (std::size_t m = 0; m < 7; ++m) {
      worst = std::max({worst, std::abs(s.x[m] - b.x[m]), std::abs(s.phi[m] - b.phi[m])});
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("ring rotation commutes with the update when the star is off") {
  NetworkConfig cfg = ring_config();
  cfg.sigma = 0.05;
  NetworkState a = initial_state(cfg);
  NetworkState b = a;
  std::rotate(b.x.begin(), b.x.begin() + 13, b.x.end());
  std::rotate(b.phi.begin(), b.phi.begin() + 13, b.phi.end());
  for (int t = 0; t < 50; ++t) {
    network_step(a, cfg);
    network_step(b, cfg);
  }
  std::rotate(a.x.begin(), a.x.begin() + 13, a.x.end());
  CHECK(a.x == b.x);
}

TEST_CASE("simulation is deterministic and independent of threads") {
  NetworkConfig cfg = ring_config();
  cfg.mu = 0.0003;
  cfg.seed = 4;
  const auto h1 = simulate(cfg, 200, 20, 1);
  const auto h4 = simulate(cfg, 200, 20, 4);
  const auto again = simulate(cfg, 200, 20, 1);
  REQUIRE(h1.snapshots.size() == 20);
  for (std::size_t t = 0; t < 20; ++t) {
    CHECK(h1.snapshots[t].x == h4.snapshots[t].x);
    CHECK(h1.snapshots[t].x == again.snapshots[t].x);
  }
}

TEST_CASE("escape is reported with its step") {
  NetworkConfig cfg = ring_config();
  cfg.n_nodes = 5;
  cfg.r_neighbors = 1;
  cfg.map = {10.0, 0.1, 0.2, 5.0, 1.0};
  cfg.escape_radius = 20.0;
  const auto h = simulate(cfg, 100, 10);
  CHECK(h.escaped);
  REQUIRE(h.escape_step.has_value());
  CHECK(*h.escape_step < 100);
}

TEST_CASE("sync error of a two-level pattern") {
  std::vector<double> x(10, 0.0);
  std::fill(x.begin() + 5, x.end(), 1.0);
  CHECK(sync_error(history_of({x, x})) == doctest::Approx(0.5));
  CHECK(sync_error(history_of({std::vector<double>(10, 0.3)})) < 1e-15);
}

TEST_CASE("coherence profile") {
  UniformStream rng(1);
  SUBCASE("synchronized") {
    const auto rep = coherence_profile(history_of({std::vector<double>(40, 0.7)}));
    CHECK(rep.incoherent_fraction == 0.0);
    REQUIRE(rep.groups.size() == 1);
    CHECK(rep.groups.front().second == 40);
  }
  SUBCASE("noise") {
    std::vector<std::vector<double>> xs(5, std::vector<double>(40));
    for (auto& s : xs) for (auto& v : s) v = rng.next();
    const auto rep = coherence_profile(history_of(xs));
    CHECK(rep.incoherent_fraction > 0.9);
    CHECK(rep.groups.empty());
  }
  SUBCASE("one coherent block") {
    std::vector<std::vector<double>> xs(5, std::vector<double>(40, 0.5));
    for (auto& s : xs) for (std::size_t m = 20; m < 40; ++m) s[m] = rng.next();
    const auto rep = coherence_profile(history_of(xs));
    REQUIRE(rep.groups.size() == 1);
    CHECK(rep.incoherent_fraction > 0.4);
    CHECK(rep.incoherent_fraction < 0.7);
  }
}

TEST_CASE("cluster count and classification on synthetic states") {
  std::vector<double> x(60);
  for (std::size_t m = 0; m < 60; ++m) x[m] = static_cast<double>(m % 3);
  const auto h = history_of({x});
  const auto c = cluster_count(h);
  CHECK(c.count == 3);
  CHECK(c.levels == std::vector<double>{0.0, 1.0, 2.0});

  PatternMetrics m;
  m.n_nodes = 100;
  m.sync_error = 1e-5;
  CHECK(classify_pattern(m) == PatternClass::synchronized);
  m.sync_error = 0.3;
  m.clusters.count = 4;
  m.coherence.incoherent_fraction = 0.0;
  CHECK(classify_pattern(m) == PatternClass::clustered);
  m.clusters.count = 40;
  m.coherence.incoherent_fraction = 0.5;
  m.coherence.groups = {{0, 50}};
  CHECK(classify_pattern(m) == PatternClass::chimera);
  m.coherence.groups = {{0, 20}, {40, 20}};
  CHECK(classify_pattern(m) == PatternClass::multi_chimera);
  m.coherence.groups.clear();
  m.coherence.incoherent_fraction = 1.0;
  m.sync_error = 0.01;
  m.deviating_nodes = 2;
  CHECK(classify_pattern(m) == PatternClass::imperfect_sync);
  m.deviating_nodes = 30;
  CHECK(classify_pattern(m) == PatternClass::unsynchronized);
}

TEST_CASE("ring network regimes on one seed") {
  NetworkConfig cfg = ring_config();
  cfg.seed = 0;
  CHECK(sync_error(simulate(cfg, 20000, 200)) < 1e-3);
  cfg.sigma = 0.01;
  CHECK(sync_error(simulate(cfg, 20000, 200)) > 0.05);
}
