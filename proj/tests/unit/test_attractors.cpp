#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrchialvo/attractors.hpp"
#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/random.hpp"

using namespace mrchialvo;

namespace {

const MapParams kTable3{-0.7, 0.1, 0.2, 1.748, 1.03};
const MapParams kBasin{0.06, 0.1, 0.2, 0.53, 2.7};

}  // namespace

TEST_CASE("Lyapunov exponent at a stable fixed point is log of the spectral radius") {
  const MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
  const auto fps = find_fixed_points(p);
  const auto& fp = fps.front();
  REQUIRE(fp.stability.cls == StabilityClass::stable);
  const double rho = std::max(std::abs(fp.stability.eigenvalues[0]), std::abs(fp.stability.eigenvalues[1]));
  const double l = largest_lyapunov({fp.x_star, fp.phi_star}, p, 20000);
  CHECK(l == doctest::Approx(std::log(rho)).epsilon(1e-3));
}

TEST_CASE("Lyapunov exponent on the chaotic attractor is positive") {
  CHECK(largest_lyapunov({0.5, 0.0}, kTable3, 20000, 5000) > 0.01);
}

TEST_CASE("escaping orbit is a numerical failure for the Lyapunov exponent") {
  const MapParams p{10.0, 0.1, 0.2, 5.0, 1.0};
  CHECK_THROWS_AS(largest_lyapunov({1e5, 0.0}, p, 1000, 0, 10.0), NumericalFailure);
}

TEST_CASE("classification of simple attractors") {
  SUBCASE("stable fixed point is period 1") {
    const MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
    const auto rec = classify_attractor({0.02, 0.0}, p);
    CHECK(rec.kind == AttractorKind::periodic);
    CHECK(rec.period == 1);
    CHECK(rec.lyapunov < -0.01);
    CHECK(rec.converged);
  }
  SUBCASE("chaos") {
    const auto rec = classify_attractor({0.5, 0.0}, kTable3);
    CHECK(rec.kind == AttractorKind::chaotic);
    CHECK(rec.lyapunov > 0.01);
    CHECK(rec.bounds.x_lo < rec.bounds.x_hi);
  }
  SUBCASE("divergence") {
    ClassifyBudget b;
    b.escape_radius = 50.0;
    const auto rec = classify_attractor({100.0, 0.0}, MapParams{10.0, 0.1, 0.2, 5.0, 1.0}, b);
    CHECK(rec.kind == AttractorKind::divergent);
  }
}

TEST_CASE("quasiperiodic classification implies a small exponent") {
  // Classification must not contradict the exponent it reports.
  UniformStream rng(5);
  for (int i = 0; i < 30; ++i) {
    const NeuronState s{rng.next(0.0, 6.0), rng.next(0.0, 1.0)};
    const auto rec = classify_attractor(s, kBasin);
    if (rec.kind == AttractorKind::quasiperiodic) CHECK(std::abs(rec.lyapunov) <= 0.01);
    if (rec.kind == AttractorKind::chaotic) CHECK(rec.lyapunov > 0.01);
  }
}

TEST_CASE("same_attractor matches shifted cycles") {
  AttractorRecord a;
  a.kind = AttractorKind::periodic;
  a.period = 3;
  a.representative = {{1, 0}, {2, 0}, {3, 0}};
  AttractorRecord b = a;
  b.representative = {{3, 0}, {1, 0}, {2, 0}};
  CHECK(same_attractor(a, b));
  b.representative[0].x += 1e-2;
  CHECK_FALSE(same_attractor(a, b));
  AttractorRecord c = a;
  c.period = 2;
  CHECK_FALSE(same_attractor(a, c));
}

TEST_CASE("basin grid is independent of the thread count") {
  const GridRegion region{-0.52, 10.63, -0.115, 1.04};
  ClassifyBudget b;
  b.transient = 2000;
  b.tail = 1000;
  const auto one = basin_grid(region, 12, 10, kBasin, b, 1);
  const auto four = basin_grid(region, 12, 10, kBasin, b, 4);
  CHECK(one.labels == four.labels);
  REQUIRE(one.attractors.size() == four.attractors.size());
  for (std::size_t i = 0; i < one.attractors.size(); ++i) {
    CHECK(one.attractors[i].kind == four.attractors[i].kind);
    CHECK(one.attractors[i].period == four.attractors[i].period);
    CHECK(one.attractors[i].lyapunov == four.attractors[i].lyapunov);
  }
  CHECK(one.labels.size() == 120);
  // First-encounter labelling: label 0 is the first cell.
  CHECK(one.labels.front() == 0);
  // Corners are included.
  CHECK(one.cell_state(0, 0).x == region.x_lo);
  CHECK(one.cell_state(11, 9).phi == region.phi_hi);
}

TEST_CASE("correlation dimension controls") {
  UniformStream rng(11);
  SUBCASE("circle") {
    std::vector<NeuronState> pts;
    for (int i = 0; i < 4000; ++i) {
      const double t = rng.next(0.0, 2 * std::numbers::pi);
      pts.push_back({std::cos(t), std::sin(t)});
    }
    const auto res = correlation_dimension(pts);
    CHECK(std::abs(res.dimension - 1.0) < 0.05);
    for (std::size_t i = 1; i < res.correlation_sum.size(); ++i) {
      CHECK(res.correlation_sum[i] >= res.correlation_sum[i - 1]);
    }
    CHECK(res.radii.size() == 24);
    CHECK(res.fit_points >= 3);
  }
  SUBCASE("filled square") {
    std::vector<NeuronState> pts;
    for (int i = 0; i < 4000; ++i) pts.push_back({rng.next(), rng.next()});
    CHECK(std::abs(correlation_dimension(pts).dimension - 2.0) < 0.15);
  }
  SUBCASE("coincident points") {
    std::vector<NeuronState> pts(100, NeuronState{0.3, 0.2});
    CHECK(correlation_dimension(pts).dimension == 0.0);
  }
  SUBCASE("thread count does not change the estimate") {
    const auto pts = attractor_points({0.5, 0.0}, kTable3, 2000, 3000);
    CorrelationOptions a, b;
    a.threads = 1;
    b.threads = 4;
    CHECK(correlation_dimension(pts, a).dimension == correlation_dimension(pts, b).dimension);
  }
}
