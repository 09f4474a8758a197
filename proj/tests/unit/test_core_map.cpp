#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/map.hpp"
#include "mrchialvo/memristor.hpp"
#include "mrchialvo/random.hpp"

using namespace mrchialvo;

namespace {

MapParams memristor_params() {
  MapParams p;
  p.k1 = 0.7;
  p.k2 = 0.2;
  return p;
}

}  // namespace

TEST_CASE("memristance at reference flux values") {
  CHECK(memristance(0.0) == 1.0);
  CHECK(std::abs(memristance(0.5)) < 1e-15);
  CHECK(memristance(1.0) == -1.0);
}

TEST_CASE("memristor_step substitution") {
  const auto z = memristor_step(0.0, 0.0, memristor_params());
  CHECK(z.current == 0.0);
  CHECK(z.phi_next == 0.0);
  const auto s = memristor_step(1.0, 0.0, memristor_params());
  CHECK(s.current == 1.0);
  CHECK(s.phi_next == doctest::Approx(0.7));

  MapParams p = memristor_params();
  p.h = 2.0;
  CHECK(memristor_step(1.0, 0.0, p).phi_next == doctest::Approx(1.4));
}

TEST_CASE("drive trace is pinched at the origin") {
  const PhlTrace tr = phl_trace({1.0, 3.7, 500}, memristor_params());
  REQUIRE(tr.samples.size() == 500);
  bool saw_zero = false;
  for (const auto& s : tr.samples) {
    if (s.v == 0.0) {
      saw_zero = true;
      CHECK(s.i == 0.0);
    }
    // i = cos(pi phi) v: sign can only differ from v's when cos < 0, and
    // |i| <= |v| always.
    CHECK(std::abs(s.i) <= std::abs(s.v));
  }
  CHECK(saw_zero);  // n = 0
}

TEST_CASE("zero amplitude gives zero current and area") {
  const PhlTrace tr = phl_trace({0.0, 3.7, 800}, memristor_params());
  for (const auto& s : tr.samples) CHECK(s.i == 0.0);
  CHECK(tr.loop_area == 0.0);
}

TEST_CASE("loop area grows with amplitude at omega 3.7") {
  double prev = -1.0;
  for (double vm : {0.6, 0.8, 1.0}) {
    const double a = phl_trace({vm, 3.7, 4000}, memristor_params()).loop_area;
    CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("origin is fixed when k0 = 0") {
  MapParams p{0.0, 0.5, 0.5, -0.1, 2.0};
  const StepResult r = step({0.0, 0.0}, p);
  CHECK_FALSE(r.escaped);
  CHECK(r.state == NeuronState{0.0, 0.0});
}

TEST_CASE("tabulated fixed point maps to itself") {
  MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
  const NeuronState s{3.296, 1.098};
  const StepResult r = step(s, p);
  CHECK(std::abs(r.state.x - s.x) < 5e-3);
  CHECK(std::abs(r.state.phi - s.phi) < 5e-3);
}

TEST_CASE("step matches an independent evaluation") {
  UniformStream rng(11);
  for (int i = 0; i < 200; ++i) {
    MapParams p{rng.next(-1, 1), rng.next(0, 1), rng.next(-1, 1), rng.next(-1, 1), rng.next(0, 4)};
    const double x = rng.next(-2, 8), phi = rng.next(-2, 2);
    const double ex = std::exp(p.r - x);
    const double cx = std::cos(std::numbers::pi * phi);
    const double xn = ex * x * x + p.k * cx * x + p.k0;
    const double pn = -p.k2 * phi + p.k1 * x;
    const StepResult r = step({x, phi}, p);
    CHECK(r.state.x == doctest::Approx(xn).epsilon(1e-14));
    CHECK(r.state.phi == doctest::Approx(pn).epsilon(1e-14));
  }
}

TEST_CASE("escape is reported, not stored") {
  MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
  p.k0 = 1e7;
  const StepResult r = step({1.0, 0.0}, p);
  CHECK(r.escaped);
  CHECK(r.state == NeuronState{1.0, 0.0});

  const Orbit o = iterate({1.0, 0.0}, p, 3, 5);
  CHECK(o.escaped);
  REQUIRE(o.escape_index.has_value());
  CHECK(*o.escape_index == 1);
}

TEST_CASE("orbit from a stable fixed point stays there") {
  MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
  const auto fps = find_fixed_points(p);
  const auto& fp = fps.back();
  REQUIRE(fp.stability.cls == StabilityClass::stable);
  const Orbit o = iterate({fp.x_star, fp.phi_star}, p, 0, 100);
  for (const auto& s : o.states) {
    CHECK(std::abs(s.x - fp.x_star) < 1e-10);
    CHECK(std::abs(s.phi - fp.phi_star) < 1e-10);
  }
}

TEST_CASE("k = 0 reduces to the one-dimensional map") {
  UniformStream rng(3);
  for (int i = 0; i < 100; ++i) {
    MapParams p{rng.next(0, 1), rng.next(0, 1), rng.next(0, 1), 0.0, rng.next(0, 4)};
    NeuronState s{rng.next(0, 5), rng.next(-1, 1)};
    double x = s.x;
    for (int n = 0; n < 20; ++n) {
      s = step(s, p).state;
      x = reduced_chialvo(x, p.r, p.k0);
      CHECK(s.x == x);
    }
  }
}

TEST_CASE("regular spiking settles on a short cycle") {
  MapParams p{0.1, 0.1, 0.2, -0.5, 0.2};
  const Orbit o = iterate({0.5, 0.0}, p, 5000, 200);
  REQUIRE_FALSE(o.escaped);
  std::size_t period = 0;
  for (std::size_t per = 1; per <= 16 && !period; ++per) {
    bool ok = true;
    for (std::size_t i = 0; i + per < o.states.size(); ++i) ok = ok && std::abs(o.states[i + per].x - o.states[i].x) < 1e-8;
    if (ok) period = per;
  }
  CHECK(period > 0);
}

TEST_CASE("firing statistics") {
  SUBCASE("constant orbit") {
    Orbit o;
    o.states.assign(50, {0.2, 0.0});
    const FiringStats st = firing_stats(o, 1.0);
    CHECK(st.spike_count == 0);
    CHECK(st.isi_cv == 0.0);
  }
  SUBCASE("periodic spikes") {
    Orbit o;
    for (int i = 0; i < 60; ++i) o.states.push_back({i % 4 == 0 ? 5.0 : 0.1, 0.0});
    const FiringStats st = firing_stats(o);
    CHECK(st.spike_count >= 10);
    CHECK(st.isi_cv == 0.0);
  }
  SUBCASE("escaped orbit is rejected") {
    Orbit o;
    o.states.assign(5, {0.2, 0.0});
    o.escaped = true;
    CHECK_THROWS_AS(firing_stats(o), InvalidArgument);
  }
  SUBCASE("chaotic bursting is less regular than regular spiking") {
    MapParams a{0.1, 0.1, 0.2, -0.5, 0.2};
    MapParams c{0.1, 0.1, 0.2, -0.5, 2.2};
    const auto sa = firing_stats(iterate({0.5, 0.0}, a, 1000, 5000));
    const auto sc = firing_stats(iterate({0.5, 0.0}, c, 1000, 5000));
    CHECK(sc.isi_cv > sa.isi_cv);
  }
}

TEST_CASE("jacobian agrees with central differences") {
  UniformStream rng(5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    MapParams p{rng.next(-1, 1), rng.next(0, 1), rng.next(-1, 1), rng.next(-1, 1), rng.next(0, 4)};
    const NeuronState s{rng.next(0, 6), rng.next(-1, 1)};
    const Mat2 j = jacobian(s, p);
    const double h = 1e-6;
    const auto fx = [&](double dx, double dp) { return apply_map({s.x + dx, s.phi + dp}, p); };
    const NeuronState ax = fx(h, 0), bx = fx(-h, 0), ap = fx(0, h), bp = fx(0, -h);
    worst = std::max({worst, std::abs(j[0][0] - (ax.x - bx.x) / (2 * h)), std::abs(j[1][0] - (ax.phi - bx.phi) / (2 * h)),
                      std::abs(j[0][1] - (ap.x - bp.x) / (2 * h)), std::abs(j[1][1] - (ap.phi - bp.phi) / (2 * h))});
  }
  CHECK(worst < 1e-5);
}
