#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/map.hpp"
#include "mrchialvo/random.hpp"

using namespace mrchialvo;

namespace {

MapParams table_params(double r) { return {0.01, 0.5, 0.5, -0.1, r}; }

std::size_t sign_changes(const MapParams& p, double lo, double hi, std::size_t n) {
  std::size_t count = 0;
  double prev = residual_F(lo, p);
  for (std::size_t i = 1; i < n; ++i) {
    const double f = residual_F(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1), p);
    if ((f < 0) != (prev < 0)) ++count;
    prev = f;
  }
  return count;
}

}  // namespace

TEST_CASE("residual at zero is k0") {
  UniformStream rng(1);
  for (int i = 0; i < 20; ++i) {
    MapParams p{rng.next(-2, 2), rng.next(0, 1), rng.next(0, 1), rng.next(-1, 1), rng.next(-2, 4)};
    CHECK(residual_F(0.0, p) == p.k0);
  }
}

TEST_CASE("residual rejects k2 = -1") {
  MapParams p{0.01, 0.5, -1.0, -0.1, 2.0};
  CHECK_THROWS_AS(residual_F(1.0, p), InvalidArgument);
  CHECK_THROWS_AS(find_fixed_points(p), InvalidArgument);
}

TEST_CASE("residual is small at a tabulated root") {
  CHECK(std::abs(residual_F(3.296, table_params(2))) < 1e-3);
}

TEST_CASE("three roots at r = 2") {
  const auto fps = find_fixed_points(table_params(2));
  REQUIRE(fps.size() == 3);
  const double expect[] = {0.00972, 0.1659, 3.296};
  for (int i = 0; i < 3; ++i) CHECK(std::abs(fps[i].x_star - expect[i]) < 5e-3);
  CHECK(fps[0].stability.cls == StabilityClass::stable);
  CHECK(fps[1].stability.cls == StabilityClass::saddle);
  CHECK(fps[2].stability.cls == StabilityClass::stable);
}

TEST_CASE("one root at r = 5") {
  const auto fps = find_fixed_points(table_params(5));
  REQUIRE(fps.size() == 1);
  CHECK(std::abs(fps[0].x_star - 6.869) < 5e-3);
}

TEST_CASE("origin is a root when k = k0 = 0") {
  const auto fps = find_fixed_points({0.0, 0.5, 0.5, 0.0, 2.0});
  bool has_zero = false;
  for (const auto& f : fps) has_zero = has_zero || std::abs(f.x_star) < 1e-12;
  CHECK(has_zero);
}

TEST_CASE("a finer grid finds no extra sign changes") {
  for (double r : {2.0, 2.8, 3.0, 5.0}) {
    const auto p = table_params(r);
    const auto fps = find_fixed_points(p);
    std::size_t non_degenerate = 0;
    for (const auto& f : fps) non_degenerate += f.degenerate ? 0 : 1;
    CHECK(sign_changes(p, -1, 10, 200000) == non_degenerate);
  }
}

TEST_CASE("returned records are verified fixed points") {
  UniformStream rng(2);
  for (int i = 0; i < 50; ++i) {
    MapParams p{rng.next(-0.5, 1), rng.next(0, 1), rng.next(-0.5, 1), rng.next(-1, 1), rng.next(0, 5)};
    for (const auto& f : find_fixed_points(p)) {
      const NeuronState img = apply_map({f.x_star, f.phi_star}, p);
      CHECK(std::abs(img.x - f.x_star) < 1e-8);
      CHECK(std::abs(img.phi - f.phi_star) < 1e-8);
      for (const auto& l : f.stability.eigenvalues) {
        CHECK(std::abs(l * l - f.stability.p_trace * l + f.stability.q_det) < 1e-10);
      }
    }
  }
}

TEST_CASE("jacobian at the origin") {
  MapParams p{0.3, 0.4, 0.6, -0.7, 1.1};
  const Mat2 j = jacobian({0.0, 0.0}, p);
  CHECK(j[0][0] == p.k);
  CHECK(j[0][1] == 0.0);
  CHECK(j[1][0] == p.k1);
  CHECK(j[1][1] == -p.k2);
}

TEST_CASE("classification of tabulated points") {
  SUBCASE("r = 2.8 large root is a repeller") {
    const auto p = table_params(2.8);
    const auto fps = find_fixed_points(p);
    REQUIRE(fps.size() == 3);
    const auto rep = classify(fps[2].x_star, fps[2].phi_star, p);
    CHECK(rep.cls == StabilityClass::repeller);
    CHECK(std::abs(fps[2].x_star - 4.279) < 5e-3);
    CHECK(std::abs(rep.eigenvalues[0].real() - -1.609) < 5e-3);
  }
  SUBCASE("r = 3 large root is a saddle") {
    const auto p = table_params(3);
    const auto fps = find_fixed_points(p);
    REQUIRE(fps.size() == 3);
    CHECK(classify(fps[2].x_star, fps[2].phi_star, p).cls == StabilityClass::saddle);
  }
  SUBCASE("non-fixed points are rejected") {
    CHECK_THROWS_AS(classify(1.0, 0.0, table_params(2)), InvalidArgument);
  }
}

TEST_CASE("unit-modulus pair is non-hyperbolic") {
  const EigenPair ev = quadratic_eigenvalues(0.0, 1.0);
  CHECK(std::abs(ev[0].real()) < 1e-15);
  CHECK(std::abs(std::abs(ev[0].imag()) - 1.0) < 1e-15);
  CHECK(classify_eigenvalues(ev) == StabilityClass::non_hyperbolic);
}

TEST_CASE("classes are stable under tighter refinement") {
  for (double r : {2.0, 2.8, 3.0, 5.0}) {
    RootScan loose, tight;
    tight.residual_tol = 1e-14;
    const auto a = find_fixed_points(table_params(r), loose);
    const auto b = find_fixed_points(table_params(r), tight);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].stability.cls == b[i].stability.cls);
  }
}

TEST_CASE("parallel scan matches serial scan") {
  RootScan par;
  par.threads = 4;
  const auto a = find_fixed_points(table_params(2.8));
  const auto b = find_fixed_points(table_params(2.8), par);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].x_star == b[i].x_star);
}

TEST_CASE("tangent root is found and flagged") {
  // Shift k0 so that the interior maximum of F just touches zero.
  MapParams p{0.01, 0.5, 0.5, -0.1, 2.0};
  double lo = 0.3, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if (residual_F(a, p) > residual_F(b, p)) hi = b; else lo = a;
  }
  const double xm = 0.5 * (lo + hi);
  p.k0 -= residual_F(xm, p);
  const auto fps = find_fixed_points(p);
  bool found = false;
  for (const auto& f : fps) {
    if (std::abs(f.x_star - xm) < 1e-4) {
      found = true;
      CHECK(f.degenerate);
    } else {
      CHECK_FALSE(f.degenerate);
    }
  }
  CHECK(found);
}

TEST_CASE("flux coordinate of every root is k1 x / (1 + k2)") {
  UniformStream rng(6);
  RootScan scan;
  scan.scan_points = 4000;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    MapParams p{rng.next(-1, 2), rng.next(0, 1), rng.next(-0.9, 2), rng.next(-1, 1), rng.next(-1, 5)};
    for (const auto& f : find_fixed_points(p, scan)) {
      worst = std::max(worst, std::abs(f.phi_star - p.k1 * f.x_star / (1 + p.k2)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("uniqueness conditions") {
  MapParams p{1.0, 0.5, 13.0, 0.05, -0.5};
  auto c = theorem1_check(p, 2);
  CHECK(c.holds);
  CHECK(c.bounds.m1 == 4.0);
  CHECK(residual_F(0.0, p) > 0.0);
  CHECK(residual_F(c.bounds.m1, p) < 0.0);

  p.r = 0.5;
  c = theorem1_check(p, 2);
  CHECK_FALSE(c.holds);
  REQUIRE(c.violated.size() == 1);
  CHECK(c.violated[0] == "r<0");

  CHECK_THROWS_AS(theorem1_check(p, 1), InvalidArgument);

  // 2 pi <= k2 < 4 pi passes only with the relaxed bound.
  MapParams q{1.0, 0.5, 8.0, 0.05, -0.5};
  CHECK_FALSE(theorem1_check(q, 2).holds);
  CHECK(theorem1_check(q, 2, 2 * std::numbers::pi).holds);
}

TEST_CASE("uniqueness conditions give exactly one root in [0, M1]") {
  UniformStream rng(17);
  for (int i = 0; i < 200; ++i) {
    const unsigned n = 2 + static_cast<unsigned>(rng.next() * 4);
    const double m1 = n + 2.0;
    MapParams p;
    p.k0 = rng.next(1e-3, n - 1e-3);
    p.k1 = rng.next(1e-3, 1 - 1e-3);
    p.k2 = rng.next(4 * std::numbers::pi, 4 * std::numbers::pi + 30);
    p.k = rng.next(-1 / m1, 1 / m1) * 0.999;
    p.r = rng.next(-4, -1e-3);
    const auto c = theorem1_check(p, n);
    REQUIRE(c.holds);
    RootScan s;
    s.x_lo = 0.0;
    s.x_hi = c.bounds.m1;
    const auto fps = find_fixed_points(p, s);
    REQUIRE(fps.size() == 1);
    CHECK(fps[0].x_star >= 0.0);
    CHECK(fps[0].x_star <= c.bounds.m1);
    CHECK(fps[0].phi_star >= 0.0);
    CHECK(fps[0].phi_star <= c.bounds.m2);
  }
}
