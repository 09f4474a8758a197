#include "mrchialvo/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mrchialvo/map.hpp"
#include "mrchialvo/parallel.hpp"

namespace mrchialvo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTangencyAccept = 1e-10;

void require_k2(const MapParams& p) {
  if (p.k2 == -1.0) throw InvalidArgument("k2 = -1 makes phi* = k1 x / (1 + k2) undefined");
}

}  // namespace

std::string_view to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable: return "stable";
    case StabilityClass::saddle: return "saddle";
    case StabilityClass::repeller: return "repeller";
    case StabilityClass::non_hyperbolic: return "non_hyperbolic";
  }
  return "?";
}

double fixed_point_phi(double x_star, const MapParams& p) {
  require_k2(p);
  return p.k1 * x_star / (1.0 + p.k2);
}

double residual_F(double x, const MapParams& p) {
  require_k2(p);
  return x * x * std::exp(p.r - x) + p.k0 + p.k * x * std::cos(kPi * p.k1 * x / (1.0 + p.k2)) - x;
}

Mat2 jacobian(const NeuronState& s, const MapParams& p) {
  const double e = std::exp(p.r - s.x);
  return {{{(2.0 - s.x) * s.x * e + p.k * std::cos(kPi * s.phi),
            -p.k * kPi * s.x * std::sin(kPi * s.phi)},
           {p.k1, -p.k2}}};
}

EigenPair quadratic_eigenvalues(double trace, double det) {
  const double half = 0.5 * trace;
  const double disc = half * half - det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double big = half >= 0.0 ? half + root : half - root;
    const double small = big != 0.0 ? det / big : 0.0;
    return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, im), std::complex<double>(half, -im)};
}

StabilityClass classify_eigenvalues(const EigenPair& ev, double tol) {
  int outside = 0;
  for (const auto& l : ev) {
    const double m = std::abs(l);
    if (std::abs(m - 1.0) < tol) return StabilityClass::non_hyperbolic;
    if (m > 1.0) ++outside;
  }
  switch (outside) {
    case 0: return StabilityClass::stable;
    case 1: return StabilityClass::saddle;
    default: return StabilityClass::repeller;
  }
}

namespace {

StabilityReport linearize(double x, double phi, const MapParams& p, double tol) {
  const Mat2 j = jacobian({x, phi}, p);
  StabilityReport rep;
  rep.gamma1 = x * std::exp(p.r - x);
  rep.gamma2 = kPi * x * std::sin(kPi * phi);
  rep.p_trace = j[0][0] + j[1][1];
  rep.q_det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  rep.eigenvalues = quadratic_eigenvalues(rep.p_trace, rep.q_det);
  rep.cls = classify_eigenvalues(rep.eigenvalues, tol);
  return rep;
}

}  // namespace

StabilityReport classify(double fp_x, double fp_phi, const MapParams& p, double tol_unit_circle) {
  const NeuronState img = apply_map({fp_x, fp_phi}, p);
  if (!(std::abs(img.x - fp_x) <= 1e-6 && std::abs(img.phi - fp_phi) <= 1e-6)) {
    throw InvalidArgument("classify: (" + std::to_string(fp_x) + ", " + std::to_string(fp_phi) +
                          ") is not a fixed point");
  }
  return linearize(fp_x, fp_phi, p, tol_unit_circle);
}

namespace {

double bisect(double a, double b, double fa, const MapParams& p, const RootScan& scan) {
  double mid = 0.5 * (a + b);
  for (std::size_t it = 0; it < scan.max_bisections; ++it) {
    mid = 0.5 * (a + b);
    const double fm = residual_F(mid, p);
    if (fm == 0.0 || std::abs(fm) < scan.residual_tol) return mid;
    if (mid <= a || mid >= b) break;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return mid;
}

// Golden-section minimization of |F| on [a, b].
double golden_min(double a, double b, const MapParams& p) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = std::abs(residual_F(c, p));
  double fd = std::abs(residual_F(d, p));
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::abs(residual_F(c, p));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::abs(residual_F(d, p));
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

std::vector<FixedPointRecord> find_fixed_points(const MapParams& p, const RootScan& scan) {
  validate(p);
  require_k2(p);
  if (!(scan.x_lo < scan.x_hi)) throw InvalidArgument("root scan needs x_lo < x_hi");
  if (scan.scan_points < 2) throw InvalidArgument("root scan needs at least 2 points");

  const std::size_t n = scan.scan_points;
  const double width = scan.x_hi - scan.x_lo;
  auto grid_x = [&](std::size_t i) {
    return i + 1 == n ? scan.x_hi : scan.x_lo + width * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  std::vector<double> f(n);
  parallel_for(n, scan.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) f[i] = residual_F(grid_x(i), p);
  });

  std::vector<std::pair<double, bool>> roots;  // (x, degenerate)
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = grid_x(i);
    if (f[i] == 0.0) {
      roots.emplace_back(xi, false);
      continue;
    }
    if (i + 1 < n && f[i + 1] != 0.0 && (f[i] < 0.0) != (f[i + 1] < 0.0)) {
      roots.emplace_back(bisect(xi, grid_x(i + 1), f[i], p, scan), false);
      continue;
    }
    // Tangency: a local minimum of |F| with the same sign on both sides is
    // refined and kept only if it actually reaches zero.
    if (i > 0 && i + 1 < n &&
        std::abs(f[i]) <= std::abs(f[i - 1]) && std::abs(f[i]) <= std::abs(f[i + 1]) &&
        (f[i - 1] < 0.0) == (f[i] < 0.0) && (f[i + 1] < 0.0) == (f[i] < 0.0)) {
      const double xm = golden_min(grid_x(i - 1), grid_x(i + 1), p);
      if (std::abs(residual_F(xm, p)) < kTangencyAccept) roots.emplace_back(xm, true);
    }
  }

  std::vector<FixedPointRecord> out;
  out.reserve(roots.size());
  for (const auto& [x, degenerate] : roots) {
    FixedPointRecord rec;
    rec.x_star = x;
    rec.phi_star = fixed_point_phi(x, p);
    rec.residual = std::abs(residual_F(x, p));
    rec.degenerate = degenerate;
    rec.stability = linearize(rec.x_star, rec.phi_star, p, kUnitCircleTol);
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.x_star < b.x_star; });
  return out;
}

Theorem1Check theorem1_check(const MapParams& p, unsigned n_cap, double k2_bound) {
  if (n_cap < 2) throw InvalidArgument("uniqueness check needs n_cap >= 2");
  Theorem1Check out;
  out.bounds.n_cap = n_cap;
  out.bounds.m1 = static_cast<double>(n_cap) + 2.0;
  out.bounds.m2 = p.k1 * out.bounds.m1 / (1.0 + p.k2);

  const double n = static_cast<double>(n_cap);
  const double m1 = out.bounds.m1;
  if (!(p.k0 > 0.0 && p.k0 < n)) out.violated.emplace_back("0<k0<N");
  if (!(p.k > -1.0 / m1 && p.k < 1.0 / m1)) out.violated.emplace_back("-1/M1<k<1/M1");
  if (!(p.k1 > 0.0 && p.k1 < 1.0)) out.violated.emplace_back("0<k1<1");
  if (!(p.k2 >= k2_bound)) {
    out.violated.emplace_back(k2_bound == kTheorem1K2Bound ? std::string("k2>=4pi")
                                                           : "k2>=" + std::to_string(k2_bound));
  }
  if (!(p.r < 0.0)) out.violated.emplace_back("r<0");
  out.holds = out.violated.empty();
  return out;
}

}  // namespace mrchialvo
