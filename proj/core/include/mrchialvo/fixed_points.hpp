#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "mrchialvo/types.hpp"

namespace mrchialvo {

using Mat2 = std::array<std::array<double, 2>, 2>;
using EigenPair = std::array<std::complex<double>, 2>;

enum class StabilityClass { stable, saddle, repeller, non_hyperbolic };

std::string_view to_string(StabilityClass c);

/// Linearization at a fixed point. p_trace and q_det are the trace and
/// determinant of the Jacobian; the eigenvalues solve
/// lambda^2 - p_trace * lambda + q_det = 0.
struct StabilityReport {
  double p_trace = 0.0;
  double q_det = 0.0;
  double gamma1 = 0.0;  ///< x* e^{r - x*}
  double gamma2 = 0.0;  ///< pi x* sin(pi phi*)
  EigenPair eigenvalues{};
  StabilityClass cls = StabilityClass::stable;
};

struct FixedPointRecord {
  double x_star = 0.0;
  double phi_star = 0.0;
  double residual = 0.0;
  /// Root found by tangency (no sign change); likely a fold.
  bool degenerate = false;
  StabilityReport stability;
};

inline constexpr double kUnitCircleTol = 1e-6;

/// F(x) = x^2 e^{r-x} + k0 + k x cos(pi k1 x / (1 + k2)) - x. Its zeros are
/// the x-components of the fixed points. Throws InvalidArgument if k2 = -1.
double residual_F(double x, const MapParams& p);

/// phi* = k1 x* / (1 + k2).
double fixed_point_phi(double x_star, const MapParams& p);

Mat2 jacobian(const NeuronState& s, const MapParams& p);

/// Closed-form roots of lambda^2 - trace * lambda + det. For real roots the
/// larger-magnitude root is computed first and the other from det / root.
EigenPair quadratic_eigenvalues(double trace, double det);

/// Class from eigenvalue moduli; non_hyperbolic when any ||lambda| - 1| < tol.
StabilityClass classify_eigenvalues(const EigenPair& ev, double tol = kUnitCircleTol);

/// Stability of a fixed point. Throws InvalidArgument when (x, phi) is not a
/// fixed point to 1e-6.
StabilityReport classify(double fp_x, double fp_phi, const MapParams& p,
                         double tol_unit_circle = kUnitCircleTol);

struct RootScan {
  double x_lo = -1.0;
  double x_hi = 10.0;
  std::size_t scan_points = 20000;
  double residual_tol = 1e-12;
  std::size_t max_bisections = 200;
  unsigned threads = 1;
};

/// Fixed points on [x_lo, x_hi]: grid scan of F for sign changes (and
/// near-tangencies), bisection refinement, then classification. Sorted by x.
std::vector<FixedPointRecord> find_fixed_points(const MapParams& p, const RootScan& scan = {});

struct Theorem1Bounds {
  unsigned n_cap = 2;
  double m1 = 4.0;  ///< n_cap + 2
  double m2 = 0.0;  ///< k1 m1 / (1 + k2)
};

struct Theorem1Check {
  bool holds = false;
  Theorem1Bounds bounds;
  std::vector<std::string> violated;
};

/// Default lower bound on k2 for the uniqueness conditions. 2 pi is enough for
/// the argument and can be passed instead.
inline constexpr double kTheorem1K2Bound = 4.0 * std::numbers::pi;

/// Checks the sufficient conditions for a unique positive fixed point in
/// [0, M1] x [0, M2]. Throws InvalidArgument if n_cap < 2.
Theorem1Check theorem1_check(const MapParams& p, unsigned n_cap,
                             double k2_bound = kTheorem1K2Bound);

}  // namespace mrchialvo
