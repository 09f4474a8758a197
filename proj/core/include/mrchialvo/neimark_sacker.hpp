#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/types.hpp"

namespace mrchialvo {

/// Critical coupling of the Neimark-Sacker condition q = 1 at a fixed point,
/// together with the non-degeneracy and first Lyapunov coefficient data.
struct NSReport {
  double k_prime = 0.0;
  double x_star = 0.0;
  double phi_star = 0.0;
  double trace = 0.0;        ///< trace at k = k_prime
  double denominator = 0.0;  ///< k1 gamma2 - k2 cos(pi phi*)
  bool admissible = false;   ///< |trace| < 2
  bool non_resonant = false; ///< trace not 0 and not -1 (strong resonances 1:3, 1:4)
  double modulus_derivative = 0.0;  ///< d|lambda|/dk at k_prime, fixed point held
  double alpha = 0.0;
  double beta = 0.0;
  std::complex<double> l11, l12, l21, l22;
  double theta = 0.0;  ///< negative: supercritical (stable invariant circle)
  bool self_consistent = false;
  std::size_t iterations = 0;
};

/// Critical k for the given fixed point (x*, phi*), treating the point as
/// fixed while k varies. Throws NumericalFailure when the denominator is below
/// 1e-12 in magnitude. Theta is filled only when the point is admissible.
NSReport ns_critical_k(double x_star, double phi_star, const MapParams& p);

struct SelfConsistentOptions {
  double damping = 0.5;
  double tol = 1e-10;
  std::size_t max_iterations = 500;
};

/// Solves k = k'(x*(k)) by a secant iteration (first step damped), re-solving
/// the fixed point near the previous one each time, so the returned k' has the
/// fixed point at k' itself. Throws NumericalFailure if the root is lost or the iteration does
/// not converge.
NSReport ns_self_consistent(const MapParams& p, double x_guess, const SelfConsistentOptions& opts = {});

/// Derivatives of the map nonlinearity in normal-form coordinates (u, v),
/// where X = a12 u and Phi = (alpha - a11) u - beta v.
struct NormalFormDerivs {
  // index: 0 = G1, 1 = G2
  std::array<double, 2> uu{}, uv{}, vv{}, uuu{}, uuv{}, uvv{}, vvv{};
};

NormalFormDerivs ns_normal_form_derivs(double x_star, double phi_star, double k_prime,
                                       const MapParams& p);

/// First Lyapunov coefficient from the normal-form derivatives.
double ns_first_lyapunov(const NormalFormDerivs& d, double alpha, double beta,
                         std::complex<double>* l11 = nullptr, std::complex<double>* l12 = nullptr,
                         std::complex<double>* l21 = nullptr, std::complex<double>* l22 = nullptr);

}  // namespace mrchialvo
