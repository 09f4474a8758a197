#include "mrchialvo/neimark_sacker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "mrchialvo/bifurcation.hpp"

namespace mrchialvo {

namespace {

constexpr double kPi = std::numbers::pi;

struct Linear {
  double a11, a12, a21, a22;
};

Linear linear_part(double x, double phi, double k, const MapParams& p) {
  const double e = std::exp(p.r - x);
  return {(2.0 - x) * x * e + k * std::cos(kPi * phi), -kPi * k * x * std::sin(kPi * phi), p.k1, -p.k2};
}

}  // namespace

NormalFormDerivs ns_normal_form_derivs(double x, double phi, double k, const MapParams& p) {
  const Linear a = linear_part(x, phi, k, p);
  const double tr = a.a11 + a.a22;
  const double det = a.a11 * a.a22 - a.a12 * a.a21;
  const double disc = 4.0 * det - tr * tr;
  if (disc <= 0.0) throw NumericalFailure("eigenvalues are not a complex pair");
  if (a.a12 == 0.0) throw NumericalFailure("degenerate coupling entry a12");
  const double alpha = 0.5 * tr;
  const double beta = 0.5 * std::sqrt(disc);

  // Taylor coefficients of the x-equation around (x*, phi*); the phi-equation
  // is linear.
  const double e = std::exp(p.r - x);
  const double c = std::cos(kPi * phi);
  const double s = std::sin(kPi * phi);
  const double a13 = e * (x * x - 4.0 * x + 2.0) / 2.0;
  const double a14 = -kPi * k * s;
  const double a15 = -kPi * kPi * k * x * c / 2.0;
  const double b1 = e * (-x * x + 6.0 * x - 6.0) / 6.0;
  const double b2 = 0.0;
  const double b3 = -kPi * kPi * k * c / 2.0;
  const double b4 = kPi * kPi * kPi * k * x * s / 6.0;

  // Symmetric second and third derivative tensors in (X, Phi).
  const double h[2][2] = {{2.0 * a13, a14}, {a14, 2.0 * a15}};
  double t[2][2][2];
  t[0][0][0] = 6.0 * b1;
  t[0][0][1] = t[0][1][0] = t[1][0][0] = 2.0 * b2;
  t[0][1][1] = t[1][0][1] = t[1][1][0] = 2.0 * b3;
  t[1][1][1] = 6.0 * b4;

  const double eu[2] = {a.a12, alpha - a.a11};
  const double ev[2] = {0.0, -beta};
  auto d2 = [&](const double* d1, const double* d2v) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) acc += h[i][j] * d1[i] * d2v[j];
    return acc;
  };
  auto d3 = [&](const double* d1, const double* d2v, const double* d3v) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) acc += t[i][j][l] * d1[i] * d2v[j] * d3v[l];
    return acc;
  };

  // G1 = f1 / a12, G2 = (alpha - a11) f1 / (beta a12); f2 vanishes.
  const double g1 = 1.0 / a.a12;
  const double g2 = (alpha - a.a11) / (beta * a.a12);
  NormalFormDerivs out;
  auto fill = [&](std::array<double, 2>& slot, double f1) {
    slot[0] = g1 * f1;
    slot[1] = g2 * f1;
  };
  fill(out.uu, d2(eu, eu));
  fill(out.uv, d2(eu, ev));
  fill(out.vv, d2(ev, ev));
  fill(out.uuu, d3(eu, eu, eu));
  fill(out.uuv, d3(eu, eu, ev));
  fill(out.uvv, d3(eu, ev, ev));
  fill(out.vvv, d3(ev, ev, ev));
  return out;
}

double ns_first_lyapunov(const NormalFormDerivs& d, double alpha, double beta,
                         std::complex<double>* l11_out, std::complex<double>* l12_out,
                         std::complex<double>* l21_out, std::complex<double>* l22_out) {
  using C = std::complex<double>;
  const auto& uu = d.uu;
  const auto& uv = d.uv;
  const auto& vv = d.vv;
  const C l11 = 0.25 * C(uu[0] + vv[0], uu[1] + vv[1]);
  const C l12 = 0.125 * C(uu[0] - vv[0] + 2.0 * uv[1], uu[1] - vv[1] - 2.0 * uv[0]);
  const C l21 = 0.125 * C(uu[0] - vv[0] - 2.0 * uv[1], uu[1] - vv[1] + 2.0 * uv[0]);
  const C l22 = 0.0625 * C(d.uuu[0] + d.uvv[0] + d.uuv[1] + d.vvv[1],
                           d.uuu[1] + d.uvv[1] - d.uuv[0] - d.vvv[0]);
  const C lam1(alpha, beta);
  const C lam2(alpha, -beta);
  const double theta = -std::real((1.0 - 2.0 * lam1) * lam2 * lam2 / (1.0 - lam1) * l11 * l12) -
                       0.5 * std::norm(l11) - std::norm(l21) + std::real(lam2 * l22);
  if (l11_out) *l11_out = l11;
  if (l12_out) *l12_out = l12;
  if (l21_out) *l21_out = l21;
  if (l22_out) *l22_out = l22;
  return theta;
}

NSReport ns_critical_k(double x, double phi, const MapParams& p) {
  validate(p);
  const double e = std::exp(p.r - x);
  const double g1 = x * e;
  const double g2 = kPi * x * std::sin(kPi * phi);
  const double c = std::cos(kPi * phi);
  NSReport rep;
  rep.x_star = x;
  rep.phi_star = phi;
  rep.denominator = p.k1 * g2 - p.k2 * c;
  if (std::abs(rep.denominator) < 1e-12) {
    throw NumericalFailure("critical coupling denominator vanishes");
  }
  rep.k_prime = (1.0 + p.k2 * (2.0 - x) * g1) / rep.denominator;
  const double a11 = (2.0 - x) * g1 + rep.k_prime * c;
  rep.trace = a11 - p.k2;
  rep.admissible = std::abs(rep.trace) < 2.0;
  rep.non_resonant = rep.admissible && std::abs(rep.trace) > 1e-9 && std::abs(rep.trace + 1.0) > 1e-9;

  const double q0 = rep.k_prime * p.k1 * g2 - p.k2 * a11;
  if (q0 > 0.0) rep.modulus_derivative = rep.denominator / (2.0 * std::sqrt(q0));

  if (rep.admissible) {
    rep.alpha = 0.5 * rep.trace;
    rep.beta = 0.5 * std::sqrt(std::max(0.0, 4.0 * q0 - rep.trace * rep.trace));
    const NormalFormDerivs d = ns_normal_form_derivs(x, phi, rep.k_prime, p);
    rep.theta = ns_first_lyapunov(d, rep.alpha, rep.beta, &rep.l11, &rep.l12, &rep.l21, &rep.l22);
  }
  return rep;
}

NSReport ns_self_consistent(const MapParams& p_in, double x_guess, const SelfConsistentOptions& opts) {
  MapParams p = p_in;
  double x = x_guess;
  // h(k) = k'(x*(k)) - k, solved by a secant iteration with a damped first
  // step and a cap on the step length.
  auto evaluate = [&](double k) -> std::optional<NSReport> {
    p.k = k;
    const auto root = root_near(x, p, 0.05 * (1.0 + std::abs(x)));
    if (!root) return std::nullopt;
    x = *root;
    return ns_critical_k(x, fixed_point_phi(x, p), p);
  };
  double k_prev = p_in.k;
  auto first = evaluate(k_prev);
  if (!first) throw NumericalFailure("fixed point lost during critical-coupling iteration");
  double h_prev = first->k_prime - k_prev;
  double k = k_prev + opts.damping * h_prev;
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    // Halve the step back towards the last good k while the root is lost.
    auto rep = evaluate(k);
    for (int back = 0; !rep && back < 40; ++back) {
      k = 0.5 * (k + k_prev);
      rep = evaluate(k);
    }
    if (!rep) throw NumericalFailure("fixed point lost during critical-coupling iteration");
    const double h = rep->k_prime - k;
    if (std::abs(h) < opts.tol) {
      rep->self_consistent = true;
      rep->iterations = it;
      return *rep;
    }
    double step = h == h_prev ? opts.damping * h : -h * (k - k_prev) / (h - h_prev);
    const double cap = 0.05 * (1.0 + std::abs(k));
    step = std::clamp(step, -cap, cap);
    k_prev = k;
    h_prev = h;
    k += step;
  }
  throw NumericalFailure("critical-coupling iteration did not converge");
}

}  // namespace mrchialvo
