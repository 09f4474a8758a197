#include "mrchialvo/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mrchialvo/map.hpp"

namespace mrchialvo {

BifurcationDiagram attractor_sweep(const SweepConfig& cfg, const MapParams& p_base) {
  if (cfg.n_steps < 2) throw InvalidArgument("sweep needs at least 2 parameter values");
  validate(p_base);

  BifurcationDiagram d;
  d.direction = cfg.direction;
  const double lo = std::min(cfg.p_start, cfg.p_end);
  const double hi = std::max(cfg.p_start, cfg.p_end);
  d.param_values.resize(cfg.n_steps);
  for (std::size_t i = 0; i < cfg.n_steps; ++i) {
    d.param_values[i] = i + 1 == cfg.n_steps
                            ? hi
                            : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.n_steps - 1);
  }
  d.samples.assign(cfg.n_steps, {});
  d.escaped.assign(cfg.n_steps, false);

  NeuronState s = cfg.seed_state;
  MapParams p = p_base;
  for (std::size_t visit = 0; visit < cfg.n_steps; ++visit) {
    const std::size_t i = cfg.direction == SweepDirection::forward ? visit : cfg.n_steps - 1 - visit;
    set(p, cfg.param, d.param_values[i]);
    const Orbit orbit = iterate(s, p, cfg.n_transient, cfg.n_record);
    if (orbit.escaped) {
      d.escaped[i] = true;
      s = cfg.seed_state;
      continue;
    }
    auto& xs = d.samples[i];
    xs.reserve(orbit.states.size());
    for (const auto& st : orbit.states) xs.push_back(st.x);
    s = orbit.states.back();
  }
  return d;
}

double sample_set_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double v : from) {
      auto it = std::lower_bound(to.begin(), to.end(), v);
      double best = std::numeric_limits<double>::infinity();
      if (it != to.end()) best = *it - v;
      if (it != to.begin()) best = std::min(best, v - *std::prev(it));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double hysteresis_fraction(const BifurcationDiagram& a, const BifurcationDiagram& b, double tol) {
  if (a.param_values != b.param_values) {
    throw InvalidArgument("diagrams are on different parameter grids");
  }
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.param_values.size(); ++i) {
    if (a.escaped[i] != b.escaped[i]) {
      ++differ;
    } else if (!a.escaped[i] && sample_set_distance(a.samples[i], b.samples[i]) > tol) {
      ++differ;
    }
  }
  return static_cast<double>(differ) / static_cast<double>(a.param_values.size());
}

std::size_t distinct_count(std::vector<double> values, double tol) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t n = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] > tol) ++n;
  }
  return n;
}

std::vector<Bubble> find_bubbles(const BifurcationDiagram& d, std::size_t chaos_count,
                                 double cluster_tol) {
  const std::size_t n = d.param_values.size();
  std::vector<int> state(n);  // -1 escaped, 0 regular, 1 chaotic
  for (std::size_t i = 0; i < n; ++i) {
    state[i] = d.escaped[i] ? -1 : (distinct_count(d.samples[i], cluster_tol) > chaos_count ? 1 : 0);
  }
  std::vector<Bubble> out;
  std::size_t i = 0;
  while (i < n) {
    if (state[i] != 1) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && state[j + 1] == 1) ++j;
    if (i > 0 && state[i - 1] == 0 && j + 1 < n && state[j + 1] == 0) out.push_back({i, j});
    i = j + 1;
  }
  return out;
}

std::string_view to_string(CritKind k) {
  switch (k) {
    case CritKind::LP: return "LP";
    case CritKind::PD: return "PD";
    case CritKind::NS: return "NS";
  }
  return "?";
}

std::optional<double> root_near(double x_guess, const MapParams& p, double max_half_width) {
  const double f0 = residual_F(x_guess, p);
  if (f0 == 0.0) return x_guess;
  const double w_max = max_half_width * (1.0 + std::abs(x_guess));
  double inner_lo = x_guess, inner_hi = x_guess;
  double f_lo = f0, f_hi = f0;
  for (double w = 1e-7 * (1.0 + std::abs(x_guess)); w <= w_max * 1.0000001; w *= 2.0) {
    const double a = x_guess - w;
    const double b = x_guess + w;
    const double fa = residual_F(a, p);
    const double fb = residual_F(b, p);
    std::optional<std::pair<double, double>> left, right;
    if ((fa < 0.0) != (f_lo < 0.0) || fa == 0.0) left = std::pair{a, inner_lo};
    if ((fb < 0.0) != (f_hi < 0.0) || fb == 0.0) right = std::pair{inner_hi, b};
    std::optional<double> best;
    for (const auto& br : {left, right}) {
      if (!br) continue;
      double lo = br->first, hi = br->second;
      double flo = residual_F(lo, p);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = residual_F(mid, p);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (!best || std::abs(root - x_guess) < std::abs(*best - x_guess)) best = root;
    }
    if (best) return best;
    inner_lo = a;
    inner_hi = b;
    f_lo = fa;
    f_hi = fb;
  }
  return std::nullopt;
}

namespace {

struct Sample {
  double param;
  double x;
  StabilityReport rep;
};

// Characteristic polynomial at +1 and -1, and |lambda|^2 - 1 for a complex
// pair. A sign change flags the corresponding crossing.
double test_lp(const StabilityReport& r) { return 1.0 - r.p_trace + r.q_det; }
double test_pd(const StabilityReport& r) { return 1.0 + r.p_trace + r.q_det; }
double test_ns(const StabilityReport& r) { return r.q_det - 1.0; }
bool complex_pair(const StabilityReport& r) { return r.eigenvalues[0].imag() != 0.0; }

Sample evaluate(const MapParams& base, Param param, double value, double x) {
  MapParams p = base;
  set(p, param, value);
  const double phi = fixed_point_phi(x, p);
  const Mat2 j = jacobian({x, phi}, p);
  StabilityReport rep;
  rep.gamma1 = x * std::exp(p.r - x);
  rep.gamma2 = std::numbers::pi * x * std::sin(std::numbers::pi * phi);
  rep.p_trace = j[0][0] + j[1][1];
  rep.q_det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  rep.eigenvalues = quadratic_eigenvalues(rep.p_trace, rep.q_det);
  rep.cls = classify_eigenvalues(rep.eigenvalues);
  return {value, x, rep};
}

FixedPointRecord to_record(const Sample& s, const MapParams& base, Param param) {
  MapParams p = base;
  set(p, param, s.param);
  FixedPointRecord rec;
  rec.x_star = s.x;
  rec.phi_star = fixed_point_phi(s.x, p);
  rec.residual = std::abs(residual_F(s.x, p));
  rec.stability = s.rep;
  return rec;
}

}  // namespace

Branch branch_track(const MapParams& p_base, Param param, double start, double end,
                    std::size_t n_steps, double x_seed, const BranchOptions& opts) {
  if (n_steps < 2) throw InvalidArgument("branch needs at least 2 steps");
  validate(p_base);
  {
    MapParams p0 = p_base;
    set(p0, param, start);
    const double phi = fixed_point_phi(x_seed, p0);
    const NeuronState img = apply_map({x_seed, phi}, p0);
    if (std::abs(img.x - x_seed) > 1e-6 || std::abs(img.phi - phi) > 1e-6) {
      throw InvalidArgument("branch seed is not a fixed point at the start parameter");
    }
  }

  auto solve = [&](double value, double guess) -> std::optional<double> {
    MapParams p = p_base;
    set(p, param, value);
    return root_near(guess, p, opts.max_bracket);
  };

  Branch br;
  const auto initial = solve(start, x_seed);
  Sample prev = evaluate(p_base, param, start, initial.value_or(x_seed));
  br.points.push_back({prev.param, to_record(prev, p_base, param)});

  // Refines a sign change of `test` between a and b by bisection on the
  // parameter, following the fixed point.
  auto refine = [&](Sample a, Sample b, const std::function<double(const StabilityReport&)>& test) {
    const double ta = test(a.rep);
    while (std::abs(b.param - a.param) > opts.param_tol) {
      const double mid = 0.5 * (a.param + b.param);
      const auto x = solve(mid, a.x);
      if (!x) break;
      const Sample m = evaluate(p_base, param, mid, *x);
      if ((test(m.rep) < 0.0) == (ta < 0.0)) {
        a = m;
      } else {
        b = m;
      }
    }
    return std::abs(test(a.rep)) <= std::abs(test(b.rep)) ? a : b;
  };

  for (std::size_t i = 1; i < n_steps; ++i) {
    const double value =
        i + 1 == n_steps ? end : start + (end - start) * static_cast<double>(i) / static_cast<double>(n_steps - 1);
    const auto x = solve(value, prev.x);
    if (!x) {
      // Root lost: bisect on the parameter for the last value where it exists.
      Sample ok = prev;
      double bad = value;
      while (std::abs(bad - ok.param) > opts.param_tol) {
        const double mid = 0.5 * (ok.param + bad);
        const auto xm = solve(mid, ok.x);
        if (xm) {
          ok = evaluate(p_base, param, mid, *xm);
        } else {
          bad = mid;
        }
      }
      br.crit_points.push_back({ok.param, CritKind::LP, ok.rep.eigenvalues, ok.x});
      br.terminated = true;
      break;
    }
    const Sample cur = evaluate(p_base, param, value, *x);

    if ((test_lp(prev.rep) < 0.0) != (test_lp(cur.rep) < 0.0)) {
      const Sample c = refine(prev, cur, test_lp);
      br.crit_points.push_back({c.param, CritKind::LP, c.rep.eigenvalues, c.x});
    }
    if ((test_pd(prev.rep) < 0.0) != (test_pd(cur.rep) < 0.0)) {
      const Sample c = refine(prev, cur, test_pd);
      br.crit_points.push_back({c.param, CritKind::PD, c.rep.eigenvalues, c.x});
    }
    if (complex_pair(prev.rep) && complex_pair(cur.rep) &&
        (test_ns(prev.rep) < 0.0) != (test_ns(cur.rep) < 0.0)) {
      const Sample c = refine(prev, cur, test_ns);
      if (complex_pair(c.rep)) {
        br.crit_points.push_back({c.param, CritKind::NS, c.rep.eigenvalues, c.x});
      }
    }
    br.points.push_back({cur.param, to_record(cur, p_base, param)});
    prev = cur;
  }
  return br;
}

}  // namespace mrchialvo
