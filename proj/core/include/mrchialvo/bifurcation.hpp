#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mrchialvo/fixed_points.hpp"
#include "mrchialvo/types.hpp"

namespace mrchialvo {

enum class SweepDirection { forward, backward };

struct SweepConfig {
  Param param = Param::r;
  double p_start = 0.0;
  double p_end = 1.0;
  std::size_t n_steps = 2;
  SweepDirection direction = SweepDirection::forward;
  std::size_t n_transient = 2000;
  std::size_t n_record = 200;
  NeuronState seed_state{0.5, 0.0};
};

/// Attractor diagram on an ascending parameter grid. The grid is the same for
/// both directions, so forward and backward diagrams compare index-wise.
struct BifurcationDiagram {
  std::vector<double> param_values;
  std::vector<std::vector<double>> samples;  ///< recorded x per parameter value
  std::vector<bool> escaped;
  SweepDirection direction = SweepDirection::forward;
  bool carry_state = true;
};

/// Continuation sweep: each parameter value is seeded with the final state of
/// the previously visited value (cfg.seed_state for the first one, and again
/// after an escape).
BifurcationDiagram attractor_sweep(const SweepConfig& cfg, const MapParams& p_base);

/// Symmetric nearest-point (Hausdorff) distance between two 1-D sample sets.
double sample_set_distance(std::vector<double> a, std::vector<double> b);

/// Fraction of grid points where the two diagrams differ by more than tol
/// (escape in exactly one diagram counts as a difference).
double hysteresis_fraction(const BifurcationDiagram& a, const BifurcationDiagram& b,
                           double tol = 1e-3);

/// Number of distinct values after merging samples closer than tol.
std::size_t distinct_count(std::vector<double> values, double tol = 1e-4);

struct Bubble {
  std::size_t first = 0;  ///< first chaotic index
  std::size_t last = 0;   ///< last chaotic index
};

/// Chaotic runs (distinct count above chaos_count) bracketed on both sides by
/// non-chaotic parameter values.
std::vector<Bubble> find_bubbles(const BifurcationDiagram& d, std::size_t chaos_count = 50,
                                 double cluster_tol = 1e-4);

enum class CritKind { LP, PD, NS };

std::string_view to_string(CritKind k);

struct CritPoint {
  double param_value = 0.0;
  CritKind kind = CritKind::LP;
  EigenPair eigen_evidence{};
  double branch_x = 0.0;
};

struct BranchPoint {
  double param_value = 0.0;
  FixedPointRecord fixed_point;
};

struct Branch {
  std::vector<BranchPoint> points;
  std::vector<CritPoint> crit_points;
  bool terminated = false;
};

struct BranchOptions {
  double param_tol = 1e-8;
  /// Largest bracket half-width searched around the previous root, relative
  /// to (1 + |x|).
  double max_bracket = 0.05;
};

/// Root of F near x_guess (nearest sign change found by expanding a bracket
/// centred on x_guess), or nullopt.
std::optional<double> root_near(double x_guess, const MapParams& p, double max_half_width);

/// Follows the fixed point through x_seed while param moves from start to end
/// in n_steps, reporting LP (eigenvalue +1), PD (eigenvalue -1) and NS
/// (complex pair on the unit circle) crossings refined by bisection on the
/// parameter. A lost root ends the branch with an LP at the refined
/// termination parameter.
Branch branch_track(const MapParams& p_base, Param param, double start, double end,
                    std::size_t n_steps, double x_seed, const BranchOptions& opts = {});

}  // namespace mrchialvo
