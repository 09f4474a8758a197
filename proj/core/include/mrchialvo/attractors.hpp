#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mrchialvo/types.hpp"

namespace mrchialvo {

enum class AttractorKind { divergent, periodic, quasiperiodic, chaotic };

std::string_view to_string(AttractorKind k);

struct Box {
  double x_lo = 0.0, x_hi = 0.0, phi_lo = 0.0, phi_hi = 0.0;
};

struct AttractorRecord {
  AttractorKind kind = AttractorKind::divergent;
  std::size_t period = 0;  ///< 0 unless periodic
  std::vector<NeuronState> representative;  ///< cycle points, or a thinned tail
  double lyapunov = 0.0;
  Box bounds{};
  /// False when a periodic orbit was only found by extending the budget past
  /// a strongly contracting but not yet converged tail.
  bool converged = true;
};

struct ClassifyBudget {
  std::size_t transient = 5000;
  std::size_t tail = 2000;
  std::size_t max_period = 64;
  double period_tol = 1e-7;
  double lyap_threshold = 0.01;
  std::size_t max_extensions = 4;
  std::size_t representative_size = 64;
  double escape_radius = kEscapeRadius;
};

/// Largest Lyapunov exponent from tangent-vector propagation with
/// renormalisation every step, averaged over n steps after the transient.
/// Throws NumericalFailure if the orbit escapes.
double largest_lyapunov(NeuronState s0, const MapParams& p, std::size_t n,
                        std::size_t transient = 0, double escape_radius = kEscapeRadius);

AttractorRecord classify_attractor(const NeuronState& s0, const MapParams& p,
                                   const ClassifyBudget& budget = {});

/// Whether two records describe the same attractor: same kind (and period);
/// cycles within tol in symmetric nearest-point distance; non-periodic sets
/// with bounding boxes agreeing to box_rel_tol of the larger box diagonal.
bool same_attractor(const AttractorRecord& a, const AttractorRecord& b, double tol = 1e-4,
                    double box_rel_tol = 0.05);

struct GridRegion {
  double x_lo = 0.0, x_hi = 1.0, phi_lo = 0.0, phi_hi = 1.0;
};

struct BasinGrid {
  GridRegion region;
  std::size_t nx = 0, nphi = 0;
  /// Row-major labels (row = phi index, column = x index) into `attractors`.
  std::vector<std::uint32_t> labels;
  /// Labelled in order of first encounter in row-major traversal.
  std::vector<AttractorRecord> attractors;

  std::uint32_t at(std::size_t ix, std::size_t iphi) const { return labels[iphi * nx + ix]; }
  NeuronState cell_state(std::size_t ix, std::size_t iphi) const;
};

/// Classifies the orbit from every grid point (corners included). Cells are
/// computed in parallel; merging and labelling are serial, so the result does
/// not depend on the thread count.
BasinGrid basin_grid(const GridRegion& region, std::size_t nx, std::size_t nphi,
                     const MapParams& p, const ClassifyBudget& budget = {}, unsigned threads = 0,
                     double match_tol = 1e-4);

struct CorrelationOptions {
  std::size_t n_radii = 24;
  double radius_lo = 1e-3;  ///< fraction of the set diameter
  double radius_hi = 1.0;
  double fit_lo = 0.0;      ///< fit window as fractions of the log-radius range
  double fit_hi = 0.4;
  bool standardize = true;  ///< z-score each axis before measuring distances
  unsigned threads = 0;
};

struct CorrelationResult {
  double dimension = 0.0;
  std::vector<double> radii;
  std::vector<double> correlation_sum;  ///< C(rho), nondecreasing
  std::size_t fit_points = 0;
};

/// Grassberger-Procaccia estimate: least-squares slope of log C against
/// log rho inside the fit window. Pair counts are exact integers, so the
/// result is independent of the thread count. Returns 0 for a set of
/// coincident points; throws NumericalFailure when fewer than 3 radii with
/// C > 0 fall in the window.
CorrelationResult correlation_dimension(const std::vector<NeuronState>& points,
                                        const CorrelationOptions& opts = {});

/// n_points consecutive states after a transient. Throws NumericalFailure on
/// escape.
std::vector<NeuronState> attractor_points(const NeuronState& s0, const MapParams& p,
                                          std::size_t n_transient, std::size_t n_points);

}  // namespace mrchialvo
