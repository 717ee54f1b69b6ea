#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carleson/hyperbolic.hpp"

namespace carleson {

struct WeightedPoint {
  DiskPoint point;
  unsigned multiplicity = 1;
};

/// Result of a finite leave-one-out product minimization over the points.
struct PointSeparation {
  double value = 1.0;
  std::size_t argmin = 0;                 // index attaining the minimum
  std::optional<std::string> diagnostic;  // set when points repeat
};

/// min_n prod_{k != n} rho(lambda_n, lambda_k)^{m_k}. Repeated points give 0
/// and a diagnostic.
PointSeparation strong_separation(std::span<const WeightedPoint> points);

/// min_n prod_{k != n} rho(lambda_n, lambda_k)^{m_n m_k}, reported as is.
PointSeparation nikolski_pairwise(std::span<const WeightedPoint> points);

/// min_{n != k} rho(lambda_n, lambda_k). Requires at least two points.
double weak_separation(std::span<const DiskPoint> points);

/// Masses 1 - |lambda_n|^2 of the measure sum (1 - |lambda_n|^2) delta.
std::vector<double> carleson_weights(std::span<const DiskPoint> points);

struct ScanOptions {
  double tol = 1e-3;
  std::size_t max_evaluations = 10'000'000;
  unsigned radial_cells = 64;
  unsigned angular_cells = 128;
  unsigned refine_per_round = 16;
  unsigned max_depth = 64;
};

struct SeparationReport {
  double value = 1.0;          // smallest evaluated objective (attained)
  double lower_bound = 1.0;    // certified lower bound on the infimum
  cplx argmin_point{0.0, 0.0};
  double certified_radius = 0.0;  // |z| >= R is covered by the annulus bound
  std::size_t grid_evaluations = 0;
  bool converged = true;  // value - lower_bound <= tol
  std::string method;     // "empty", "geodesic" or "grid"
  std::vector<std::string> diagnostics;
};

/// max_n prod_{k != n} |B_k(z)|; 1 for a single factor.
double leave_one_out_max(std::span<const FiniteBlaschke> factors, cplx z);

/// inf over the disk of max_n prod_{k != n} |B_k(z)|, bracketed to within tol.
///
/// Two single-zero factors are solved exactly on the geodesic through their
/// zeros. Otherwise a polar grid (uniform in hyperbolic radius) is refined by
/// branch and bound. Every cell carries a certified lower bound, the larger of
///   - the Schwarz-Pick bound (F(c) - r) / (1 - F(c) r), valid because each
///     leave-one-out product is a Blaschke product and hence contracts the
///     pseudo-hyperbolic metric (r bounds rho(c, z) over the cell);
///   - the product of per-zero lower bounds of |b_lambda| over the cell.
/// The region |z| >= R is discharged by the radial inequality
/// |b_lambda(z)| >= (|z| - |lambda|) / (1 - |lambda| |z|).
SeparationReport uniform_strong_separation(std::span<const FiniteBlaschke> factors,
                                           const ScanOptions& options = {});

SeparationReport uniform_strong_separation(std::span<const WeightedPoint> points,
                                           const ScanOptions& options = {});

struct LandscapeSample {
  double re;
  double im;
  double value;
};

/// Objective sampled on a polar grid of the disk |z| <= radius (uniform in
/// hyperbolic radius), for heatmaps.
std::vector<LandscapeSample> landscape(std::span<const FiniteBlaschke> factors,
                                       unsigned radial, unsigned angular, double radius);

}  // namespace carleson
