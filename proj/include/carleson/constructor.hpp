#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "carleson/hyperbolic.hpp"
#include "carleson/separation.hpp"

namespace carleson {

/// Record of the inductive construction of a uniformly strongly separated
/// sequence on [0, 1).
struct ConstructionTrace {
  std::vector<DiskPoint> points;         // increasing, points[0] = 0
  std::vector<unsigned> multiplicities;
  std::vector<double> radii;             // r_n, one per completed step (size n - 1)
  std::vector<double> targets;           // delta nu^{2^{1-k}} for k = 1..n (targets[0] = 1)
  std::vector<double> achieved;          // certified lower bounds, non-increasing
  std::vector<double> scan_values;       // independent scan value per prefix
  std::vector<double> scan_lower;        // certified scan lower bound per prefix
  double target_delta = 0.0;
  double nu = 0.0;
};

/// Bound asserted for a prefix of k points: 1 for k = 1, delta nu for the
/// base pair, then delta nu^{1 - 1/2 - ... - 1/2^{k-1}} = delta nu^{2^{1-k}}.
double uss_schedule(double delta, double nu, std::size_t k);

/// Builds lambda_1 = 0 < lambda_2 < ... on the real axis with factors
/// b_{lambda_k}^{m_k} such that every prefix of length k satisfies
///   inf_z max_l prod_{j <= k, j != l} |B_j(z)| >= uss_schedule(delta, nu, k).
///
/// Step n -> n + 1 with certified prefix bound a_n and target T:
///   - r_n is the smallest radius where the radial bound of prod_{k<=n} |B_k|
///     reaches T (bisection), so the old product alone wins on |z| >= r_n;
///   - lambda_{n+1} is pushed toward 1 (bisection) until
///     |B_{n+1}| >= T / a_n on |z| <= r_n, so the old leave-one-out product
///     times B_{n+1} wins inside.
/// Each prefix is replayed through uniform_strong_separation with `scan`.
/// Throws ConstructionError when a bisection would cross the boundary guard.
ConstructionTrace build_uss(const std::vector<unsigned>& multiplicities, double delta, double nu,
                            std::size_t n_max, const ScanOptions& scan = {});

/// Record of a strongly separated sequence whose uniform strong separation
/// degenerates. Pair n occupies points 2n - 2 and 2n - 1 (zero based).
struct CounterexampleTrace {
  std::vector<DiskPoint> points;
  std::vector<DiskPoint> midpoints;   // xi_n on the segment of pair n
  std::vector<double> t_values;       // exp(-1 / sqrt(m_{2n-1}))
  std::vector<double> s_values;       // rho(xi_n, lambda_{2n}) / rho(lambda_{2n-1}, lambda_{2n})
  std::vector<double> s_closed_form;  // (1 - t) / (1 - rho^2 t)
  std::vector<double> pair_rho;       // rho(lambda_{2n-1}, lambda_{2n})
  std::vector<double> budgets;        // sum_{j<=n} 2^{-(j+1)}
  std::vector<unsigned> multiplicities;
  double nu = 0.0;
};

/// Golden-angle direction of pair n (1 based).
double counterexample_angle(std::size_t n);

/// Places n_max pairs. Pair n lies on the ray at counterexample_angle(n):
///   - the even point sits at rho(lambda_{2n-1}, lambda_{2n})^{m_{2n}} = nu
///     exactly (1-D solve);
///   - the odd point is pushed out along the ray (bisection) until every
///     point l <= 2n has prod_{k != l} rho(lambda_l, lambda_k)^{m_k} >= nu
///     2^{-budget(n)}, budget(n) = sum_{j<=n} 2^{-(j+1)} < 1/2.
/// Requires multiplicities strictly increasing with at least 2 n_max
/// entries, nu in (0, 1).
CounterexampleTrace build_counterexample(const std::vector<unsigned>& multiplicities, double nu,
                                         std::size_t n_max);

struct CounterexampleRow {
  std::size_t n;
  double t;
  double t_pow;               // t_n^{m_{2n-1}}
  double s;
  double s_pow;               // s_n^{m_{2n}}
  double ratio;               // m_{2n} eps_n / gamma_n
  double leave_one_out_at_xi; // max_l prod_{k != l} rho(xi_n, lambda_k)^{m_k}, all points
  double strong_separation;   // of the first 2n points
};

struct CounterexampleDiagnostics {
  std::vector<CounterexampleRow> rows;
  bool t_pow_decreasing = true;
  bool s_pow_decreasing = true;
  bool ratio_increasing = true;
  bool separation_floor = true;   // strong separation >= nu / 2 on every row
  bool ok() const { return t_pow_decreasing && s_pow_decreasing && ratio_increasing && separation_floor; }
};

CounterexampleDiagnostics counterexample_diagnostics(const CounterexampleTrace& trace);

/// Multiplicity schedules accepted on the command line: "linear" (m_n = n),
/// "quadratic" (n^2), "constant" (1), or a comma separated list.
std::vector<unsigned> multiplicity_schedule(const std::string& spec, std::size_t count);

}  // namespace carleson
