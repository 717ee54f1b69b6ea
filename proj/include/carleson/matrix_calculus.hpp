#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "carleson/hyperbolic.hpp"
#include "carleson/jet.hpp"

namespace carleson {

using DenseMatrix = Eigen::MatrixXcd;

/// Taylor data [f(node), f'(node), ..., f^{(m-1)}(node)/(m-1)!] at a node.
struct Jet {
  DiskPoint node;
  Series coefficients;
};

struct SpectralEntry {
  DiskPoint eigenvalue;
  unsigned order = 1;  // size of the largest Jordan block for the eigenvalue
};

/// A matrix known through its distinct eigenvalues and their orders. This is
/// all that matters for interpolation: f(A) only sees the jets of f on the
/// spectrum, up to the order of each eigenvalue.
class SpectralData {
 public:
  SpectralData() = default;
  SpectralData(std::vector<SpectralEntry> entries, std::string label = {});

  const std::vector<SpectralEntry>& entries() const noexcept { return entries_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Sum of orders, i.e. the dimension of the reduced Jordan form.
  std::size_t degree() const noexcept;

 private:
  std::vector<SpectralEntry> entries_;
  std::string label_;
};

/// Minimum pseudo-hyperbolic gap between two eigenvalues of one SpectralData.
inline constexpr double kDistinctEigenvalueGap = 1e-10;

/// Supplies the Taylor jet of a holomorphic function at a node, with the
/// requested number of coefficients.
using JetProvider = std::function<Series(cplx node, std::size_t length)>;

namespace functions {
JetProvider constant(cplx c);
JetProvider identity();
JetProvider polynomial(std::vector<cplx> coeffs);
JetProvider blaschke(FiniteBlaschke b);
/// 1 / (1 - z / radius), holomorphic on |z| < radius.
JetProvider geometric(double radius);
JetProvider product(JetProvider f, JetProvider g);
JetProvider sum(JetProvider f, JetProvider g);
JetProvider scaled(JetProvider f, cplx c);
}  // namespace functions

/// Upper-triangular Toeplitz matrix whose first row is the jet.
DenseMatrix jordan_apply(const Jet& jet);

/// f(A) as the block-diagonal assembly of f(J) over the Jordan blocks of A,
/// in entry order.
DenseMatrix apply_function(const JetProvider& f, const SpectralData& a);

/// Block-diagonal Jordan form with one block of size `order` per entry.
DenseMatrix jordan_form(const SpectralData& a);

/// B_A: product of b_lambda^order over the spectrum.
FiniteBlaschke blaschke_of_matrix(const SpectralData& a);

/// Minimal polynomial prod (z - lambda)^order, ascending coefficients.
std::vector<cplx> minimal_polynomial(const SpectralData& a);

/// Power series sum a_n z^n with |a_n| <= coefficient_bound * growth^n.
/// A finite `length` makes it a polynomial (no tail).
struct PowerSeries {
  std::function<cplx(std::size_t)> coefficient;
  double coefficient_bound = 1.0;
  double growth = 1.0;
  std::optional<std::size_t> length;

  static PowerSeries polynomial(std::vector<cplx> coeffs);
  /// Coefficients of 1 / (1 - z / radius).
  static PowerSeries geometric(double radius);
};

struct PowerSeriesResult {
  DenseMatrix value;
  std::size_t terms = 0;     // number of summed terms (N + 1)
  double tail_bound = 0.0;   // certified bound on the neglected tail norm
};

inline constexpr std::size_t kPowerSeriesTermCap = 1000000;

/// Truncated sum of a_n M^n. The truncation index is chosen so that the
/// envelope sup|a_n| growth^n C n^{d-1} r^n, with r the Schur spectral
/// radius plus 1e-3 and C from the nilpotent part of the Schur form, sums
/// to less than tol over the tail.
PowerSeriesResult apply_power_series(const PowerSeries& series, const DenseMatrix& m, double tol);

DenseMatrix apply_power_series(const std::vector<cplx>& coefficients, const DenseMatrix& m,
                               double tol);

double spectral_radius(const DenseMatrix& m);

struct IngestResult {
  SpectralData data;
  bool reliable = true;
  std::vector<std::string> diagnostics;
};

/// Reads eigenvalues and orders off a dense matrix. Eigenvalues within
/// cluster_tol are merged; the order of a cluster is the first k at which
/// rank((M - lambda)^k) stops dropping. Clusters closer than 10 cluster_tol
/// are reported as unreliable rather than resolved.
IngestResult ingest_dense(const DenseMatrix& m, double cluster_tol = 1e-8,
                          std::string label = {});

}  // namespace carleson
