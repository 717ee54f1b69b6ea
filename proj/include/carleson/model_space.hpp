#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carleson/hyperbolic.hpp"
#include "carleson/jet.hpp"
#include "carleson/matrix_calculus.hpp"

namespace carleson {

/// Derivative kernel k_w^{(j)}(z) = j! z^j / (1 - conj(w) z)^{j+1}, which
/// reproduces f^{(j)}(w) in H^2.
struct Atom {
  DiskPoint node;
  unsigned order = 0;
};

/// <k_w^{(j)}, k_v^{(i)}> for a = (v, i), b = (w, j), i.e. the i-th
/// derivative of k_w^{(j)} at v. Linear in b, conjugate linear in a, so the
/// Gram matrix G_ab = szego_inner(a, b) satisfies <x, e_a> = (G c)_a for
/// x = sum_b c_b e_b.
cplx szego_inner(const Atom& a, const Atom& b);

/// Value of k_w^{(j)} at z.
cplx kernel_value(const Atom& atom, cplx z);

/// Taylor jet of k_w^{(j)} at z.
Series kernel_jet(const Atom& atom, cplx z, std::size_t length);

/// Relative threshold on the smallest Gram eigenvalue.
inline constexpr double kGramConditioning = 1e-13;
/// Nodes closer than this (pseudo-hyperbolically) are rejected.
inline constexpr double kNodeSeparation = 1e-6;
/// Nodes with 1 - |w| below this trigger a near-boundary warning.
inline constexpr double kNearBoundary = 1e-4;

/// Ordered family of derivative kernels with its Gram matrix.
class KernelBasis {
 public:
  /// Throws ConditioningError if the Gram matrix is not numerically
  /// positive definite.
  explicit KernelBasis(std::vector<Atom> atoms, std::optional<FiniteBlaschke> source = {});

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const DenseMatrix& gram() const noexcept { return gram_; }
  const std::optional<FiniteBlaschke>& source() const noexcept { return source_; }
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }
  std::size_t dimension() const noexcept { return atoms_.size(); }

  /// Solves G c = rhs through the equilibrated Cholesky factor.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

  /// Lower-triangular L with G = L L^*.
  DenseMatrix cholesky_factor() const;

  /// Smallest and largest eigenvalue of the Gram matrix.
  std::pair<double, double> gram_spectrum() const;

 private:
  std::vector<Atom> atoms_;
  DenseMatrix gram_;
  std::optional<FiniteBlaschke> source_;
  std::vector<std::string> diagnostics_;
  Eigen::VectorXd scale_;                       // D^{-1/2}
  Eigen::LLT<DenseMatrix> llt_;                 // of D^{-1/2} G D^{-1/2}
};

/// Cross Gram C_ab = szego_inner(a_row, b_col).
DenseMatrix cross_gram(const std::vector<Atom>& rows, const std::vector<Atom>& cols);

/// Basis {k_lambda, ..., k_lambda^{(m-1)}} of H^2 minus B H^2. Throws
/// InputError for degree 0, ConditioningError when zeros are closer than
/// kNodeSeparation.
std::shared_ptr<const KernelBasis> model_basis(const FiniteBlaschke& b);

/// Element sum c_a e_a of a spanned model space.
struct ModelVector {
  std::shared_ptr<const KernelBasis> basis;
  Eigen::VectorXcd coefficients;

  cplx evaluate(cplx z) const;
  Series jet(cplx z, std::size_t length) const;
  double norm() const;
};

struct Projection {
  ModelVector vector;
  double distance;  // dist(k_w / ||k_w||, span)
};

/// Orthogonal projection of the normalized kernel at w onto the span.
Projection project(const DiskPoint& w, std::shared_ptr<const KernelBasis> basis);

/// min ||y|| over y orthogonal to the span with <y, k_w / ||k_w||> = 1,
/// solved as an equality-constrained least-squares problem in the span of
/// the basis and k_w. Equals 1 / distance.
double dual_extremal_norm(const DiskPoint& w, const KernelBasis& basis);

/// inf over unit k in span(K) of dist(k, span(L)), from the generalized
/// eigenproblem (G_KK - G_KL G_LL^{-1} G_LK) c = mu G_KK c.
double sine(const KernelBasis& k, const KernelBasis& l);

/// Least common multiple of two Blaschke products (max multiplicities).
FiniteBlaschke blaschke_lcm(const FiniteBlaschke& a, const FiniteBlaschke& b);

struct Witness {
  ModelVector x1, x2;
  double epsilon;       // max(|B1(z)|, |B2(z)|)
  double norm1, norm2;  // ||x_i||, each >= sqrt(1 - eps^2)
  double difference;    // ||x1 - x2||, <= 2 eps
  double norm_floor;    // sqrt(1 - eps^2)
  // Projection y of the normalized kernel onto H1 + H2 and the identity
  // ||x_i - y||^2 = |B_i(z)|^2 (1 - |B_j(z)|^2), valid for coprime B1, B2.
  double residual_sq1, residual_sq2;
  double identity_rhs1, identity_rhs2;
  bool coprime;
};

/// x_i = P_i(k_z / ||k_z||) with P_i the projection onto H^2 minus B_i H^2.
Witness theorem55_witness(const FiniteBlaschke& b1, const FiniteBlaschke& b2, const DiskPoint& z);

/// Vectors given as coefficient columns over a kernel basis.
struct VectorFamily {
  std::shared_ptr<const KernelBasis> basis;
  Eigen::MatrixXcd coefficients;  // dimension x count

  static VectorFamily span_of(std::shared_ptr<const KernelBasis> basis);
};

struct FrameBounds {
  double lower;
  double upper;
};

inline constexpr std::size_t kFrameDimensionCap = 2000;

/// Extreme eigenvalues of the joint Gram matrix after orthonormalizing each
/// family separately. lower > 0 iff the finite family is a Riesz system.
FrameBounds frame_bounds(const std::vector<VectorFamily>& families);
FrameBounds frame_bounds(const std::vector<std::shared_ptr<const KernelBasis>>& subspaces);

struct ThreeKernel {
  double lhs;  // dist(k_{w3} / ||k_{w3}||, span{k_{w1}, k_{w2}})
  double rhs;  // |b_{w1}(w3) b_{w2}(w3)|
};

ThreeKernel three_kernel_identity(const DiskPoint& w1, const DiskPoint& w2, const DiskPoint& w3);

}  // namespace carleson
