#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "carleson/hyperbolic.hpp"
#include "carleson/jet.hpp"
#include "carleson/matrix_calculus.hpp"
#include "carleson/model_space.hpp"

namespace carleson {

struct HermiteNode {
  DiskPoint node;
  unsigned order = 1;
  Series target;  // Taylor jet of length `order`
};

/// Interpolation conditions phi^{(i)}(node) / i! = target[i], i < order.
class HermiteData {
 public:
  HermiteData() = default;
  /// Throws InputError on repeated nodes or jets of the wrong length.
  explicit HermiteData(std::vector<HermiteNode> nodes);

  const std::vector<HermiteNode>& nodes() const noexcept { return nodes_; }
  std::size_t degree() const noexcept;

  /// Same nodes with every target multiplied by c.
  HermiteData scaled(cplx c) const;

 private:
  std::vector<HermiteNode> nodes_;
};

/// Flattens a matrix sequence with one target function per matrix into node
/// conditions. A node shared by several matrices is kept once at its maximal
/// order; the jets must agree on the common part (relative tol 1e-10).
HermiteData hermite_data_from_matrices(const std::vector<SpectralData>& sequence,
                                       const std::vector<JetProvider>& targets);

/// Polynomial of degree < data.degree() matching every jet, built in Newton
/// form over the repeated node list and expanded to ascending coefficients.
/// Throws ConditioningError when nodes are closer than 1e-6.
std::vector<cplx> hermite_polynomial(const HermiteData& data);

/// Kernel basis {k_lambda^{(j)} : j < order} in node order.
std::shared_ptr<const KernelBasis> interpolation_basis(const HermiteData& data);

/// Coefficient matrix of the adjoint of the compression of multiplication by
/// psi to the model space spanned by `basis`:
///   k_lambda^{(j)} -> sum_{i<=j} C(j,i) conj(psi^{(i)}(lambda)) k_lambda^{(j-i)}.
/// Column a holds the image of atom a. Only the jets of psi enter.
DenseMatrix compressed_operator(const std::vector<cplx>& psi, const KernelBasis& basis);
DenseMatrix compressed_operator(const HermiteData& data, const KernelBasis& basis);

/// The compressed adjoint in an orthonormal frame, L^* W L^{-*} with
/// G = L L^*. Its largest singular value is the minimal interpolant norm.
DenseMatrix orthonormal_compression(const HermiteData& data, const KernelBasis& basis);

/// inf ||phi||_inf over phi matching the data.
double minimal_norm(const HermiteData& data);

/// phi = numerator / denominator with both in the model space.
struct RationalInterpolant {
  ModelVector numerator;
  ModelVector denominator;
  double norm = 0.0;
  bool degenerate = false;  // maximal singular value not simple
  bool jittered = false;    // data perturbed to split the maximal space
  std::vector<std::string> diagnostics;

  cplx evaluate(cplx z) const;
  /// Jet of the quotient; common zeros of numerator and denominator at z
  /// are cancelled.
  Series jet(cplx z, std::size_t length) const;
  JetProvider provider() const;
  /// max |phi| on n equispaced points of the unit circle.
  double boundary_sup(std::size_t n = 512) const;
  /// (max - min) / max of |phi| on the same grid.
  double boundary_oscillation(std::size_t n = 512) const;
};

inline constexpr double kSingularGap = 1e-9;

/// Extremal interpolant phi = T x / x, where x maximizes ||T x|| / ||x|| for
/// the compression T. When the top singular value is not simple, the data is
/// jittered by 1e-9 (deterministically from `seed`) unless the unperturbed
/// maximal vector already interpolates.
RationalInterpolant solve(const HermiteData& data, std::uint64_t seed = 0);

/// max over the random and constant unit-ball trial problems of the minimal
/// norm: a lower bound for the interpolation constant of the finite sequence.
struct InterpolationConstant {
  double lower_bound = 0.0;
  double separation_scale = 0.0;  // 1 / uniform strong separation (inf for shared zeros)
  std::size_t problems = 0;
};

/// Trials: the n constant problems phi(A_k) = omega^{jk} Id, then `trials`
/// targets given by random finite Blaschke products (degree 1 to 3) times a
/// random unimodular constant, one per matrix.
InterpolationConstant interpolation_constant(const std::vector<SpectralData>& sequence,
                                             std::size_t trials, std::uint64_t seed = 0);

/// f_j = ((1/n) sum_k omega^{-jk} g_k)^2 with g_k the extremal solution of
/// g_k(A_m) = omega^{km} Id, omega = exp(2 pi i / n). Then f_j(A_k) = delta_jk Id
/// and sum_j |f_j| = (1/n) sum_k |g_k|^2 <= max_k ||g_k||^2.
class BeurlingFunctions {
 public:
  BeurlingFunctions(std::vector<RationalInterpolant> g, double constant);

  std::size_t size() const noexcept { return g_.size(); }
  const std::vector<RationalInterpolant>& generators() const noexcept { return g_; }
  double constant() const noexcept { return constant_; }  // M

  cplx evaluate(std::size_t j, cplx z) const;
  Series jet(std::size_t j, cplx z, std::size_t length) const;
  JetProvider provider(std::size_t j) const;
  double sum_modulus(cplx z) const;
  /// sup of sum_j |f_j| on the closed-disk polar grid used by landscapes
  /// plus the unit circle.
  double grid_sup(unsigned radial = 64, unsigned angular = 128) const;

 private:
  std::vector<RationalInterpolant> g_;
  double constant_;
};

/// Builds the functions for a sequence of n matrices. M is taken from
/// interpolation_constant with `trials` random problems; slack is validated
/// (> 0) and recorded by callers that check sum |f_j| <= M^2 + slack.
BeurlingFunctions beurling_functions(const std::vector<SpectralData>& sequence, double slack,
                                     std::size_t trials = 16, std::uint64_t seed = 0);

}  // namespace carleson
