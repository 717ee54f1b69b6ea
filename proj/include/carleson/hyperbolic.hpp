#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "carleson/jet.hpp"

namespace carleson {

/// Points must satisfy |z| < 1 - kBoundaryGuard.
inline constexpr double kBoundaryGuard = 1e-12;

/// A point of the open unit disk, kept away from the circle by
/// kBoundaryGuard. Construction throws DomainError otherwise.
class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(cplx z);  // NOLINT(google-explicit-constructor)
  DiskPoint(double x) : DiskPoint(cplx{x, 0.0}) {}  // NOLINT

  cplx value() const noexcept { return z_; }
  double abs() const noexcept { return std::abs(z_); }

  friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.z_ == b.z_; }

 private:
  cplx z_{0.0, 0.0};
};

/// Returns true when |z| < 1 - kBoundaryGuard.
bool inside_guard(cplx z) noexcept;

/// b_tau(z) = (tau - z) / (1 - conj(tau) z). Involutive, vanishes at tau.
cplx blaschke_factor(const DiskPoint& tau, cplx z);

/// Pseudo-hyperbolic distance |b_{z1}(z2)|.
double pseudo_distance(const DiskPoint& z1, const DiskPoint& z2);

/// Unchecked pseudo-hyperbolic distance, for hot loops over points already
/// validated elsewhere. Requires |a|, |b| < 1.
double pseudo_distance_raw(cplx a, cplx b) noexcept;

/// Lower bound of |b_lambda(z)| over the circle |z| = r, r >= |lambda|:
/// (r - |lambda|) / (1 - |lambda| r). Zero when r <= |lambda|.
double radial_factor_bound(double lambda_abs, double r) noexcept;

struct BlaschkeZero {
  DiskPoint zero;
  unsigned multiplicity = 1;
};

/// Finite Blaschke product prod b_{lambda_j}^{m_j}. The empty product is the
/// constant 1.
class FiniteBlaschke {
 public:
  FiniteBlaschke() = default;
  explicit FiniteBlaschke(std::vector<BlaschkeZero> zeros);

  static FiniteBlaschke single(const DiskPoint& zero, unsigned multiplicity = 1);

  const std::vector<BlaschkeZero>& zeros() const noexcept { return zeros_; }
  std::size_t degree() const noexcept { return degree_; }

  /// B(z) for |z| <= 1. Products of degree above 64 are accumulated in
  /// log-modulus and argument form.
  cplx evaluate(cplx z) const;

  /// |B(z)| only; never underflows to a spurious value.
  double modulus(cplx z) const;

  /// Taylor jet [B(z), B'(z), ..., B^{(order)}(z)/order!] (length order+1).
  Series evaluate_jet(cplx z, std::size_t order) const;

  /// Product of two Blaschke products (zero multisets merged).
  FiniteBlaschke operator*(const FiniteBlaschke& other) const;

 private:
  std::vector<BlaschkeZero> zeros_;
  std::size_t degree_ = 0;
};

/// Taylor jet of a single Blaschke factor b_tau at z (length `length`).
Series blaschke_factor_jet(const DiskPoint& tau, cplx z, std::size_t length);

/// Coefficients (ascending) of z^{deg p} conj(p)(1/conj(z)): the reversed,
/// conjugated coefficient list. Throws InputError on an empty list or a
/// vanishing leading coefficient.
std::vector<cplx> reflect_polynomial(const std::vector<cplx>& p);

/// Evaluates a polynomial given by ascending coefficients.
cplx polyval(const std::vector<cplx>& p, cplx z);

struct RhoSplit {
  double gamma;  // point in (lambda1, lambda2) with rho(gamma, lambda1) = t rho
  double s;      // rho(gamma, lambda2) / rho(lambda1, lambda2)
};

/// Splits the real geodesic segment (lambda1, lambda2) at pseudo-hyperbolic
/// fraction t from lambda1. s is evaluated directly, not from the closed
/// form (1 - t) / (1 - rho^2 t); tests compare the two.
RhoSplit rho_split(double lambda1, double lambda2, double t);

/// Closed form (1 - t) / (1 - rho^2 t).
double rho_split_closed_form(double rho, double t);

}  // namespace carleson
