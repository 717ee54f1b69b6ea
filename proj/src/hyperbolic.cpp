#include "carleson/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "carleson/error.hpp"

namespace carleson {

namespace {

constexpr std::size_t kLogFormDegree = 64;

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

}  // namespace

bool inside_guard(cplx z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
         std::abs(z) < 1.0 - kBoundaryGuard;
}

DiskPoint::DiskPoint(cplx z) : z_(z) {
  if (!inside_guard(z))
    throw DomainError("point " + describe(z) + " violates the boundary guard |z| < 1 - 1e-12");
}

cplx blaschke_factor(const DiskPoint& tau, cplx z) {
  const cplx t = tau.value();
  return (t - z) / (1.0 - std::conj(t) * z);
}

double pseudo_distance_raw(cplx a, cplx b) noexcept {
  const double num = std::abs(a - b);
  if (num == 0.0) return 0.0;
  const double den = std::abs(1.0 - std::conj(a) * b);
  return std::min(1.0, num / den);
}

double pseudo_distance(const DiskPoint& z1, const DiskPoint& z2) {
  return pseudo_distance_raw(z1.value(), z2.value());
}

double radial_factor_bound(double lambda_abs, double r) noexcept {
  if (r <= lambda_abs) return 0.0;
  return (r - lambda_abs) / (1.0 - lambda_abs * r);
}

FiniteBlaschke::FiniteBlaschke(std::vector<BlaschkeZero> zeros) {
  // Merge repeated zeros so that each distinct point appears once, in first
  // appearance order.
  for (const auto& z : zeros) {
    if (z.multiplicity == 0) throw DomainError("Blaschke zero with multiplicity 0");
    auto it = std::find_if(zeros_.begin(), zeros_.end(),
                           [&](const BlaschkeZero& e) { return e.zero == z.zero; });
    if (it != zeros_.end())
      it->multiplicity += z.multiplicity;
    else
      zeros_.push_back(z);
    degree_ += z.multiplicity;
  }
}

FiniteBlaschke FiniteBlaschke::single(const DiskPoint& zero, unsigned multiplicity) {
  return FiniteBlaschke({{zero, multiplicity}});
}

cplx FiniteBlaschke::evaluate(cplx z) const {
  if (degree_ <= kLogFormDegree) {
    cplx acc = 1.0;
    for (const auto& e : zeros_) {
      const cplx f = blaschke_factor(e.zero, z);
      for (unsigned k = 0; k < e.multiplicity; ++k) acc *= f;
    }
    return acc;
  }
  double log_mod = 0.0;
  double arg = 0.0;
  for (const auto& e : zeros_) {
    const cplx f = blaschke_factor(e.zero, z);
    const double m = std::abs(f);
    if (m == 0.0) return 0.0;
    log_mod += e.multiplicity * std::log(m);
    arg += e.multiplicity * std::arg(f);
  }
  return std::polar(std::exp(log_mod), std::remainder(arg, 2.0 * M_PI));
}

double FiniteBlaschke::modulus(cplx z) const {
  if (degree_ <= kLogFormDegree) return std::abs(evaluate(z));
  double log_mod = 0.0;
  for (const auto& e : zeros_) {
    const double m = std::abs(blaschke_factor(e.zero, z));
    if (m == 0.0) return 0.0;
    log_mod += e.multiplicity * std::log(m);
  }
  return std::exp(log_mod);
}

Series blaschke_factor_jet(const DiskPoint& tau, cplx z, std::size_t length) {
  // b(z + h) = ((tau - z) - h) / (D - conj(tau) h),  D = 1 - conj(tau) z
  //          = ((tau - z) - h) / D * sum_k (conj(tau)/D)^k h^k
  const cplx t = tau.value();
  const cplx d = 1.0 - std::conj(t) * z;
  const cplx q = std::conj(t) / d;
  const cplx a0 = (t - z) / d;
  const cplx a1 = -1.0 / d;
  Series out(length);
  cplx qk = 1.0;  // q^k
  cplx qk_prev = 0.0;
  for (std::size_t k = 0; k < length; ++k) {
    out[k] = a0 * qk + a1 * qk_prev;
    qk_prev = qk;
    qk *= q;
  }
  return out;
}

Series FiniteBlaschke::evaluate_jet(cplx z, std::size_t order) const {
  const std::size_t length = order + 1;
  Series acc = series::constant(1.0, length);
  for (const auto& e : zeros_) {
    const Series f = blaschke_factor_jet(e.zero, z, length);
    acc = series::multiply(acc, series::power(f, e.multiplicity));
  }
  return acc;
}

FiniteBlaschke FiniteBlaschke::operator*(const FiniteBlaschke& other) const {
  std::vector<BlaschkeZero> merged = zeros_;
  merged.insert(merged.end(), other.zeros_.begin(), other.zeros_.end());
  return FiniteBlaschke(std::move(merged));
}

std::vector<cplx> reflect_polynomial(const std::vector<cplx>& p) {
  if (p.empty()) throw InputError("reflect_polynomial: empty coefficient list");
  if (p.back() == cplx{0.0})
    throw InputError("reflect_polynomial: leading coefficient must be nonzero");
  std::vector<cplx> out(p.rbegin(), p.rend());
  for (auto& c : out) c = std::conj(c);
  return out;
}

cplx polyval(const std::vector<cplx>& p, cplx z) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

RhoSplit rho_split(double lambda1, double lambda2, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("rho_split: t must lie in (0, 1)");
  if (!(lambda1 >= 0.0 && lambda1 < lambda2 && lambda2 < 1.0 - kBoundaryGuard))
    throw DomainError("rho_split: requires 0 <= lambda1 < lambda2 < 1");
  const double rho = pseudo_distance(DiskPoint(lambda1), DiskPoint(lambda2));
  const double s1 = t * rho;
  // gamma = b_{lambda1}(-s1)
  const double gamma = (lambda1 + s1) / (1.0 + lambda1 * s1);
  const double s = pseudo_distance_raw(gamma, lambda2) / rho;
  return {gamma, s};
}

double rho_split_closed_form(double rho, double t) {
  return (1.0 - t) / (1.0 - rho * rho * t);
}

}  // namespace carleson
