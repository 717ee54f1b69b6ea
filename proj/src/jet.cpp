#include "carleson/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace carleson::series {

Series constant(cplx c, std::size_t length) {
  Series s(length, cplx{0.0});
  if (length > 0) s[0] = c;
  return s;
}

Series variable(cplx z0, std::size_t length) {
  Series s(length, cplx{0.0});
  if (length > 0) s[0] = z0;
  if (length > 1) s[1] = 1.0;
  return s;
}

Series add(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Series out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
  return out;
}

Series scale(const Series& a, cplx s) {
  Series out(a);
  for (auto& c : out) c *= s;
  return out;
}

Series multiply(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Series out(n, cplx{0.0});
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == cplx{0.0}) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series power(const Series& a, unsigned k) {
  Series result = constant(1.0, a.size());
  Series base = a;
  while (k > 0) {
    if (k & 1u) result = multiply(result, base);
    k >>= 1u;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

Series divide(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return {};
  if (b[0] == cplx{0.0}) throw std::domain_error("series division by a series vanishing at the node");
  Series q(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = a[i];
    for (std::size_t j = 1; j <= i; ++j) acc -= b[j] * q[i - j];
    q[i] = acc / b[0];
  }
  return q;
}

Series inverse_linear_power(cplx a, cplx z0, unsigned p, std::size_t length) {
  // (D - a h)^{-p} = D^{-p} sum_n binom(p+n-1, n) (a/D)^n h^n
  const cplx d = 1.0 - a * z0;
  const cplx ratio = a / d;
  Series out(length);
  cplx term = 1.0;
  for (unsigned i = 0; i < p; ++i) term /= d;
  double binom = 1.0;
  cplx ratio_pow = 1.0;
  for (std::size_t n = 0; n < length; ++n) {
    out[n] = term * binom * ratio_pow;
    ratio_pow *= ratio;
    binom = binom * static_cast<double>(p + n) / static_cast<double>(n + 1);
  }
  return out;
}

Series polynomial_jet(const std::vector<cplx>& coeffs, cplx z0,
                      std::size_t length) {
  // Repeated synthetic division gives the Taylor shift p(z0 + h).
  std::vector<cplx> work(coeffs);
  Series out(length, cplx{0.0});
  for (std::size_t k = 0; k < length && !work.empty(); ++k) {
    cplx acc = 0.0;
    std::vector<cplx> quotient(work.size() > 0 ? work.size() - 1 : 0);
    for (std::size_t i = work.size(); i-- > 0;) {
      acc = acc * z0 + work[i];
      if (i > 0) quotient[i - 1] = acc;
    }
    out[k] = acc;
    work = std::move(quotient);
  }
  return out;
}

std::vector<cplx> to_derivatives(const Series& a) {
  std::vector<cplx> out(a.size());
  double fact = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) fact *= static_cast<double>(i);
    out[i] = a[i] * fact;
  }
  return out;
}

}  // namespace carleson::series
