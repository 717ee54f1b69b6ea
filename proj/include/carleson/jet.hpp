#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace carleson {

using cplx = std::complex<double>;

/// Truncated Taylor series c_0 + c_1 h + ... + c_{n-1} h^{n-1}.
///
/// Coefficients are f^{(i)}(z0) / i!, never raw derivatives. All arithmetic
/// below truncates to the length of the shortest operand unless noted.
using Series = std::vector<cplx>;

namespace series {

Series constant(cplx c, std::size_t length);

/// Jet of the identity map z -> z at z0.
Series variable(cplx z0, std::size_t length);

Series add(const Series& a, const Series& b);
Series scale(const Series& a, cplx s);

/// Cauchy product truncated to min(|a|, |b|).
Series multiply(const Series& a, const Series& b);

/// a^k for k >= 0 by repeated squaring.
Series power(const Series& a, unsigned k);

/// a / b. Requires b[0] != 0.
Series divide(const Series& a, const Series& b);

/// Taylor coefficients of (1 - a z)^{-p} around z0, i.e. of
/// (D - a h)^{-p} with D = 1 - a z0.
Series inverse_linear_power(cplx a, cplx z0, unsigned p, std::size_t length);

/// Taylor coefficients at z0 of a polynomial given by ascending
/// coefficients.
Series polynomial_jet(const std::vector<cplx>& coeffs, cplx z0,
                      std::size_t length);

/// Converts Taylor coefficients into raw derivatives f^{(i)} = i! c_i.
std::vector<cplx> to_derivatives(const Series& a);

}  // namespace series

}  // namespace carleson
