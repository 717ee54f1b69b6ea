#pragma once

// Generators and independent reference computations shared by the tests.
// Nothing here calls into the library's numerical code paths except for the
// plain data types.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "carleson/hyperbolic.hpp"
#include "carleson/matrix_calculus.hpp"

namespace testing {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
constexpr double kPi = std::numbers::pi;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a = 0.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Area-uniform point with |z| <= r.
  cplx disk(double r = 0.95) { return std::polar(r * std::sqrt(uniform()), uniform(0.0, 2 * kPi)); }
  cplx unimodular() { return std::polar(1.0, uniform(0.0, 2 * kPi)); }
  cplx gaussian() {
    std::normal_distribution<double> n;
    return {n(rng_), n(rng_)};
  }

  // Distinct points, pairwise pseudo-distance at least `gap`.
  std::vector<cplx> separated(int count, double r, double gap) {
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < count) {
      cplx z = disk(r);
      bool ok = true;
      for (cplx w : out) ok = ok && std::abs((z - w) / (1.0 - std::conj(w) * z)) >= gap;
      if (ok) out.push_back(z);
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// |prod (a - z)/(1 - conj(a) z)| straight from the definition.
inline double blaschke_modulus(const std::vector<cplx>& zeros, cplx z) {
  double m = 1.0;
  for (cplx a : zeros) m *= std::abs((a - z) / (1.0 - std::conj(a) * z));
  return m;
}

inline double rho(cplx a, cplx b) { return std::abs((a - b) / (1.0 - std::conj(a) * b)); }

// Jordan block of size k for lambda.
inline Mat jordan_block(cplx lambda, int k) {
  Mat j = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i) j(i, i) = lambda;
  for (int i = 0; i + 1 < k; ++i) j(i, i + 1) = 1.0;
  return j;
}

inline Mat block_diag(const std::vector<Mat>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Mat m = Mat::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    m.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return m;
}

// B(M) = prod (a I - M)(I - conj(a) M)^{-1}, evaluated with dense algebra.
inline Mat blaschke_of_dense(const std::vector<cplx>& zeros, const Mat& m) {
  const Mat id = Mat::Identity(m.rows(), m.cols());
  Mat out = id;
  for (cplx a : zeros) {
    Mat num = a * id - m;
    Mat den = id - std::conj(a) * m;
    out = out * den.partialPivLu().solve(num);
  }
  return out;
}

// sum_n c_n M^n by Horner.
inline Mat polynomial_of_dense(const std::vector<cplx>& c, const Mat& m) {
  const Mat id = Mat::Identity(m.rows(), m.cols());
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = (out * m + *it * id).eval();
  return out;
}

// Truncated sum_{n<N} M^n / r^n with explicit powers.
inline Mat geometric_of_dense(double r, const Mat& m, int terms) {
  Mat out = Mat::Zero(m.rows(), m.cols());
  Mat p = Mat::Identity(m.rows(), m.cols());
  for (int n = 0; n < terms; ++n) {
    out += p;
    p = (p * m / r).eval();
  }
  return out;
}

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Random spectral data: distinct eigenvalues, random orders, total degree <= max_degree.
inline carleson::SpectralData random_spectral(Gen& g, int max_degree, double radius, double gap = 0.05) {
  const int distinct = g.integer(1, std::max(1, max_degree / 2));
  auto eig = g.separated(distinct, radius, gap);
  std::vector<carleson::SpectralEntry> entries;
  int left = max_degree - distinct;
  for (cplx z : eig) {
    int extra = left > 0 ? g.integer(0, std::min(left, 2)) : 0;
    left -= extra;
    entries.push_back({carleson::DiskPoint(z), static_cast<unsigned>(1 + extra)});
  }
  return carleson::SpectralData(entries);
}

inline Mat dense_jordan(const carleson::SpectralData& a) {
  std::vector<Mat> blocks;
  for (const auto& e : a.entries()) blocks.push_back(jordan_block(e.eigenvalue.value(), int(e.order)));
  return block_diag(blocks);
}

// Generalized Pick matrix of Hermite data at level M. nodes[k] carries the
// Taylor coefficients f_0..f_{m-1} at a point. The Taylor coefficients of
// 1 / (1 - z conj(w)) around (a, conj(b)) follow the two-variable recursion
// d0 c_{pq} = [p=q=0] + conj(b) c_{p-1,q} + a c_{p,q-1} + c_{p-1,q-1}.
struct PickNode {
  cplx point;
  std::vector<cplx> taylor;
};

inline Mat kernel_taylor(cplx a, cplx b, int rows, int cols) {
  Mat c = Mat::Zero(rows, cols);
  const cplx d0 = 1.0 - a * std::conj(b);
  for (int p = 0; p < rows; ++p)
    for (int q = 0; q < cols; ++q) {
      cplx s = (p == 0 && q == 0) ? 1.0 : 0.0;
      if (p > 0) s += std::conj(b) * c(p - 1, q);
      if (q > 0) s += a * c(p, q - 1);
      if (p > 0 && q > 0) s += c(p - 1, q - 1);
      c(p, q) = s / d0;
    }
  return c;
}

inline Mat pick_matrix(const std::vector<PickNode>& nodes, double level) {
  int n = 0;
  for (const auto& v : nodes) n += static_cast<int>(v.taylor.size());
  Mat p(n, n);
  int r = 0;
  for (const auto& u : nodes) {
    const int mu = static_cast<int>(u.taylor.size());
    int c = 0;
    for (const auto& v : nodes) {
      const int mv = static_cast<int>(v.taylor.size());
      Mat k = kernel_taylor(u.point, v.point, mu, mv);
      for (int i = 0; i < mu; ++i)
        for (int j = 0; j < mv; ++j) {
          cplx s = 0.0;
          for (int a = 0; a <= i; ++a)
            for (int b = 0; b <= j; ++b) {
              cplx h = -u.taylor[a] * std::conj(v.taylor[b]);
              if (a == 0 && b == 0) h += level * level;
              s += h * k(i - a, j - b);
            }
          p(r + i, c + j) = s;
        }
      c += mv;
    }
    r += mu;
  }
  return p;
}

// Smallest M with a positive semidefinite Pick matrix, by bisection. The
// matrix splits as M^2 K - T with K the kernel part; the test runs on the
// congruent M^2 I - L^{-1} T L^{-*}, K = L L^*, which keeps its scale for
// ill-conditioned nodes.
inline double pick_minimal_norm(const std::vector<PickNode>& nodes, double tol = 1e-9) {
  Mat t = -pick_matrix(nodes, 0.0);
  Mat k = pick_matrix(nodes, 1.0) + t;
  Eigen::LLT<Mat> llt(0.5 * (k + k.adjoint()));
  Mat lt = llt.matrixL().solve(t);
  Mat s = llt.matrixL().solve(lt.adjoint()).adjoint();
  s = (0.5 * (s + s.adjoint())).eval();
  auto psd = [&](double m) {
    Mat p = m * m * Mat::Identity(s.rows(), s.cols()) - s;
    Eigen::SelfAdjointEigenSolver<Mat> es(p, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-14 * std::max(1.0, m * m);
  };
  double hi = 1.0;
  while (!psd(hi)) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    (psd(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Grid minimum of max_l prod_{k != l} |B_k(z)| over a polar grid.
inline double brute_uss(const std::vector<std::vector<cplx>>& zeros, int radial, int angular, double rmax) {
  double best = 1.0;
  const std::size_t n = zeros.size();
  for (int i = 0; i <= radial; ++i) {
    double r = rmax * i / radial;
    for (int k = 0; k < (i == 0 ? 1 : angular); ++k) {
      cplx z = std::polar(r, 2 * kPi * k / angular);
      std::vector<double> v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = blaschke_modulus(zeros[j], z);
      double worst = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != l) p *= v[j];
        worst = std::max(worst, p);
      }
      best = std::min(best, worst);
    }
  }
  return best;
}

}  // namespace testing
