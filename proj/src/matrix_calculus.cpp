#include "carleson/matrix_calculus.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "carleson/error.hpp"

namespace carleson {

SpectralData::SpectralData(std::vector<SpectralEntry> entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.empty()) throw InputError("spectral data '" + label_ + "' has no eigenvalues");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].order == 0)
      throw InputError("spectral data '" + label_ + "': eigenvalue order must be >= 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (pseudo_distance(entries_[i].eigenvalue, entries_[j].eigenvalue) <= kDistinctEigenvalueGap)
        throw InputError("spectral data '" + label_ + "': repeated eigenvalue");
    }
  }
}

std::size_t SpectralData::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& e : entries_) d += e.order;
  return d;
}

namespace functions {

JetProvider constant(cplx c) {
  return [c](cplx, std::size_t length) { return series::constant(c, length); };
}

JetProvider identity() {
  return [](cplx z, std::size_t length) { return series::variable(z, length); };
}

JetProvider polynomial(std::vector<cplx> coeffs) {
  return [coeffs = std::move(coeffs)](cplx z, std::size_t length) {
    return series::polynomial_jet(coeffs, z, length);
  };
}

JetProvider blaschke(FiniteBlaschke b) {
  return [b = std::move(b)](cplx z, std::size_t length) {
    if (length == 0) return Series{};
    return b.evaluate_jet(z, length - 1);
  };
}

JetProvider geometric(double radius) {
  if (!(radius > 0.0)) throw DomainError("geometric: radius must be positive");
  return [radius](cplx z, std::size_t length) {
    if (std::abs(z) >= radius) throw DomainError("geometric: node outside the disk of convergence");
    return series::inverse_linear_power(1.0 / radius, z, 1, length);
  };
}

JetProvider product(JetProvider f, JetProvider g) {
  return [f = std::move(f), g = std::move(g)](cplx z, std::size_t length) {
    return series::multiply(f(z, length), g(z, length));
  };
}

JetProvider sum(JetProvider f, JetProvider g) {
  return [f = std::move(f), g = std::move(g)](cplx z, std::size_t length) {
    return series::add(f(z, length), g(z, length));
  };
}

JetProvider scaled(JetProvider f, cplx c) {
  return [f = std::move(f), c](cplx z, std::size_t length) {
    return series::scale(f(z, length), c);
  };
}

}  // namespace functions

DenseMatrix jordan_apply(const Jet& jet) {
  const auto n = static_cast<Eigen::Index>(jet.coefficients.size());
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out(i, j) = jet.coefficients[static_cast<std::size_t>(j - i)];
  return out;
}

DenseMatrix apply_function(const JetProvider& f, const SpectralData& a) {
  const auto dim = static_cast<Eigen::Index>(a.degree());
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  Eigen::Index offset = 0;
  for (const auto& e : a.entries()) {
    Series coeffs;
    try {
      coeffs = f(e.eigenvalue.value(), e.order);
    } catch (const std::exception& ex) {
      throw InputError("function evaluation failed on '" + a.label() + "': " + ex.what());
    }
    if (coeffs.size() < e.order)
      throw InputError("function on '" + a.label() + "' returned a short jet");
    coeffs.resize(e.order);
    const DenseMatrix block = jordan_apply(Jet{e.eigenvalue, std::move(coeffs)});
    out.block(offset, offset, block.rows(), block.cols()) = block;
    offset += block.rows();
  }
  return out;
}

DenseMatrix jordan_form(const SpectralData& a) {
  return apply_function(functions::identity(), a);
}

FiniteBlaschke blaschke_of_matrix(const SpectralData& a) {
  std::vector<BlaschkeZero> zeros;
  zeros.reserve(a.entries().size());
  for (const auto& e : a.entries()) zeros.push_back({e.eigenvalue, e.order});
  return FiniteBlaschke(std::move(zeros));
}

std::vector<cplx> minimal_polynomial(const SpectralData& a) {
  std::vector<cplx> p{1.0};
  for (const auto& e : a.entries()) {
    for (unsigned k = 0; k < e.order; ++k) {
      std::vector<cplx> next(p.size() + 1, cplx{0.0});
      for (std::size_t i = 0; i < p.size(); ++i) {
        next[i + 1] += p[i];
        next[i] -= e.eigenvalue.value() * p[i];
      }
      p = std::move(next);
    }
  }
  return p;
}

PowerSeries PowerSeries::polynomial(std::vector<cplx> coeffs) {
  PowerSeries s;
  double bound = 0.0;
  for (const auto& c : coeffs) bound = std::max(bound, std::abs(c));
  s.coefficient_bound = bound;
  s.length = coeffs.size();
  s.coefficient = [coeffs = std::move(coeffs)](std::size_t n) {
    return n < coeffs.size() ? coeffs[n] : cplx{0.0};
  };
  return s;
}

PowerSeries PowerSeries::geometric(double radius) {
  if (!(radius > 0.0)) throw DomainError("geometric: radius must be positive");
  PowerSeries s;
  s.coefficient_bound = 1.0;
  s.growth = 1.0 / radius;
  s.coefficient = [radius](std::size_t n) {
    return cplx{std::pow(radius, -static_cast<double>(n)), 0.0};
  };
  return s;
}

double spectral_radius(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

PowerSeriesResult apply_power_series(const PowerSeries& s, const DenseMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw InputError("apply_power_series: matrix must be square");
  if (!(tol > 0.0)) throw DomainError("apply_power_series: tol must be positive");
  const Eigen::Index d = m.rows();
  PowerSeriesResult result;

  std::size_t last = 0;  // index of the last summed term
  if (s.length) {
    if (*s.length == 0) {
      result.value = DenseMatrix::Zero(d, d);
      return result;
    }
    last = *s.length - 1;
  } else {
    Eigen::ComplexSchur<DenseMatrix> schur(m, false);
    const DenseMatrix& t = schur.matrixT();
    const double rho = d > 0 ? t.diagonal().cwiseAbs().maxCoeff() : 0.0;
    if (rho >= 1.0 - kBoundaryGuard)
      throw DomainError("apply_power_series: spectral radius must be < 1");
    DenseMatrix nil = t.triangularView<Eigen::StrictlyUpper>();
    const double nil_norm = nil.norm();
    const double r = rho + 1e-3;
    const double kr = s.growth * r;
    if (kr >= 1.0)
      throw DomainError("apply_power_series: coefficient growth exceeds the spectral margin");

    // ||M^n|| <= sum_{k<d} binom(n,k) r^{n-k} ||N||^k <= C n^{d-1} r^n
    double c = 0.0, term = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      c += term;
      term *= (nil_norm / r) / static_cast<double>(k + 1);
    }
    const double log_a = std::log(std::max(s.coefficient_bound, 1e-300));
    const double log_c = std::log(c);
    const double dm1 = static_cast<double>(std::max<Eigen::Index>(d - 1, 0));
    bool found = false;
    for (std::size_t n = 0; n < kPowerSeriesTermCap; ++n) {
      const double next = static_cast<double>(n + 1);
      const double q = std::pow((next + 1.0) / next, dm1) * kr;
      if (q >= 1.0) continue;
      const double log_tail = log_a + log_c + dm1 * std::log(next) + next * std::log(kr) -
                              std::log1p(-q);
      if (log_tail < std::log(tol)) {
        last = n;
        result.tail_bound = std::exp(log_tail);
        found = true;
        break;
      }
    }
    if (!found)
      throw DomainError("apply_power_series: tail bound not reached within 1e6 terms");
  }

  DenseMatrix power = DenseMatrix::Identity(d, d);
  DenseMatrix acc = DenseMatrix::Zero(d, d);
  for (std::size_t n = 0; n <= last; ++n) {
    const cplx a = s.coefficient(n);
    if (a != cplx{0.0}) acc += a * power;
    if (n < last) power = power * m;
  }
  result.value = std::move(acc);
  result.terms = last + 1;
  return result;
}

DenseMatrix apply_power_series(const std::vector<cplx>& coefficients, const DenseMatrix& m,
                               double tol) {
  return apply_power_series(PowerSeries::polynomial(coefficients), m, tol).value;
}

namespace {

Eigen::Index numerical_rank(const DenseMatrix& a, double threshold) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<DenseMatrix> svd(a);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++r;
  return r;
}

}  // namespace

IngestResult ingest_dense(const DenseMatrix& m, double cluster_tol, std::string label) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InputError("matrix '" + label + "' must be square and non-empty");
  if (!(cluster_tol > 0.0)) throw DomainError("cluster_tol must be positive");
  const Eigen::Index d = m.rows();
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m, false);
  if (solver.info() != Eigen::Success)
    throw ConditioningError("eigenvalue computation failed for '" + label + "'");
  std::vector<cplx> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + d);
  for (const auto& e : eig)
    if (!inside_guard(e))
      throw DomainError("matrix '" + label + "' has an eigenvalue outside the disk guard");

  // Single-linkage clustering in a deterministic order.
  std::sort(eig.begin(), eig.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<int> cluster(eig.size(), -1);
  int next_cluster = 0;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = next_cluster;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < eig.size(); ++j) {
        if (cluster[j] < 0 && std::abs(eig[j] - eig[k]) <= cluster_tol) {
          cluster[j] = next_cluster;
          stack.push_back(j);
        }
      }
    }
    ++next_cluster;
  }

  IngestResult out;
  std::vector<cplx> centers(static_cast<std::size_t>(next_cluster), cplx{0.0});
  std::vector<std::size_t> sizes(static_cast<std::size_t>(next_cluster), 0);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    centers[static_cast<std::size_t>(cluster[i])] += eig[i];
    ++sizes[static_cast<std::size_t>(cluster[i])];
  }
  for (std::size_t c = 0; c < centers.size(); ++c) centers[c] /= static_cast<double>(sizes[c]);

  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (std::abs(centers[a] - centers[b]) < 10.0 * cluster_tol) {
        out.reliable = false;
        out.diagnostics.push_back("eigenvalue clusters of '" + label +
                                  "' lie within 10*cluster_tol; orders are unreliable");
      }

  Eigen::JacobiSVD<DenseMatrix> norm_svd(m);
  const double scale = norm_svd.singularValues()(0);
  const double threshold = cluster_tol * scale;
  const DenseMatrix id = DenseMatrix::Identity(d, d);

  std::vector<SpectralEntry> entries;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const DenseMatrix shifted = m - centers[c] * id;
    // Other clusters contribute singular values of size gap^k to the k-th
    // power, so the threshold has to shrink with k.
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < centers.size(); ++o)
      if (o != c) gap = std::min(gap, std::abs(centers[o] - centers[c]));
    DenseMatrix power = id;
    Eigen::Index prev_rank = d;
    unsigned order = 0;
    for (std::size_t k = 1; k <= sizes[c] + 1; ++k) {
      power = power * shifted;
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::pow(scale, double(k));
      const double cut = std::max(floor, std::min(threshold, 0.25 * std::pow(gap, double(k))));
      const Eigen::Index rank = numerical_rank(power, cut);
      if (rank == prev_rank) break;
      prev_rank = rank;
      order = static_cast<unsigned>(k);
    }
    if (order == 0) {
      // (M - lambda) has full rank: lambda is not resolved as an eigenvalue
      // at this threshold.
      out.reliable = false;
      out.diagnostics.push_back("eigenvalue cluster of '" + label +
                                "' is not rank-deficient at the requested tolerance");
      order = 1;
    }
    if (order > sizes[c]) {
      out.reliable = false;
      out.diagnostics.push_back("order exceeds algebraic multiplicity in '" + label + "'");
      order = static_cast<unsigned>(sizes[c]);
    }
    entries.push_back({DiskPoint(centers[c]), order});
  }
  out.data = SpectralData(std::move(entries), std::move(label));
  return out;
}

}  // namespace carleson
