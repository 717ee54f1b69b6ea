#include "carleson/interpolator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "carleson/error.hpp"
#include "carleson/separation.hpp"

namespace carleson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClusterTol = 1e-6;
constexpr double kJitter = 1e-9;
constexpr double kJetTol = 1e-8;

double binomial(unsigned n, unsigned k) {
  double b = 1.0;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

using NodeJet = std::function<Series(const DiskPoint&, std::size_t)>;

DenseMatrix compressed_from_jets(const KernelBasis& basis, const NodeJet& jet_at) {
  const auto& atoms = basis.atoms();
  const auto n = static_cast<Eigen::Index>(atoms.size());
  DenseMatrix w = DenseMatrix::Zero(n, n);
  auto index_of = [&](const DiskPoint& node, unsigned order) -> Eigen::Index {
    for (Eigen::Index b = 0; b < n; ++b)
      if (atoms[b].node == node && atoms[b].order == order) return b;
    throw InputError("compressed_operator: basis is not closed under lower derivative orders");
  };
  for (Eigen::Index a = 0; a < n; ++a) {
    const unsigned j = atoms[a].order;
    Series t = jet_at(atoms[a].node, j + 1);
    for (unsigned i = 0; i <= j; ++i)
      w(index_of(atoms[a].node, j - i), a) += binomial(j, i) * factorial(i) * std::conj(t[i]);
  }
  return w;
}

const HermiteNode& find_node(const HermiteData& data, const DiskPoint& node) {
  for (const auto& h : data.nodes())
    if (h.node == node) return h;
  throw InputError("compressed_operator: basis node missing from the data");
}

double max_jet_error(const RationalInterpolant& phi, const HermiteData& data) {
  double err = 0.0;
  for (const auto& h : data.nodes()) {
    Series j = phi.jet(h.node.value(), h.order);
    for (unsigned i = 0; i < h.order; ++i) err = std::max(err, std::abs(j[i] - h.target[i]));
  }
  return err;
}

double data_scale(const HermiteData& data) {
  double s = 1.0;
  for (const auto& h : data.nodes())
    for (const auto& c : h.target) s = std::max(s, std::abs(c));
  return s;
}

RationalInterpolant extremal(const HermiteData& data, double& gap) {
  auto basis = interpolation_basis(data);
  DenseMatrix x = orthonormal_compression(data, *basis);
  Eigen::JacobiSVD<DenseMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double sigma = s(0);
  gap = s.size() > 1 ? s(0) - s(1) : std::numeric_limits<double>::infinity();
  // Coefficients c = L^{-*} y for orthonormal coordinates y.
  DenseMatrix lt = basis->cholesky_factor().adjoint();
  auto coords = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return lt.triangularView<Eigen::Upper>().solve(y);
  };
  RationalInterpolant phi;
  phi.norm = sigma;
  phi.denominator = ModelVector{basis, coords(svd.matrixU().col(0))};
  phi.numerator = ModelVector{basis, coords(sigma * svd.matrixV().col(0))};
  return phi;
}

}  // namespace

HermiteData::HermiteData(std::vector<HermiteNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InputError("hermite data: no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].order == 0) throw InputError("hermite data: order must be positive");
    if (nodes_[i].target.size() != nodes_[i].order)
      throw InputError("hermite data: target length differs from order at node " +
                       std::to_string(i));
    for (std::size_t k = 0; k < i; ++k)
      if (pseudo_distance_raw(nodes_[i].node.value(), nodes_[k].node.value()) <
          kDistinctEigenvalueGap)
        throw InputError("hermite data: repeated node " + std::to_string(i));
  }
}

std::size_t HermiteData::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& h : nodes_) d += h.order;
  return d;
}

HermiteData HermiteData::scaled(cplx c) const {
  std::vector<HermiteNode> out = nodes_;
  for (auto& h : out) h.target = series::scale(h.target, c);
  return HermiteData(std::move(out));
}

HermiteData hermite_data_from_matrices(const std::vector<SpectralData>& sequence,
                                       const std::vector<JetProvider>& targets) {
  if (sequence.size() != targets.size())
    throw InputError("hermite_data_from_matrices: one target per matrix is required");
  std::vector<HermiteNode> nodes;
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    for (const auto& e : sequence[n].entries()) {
      Series jet;
      try {
        jet = targets[n](e.eigenvalue.value(), e.order);
      } catch (const Error& ex) {
        throw InputError("target of matrix '" + sequence[n].label() + "' failed: " + ex.what());
      }
      if (jet.size() != e.order)
        throw InputError("target of matrix '" + sequence[n].label() + "' returned a short jet");
      auto it = std::find_if(nodes.begin(), nodes.end(), [&](const HermiteNode& h) {
        return pseudo_distance_raw(h.node.value(), e.eigenvalue.value()) < kDistinctEigenvalueGap;
      });
      if (it == nodes.end()) {
        nodes.push_back({e.eigenvalue, e.order, std::move(jet)});
        continue;
      }
      const std::size_t common = std::min<std::size_t>(it->order, e.order);
      for (std::size_t i = 0; i < common; ++i) {
        double tol = 1e-10 * std::max({1.0, std::abs(jet[i]), std::abs(it->target[i])});
        if (std::abs(jet[i] - it->target[i]) > tol)
          throw InputError("conflicting jets at a node shared with matrix '" +
                           sequence[n].label() + "'");
      }
      if (e.order > it->order) {
        it->order = e.order;
        it->target = std::move(jet);
      }
    }
  }
  return HermiteData(std::move(nodes));
}

std::vector<cplx> hermite_polynomial(const HermiteData& data) {
  const auto& nodes = data.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (std::abs(nodes[i].node.value() - nodes[k].node.value()) < kClusterTol)
        throw ConditioningError("hermite_polynomial: nodes closer than 1e-6");

  // Repeated node list, grouped so confluent differences read the jets.
  std::vector<cplx> z;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (unsigned r = 0; r < nodes[i].order; ++r) {
      z.push_back(nodes[i].node.value());
      owner.push_back(i);
    }
  const std::size_t n = z.size();
  std::vector<cplx> d(n), newton(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = nodes[owner[i]].target[0];
  newton[0] = d[0];
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      if (owner[i] == owner[i + k])
        d[i] = nodes[owner[i]].target[k];
      else
        d[i] = (d[i + 1] - d[i]) / (z[i + k] - z[i]);
    }
    newton[k] = d[0];
  }
  // Horner expansion of sum_k newton[k] prod_{i<k} (z - z_i).
  std::vector<cplx> p{newton[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<cplx> q(p.size() + 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= z[k] * p[i];
    }
    q[0] += newton[k];
    p = std::move(q);
  }
  return p;
}

std::shared_ptr<const KernelBasis> interpolation_basis(const HermiteData& data) {
  std::vector<Atom> atoms;
  std::vector<BlaschkeZero> zeros;
  for (const auto& h : data.nodes()) {
    for (unsigned j = 0; j < h.order; ++j) atoms.push_back({h.node, j});
    zeros.push_back({h.node, h.order});
  }
  return std::make_shared<const KernelBasis>(std::move(atoms), FiniteBlaschke(std::move(zeros)));
}

DenseMatrix compressed_operator(const std::vector<cplx>& psi, const KernelBasis& basis) {
  if (psi.empty()) throw InputError("compressed_operator: empty polynomial");
  return compressed_from_jets(basis, [&](const DiskPoint& node, std::size_t len) {
    return series::polynomial_jet(psi, node.value(), len);
  });
}

DenseMatrix compressed_operator(const HermiteData& data, const KernelBasis& basis) {
  return compressed_from_jets(basis, [&](const DiskPoint& node, std::size_t len) {
    const auto& h = find_node(data, node);
    if (len > h.order) throw InputError("compressed_operator: basis order exceeds the data");
    return Series(h.target.begin(), h.target.begin() + static_cast<std::ptrdiff_t>(len));
  });
}

DenseMatrix orthonormal_compression(const HermiteData& data, const KernelBasis& basis) {
  DenseMatrix w = compressed_operator(data, basis);
  DenseMatrix l = basis.cholesky_factor();
  DenseMatrix lt = l.adjoint();
  // (L^* W) L^{-*}
  DenseMatrix lw = lt * w;
  return lt.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(lw);
}

double minimal_norm(const HermiteData& data) {
  auto basis = interpolation_basis(data);
  DenseMatrix x = orthonormal_compression(data, *basis);
  Eigen::JacobiSVD<DenseMatrix> svd(x);
  return svd.singularValues()(0);
}

cplx RationalInterpolant::evaluate(cplx z) const {
  cplx den = denominator.evaluate(z);
  if (std::abs(den) > 1e-12 * std::max(1.0, denominator.norm())) return numerator.evaluate(z) / den;
  return jet(z, 1)[0];
}

Series RationalInterpolant::jet(cplx z, std::size_t length) const {
  const std::size_t extra = denominator.basis->dimension();
  Series nj = numerator.jet(z, length + extra);
  Series dj = denominator.jet(z, length + extra);
  double scale = 0.0;
  for (const auto& c : dj) scale = std::max(scale, std::abs(c));
  std::size_t k = 0;
  while (k < extra && std::abs(dj[k]) <= 1e-10 * scale) ++k;
  Series a(nj.begin() + static_cast<std::ptrdiff_t>(k),
           nj.begin() + static_cast<std::ptrdiff_t>(k + length));
  Series b(dj.begin() + static_cast<std::ptrdiff_t>(k),
           dj.begin() + static_cast<std::ptrdiff_t>(k + length));
  return series::divide(a, b);
}

JetProvider RationalInterpolant::provider() const {
  RationalInterpolant self = *this;
  return [self](cplx z, std::size_t len) { return self.jet(z, len); };
}

double RationalInterpolant::boundary_sup(std::size_t n) const {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    m = std::max(m, std::abs(evaluate(std::polar(1.0, kTwoPi * k / n))));
  return m;
}

double RationalInterpolant::boundary_oscillation(std::size_t n) const {
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double v = std::abs(evaluate(std::polar(1.0, kTwoPi * k / n)));
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

RationalInterpolant solve(const HermiteData& data, std::uint64_t seed) {
  double gap = 0.0;
  RationalInterpolant phi = extremal(data, gap);
  const double scale = data_scale(data);
  if (!(gap < kSingularGap * std::max(1.0, phi.norm))) return phi;

  // Every maximizing vector yields the extremal, so first accept the plain
  // choice if it interpolates.
  phi.degenerate = true;
  phi.diagnostics.push_back("maximal singular value is not simple");
  if (max_jet_error(phi, data) <= kJetTol * scale) return phi;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RationalInterpolant best = phi;
  double best_err = max_jet_error(phi, data);
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<HermiteNode> nodes = data.nodes();
    for (auto& h : nodes)
      for (auto& c : h.target) c += kJitter * scale * cplx{normal(rng), normal(rng)};
    double g2 = 0.0;
    RationalInterpolant cand = extremal(HermiteData(std::move(nodes)), g2);
    double err = max_jet_error(cand, data);
    if (err < best_err) {
      best = cand;
      best_err = err;
      best.degenerate = true;
      best.jittered = true;
      best.diagnostics = {"maximal singular value is not simple",
                          "targets jittered by 1e-9 to split the maximal space"};
    }
    if (best_err <= kJetTol * scale) break;
  }
  return best;
}

InterpolationConstant interpolation_constant(const std::vector<SpectralData>& sequence,
                                             std::size_t trials, std::uint64_t seed) {
  if (sequence.empty()) throw InputError("interpolation_constant: empty sequence");
  const std::size_t n = sequence.size();
  InterpolationConstant out;

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<JetProvider> targets;
    for (std::size_t k = 0; k < n; ++k)
      targets.push_back(functions::constant(std::polar(1.0, kTwoPi * double(j * k % n) / n)));
    out.lower_bound = std::max(out.lower_bound, minimal_norm(hermite_data_from_matrices(sequence, targets)));
    ++out.problems;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 3);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<JetProvider> targets;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<BlaschkeZero> zeros;
      const int d = deg(rng);
      for (int i = 0; i < d; ++i) {
        double r = 0.95 * std::sqrt(unit(rng));
        zeros.push_back({DiskPoint(std::polar(r, kTwoPi * unit(rng))), 1});
      }
      cplx c = std::polar(1.0, kTwoPi * unit(rng));
      targets.push_back(functions::scaled(functions::blaschke(FiniteBlaschke(std::move(zeros))), c));
    }
    out.lower_bound = std::max(out.lower_bound, minimal_norm(hermite_data_from_matrices(sequence, targets)));
    ++out.problems;
  }

  if (n == 1) {
    out.separation_scale = 1.0;
  } else {
    std::vector<FiniteBlaschke> factors;
    for (const auto& a : sequence) factors.push_back(blaschke_of_matrix(a));
    SeparationReport rep = uniform_strong_separation(std::span<const FiniteBlaschke>(factors));
    out.separation_scale =
        rep.value > 0.0 ? 1.0 / rep.value : std::numeric_limits<double>::infinity();
  }
  return out;
}

BeurlingFunctions::BeurlingFunctions(std::vector<RationalInterpolant> g, double constant)
    : g_(std::move(g)), constant_(constant) {
  if (g_.empty()) throw InputError("beurling functions: no generators");
}

cplx BeurlingFunctions::evaluate(std::size_t j, cplx z) const {
  const std::size_t n = g_.size();
  cplx h{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k)
    h += std::polar(1.0, -kTwoPi * double(j * k % n) / n) * g_[k].evaluate(z);
  h /= static_cast<double>(n);
  return h * h;
}

Series BeurlingFunctions::jet(std::size_t j, cplx z, std::size_t length) const {
  const std::size_t n = g_.size();
  Series h(length, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k)
    h = series::add(h, series::scale(g_[k].jet(z, length),
                                     std::polar(1.0, -kTwoPi * double(j * k % n) / n)));
  h = series::scale(h, 1.0 / static_cast<double>(n));
  return series::multiply(h, h);
}

JetProvider BeurlingFunctions::provider(std::size_t j) const {
  BeurlingFunctions self = *this;
  return [self, j](cplx z, std::size_t len) { return self.jet(j, z, len); };
}

double BeurlingFunctions::sum_modulus(cplx z) const {
  double s = 0.0;
  for (std::size_t j = 0; j < g_.size(); ++j) s += std::abs(evaluate(j, z));
  return s;
}

double BeurlingFunctions::grid_sup(unsigned radial, unsigned angular) const {
  double m = sum_modulus(0.0);
  for (unsigned i = 1; i <= radial; ++i) {
    double r = static_cast<double>(i) / radial;
    for (unsigned k = 0; k < angular; ++k) m = std::max(m, sum_modulus(std::polar(r, kTwoPi * k / angular)));
  }
  for (unsigned k = 0; k < 4 * angular; ++k)
    m = std::max(m, sum_modulus(std::polar(1.0, kTwoPi * k / (4 * angular))));
  return m;
}

BeurlingFunctions beurling_functions(const std::vector<SpectralData>& sequence, double slack,
                                     std::size_t trials, std::uint64_t seed) {
  if (!(slack > 0.0)) throw DomainError("beurling_functions: slack must be positive");
  if (sequence.empty()) throw InputError("beurling_functions: empty sequence");
  const std::size_t n = sequence.size();
  std::vector<RationalInterpolant> g;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<JetProvider> targets;
    for (std::size_t m = 0; m < n; ++m)
      targets.push_back(functions::constant(std::polar(1.0, kTwoPi * double(k * m % n) / n)));
    g.push_back(solve(hermite_data_from_matrices(sequence, targets), seed + k));
  }
  InterpolationConstant c = interpolation_constant(sequence, trials, seed);
  return BeurlingFunctions(std::move(g), c.lower_bound);
}

}  // namespace carleson
