#include <doctest.h>

#include "carleson/error.hpp"
#include "carleson/interpolator.hpp"
#include "support.hpp"

using namespace carleson;
using testing::Gen;
using testing::Mat;

namespace {

std::vector<testing::PickNode> pick_nodes(const HermiteData& d) {
  std::vector<testing::PickNode> out;
  for (const auto& n : d.nodes()) out.push_back({n.node.value(), std::vector<cplx>(n.target.begin(), n.target.end())});
  return out;
}

// random nodes with total degree <= max_degree and jets of a bounded function
HermiteData random_hermite(Gen& g, int max_degree, double radius, bool bounded_target) {
  const int degree = g.integer(1, max_degree);
  auto pts = g.separated(degree, radius, 0.1);
  FiniteBlaschke target({{g.disk(0.9), 1}, {g.disk(0.9), static_cast<unsigned>(g.integer(1, 2))}});
  const cplx c = g.uniform(0.2, 1.0) * g.unimodular();
  std::vector<HermiteNode> nodes;
  int left = degree;
  for (cplx z : pts) {
    if (left == 0) break;
    const unsigned m = static_cast<unsigned>(g.integer(1, std::min(left, 3)));
    left -= static_cast<int>(m);
    Series jet;
    if (bounded_target) {
      jet = target.evaluate_jet(z, m - 1);
      for (auto& v : jet) v *= c;
    } else {
      for (unsigned k = 0; k < m; ++k) jet.push_back(0.7 * g.gaussian());
    }
    nodes.push_back({z, m, jet});
  }
  return HermiteData(nodes);
}

std::vector<cplx> poly_multiply(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<cplx> poly_add(std::vector<cplx> a, const std::vector<cplx>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

TEST_CASE("hermite data validation") {
  CHECK_THROWS_AS(HermiteData({{0.1, 1, {1.0}}, {0.1, 1, {2.0}}}), InputError);
  CHECK_THROWS_AS(HermiteData({{0.1, 2, {1.0}}}), InputError);
  HermiteData d({{0.1, 2, {1.0, 2.0}}, {0.5, 1, {3.0}}});
  CHECK(d.degree() == 3);
  HermiteData s = d.scaled(cplx{0, 2});
  CHECK(s.nodes()[0].target[1] == cplx{0, 4});
}

TEST_CASE("hermite polynomial reproduces the jets") {
  Gen g(61);
  for (int trial = 0; trial < 100; ++trial) {
    HermiteData d = random_hermite(g, 7, 0.9, false);
    auto p = hermite_polynomial(d);
    CHECK(p.size() <= d.degree());
    for (const auto& n : d.nodes()) {
      Series jet = series::polynomial_jet(p, n.node.value(), n.order);
      for (unsigned k = 0; k < n.order; ++k)
        CHECK(std::abs(jet[k] - n.target[k]) < 1e-8 * std::max(1.0, std::abs(n.target[k])));
    }
  }
}

TEST_CASE("hermite data from matrices merges shared nodes") {
  SpectralData a({{0.0, 2}, {0.5, 1}}), b({{0.0, 1}, {-0.5, 1}});
  auto f = functions::polynomial({1.0, 2.0, 3.0});
  HermiteData d = hermite_data_from_matrices({a, b}, {f, f});
  CHECK(d.degree() == 4);
  CHECK_THROWS(hermite_data_from_matrices({a, b}, {f, functions::constant(7.0)}));
  CHECK_THROWS(hermite_data_from_matrices({a, b}, {f}));
}

TEST_CASE("compressed operator examples") {
  auto b0 = model_basis(FiniteBlaschke::single(0.0));
  CHECK(std::abs(compressed_operator({0.0, 1.0}, *b0)(0, 0)) == 0.0);
  auto b00 = model_basis(FiniteBlaschke::single(0.0, 2));
  Mat w = compressed_operator({0.0, 1.0}, *b00);
  Mat want(2, 2);
  want << 0.0, 1.0, 0.0, 0.0;
  CHECK(testing::max_abs(w - want) == 0.0);
  Mat c = compressed_operator({cplx{2.0, 1.0}}, *b00);
  CHECK(testing::max_abs(c - cplx{2.0, -1.0} * Mat::Identity(2, 2)) == 0.0);
}

TEST_CASE("compressed operator against a Gram projection on monomials") {
  // K = span{1, z, z^2} for B = z^3; the compression of M_psi in the monomial
  // basis is the lower-triangular Toeplitz matrix of psi's coefficients
  auto basis = model_basis(FiniteBlaschke::single(0.0, 3));
  std::vector<cplx> psi{cplx{0.3, 0.1}, cplx{-1.0, 0.5}, 2.0, 5.0};
  Mat w = compressed_operator(psi, *basis);
  // atoms k^{(j)}_0 = j! z^j, so the adjoint matrix is D^{-1} T^* D with D = diag(j!)
  Mat t = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) t(i, j) = psi[i - j];
  Eigen::VectorXcd fact(3);
  fact << 1.0, 1.0, 2.0;
  Mat want = fact.cwiseInverse().asDiagonal() * t.adjoint() * fact.asDiagonal();
  CHECK(testing::max_abs(w - want) < 1e-14);
}

TEST_CASE("minimal norm closed forms") {
  cplx w{0.3, -0.4};
  CHECK(minimal_norm(HermiteData({{0.0, 1, {w}}})) == doctest::Approx(0.5).epsilon(1e-12));
  for (double r : {0.9, 0.6, 0.3}) {
    cplx t{0.1, 0.05};
    HermiteData d({{0.0, 1, {0.0}}, {r, 1, {t}}});
    CHECK(minimal_norm(d) == doctest::Approx(std::abs(t) / r).epsilon(1e-9));
    CHECK(minimal_norm(d) == doctest::Approx(testing::pick_minimal_norm(pick_nodes(d))).epsilon(1e-6));
  }
  cplx c{0.2, 0.7};
  HermiteData s({{0.0, 2, {0.0, c}}});
  CHECK(minimal_norm(s) == doctest::Approx(std::abs(c)).epsilon(1e-12));
  CHECK(minimal_norm(s) == doctest::Approx(testing::pick_minimal_norm(pick_nodes(s))).epsilon(1e-6));
}

TEST_CASE("minimal norm agrees with the Pick oracle") {
  Gen g(62);
  for (int trial = 0; trial < 100; ++trial) {
    HermiteData d = random_hermite(g, 6, 0.85, trial % 2 == 0);
    const double got = minimal_norm(d);
    const double want = testing::pick_minimal_norm(pick_nodes(d), 1e-10);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    const cplx c = g.uniform(0.1, 3.0) * g.unimodular();
    CHECK(minimal_norm(d.scaled(c)) == doctest::Approx(std::abs(c) * got).epsilon(1e-9));
    if (trial % 2 == 0) CHECK(got <= 1.0 + 1e-9);
  }
}

TEST_CASE("compression depends only on the jets") {
  Gen g(63);
  for (int trial = 0; trial < 50; ++trial) {
    HermiteData d = random_hermite(g, 5, 0.8, false);
    auto basis = interpolation_basis(d);
    auto psi = hermite_polynomial(d);
    std::vector<cplx> p{1.0};
    for (const auto& n : d.nodes())
      for (unsigned k = 0; k < n.order; ++k) p = poly_multiply(p, {-n.node.value(), 1.0});
    std::vector<cplx> q{g.gaussian(), g.gaussian(), g.gaussian()};
    auto other = poly_add(psi, poly_multiply(p, q));
    Mat a = compressed_operator(psi, *basis), b = compressed_operator(other, *basis);
    CHECK(testing::max_abs(a - b) < 1e-9 * std::max(1.0, testing::max_abs(a)));
    CHECK(testing::max_abs(compressed_operator(d, *basis) - a) < 1e-9 * std::max(1.0, testing::max_abs(a)));
  }
}

TEST_CASE("solve examples") {
  cplx w{0.3, -0.4};
  RationalInterpolant c = solve(HermiteData({{0.0, 1, {w}}}));
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.5, 0.2}, cplx{-0.7, 0.1}}) CHECK(std::abs(c.evaluate(z) - w) < 1e-10);

  RationalInterpolant h = solve(HermiteData({{0.0, 1, {0.0}}, {0.5, 1, {0.25}}}));
  CHECK(h.norm == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(h.evaluate(0.0)) < 1e-12);
  CHECK(std::abs(h.evaluate(0.5) - 0.25) < 1e-12);
  for (cplx z : {cplx{0.3, 0.3}, cplx{-0.6, 0.0}, cplx{0.1, -0.8}}) CHECK(std::abs(h.evaluate(z) - 0.5 * z) < 1e-9);
  CHECK(h.boundary_sup() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("solve reproduces jets and is flat on the circle") {
  Gen g(64);
  int flat = 0;
  for (int trial = 0; trial < 50; ++trial) {
    HermiteData d = random_hermite(g, 6, 0.85, trial % 2 == 0);
    RationalInterpolant phi = solve(d, static_cast<std::uint64_t>(trial));
    const double sigma = minimal_norm(d);
    for (const auto& n : d.nodes()) {
      Series jet = phi.jet(n.node.value(), n.order);
      for (unsigned k = 0; k < n.order; ++k)
        CHECK(std::abs(jet[k] - n.target[k]) < 1e-8 * std::max(1.0, std::abs(n.target[k])));
    }
    CHECK(phi.norm == doctest::Approx(sigma).epsilon(1e-6));
    if (!phi.degenerate && !phi.jittered) {
      ++flat;
      CHECK(phi.boundary_oscillation() <= 1e-5);
      CHECK(phi.boundary_sup() >= sigma * (1.0 - 1e-6));
      CHECK(phi.boundary_sup() <= sigma * (1.0 + 1e-6));
    }
  }
  CHECK(flat >= 40);
}

TEST_CASE("degenerate data is flagged") {
  // phi(0) = phi(0.5) = 0.3: the constant is extremal but the top singular
  // value of the compression is double
  RationalInterpolant phi = solve(HermiteData({{0.0, 1, {0.3}}, {0.5, 1, {0.3}}}));
  CHECK(std::abs(phi.evaluate(0.0) - 0.3) < 1e-8);
  CHECK(std::abs(phi.evaluate(0.5) - 0.3) < 1e-8);
  CHECK(phi.boundary_sup() <= 0.3 * (1.0 + 1e-6));
}

TEST_CASE("interpolants act on the matrices like the targets") {
  Gen g(65);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SpectralData> seq;
    std::vector<JetProvider> targets;
    auto centres = g.separated(g.integer(2, 3), 0.8, 0.2);
    for (std::size_t i = 0; i < centres.size(); ++i) {
      const unsigned m = static_cast<unsigned>(g.integer(1, 2));
      seq.emplace_back(std::vector<SpectralEntry>{{centres[i], m}});
      targets.push_back(functions::blaschke(FiniteBlaschke::single(g.disk(0.9))));
    }
    RationalInterpolant phi = solve(hermite_data_from_matrices(seq, targets), 7);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      Mat got = apply_function(phi.provider(), seq[i]);
      Mat want = apply_function(targets[i], seq[i]);
      CHECK(testing::max_abs(got - want) < 1e-8);
    }
  }
}

TEST_CASE("interpolation constant") {
  std::vector<SpectralData> one{SpectralData({{0.3, 1}})};
  CHECK(interpolation_constant(one, 8).lower_bound == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<SpectralData> ab{SpectralData({{0.0, 1}}), SpectralData({{0.5, 2}})};
  std::vector<SpectralData> ba{ab[1], ab[0]};
  InterpolationConstant x = interpolation_constant(ab, 8), y = interpolation_constant(ba, 8);
  CHECK(x.lower_bound >= 1.0);
  CHECK(x.lower_bound == doctest::Approx(y.lower_bound).epsilon(1e-9));
  CHECK(x.problems == 10);

  double prev = 0.0;
  for (double r : {0.9, 0.6, 0.3, 0.1}) {
    std::vector<SpectralData> pair{SpectralData({{0.0, 1}}), SpectralData({{r, 1}})};
    double m = interpolation_constant(pair, 0).lower_bound;
    // the constants phi(0) = 1, phi(r) = -1 need norm 1 / r in the worst case
    CHECK(m >= 1.0);
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("Beurling functions") {
  std::vector<SpectralData> one{SpectralData({{0.3, 1}})};
  BeurlingFunctions f1 = beurling_functions(one, 0.1, 4);
  for (cplx z : {cplx{0.0, 0.0}, cplx{0.5, -0.5}}) CHECK(std::abs(f1.evaluate(0, z) - 1.0) < 1e-9);

  Gen g(66);
  const std::vector<std::vector<SpectralData>> cases{
      {SpectralData({{0.0, 1}}), SpectralData({{0.9, 1}})},
      {SpectralData({{0.0, 2}}), SpectralData({{0.5, 1}}), SpectralData({{cplx{-0.3, 0.4}, 1}})},
      {SpectralData({{0.1, 1}, {cplx{0.0, 0.6}, 1}}), SpectralData({{-0.5, 2}}), SpectralData({{0.6, 1}}),
       SpectralData({{cplx{0.2, -0.6}, 1}})}};
  for (const auto& seq : cases) {
    const double slack = 0.1;
    BeurlingFunctions f = beurling_functions(seq, slack, 8);
    REQUIRE(f.size() == seq.size());
    const double m = f.constant();
    for (std::size_t j = 0; j < seq.size(); ++j)
      for (std::size_t k = 0; k < seq.size(); ++k) {
        Mat v = apply_function(f.provider(j), seq[k]);
        Mat want = (j == k ? 1.0 : 0.0) * Mat::Identity(v.rows(), v.cols());
        CHECK(testing::max_abs(v - want) < 1e-8);
      }
    CHECK(f.grid_sup() <= m * m + slack);
    // sum |f_j| is (1/n) sum |g_k|^2, pointwise
    cplx z{0.2, -0.1};
    double s = 0.0;
    for (const auto& gk : f.generators()) s += std::norm(gk.evaluate(z));
    CHECK(f.sum_modulus(z) == doctest::Approx(s / double(seq.size())).epsilon(1e-9));

    // f = sum f_j phi_j interpolates the phi_j at their own matrices
    std::vector<JetProvider> phis;
    for (std::size_t j = 0; j < seq.size(); ++j)
      phis.push_back(functions::scaled(functions::blaschke(FiniteBlaschke::single(g.disk(0.9))), g.unimodular()));
    JetProvider recon = functions::product(f.provider(0), phis[0]);
    for (std::size_t j = 1; j < seq.size(); ++j)
      recon = functions::sum(recon, functions::product(f.provider(j), phis[j]));
    for (std::size_t k = 0; k < seq.size(); ++k)
      CHECK(testing::max_abs(apply_function(recon, seq[k]) - apply_function(phis[k], seq[k])) < 1e-7);
  }
  CHECK_THROWS_AS(beurling_functions(cases[0], 0.0), DomainError);
}
