#include <doctest.h>

#include "carleson/error.hpp"
#include "carleson/model_space.hpp"
#include "carleson/separation.hpp"
#include "support.hpp"

using namespace carleson;
using testing::Gen;

namespace {

double brute_strong(const std::vector<cplx>& z, const std::vector<unsigned>& m, bool nikolski) {
  double best = 1.0;
  for (std::size_t n = 0; n < z.size(); ++n) {
    double p = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k)
      if (k != n) p *= std::pow(testing::rho(z[n], z[k]), nikolski ? double(m[n] * m[k]) : double(m[k]));
    best = std::min(best, p);
  }
  return best;
}

std::vector<WeightedPoint> weighted(const std::vector<cplx>& z, const std::vector<unsigned>& m) {
  std::vector<WeightedPoint> out;
  for (std::size_t i = 0; i < z.size(); ++i) out.push_back({z[i], m[i]});
  return out;
}

std::vector<FiniteBlaschke> factors(const std::vector<cplx>& z, const std::vector<unsigned>& m) {
  std::vector<FiniteBlaschke> out;
  for (std::size_t i = 0; i < z.size(); ++i) out.push_back(FiniteBlaschke::single(z[i], m[i]));
  return out;
}

// min over x in [0, r] of max(x^m1, b_r(x)^m2) by dense sampling and golden refinement
double segment_minimax(double r, unsigned m1, unsigned m2) {
  auto f = [&](double x) {
    return std::max(std::pow(x, m1), std::pow((r - x) / (1.0 - r * x), m2));
  };
  double a = 0.0, b = r;
  for (int it = 0; it < 200; ++it) {
    double c = a + 0.382 * (b - a), d = a + 0.618 * (b - a);
    (f(c) < f(d) ? b : a) = (f(c) < f(d) ? d : c);
  }
  return f(0.5 * (a + b));
}

}  // namespace

TEST_CASE("strong separation examples") {
  std::vector<WeightedPoint> two{{0.0, 1}, {0.5, 1}};
  CHECK(strong_separation(two).value == doctest::Approx(0.5));
  std::vector<WeightedPoint> one{{0.0, 1}};
  CHECK(strong_separation(one).value == 1.0);
  std::vector<cplx> z{0.0, 0.5, -0.5};
  std::vector<unsigned> m{1, 2, 1};
  CHECK(strong_separation(weighted(z, m)).value == doctest::Approx(brute_strong(z, m, false)).epsilon(1e-13));
  std::vector<WeightedPoint> rep{{0.2, 1}, {0.2, 1}, {0.7, 1}};
  PointSeparation r = strong_separation(rep);
  CHECK(r.value == 0.0);
  CHECK(r.diagnostic.has_value());
  CHECK_THROWS_AS(strong_separation({}), InputError);
}

TEST_CASE("nikolski pairwise examples") {
  std::vector<WeightedPoint> two{{0.0, 2}, {0.5, 3}};
  CHECK(nikolski_pairwise(two).value == doctest::Approx(std::pow(0.5, 6)).epsilon(1e-13));
  Gen g(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto z = g.separated(6, 0.95, 0.01);
    std::vector<unsigned> ones(6, 1), m;
    for (int i = 0; i < 6; ++i) m.push_back(static_cast<unsigned>(g.integer(1, 3)));
    CHECK(nikolski_pairwise(weighted(z, ones)).value ==
          doctest::Approx(strong_separation(weighted(z, ones)).value).epsilon(1e-13));
    CHECK(nikolski_pairwise(weighted(z, m)).value == doctest::Approx(brute_strong(z, m, true)).epsilon(1e-11));
    CHECK(strong_separation(weighted(z, m)).value == doctest::Approx(brute_strong(z, m, false)).epsilon(1e-11));
  }
}

TEST_CASE("weak separation and Carleson weights") {
  std::vector<DiskPoint> p{0.0, 0.5};
  CHECK(weak_separation(p) == doctest::Approx(0.5));
  std::vector<DiskPoint> rep{0.0, 0.5, 0.5};
  CHECK(weak_separation(rep) == 0.0);
  CHECK_THROWS_AS(weak_separation(std::vector<DiskPoint>{0.1}), InputError);

  Gen g(32);
  auto z = g.separated(10, 0.95, 0.0);
  std::vector<DiskPoint> pts(z.begin(), z.end());
  double best = 1.0;
  for (int i = 0; i < 10; ++i)
    for (int k = i + 1; k < 10; ++k) best = std::min(best, testing::rho(z[i], z[k]));
  CHECK(weak_separation(pts) == doctest::Approx(best).epsilon(1e-13));

  CHECK(carleson_weights(std::vector<DiskPoint>{0.0})[0] == 1.0);
  CHECK(carleson_weights(std::vector<DiskPoint>{0.6})[0] == doctest::Approx(0.64));
  auto five = g.separated(5, 0.9, 0.1);
  std::vector<Atom> atoms;
  std::vector<DiskPoint> five_pts;
  for (cplx w : five) {
    atoms.push_back({w, 0});
    five_pts.push_back(w);
  }
  KernelBasis basis(atoms);
  auto w = carleson_weights(five_pts);
  for (int i = 0; i < 5; ++i) CHECK(w[i] == doctest::Approx(1.0 / basis.gram()(i, i).real()).epsilon(1e-13));
}

TEST_CASE("uniform strong separation closed cases") {
  std::vector<FiniteBlaschke> single{FiniteBlaschke::single(0.0)};
  CHECK(uniform_strong_separation(std::span<const FiniteBlaschke>(single)).value == 1.0);

  std::vector<FiniteBlaschke> pair{FiniteBlaschke::single(0.0), FiniteBlaschke::single(0.5)};
  SeparationReport r = uniform_strong_separation(std::span<const FiniteBlaschke>(pair));
  CHECK(r.value == doctest::Approx((1.0 - std::sqrt(0.75)) / 0.5).epsilon(1e-10));
  CHECK(r.value == doctest::Approx(segment_minimax(0.5, 1, 1)).epsilon(1e-9));
  CHECK(leave_one_out_max(pair, r.argmin_point) == doctest::Approx(r.value).epsilon(1e-9));

  std::vector<FiniteBlaschke> shared(3, FiniteBlaschke::single(0.3));
  CHECK(uniform_strong_separation(std::span<const FiniteBlaschke>(shared)).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two weighted points match the segment minimax") {
  Gen g(33);
  for (int trial = 0; trial < 50; ++trial) {
    auto z = g.separated(2, 0.95, 0.05);
    std::vector<unsigned> m{static_cast<unsigned>(g.integer(1, 3)), static_cast<unsigned>(g.integer(1, 3))};
    SeparationReport r = uniform_strong_separation(std::span<const WeightedPoint>(weighted(z, m)));
    // leave-one-out: near z0 only the factor of z1 survives, so the exponents swap
    double want = segment_minimax(testing::rho(z[0], z[1]), m[1], m[0]);
    CHECK(r.value == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("scan brackets the brute-force grid and is attained") {
  Gen g(34);
  ScanOptions opt;
  opt.tol = 1e-4;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = g.integer(3, 5);
    auto z = g.separated(n, 0.9, 0.1);
    std::vector<unsigned> m;
    for (int i = 0; i < n; ++i) m.push_back(static_cast<unsigned>(g.integer(1, 2)));
    auto f = factors(z, m);
    SeparationReport r = uniform_strong_separation(std::span<const FiniteBlaschke>(f), opt);
    std::vector<std::vector<cplx>> flat;
    for (int i = 0; i < n; ++i) flat.push_back(std::vector<cplx>(m[i], z[i]));
    double brute = testing::brute_uss(flat, 200, 400, 0.999);
    CHECK(r.converged);
    CHECK(r.lower_bound <= brute + 1e-12);
    CHECK(r.value <= brute + 1e-12);
    CHECK(r.value - r.lower_bound <= opt.tol + 1e-12);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
    CHECK(r.certified_radius < 1.0);
    CHECK(leave_one_out_max(f, r.argmin_point) == doctest::Approx(r.value).epsilon(1e-12));
    // evaluated on the sequence itself the objective is the strong separation
    CHECK(r.value <= strong_separation(weighted(z, m)).value + opt.tol);
  }
}

TEST_CASE("scan is Mobius covariant") {
  Gen g(35);
  ScanOptions opt;
  opt.tol = 1e-4;
  for (int trial = 0; trial < 8; ++trial) {
    auto z = g.separated(4, 0.85, 0.15);
    std::vector<unsigned> m{1, 2, 1, 1};
    DiskPoint tau = g.disk(0.6);
    std::vector<cplx> moved;
    for (cplx w : z) moved.push_back(blaschke_factor(tau, w));
    auto f = factors(z, m), h = factors(moved, m);
    double a = uniform_strong_separation(std::span<const FiniteBlaschke>(f), opt).value;
    double b = uniform_strong_separation(std::span<const FiniteBlaschke>(h), opt).value;
    CHECK(std::abs(a - b) <= 2 * opt.tol);
  }
}

TEST_CASE("bounded multiplicities keep a positive uniform floor") {
  Gen g(36);
  for (int trial = 0; trial < 10; ++trial) {
    auto z = g.separated(4, 0.9, 0.3);
    std::vector<unsigned> m;
    for (int i = 0; i < 4; ++i) m.push_back(static_cast<unsigned>(g.integer(1, 3)));
    if (strong_separation(weighted(z, m)).value < 0.01) continue;
    SeparationReport r = uniform_strong_separation(std::span<const WeightedPoint>(weighted(z, m)));
    CHECK(r.lower_bound > 0.0);
  }
}

TEST_CASE("matrix factors with several zeros") {
  std::vector<FiniteBlaschke> f{FiniteBlaschke({{0.0, 1}, {cplx{0.0, 0.6}, 2}}),
                                FiniteBlaschke({{0.5, 1}}),
                                FiniteBlaschke({{cplx{-0.4, -0.4}, 1}, {cplx{0.3, -0.6}, 1}})};
  ScanOptions opt;
  opt.tol = 1e-4;
  SeparationReport r = uniform_strong_separation(std::span<const FiniteBlaschke>(f), opt);
  std::vector<std::vector<cplx>> flat{{0.0, cplx{0.0, 0.6}, cplx{0.0, 0.6}}, {0.5}, {cplx{-0.4, -0.4}, cplx{0.3, -0.6}}};
  double brute = testing::brute_uss(flat, 200, 400, 0.999);
  CHECK(r.method == "grid");
  CHECK(r.value <= brute + 1e-12);
  CHECK(r.lower_bound >= brute - 2e-3);
}

TEST_CASE("tiny budgets report non-convergence") {
  Gen g(37);
  auto z = g.separated(5, 0.9, 0.1);
  auto f = factors(z, std::vector<unsigned>(5, 1));
  ScanOptions opt;
  opt.tol = 1e-9;
  opt.max_evaluations = 20000;
  SeparationReport r = uniform_strong_separation(std::span<const FiniteBlaschke>(f), opt);
  CHECK_FALSE(r.converged);
  CHECK(r.lower_bound <= r.value);
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("landscape samples the objective") {
  std::vector<FiniteBlaschke> f{FiniteBlaschke::single(0.0), FiniteBlaschke::single(0.5),
                                FiniteBlaschke::single(cplx{0.0, -0.5})};
  auto s = landscape(f, 8, 16, 0.9);
  CHECK(s.size() >= 8 * 16);
  for (const auto& p : s) {
    CHECK(std::hypot(p.re, p.im) <= 0.9 + 1e-12);
    CHECK(p.value == doctest::Approx(leave_one_out_max(f, cplx{p.re, p.im})).epsilon(1e-12));
  }
}
