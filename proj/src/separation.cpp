#include "carleson/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "carleson/error.hpp"

namespace carleson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shared body of strong_separation and nikolski_pairwise. The exponent of
// rho(lambda_n, lambda_k) is m_k, or m_n m_k when `pairwise`.
PointSeparation leave_one_out_min(std::span<const WeightedPoint> points, bool pairwise) {
  PointSeparation out;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    double log_prod = 0.0;
    bool repeated = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      double rho = pseudo_distance_raw(points[i].point.value(), points[k].point.value());
      if (rho == 0.0) {
        repeated = true;
        break;
      }
      double e = points[k].multiplicity;
      if (pairwise) e *= points[i].multiplicity;
      log_prod += e * std::log(rho);
    }
    double value = repeated ? 0.0 : std::exp(log_prod);
    if (repeated && !out.diagnostic) {
      out.diagnostic = "repeated point at index " + std::to_string(i) +
                       ": no sequence with repeated terms is strongly separated";
    }
    if (i == 0 || value < out.value) {
      out.value = value;
      out.argmin = i;
    }
  }
  return out;
}

// Polar cell in hyperbolic radial coordinate s = artanh |z|. s1 may be
// infinite for cells touching the circle.
struct Cell {
  double s0, s1;
  double t0, t1;  // angles, t0 < t1
  unsigned depth;
  double lower;   // certified lower bound of the objective over the cell
  std::size_t id; // creation order, for deterministic tie breaking
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.lower != b.lower) return a.lower > b.lower;
    return a.id > b.id;
  }
};

// Distance from p (|p| > r1) to the annular sector r in [r0, r1],
// theta in [t0, t1]. The closest point is on the outer arc when arg p lies in
// the angular range, otherwise on one of the two radial edges.
double sector_distance(cplx p, double r0, double r1, double t0, double t1) {
  double pa = std::abs(p);
  double phi = std::arg(p);
  double rel = std::remainder(phi - t0, kTwoPi);
  if (rel < 0.0) rel += kTwoPi;
  if (rel <= t1 - t0) return pa - r1;
  double best = std::numeric_limits<double>::infinity();
  for (double te : {t0, t1}) {
    double proj = std::clamp(pa * std::cos(phi - te), r0, r1);
    best = std::min(best, std::abs(p - std::polar(proj, te)));
  }
  return best;
}

struct ZeroRef {
  cplx lambda;
  double one_minus_abs2;
  unsigned multiplicity;
  std::size_t factor;
};

class Objective {
 public:
  explicit Objective(std::span<const FiniteBlaschke> factors) : factors_(factors) {
    for (std::size_t k = 0; k < factors.size(); ++k) {
      for (const auto& z : factors[k].zeros()) {
        cplx l = z.zero.value();
        zeros_.push_back({l, 1.0 - std::norm(l), z.multiplicity, k});
      }
    }
    moduli_.resize(factors.size());
    prefix_.resize(factors.size() + 1);
  }

  double operator()(cplx z) {
    ++evaluations_;
    for (std::size_t k = 0; k < factors_.size(); ++k) moduli_[k] = factors_[k].modulus(z);
    return combine();
  }

  // Lower bound over the cell from per-zero bounds on |b_lambda|:
  // 1 - |b_lambda(z)|^2 = (1 - |lambda|^2)(1 - |z|^2) / |1 - conj(lambda) z|^2.
  double interval_bound(const Cell& c) {
    double r0 = std::tanh(c.s0);
    double r1 = std::isinf(c.s1) ? 1.0 : std::tanh(c.s1);
    double c0 = 1.0 / std::cosh(c.s0);
    double one_minus_r0sq = c0 * c0;
    std::fill(moduli_.begin(), moduli_.end(), 1.0);
    for (const auto& z : zeros_) {
      double la = std::abs(z.lambda);
      double dmin = 1.0;
      if (la > 0.0) {
        cplx p = 1.0 / std::conj(z.lambda);
        dmin = la * sector_distance(p, r0, r1, c.t0, c.t1);
      }
      double lb = 0.0;
      if (dmin > 0.0) {
        double q = z.one_minus_abs2 * one_minus_r0sq / (dmin * dmin);
        lb = q < 1.0 ? std::sqrt(1.0 - q) : 0.0;
      }
      moduli_[z.factor] *= std::pow(lb, static_cast<double>(z.multiplicity));
    }
    return combine();
  }

  // Lower bound on |z| >= r via the radial factor inequality.
  double annulus_bound(double r) {
    std::fill(moduli_.begin(), moduli_.end(), 1.0);
    for (const auto& z : zeros_) {
      moduli_[z.factor] *=
          std::pow(radial_factor_bound(std::abs(z.lambda), r), static_cast<double>(z.multiplicity));
    }
    return combine();
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  const std::vector<ZeroRef>& zeros() const noexcept { return zeros_; }

 private:
  // max_l prod_{k != l} moduli_[k] with prefix and suffix products.
  double combine() {
    const std::size_t n = moduli_.size();
    if (n == 1) return 1.0;
    prefix_[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) prefix_[k + 1] = prefix_[k] * moduli_[k];
    double suffix = 1.0;
    double best = 0.0;
    for (std::size_t l = n; l-- > 0;) {
      best = std::max(best, prefix_[l] * suffix);
      suffix *= moduli_[l];
    }
    return best;
  }

  std::span<const FiniteBlaschke> factors_;
  std::vector<ZeroRef> zeros_;
  std::vector<double> moduli_;
  std::vector<double> prefix_;
  std::size_t evaluations_ = 0;
};

// Upper bound of the pseudo-hyperbolic radius of a finite cell around its
// center: radial then circular path, measured in artanh(rho) which is a metric
// with line element |dz| / (1 - |z|^2).
double cell_radius(const Cell& c) {
  double radial = 0.5 * (c.s1 - c.s0);
  double angular = 0.5 * std::sinh(2.0 * c.s1) * 0.5 * (c.t1 - c.t0);
  return std::tanh(radial + angular);
}

cplx cell_center(const Cell& c) {
  return std::polar(std::tanh(0.5 * (c.s0 + c.s1)), 0.5 * (c.t0 + c.t1));
}

// Largest certified radius we can represent with a meaningful tanh.
constexpr double kMaxRadialCoordinate = 18.0;

// Two factors with one zero each: the infimum sits on the geodesic through
// the zeros. After a Mobius map and rotation the zeros are 0 and rho > 0 with
// multiplicities m1, m2, and we minimize max(x^{m1}, b_rho(x)^{m2}) on
// [0, rho], where the first term increases and the second decreases.
std::optional<SeparationReport> geodesic_case(std::span<const FiniteBlaschke> factors) {
  if (factors.size() != 2) return std::nullopt;
  if (factors[0].zeros().size() != 1 || factors[1].zeros().size() != 1) return std::nullopt;
  const auto& z1 = factors[0].zeros()[0];
  const auto& z2 = factors[1].zeros()[0];
  cplx a = z1.zero.value();
  cplx b = z2.zero.value();
  SeparationReport rep;
  rep.method = "geodesic";
  rep.grid_evaluations = 0;
  double rho = pseudo_distance_raw(a, b);
  if (rho == 0.0) {
    rep.value = rep.lower_bound = 0.0;
    rep.argmin_point = a;
    rep.certified_radius = std::max(std::abs(a), 0.5);
    return rep;
  }
  double m1 = z1.multiplicity;
  double m2 = z2.multiplicity;
  // In normalized coordinates x in [0, rho]: |z - a'| -> x, b_rho(x) = (rho - x)/(1 - rho x).
  double lo = 0.0, hi = rho;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double f1 = std::pow(mid, m1);
    double f2 = std::pow((rho - mid) / (1.0 - rho * mid), m2);
    (f1 < f2 ? lo : hi) = mid;
    ++rep.grid_evaluations;
  }
  double x = 0.5 * (lo + hi);
  double v = std::max(std::pow(x, m1), std::pow((rho - x) / (1.0 - rho * x), m2));
  // Back to the original disk: b_a maps a to 0 and b to w with |w| = rho, so
  // the normalized point is u x with u = w / |w|, and b_a is its own inverse.
  cplx w = blaschke_factor(DiskPoint(a), b);
  cplx u = w / std::abs(w);
  cplx zstar = blaschke_factor(DiskPoint(a), u * x);
  rep.value = v;
  rep.lower_bound = v;
  rep.argmin_point = zstar;
  rep.certified_radius = std::max(std::abs(zstar), std::max(std::abs(a), std::abs(b)));
  rep.converged = true;
  return rep;
}

}  // namespace

PointSeparation strong_separation(std::span<const WeightedPoint> points) {
  if (points.empty()) throw InputError("strong_separation: empty point list");
  return leave_one_out_min(points, false);
}

PointSeparation nikolski_pairwise(std::span<const WeightedPoint> points) {
  if (points.empty()) throw InputError("nikolski_pairwise: empty point list");
  return leave_one_out_min(points, true);
}

double weak_separation(std::span<const DiskPoint> points) {
  if (points.size() < 2) throw InputError("weak_separation: needs at least two points");
  double best = 1.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = i + 1; k < points.size(); ++k)
      best = std::min(best, pseudo_distance_raw(points[i].value(), points[k].value()));
  return best;
}

std::vector<double> carleson_weights(std::span<const DiskPoint> points) {
  std::vector<double> w;
  w.reserve(points.size());
  for (const auto& p : points) w.push_back(1.0 - std::norm(p.value()));
  return w;
}

double leave_one_out_max(std::span<const FiniteBlaschke> factors, cplx z) {
  Objective f(factors);
  return f(z);
}

SeparationReport uniform_strong_separation(std::span<const FiniteBlaschke> factors,
                                           const ScanOptions& opt) {
  if (factors.empty()) throw InputError("uniform_strong_separation: needs at least one factor");
  if (!(opt.tol > 0.0)) throw DomainError("uniform_strong_separation: tol must be positive");

  SeparationReport rep;
  if (factors.size() == 1) {
    rep.value = rep.lower_bound = 1.0;
    rep.method = "empty";
    rep.certified_radius = 0.5;
    return rep;
  }
  if (auto g = geodesic_case(factors)) return *g;

  rep.method = "grid";
  Objective f(factors);
  double best = std::numeric_limits<double>::infinity();
  cplx argmin{0.0, 0.0};
  auto probe = [&](cplx z) {
    double v = f(z);
    if (v < best) {
      best = v;
      argmin = z;
    }
    return v;
  };

  // Seed the incumbent at the origin and at every zero.
  probe(0.0);
  double max_abs = 0.0;
  for (const auto& z : f.zeros()) {
    probe(z.lambda);
    max_abs = std::max(max_abs, std::abs(z.lambda));
  }

  // Grow R until the annulus bound beats the incumbent.
  double s_cap = std::atanh(max_abs) + 1.0;
  double s_max = s_cap;
  while (f.annulus_bound(std::tanh(s_max)) < best && s_max < kMaxRadialCoordinate) s_max += 0.5;
  s_max = std::min(s_max, kMaxRadialCoordinate);
  bool annulus_ok = f.annulus_bound(std::tanh(s_max)) >= best;
  rep.certified_radius = std::tanh(s_max);

  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
  std::vector<Cell> stuck;
  std::size_t next_id = 0;

  auto bound_cell = [&](Cell& c) {
    double lb = f.interval_bound(c);
    if (!std::isinf(c.s1)) {
      double v = probe(cell_center(c));
      double r = cell_radius(c);
      if (v > r) lb = std::max(lb, (v - r) / (1.0 - v * r));
    }
    c.lower = std::min(lb, 1.0);
    c.id = next_id++;
  };

  const unsigned nr = std::max(1u, opt.radial_cells);
  const unsigned na = std::max(1u, opt.angular_cells);
  for (unsigned i = 0; i < nr; ++i) {
    for (unsigned j = 0; j < na; ++j) {
      Cell c{s_max * i / nr, s_max * (i + 1) / nr, kTwoPi * j / na - std::numbers::pi,
             kTwoPi * (j + 1) / na - std::numbers::pi, 0, 0.0, 0};
      bound_cell(c);
      heap.push(c);
    }
  }
  if (!annulus_ok) {
    rep.diagnostics.push_back("annulus bound did not beat the incumbent; outer cells refined");
    for (unsigned j = 0; j < na; ++j) {
      Cell c{s_max, std::numeric_limits<double>::infinity(),
             kTwoPi * j / na - std::numbers::pi, kTwoPi * (j + 1) / na - std::numbers::pi, 0, 0.0,
             0};
      bound_cell(c);
      heap.push(c);
    }
  }

  auto global_lower = [&] {
    double lb = heap.empty() ? 1.0 : heap.top().lower;
    for (const auto& c : stuck) lb = std::min(lb, c.lower);
    if (annulus_ok) lb = std::min(lb, f.annulus_bound(rep.certified_radius));
    return lb;
  };

  bool budget_hit = false;
  while (!heap.empty()) {
    if (heap.top().lower >= best - opt.tol) break;
    if (f.evaluations() >= opt.max_evaluations) {
      budget_hit = true;
      break;
    }
    for (unsigned k = 0; k < opt.refine_per_round && !heap.empty(); ++k) {
      Cell c = heap.top();
      if (c.lower >= best - opt.tol) break;
      heap.pop();
      if (c.depth >= opt.max_depth) {
        stuck.push_back(c);
        continue;
      }
      double radial_extent = c.s1 - c.s0;
      double angular_extent =
          std::isinf(c.s1) ? 0.0 : 0.5 * std::sinh(2.0 * c.s1) * (c.t1 - c.t0);
      Cell a = c, b = c;
      a.depth = b.depth = c.depth + 1;
      if (radial_extent >= angular_extent) {
        double mid = std::isinf(c.s1) ? c.s0 + 1.0 : 0.5 * (c.s0 + c.s1);
        if (mid >= kMaxRadialCoordinate + 4.0) {
          stuck.push_back(c);
          continue;
        }
        a.s1 = mid;
        b.s0 = mid;
      } else {
        double mid = 0.5 * (c.t0 + c.t1);
        a.t1 = mid;
        b.t0 = mid;
      }
      bound_cell(a);
      bound_cell(b);
      heap.push(a);
      heap.push(b);
    }
  }

  rep.value = best;
  rep.argmin_point = argmin;
  rep.lower_bound = std::min(global_lower(), best);
  rep.grid_evaluations = f.evaluations();
  rep.converged = rep.value - rep.lower_bound <= opt.tol;
  if (budget_hit) rep.diagnostics.push_back("evaluation budget exhausted before reaching tol");
  if (!stuck.empty())
    rep.diagnostics.push_back(std::to_string(stuck.size()) + " cells hit the depth cap");
  return rep;
}

SeparationReport uniform_strong_separation(std::span<const WeightedPoint> points,
                                           const ScanOptions& options) {
  std::vector<FiniteBlaschke> factors;
  factors.reserve(points.size());
  for (const auto& p : points) factors.push_back(FiniteBlaschke::single(p.point, p.multiplicity));
  return uniform_strong_separation(std::span<const FiniteBlaschke>(factors), options);
}

std::vector<LandscapeSample> landscape(std::span<const FiniteBlaschke> factors, unsigned radial,
                                       unsigned angular, double radius) {
  if (radial == 0 || angular == 0) throw InputError("landscape: empty grid");
  if (!(radius > 0.0 && radius < 1.0)) throw DomainError("landscape: radius must lie in (0, 1)");
  Objective f(factors);
  std::vector<LandscapeSample> out;
  out.reserve(static_cast<std::size_t>(radial) * angular + 1);
  double smax = std::atanh(radius);
  out.push_back({0.0, 0.0, f(0.0)});
  for (unsigned i = 1; i <= radial; ++i) {
    double r = std::tanh(smax * i / radial);
    for (unsigned j = 0; j < angular; ++j) {
      cplx z = std::polar(r, kTwoPi * j / angular);
      out.push_back({z.real(), z.imag(), f(z)});
    }
  }
  return out;
}

}  // namespace carleson
