#include "carleson/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "carleson/error.hpp"

namespace carleson {

namespace {

constexpr double kPositionTol = 1e-14;
constexpr double kOuterLimit = 1.0 - kBoundaryGuard;

// Smallest x in [lo, hi] (up to kPositionTol) with pred(x) true, assuming
// pred is monotone (false then true). Returns hi when pred(lo) already holds
// only after checking; callers verify pred(hi) first.
double bisect_first_true(double lo, double hi, const std::function<bool(double)>& pred) {
  if (pred(lo)) return lo;
  for (int it = 0; it < 200 && hi - lo > kPositionTol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

double radial_product_bound(const std::vector<DiskPoint>& pts, const std::vector<unsigned>& mult,
                            double r) {
  double p = 1.0;
  for (std::size_t k = 0; k < pts.size(); ++k)
    p *= std::pow(radial_factor_bound(pts[k].abs(), r), static_cast<double>(mult[k]));
  return p;
}

double point_product(const std::vector<cplx>& pts, const std::vector<unsigned>& mult,
                     std::size_t l) {
  double logp = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k == l) continue;
    double rho = pseudo_distance_raw(pts[l], pts[k]);
    if (rho == 0.0) return 0.0;
    logp += mult[k] * std::log(rho);
  }
  return std::exp(logp);
}

double budget(std::size_t n) {
  double b = 0.0;
  for (std::size_t j = 1; j <= n; ++j) b += std::ldexp(1.0, -static_cast<int>(j + 1));
  return b;
}

}  // namespace

double uss_schedule(double delta, double nu, std::size_t k) {
  if (k <= 1) return 1.0;
  if (k == 2) return delta * nu;  // base pair
  return delta * std::pow(nu, std::ldexp(1.0, 1 - static_cast<int>(k)));
}

ConstructionTrace build_uss(const std::vector<unsigned>& multiplicities, double delta, double nu,
                            std::size_t n_max, const ScanOptions& scan) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("build_uss: delta must lie in (0, 1)");
  if (!(nu > 1.0 && nu * delta < 1.0)) throw DomainError("build_uss: nu must lie in (1, 1/delta)");
  if (n_max == 0) throw DomainError("build_uss: n_max must be positive");
  if (multiplicities.size() < n_max)
    throw InputError("build_uss: need " + std::to_string(n_max) + " multiplicities");
  for (unsigned m : multiplicities)
    if (m == 0) throw InputError("build_uss: multiplicities must be positive");

  ConstructionTrace tr;
  tr.target_delta = delta;
  tr.nu = nu;
  tr.points.push_back(DiskPoint(0.0));
  tr.multiplicities.push_back(multiplicities[0]);
  tr.targets.push_back(1.0);
  tr.achieved.push_back(1.0);
  tr.scan_values.push_back(1.0);
  tr.scan_lower.push_back(1.0);

  for (std::size_t n = 1; n < n_max; ++n) {
    const double target = uss_schedule(delta, nu, n + 1);
    const double a_n = tr.achieved.back();
    const unsigned m = multiplicities[n];
    const double last = tr.points.back().abs();

    auto outer_ok = [&](double r) {
      return radial_product_bound(tr.points, tr.multiplicities, r) >= target;
    };
    if (!outer_ok(kOuterLimit))
      throw ConstructionError(n + 1, "no radius below the boundary guard makes the partial "
                                     "product exceed the target");
    double r = bisect_first_true(last, kOuterLimit, outer_ok);

    const double ratio = target / a_n;
    auto inner_ok = [&](double lambda) {
      return std::pow(radial_factor_bound(r, lambda), static_cast<double>(m)) >= ratio;
    };
    if (!inner_ok(kOuterLimit))
      throw ConstructionError(n + 1, "new point would cross the boundary guard");
    double lambda = bisect_first_true(r, kOuterLimit, inner_ok);
    if (!(lambda > last)) throw ConstructionError(n + 1, "points failed to increase");

    tr.radii.push_back(r);
    tr.points.push_back(DiskPoint(lambda));
    tr.multiplicities.push_back(m);
    tr.targets.push_back(target);

    std::vector<FiniteBlaschke> factors;
    for (std::size_t k = 0; k < tr.points.size(); ++k)
      factors.push_back(FiniteBlaschke::single(tr.points[k], tr.multiplicities[k]));
    SeparationReport rep = uniform_strong_separation(std::span<const FiniteBlaschke>(factors), scan);
    tr.scan_values.push_back(rep.value);
    tr.scan_lower.push_back(rep.lower_bound);
    // Both the inductive bound and the scan bracket are certified lower bounds.
    double certified = std::max(target, rep.lower_bound);
    tr.achieved.push_back(std::min(a_n, certified));
    if (rep.value < target - scan.tol) {
      std::ostringstream os;
      os << "scan value " << rep.value << " below target " << target;
      throw ConstructionError(n + 1, os.str());
    }
  }
  return tr;
}

double counterexample_angle(std::size_t n) {
  return static_cast<double>(n - 1) * std::numbers::pi * (3.0 - std::sqrt(5.0));
}

CounterexampleTrace build_counterexample(const std::vector<unsigned>& multiplicities, double nu,
                                         std::size_t n_max) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("build_counterexample: nu must lie in (0, 1)");
  if (n_max == 0) throw DomainError("build_counterexample: n_max must be positive");
  if (multiplicities.size() < 2 * n_max)
    throw InputError("build_counterexample: need " + std::to_string(2 * n_max) +
                     " multiplicities");
  for (std::size_t k = 0; k < multiplicities.size(); ++k) {
    if (multiplicities[k] == 0) throw InputError("build_counterexample: multiplicities must be positive");
    if (k > 0 && multiplicities[k] <= multiplicities[k - 1])
      throw InputError("build_counterexample: multiplicities must be strictly increasing");
  }

  CounterexampleTrace tr;
  tr.nu = nu;
  std::vector<cplx> pts;
  std::vector<unsigned> mult;

  for (std::size_t n = 1; n <= n_max; ++n) {
    const unsigned m_odd = multiplicities[2 * n - 2];
    const unsigned m_even = multiplicities[2 * n - 1];
    const cplx dir = std::polar(1.0, counterexample_angle(n));
    const double rho_pair = std::pow(nu, 1.0 / m_even);
    const double floor = nu * std::exp2(-budget(n));

    // Even radius with rho(a, b)^{m_even} = nu on the ray, solved on the
    // stored double values so the identity holds for the points as kept.
    auto even_radius = [&](double a) {
      double closed = (a + rho_pair) / (1.0 + a * rho_pair);
      double lo = a, hi = std::min(closed + 1e-6, kOuterLimit);
      auto rho_at = [&](double b) { return std::pow(pseudo_distance_raw(a * dir, b * dir), m_even); };
      if (rho_at(hi) < nu) return hi;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (rho_at(mid) < nu ? lo : hi) = mid;
      }
      return std::abs(rho_at(lo) - nu) <= std::abs(rho_at(hi) - nu) ? lo : hi;
    };

    auto candidate_ok = [&](double a) {
      double b = even_radius(a);
      if (!(b < kOuterLimit)) return false;
      std::vector<cplx> p = pts;
      std::vector<unsigned> mm = mult;
      p.push_back(a * dir);
      p.push_back(b * dir);
      mm.push_back(m_odd);
      mm.push_back(m_even);
      for (std::size_t l = 0; l < p.size(); ++l)
        if (point_product(p, mm, l) < floor) return false;
      return true;
    };

    // March outward in hyperbolic radius, then bisect the last bracket.
    double a = 0.0;
    if (!candidate_ok(0.0)) {
      double s_prev = 0.0, s = 0.25;
      const double s_limit = std::atanh(kOuterLimit);
      while (s < s_limit && !candidate_ok(std::tanh(s))) {
        s_prev = s;
        s += 0.25;
      }
      if (!(s < s_limit))
        throw ConstructionError(2 * n - 1, "odd point cannot meet the separation budget inside "
                                           "the boundary guard");
      a = bisect_first_true(std::tanh(s_prev), std::tanh(s), candidate_ok);
    }
    const double b = even_radius(a);
    pts.push_back(a * dir);
    pts.push_back(b * dir);
    mult.push_back(m_odd);
    mult.push_back(m_even);
    tr.points.emplace_back(a * dir);
    tr.points.emplace_back(b * dir);

    const double t = std::exp(-1.0 / std::sqrt(static_cast<double>(m_odd)));
    RhoSplit split = rho_split(a, b, t);
    const double rho = pseudo_distance_raw(a * dir, b * dir);
    tr.t_values.push_back(t);
    tr.midpoints.emplace_back(split.gamma * dir);
    tr.s_values.push_back(split.s);
    tr.s_closed_form.push_back(rho_split_closed_form(rho, t));
    tr.pair_rho.push_back(rho);
    tr.budgets.push_back(budget(n));
  }
  tr.multiplicities = mult;
  return tr;
}

CounterexampleDiagnostics counterexample_diagnostics(const CounterexampleTrace& trace) {
  CounterexampleDiagnostics d;
  const std::size_t pairs = trace.t_values.size();
  if (trace.points.size() != 2 * pairs || trace.multiplicities.size() != 2 * pairs)
    throw InputError("counterexample_diagnostics: inconsistent trace");

  std::vector<cplx> pts;
  for (const auto& p : trace.points) pts.push_back(p.value());

  for (std::size_t n = 1; n <= pairs; ++n) {
    CounterexampleRow row{};
    row.n = n;
    const unsigned m_odd = trace.multiplicities[2 * n - 2];
    const unsigned m_even = trace.multiplicities[2 * n - 1];
    row.t = trace.t_values[n - 1];
    row.t_pow = std::pow(row.t, m_odd);
    row.s = trace.s_values[n - 1];
    row.s_pow = std::pow(row.s, m_even);
    const double rho = trace.pair_rho[n - 1];
    row.ratio = m_even * (1.0 - rho * rho) / (1.0 - row.t);

    const cplx xi = trace.midpoints[n - 1].value();
    double best = 0.0;
    for (std::size_t l = 0; l < pts.size(); ++l) {
      double logp = 0.0;
      bool zero = false;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k == l) continue;
        double r = pseudo_distance_raw(xi, pts[k]);
        if (r == 0.0) {
          zero = true;
          break;
        }
        logp += trace.multiplicities[k] * std::log(r);
      }
      if (!zero) best = std::max(best, std::exp(logp));
    }
    row.leave_one_out_at_xi = best;

    std::vector<WeightedPoint> prefix;
    for (std::size_t k = 0; k < 2 * n; ++k)
      prefix.push_back({trace.points[k], trace.multiplicities[k]});
    row.strong_separation = strong_separation(prefix).value;

    if (!d.rows.empty()) {
      const auto& prev = d.rows.back();
      if (!(row.t_pow < prev.t_pow)) d.t_pow_decreasing = false;
      if (!(row.s_pow < prev.s_pow)) d.s_pow_decreasing = false;
      if (!(row.ratio > prev.ratio)) d.ratio_increasing = false;
    }
    if (row.strong_separation < 0.5 * trace.nu) d.separation_floor = false;
    d.rows.push_back(row);
  }
  return d;
}

std::vector<unsigned> multiplicity_schedule(const std::string& spec, std::size_t count) {
  std::vector<unsigned> out;
  if (spec == "linear" || spec == "quadratic" || spec == "constant") {
    for (std::size_t n = 1; n <= count; ++n) {
      unsigned v = spec == "linear" ? n : spec == "quadratic" ? n * n : 1;
      out.push_back(v);
    }
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      long v = std::stol(item, &pos);
      if (pos != item.size() || v <= 0) throw InputError("");
      out.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw InputError("multiplicity schedule: bad entry '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("multiplicity schedule: empty");
  if (out.size() < count) {
    // Repeat the last entry to fill the requested length.
    out.resize(count, out.back());
  }
  return out;
}

}  // namespace carleson
