#include "carleson/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>

#include "carleson/constructor.hpp"
#include "carleson/error.hpp"
#include "carleson/interpolator.hpp"
#include "carleson/model_space.hpp"
#include "carleson/separation.hpp"
#include "carleson/serialization.hpp"

namespace carleson::cli {

using io::json;

namespace {

// Jets and matrix images must be reproduced to this accuracy.
constexpr double kResidualTolerance = 1e-8;

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions o;
  o.tol = c.tol;
  o.max_depth = c.grid_depth;
  return o;
}

io::MatrixSequence load_sequence(const RunConfig& c) {
  return io::load_matrix_sequence(c.input_path);
}

std::vector<FiniteBlaschke> factors_of(const std::vector<SpectralData>& seq) {
  std::vector<FiniteBlaschke> f;
  f.reserve(seq.size());
  for (const auto& a : seq) f.push_back(blaschke_of_matrix(a));
  return f;
}

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

json sequence_block(const io::MatrixSequence& s) {
  return json{{"matrices", io::write_matrix_sequence(s.matrices)},
              {"ingest_reliable", s.reliable},
              {"ingest_diagnostics", s.diagnostics}};
}

Outcome separation(const RunConfig& c) {
  io::MatrixSequence seq = load_sequence(c);
  auto factors = factors_of(seq.matrices);
  SeparationReport rep = uniform_strong_separation(std::span<const FiniteBlaschke>(factors), scan_options(c));

  Outcome o;
  o.report = sequence_block(seq);
  o.report["command"] = "separation";
  o.report["uniform_strong_separation"] = io::to_json(rep);

  // Sequences of single-eigenvalue matrices are weighted point sets.
  bool pointwise = std::all_of(seq.matrices.begin(), seq.matrices.end(),
                               [](const SpectralData& a) { return a.entries().size() == 1; });
  if (pointwise) {
    std::vector<WeightedPoint> pts;
    std::vector<DiskPoint> plain;
    for (const auto& a : seq.matrices) {
      pts.push_back({a.entries()[0].eigenvalue, a.entries()[0].order});
      plain.push_back(a.entries()[0].eigenvalue);
    }
    PointSeparation s = strong_separation(pts);
    PointSeparation nk = nikolski_pairwise(pts);
    json pj{{"strong_separation", s.value},
            {"strong_argmin", s.argmin},
            {"nikolski_pairwise", nk.value},
            {"nikolski_argmin", nk.argmin}};
    if (plain.size() >= 2) pj["weak_separation"] = weak_separation(plain);
    if (s.diagnostic) pj["diagnostic"] = *s.diagnostic;
    o.report["points"] = pj;
  }

  o.flagged = !rep.converged || !rep.diagnostics.empty() || !seq.reliable;
  if (!c.csv_path.empty()) {
    double rmax = 0.0;
    for (const auto& a : seq.matrices)
      for (const auto& e : a.entries()) rmax = std::max(rmax, e.eigenvalue.abs());
    o.csv = io::landscape_csv(landscape(factors, 64, 128, std::max(0.95, 0.5 * (1.0 + rmax))));
  }
  return o;
}

Outcome construct(const RunConfig& c) {
  auto mults = multiplicity_schedule(c.m_schedule, c.n);
  ConstructionTrace t = build_uss(mults, c.delta, c.nu, c.n, scan_options(c));

  std::vector<SpectralData> mats;
  for (std::size_t k = 0; k < t.points.size(); ++k)
    mats.emplace_back(std::vector<SpectralEntry>{{t.points[k], t.multiplicities[k]}},
                      "L" + std::to_string(k + 1));

  Outcome o;
  o.report = json{{"command", "construct"},
                  {"trace", io::to_json(t)},
                  {"matrices", io::write_matrix_sequence(mats)}};
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < t.points.size(); ++k)
    rows.push_back({static_cast<double>(k + 1), t.points[k].value().real(),
                    static_cast<double>(t.multiplicities[k]), t.targets[k], t.achieved[k],
                    t.scan_values[k], t.scan_lower[k]});
  o.csv = io::csv({"k", "point", "multiplicity", "target", "achieved", "scan_value", "scan_lower"}, rows);
  return o;
}

Outcome counterexample(const RunConfig& c) {
  auto mults = multiplicity_schedule(c.m_schedule, 2 * c.n);
  CounterexampleTrace t = build_counterexample(mults, c.nu, c.n);
  CounterexampleDiagnostics d = counterexample_diagnostics(t);

  Outcome o;
  o.report = json{{"command", "counterexample"},
                  {"trace", io::to_json(t)},
                  {"diagnostics", io::to_json(d)},
                  {"ok", d.ok()}};
  o.csv = io::counterexample_csv(d);
  o.flagged = !d.ok();
  return o;
}

Outcome modelspace(const RunConfig& c) {
  io::MatrixSequence seq = load_sequence(c);
  auto factors = factors_of(seq.matrices);

  Outcome o;
  o.report = sequence_block(seq);
  o.report["command"] = "modelspace";
  o.flagged = !seq.reliable;

  std::vector<std::shared_ptr<const KernelBasis>> bases;
  json spaces = json::array();
  for (std::size_t k = 0; k < factors.size(); ++k) {
    auto b = model_basis(factors[k]);
    if (!b->diagnostics().empty()) o.flagged = true;
    json e = io::to_json(*b);
    e["label"] = seq.matrices[k].label();
    e["dimension"] = b->dimension();
    spaces.push_back(e);
    bases.push_back(std::move(b));
  }
  o.report["spaces"] = spaces;

  json sines = json::array();
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i + 1; j < bases.size(); ++j) {
      json e{{"i", seq.matrices[i].label()}, {"j", seq.matrices[j].label()}};
      try {
        e["sine"] = sine(*bases[i], *bases[j]);
      } catch (const ConditioningError& err) {
        e["sine"] = nullptr;
        e["diagnostic"] = err.what();
        o.flagged = true;
      }
      sines.push_back(e);
    }
  o.report["pairwise_sines"] = sines;

  try {
    o.report["frame_bounds"] = io::to_json(frame_bounds(bases));
  } catch (const Error& err) {
    o.report["frame_bounds"] = nullptr;
    o.report["frame_diagnostic"] = err.what();
    o.flagged = true;
  }
  return o;
}

Outcome interpolate(const RunConfig& c) {
  io::InterpolationProblem p = io::load_problem(c.input_path);
  HermiteData data = hermite_data_from_matrices(p.sequence.matrices, p.targets);
  RationalInterpolant phi = solve(data, c.seed);

  JetProvider f = phi.provider();
  json residuals = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < p.sequence.matrices.size(); ++k) {
    const auto& a = p.sequence.matrices[k];
    DenseMatrix want = apply_function(p.targets[k], a);
    double r = max_abs(apply_function(f, a) - want) / std::max(1.0, max_abs(want));
    worst = std::max(worst, r);
    residuals.push_back({{"label", a.label()}, {"residual", r}});
  }

  Outcome o;
  o.report = sequence_block(p.sequence);
  o.report["command"] = "interpolate";
  o.report["minimal_norm"] = phi.norm;
  o.report["solution"] = io::to_json(phi);
  o.report["residuals"] = residuals;
  o.report["max_residual"] = worst;
  o.report["boundary_oscillation"] = phi.boundary_oscillation();
  o.flagged = worst > kResidualTolerance || phi.jittered || !p.sequence.reliable;
  if (!c.csv_path.empty()) o.csv = io::boundary_trace_csv(phi);
  return o;
}

Outcome beurling(const RunConfig& c) {
  io::MatrixSequence seq = load_sequence(c);
  BeurlingFunctions bf = beurling_functions(seq.matrices, c.slack, c.trials, c.seed);
  const double m = bf.constant();
  const double sup = bf.grid_sup();

  json errors = json::array();
  double worst = 0.0;
  for (std::size_t j = 0; j < bf.size(); ++j) {
    json row = json::array();
    JetProvider fj = bf.provider(j);
    for (std::size_t k = 0; k < seq.matrices.size(); ++k) {
      const auto& a = seq.matrices[k];
      DenseMatrix v = apply_function(fj, a);
      DenseMatrix id = DenseMatrix::Identity(v.rows(), v.cols());
      double e = max_abs(j == k ? DenseMatrix(v - id) : v);
      worst = std::max(worst, e);
      row.push_back(e);
    }
    errors.push_back(row);
  }
  json norms = json::array();
  for (const auto& g : bf.generators()) norms.push_back(g.norm);

  Outcome o;
  o.report = sequence_block(seq);
  o.report["command"] = "beurling";
  o.report["constant"] = m;
  o.report["slack"] = c.slack;
  o.report["bound"] = m * m + c.slack;
  o.report["grid_sup"] = sup;
  o.report["generator_norms"] = norms;
  o.report["kronecker_errors"] = errors;
  o.report["kronecker_max_error"] = worst;
  o.flagged = sup > m * m + c.slack || worst > kResidualTolerance || !seq.reliable;

  if (!c.csv_path.empty()) {
    std::vector<LandscapeSample> samples;
    constexpr unsigned kRadial = 32, kAngular = 64;
    samples.push_back({0.0, 0.0, bf.sum_modulus(0.0)});
    for (unsigned i = 1; i <= kRadial; ++i)
      for (unsigned k = 0; k < kAngular; ++k) {
        cplx z = std::polar(double(i) / kRadial, 2.0 * std::numbers::pi * k / kAngular);
        samples.push_back({z.real(), z.imag(), bf.sum_modulus(z)});
      }
    o.csv = io::landscape_csv(samples);
  }
  return o;
}

FrameBounds gamma_frame(double gamma) {
  // Vectors x1 = k_0 = 1, x2 = k_0' = z, x3 = k_0 + k_0' + (gamma/2) k_0'' = 1 + z + gamma z^2.
  auto basis = std::make_shared<const KernelBasis>(std::vector<Atom>{{0.0, 0}, {0.0, 1}, {0.0, 2}});
  Eigen::VectorXcd x1(3), x2(3), x3(3);
  x1 << 1.0, 0.0, 0.0;
  x2 << 0.0, 1.0, 0.0;
  x3 << 1.0, 1.0, gamma / 2.0;
  return frame_bounds(std::vector<VectorFamily>{{basis, x1}, {basis, x2}, {basis, x3}});
}

Outcome framebounds(const RunConfig& c) {
  Outcome o;
  if (!c.input_path.empty()) {
    io::MatrixSequence seq = load_sequence(c);
    auto factors = factors_of(seq.matrices);
    std::vector<std::shared_ptr<const KernelBasis>> bases;
    for (const auto& b : factors) bases.push_back(model_basis(b));
    o.report = sequence_block(seq);
    o.report["command"] = "framebounds";
    o.report["frame_bounds"] = io::to_json(frame_bounds(bases));
    SeparationReport rep = uniform_strong_separation(std::span<const FiniteBlaschke>(factors), scan_options(c));
    o.report["uniform_strong_separation"] = io::to_json(rep);
    o.flagged = !seq.reliable || !rep.converged;
    return o;
  }

  json sweep = json::array();
  std::vector<std::vector<double>> rows;
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double g : c.gammas) {
    FrameBounds f = gamma_frame(g);
    decreasing = decreasing && f.lower < prev;
    prev = f.lower;
    sweep.push_back({{"parameter", g}, {"lower", f.lower}, {"upper", f.upper}});
    rows.push_back({g, f.lower, f.upper});
  }
  o.report = json{{"command", "framebounds"}, {"sweep", sweep}, {"lower_decreasing", decreasing}};
  o.csv = io::csv({"parameter", "lower", "upper"}, rows);
  return o;
}

bool needs_input(const std::string& cmd) {
  return cmd == "separation" || cmd == "modelspace" || cmd == "interpolate" || cmd == "beurling";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("failed writing " + path);
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> all{"separation", "construct",   "counterexample", "modelspace",
                                            "interpolate", "beurling", "framebounds"};
  return all;
}

void validate(const RunConfig& c) {
  const auto& all = commands();
  if (std::find(all.begin(), all.end(), c.command) == all.end())
    throw InputError("unknown command '" + c.command + "'");
  if (!(c.tol > 0.0 && c.tol <= 0.1)) throw InputError("--tol must lie in (0, 0.1]");
  if (c.grid_depth < 1) throw InputError("--grid-depth must be positive");
  if (c.n < 1) throw InputError("--n must be positive");
  if (!(c.slack > 0.0)) throw InputError("--slack must be positive");
  if (needs_input(c.command) && c.input_path.empty())
    throw InputError(c.command + " requires --input");
  for (double g : c.gammas)
    if (!(g > 0.0) || !std::isfinite(g)) throw InputError("--gamma values must be positive");
}

Outcome execute(const RunConfig& c) {
  validate(c);
  if (c.command == "separation") return separation(c);
  if (c.command == "construct") return construct(c);
  if (c.command == "counterexample") return counterexample(c);
  if (c.command == "modelspace") return modelspace(c);
  if (c.command == "interpolate") return interpolate(c);
  if (c.command == "beurling") return beurling(c);
  return framebounds(c);
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    o = execute(c);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConstructionError& e) {
    err << "construction failed at " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  try {
    const std::string text = o.report.dump(2) + "\n";
    const bool csv_stdout = c.csv_path == "-";
    if (!c.output_path.empty())
      write_text(c.output_path, text);
    else if (!csv_stdout)
      out << text;
    if (o.csv && !c.csv_path.empty()) {
      if (csv_stdout)
        out << *o.csv;
      else
        write_text(c.csv_path, *o.csv);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  if (o.flagged) {
    err << "warning: " << c.command << " produced flagged results (see report)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

std::string csv_help() {
  return "CSV output (--csv FILE, or --csv - for stdout):\n"
         "  separation      re,im,value            leave-one-out maximum on a polar grid\n"
         "  construct       k,point,multiplicity,target,achieved,scan_value,scan_lower\n"
         "  counterexample  n,t,t^m,s,s^m,leaveoneout_at_xi,ratio,strong_separation\n"
         "  interpolate     theta,re,im,modulus     boundary trace of the interpolant\n"
         "  beurling        re,im,value            sum of |f_j| on a polar grid\n"
         "  framebounds     parameter,lower,upper  gamma sweep (no --input)\n";
}

}  // namespace carleson::cli
