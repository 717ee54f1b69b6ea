#include "carleson/serialization.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <locale>
#include <numbers>
#include <sstream>

#include "carleson/error.hpp"

namespace carleson::io {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw SchemaError(where, what);
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

double read_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

unsigned read_order(const json& j, const std::string& where) {
  auto it = j.find("order");
  if (it == j.end()) return 1;
  if (!it->is_number_integer() || it->get<long long>() < 1)
    schema_error(where + "/order", "expected a positive integer");
  return static_cast<unsigned>(it->get<long long>());
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json complex_matrix(const DenseMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(write_complex(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

json point_list(const std::vector<DiskPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(write_complex(p.value()));
  return a;
}

std::vector<DiskPoint> read_points(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  std::vector<DiskPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    try {
      out.emplace_back(read_complex(j[i], w));
    } catch (const DomainError&) {
      schema_error(w, "point violates the boundary guard |z| < 1 - 1e-12");
    }
  }
  return out;
}

template <class T>
std::vector<T> read_list(const json& j, const char* key, const std::string& where) {
  const json& a = member(j, key, where);
  if (!a.is_array()) schema_error(where + "/" + key, "expected an array");
  try {
    return a.get<std::vector<T>>();
  } catch (const json::exception&) {
    schema_error(where + "/" + key, "wrong element type");
  }
}

json atoms_json(const std::vector<Atom>& atoms) {
  json a = json::array();
  for (const auto& at : atoms) {
    json e = write_complex(at.node.value());
    e["order"] = at.order;
    a.push_back(e);
  }
  return a;
}

json coefficients_json(const Eigen::VectorXcd& c) {
  json a = json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) a.push_back(write_complex(c(i)));
  return a;
}

}  // namespace

json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + location(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": malformed JSON");
  }
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal walker over already validated JSON text.
class Locator {
 public:
  Locator(const std::string& text, std::vector<std::string> target)
      : text_(text), target_(std::move(target)) {}

  std::size_t find() {
    value(0);
    return best_line_;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        out += text_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  // depth = number of target components matched so far on this path.
  void value(std::size_t depth) {
    skip_ws();
    if (depth == matched_ && depth <= target_.size()) best_line_ = line_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      if (text_[pos_] == '}') {
        ++pos_;
        return;
      }
      while (true) {
        skip_ws();
        std::string key = string_token();
        skip_ws();
        ++pos_;  // colon
        child(depth, key);
        skip_ws();
        if (text_[pos_++] == '}') return;
      }
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      if (text_[pos_] == ']') {
        ++pos_;
        return;
      }
      for (std::size_t i = 0;; ++i) {
        child(depth, std::to_string(i));
        skip_ws();
        if (text_[pos_++] == ']') return;
      }
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  void child(std::size_t depth, const std::string& key) {
    const bool on_path = depth == matched_ && depth < target_.size() && target_[depth] == key;
    if (on_path) ++matched_;
    value(on_path ? depth + 1 : target_.size() + 1);
  }

  const std::string& text_;
  std::vector<std::string> target_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t matched_ = 0;
  std::size_t best_line_ = 1;
};

template <class F>
auto with_lines(const std::string& path, F&& reader) {
  const std::string text = slurp(path);
  json j = parse_text(text, path);
  try {
    return reader(j);
  } catch (const SchemaError& e) {
    throw InputError(path + ":line " + std::to_string(line_of(text, e.pointer())) + ": " + e.what());
  }
}

}  // namespace

std::size_t line_of(const std::string& text, const std::string& pointer) {
  std::vector<std::string> parts;
  std::size_t start = 1;
  while (start <= pointer.size() && !pointer.empty()) {
    std::size_t end = pointer.find('/', start);
    if (end == std::string::npos) end = pointer.size();
    std::string part = pointer.substr(start, end - start);
    for (std::size_t i; (i = part.find("~1")) != std::string::npos;) part.replace(i, 2, "/");
    for (std::size_t i; (i = part.find("~0")) != std::string::npos;) part.replace(i, 2, "~");
    parts.push_back(part);
    start = end + 1;
  }
  return Locator(text, std::move(parts)).find();
}

json read_file(const std::string& path) { return parse_text(slurp(path), path); }

MatrixSequence load_matrix_sequence(const std::string& path) {
  return with_lines(path, [](const json& j) { return read_matrix_sequence(j); });
}

InterpolationProblem load_problem(const std::string& path) {
  return with_lines(path, [](const json& j) { return read_problem(j); });
}

cplx read_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object()) schema_error(where, "expected {\"re\": x, \"im\": y}");
  double re = read_number(member(j, "re", where), where + "/re");
  double im = 0.0;
  if (auto it = j.find("im"); it != j.end()) im = read_number(*it, where + "/im");
  return {re, im};
}

json write_complex(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

MatrixSequence read_matrix_sequence(const json& root) {
  const json* list = &root;
  std::string base;
  if (root.is_object()) {
    list = &member(root, "matrices", "");
    base = "/matrices";
  }
  if (!list->is_array()) schema_error(base.empty() ? "/" : base, "expected an array of matrices");
  if (list->empty()) schema_error(base.empty() ? "/" : base, "empty matrix sequence");

  MatrixSequence seq;
  for (std::size_t n = 0; n < list->size(); ++n) {
    const json& m = (*list)[n];
    const std::string where = base + "/" + std::to_string(n);
    if (!m.is_object()) schema_error(where, "expected an object");
    std::string label = "A" + std::to_string(n + 1);
    if (auto it = m.find("label"); it != m.end()) {
      if (!it->is_string()) schema_error(where + "/label", "expected a string");
      label = it->get<std::string>();
    }
    const bool has_eig = m.contains("eigenvalues");
    const bool has_dense = m.contains("dense");
    if (has_eig == has_dense)
      schema_error(where, "exactly one of \"eigenvalues\" or \"dense\" is required");

    if (has_eig) {
      const json& eig = m["eigenvalues"];
      if (!eig.is_array() || eig.empty()) schema_error(where + "/eigenvalues", "expected a nonempty array");
      std::vector<SpectralEntry> entries;
      for (std::size_t k = 0; k < eig.size(); ++k) {
        const std::string w = where + "/eigenvalues/" + std::to_string(k);
        cplx z = read_complex(eig[k], w);
        unsigned order = read_order(eig[k], w);
        try {
          entries.push_back({DiskPoint(z), order});
        } catch (const DomainError&) {
          schema_error(w, "eigenvalue of matrix '" + label + "' violates the boundary guard |z| < 1 - 1e-12");
        }
      }
      try {
        seq.matrices.emplace_back(std::move(entries), label);
      } catch (const Error& e) {
        schema_error(where, "matrix '" + label + "': " + e.what());
      }
      continue;
    }

    const json& rows = m["dense"];
    if (!rows.is_array() || rows.empty()) schema_error(where + "/dense", "expected a nonempty array of rows");
    const auto dim = static_cast<Eigen::Index>(rows.size());
    DenseMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const json& row = rows[i];
      const std::string w = where + "/dense/" + std::to_string(i);
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
        schema_error(w, "matrix '" + label + "' is not square");
      for (Eigen::Index k = 0; k < dim; ++k) a(i, k) = read_complex(row[k], w + "/" + std::to_string(k));
    }
    try {
      IngestResult r = ingest_dense(a, 1e-8, label);
      if (!r.reliable) seq.reliable = false;
      for (auto& d : r.diagnostics) seq.diagnostics.push_back(label + ": " + d);
      seq.matrices.push_back(std::move(r.data));
    } catch (const DomainError& e) {
      schema_error(where, "matrix '" + label + "' violates the boundary guard: " + e.what());
    }
  }
  return seq;
}

json write_matrix_sequence(const std::vector<SpectralData>& seq) {
  json out = json::array();
  for (const auto& a : seq) {
    json eig = json::array();
    for (const auto& e : a.entries()) {
      json z = write_complex(e.eigenvalue.value());
      z["order"] = e.order;
      eig.push_back(z);
    }
    out.push_back({{"label", a.label()}, {"eigenvalues", eig}});
  }
  return out;
}

InterpolationProblem read_problem(const json& root) {
  InterpolationProblem p;
  p.sequence = read_matrix_sequence(root);
  const json& targets = member(root, "targets", "");
  if (!targets.is_array()) schema_error("/targets", "expected an array");
  if (targets.size() != p.sequence.matrices.size())
    schema_error("/targets", "need one target per matrix (" +
                                 std::to_string(p.sequence.matrices.size()) + ")");
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const json& t = targets[n];
    const std::string where = "/targets/" + std::to_string(n);
    const json& kind = member(t, "kind", where);
    if (!kind.is_string()) schema_error(where + "/kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "polynomial") {
      const json& c = member(t, "coeffs", where);
      if (!c.is_array() || c.empty()) schema_error(where + "/coeffs", "expected a nonempty array");
      std::vector<cplx> coeffs;
      for (std::size_t i = 0; i < c.size(); ++i)
        coeffs.push_back(read_complex(c[i], where + "/coeffs/" + std::to_string(i)));
      p.targets.push_back(functions::polynomial(std::move(coeffs)));
    } else if (k == "blaschke") {
      const json& zs = member(t, "zeros", where);
      if (!zs.is_array()) schema_error(where + "/zeros", "expected an array");
      std::vector<BlaschkeZero> zeros;
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const std::string w = where + "/zeros/" + std::to_string(i);
        cplx z = read_complex(zs[i], w);
        unsigned order = read_order(zs[i], w);
        try {
          zeros.push_back({DiskPoint(z), order});
        } catch (const DomainError&) {
          schema_error(w, "zero violates the boundary guard |z| < 1 - 1e-12");
        }
      }
      cplx scale{1.0, 0.0};
      if (auto it = t.find("scale"); it != t.end()) scale = read_complex(*it, where + "/scale");
      p.targets.push_back(functions::scaled(functions::blaschke(FiniteBlaschke(std::move(zeros))), scale));
    } else if (k == "constant") {
      p.targets.push_back(functions::constant(read_complex(member(t, "value", where), where + "/value")));
    } else {
      schema_error(where + "/kind", "unknown target kind '" + k + "'");
    }
  }
  return p;
}

json to_json(const SeparationReport& r) {
  return json{{"value", r.value},
              {"lower_bound", r.lower_bound},
              {"argmin_point", write_complex(r.argmin_point)},
              {"certified_radius", r.certified_radius},
              {"grid_evaluations", r.grid_evaluations},
              {"converged", r.converged},
              {"method", r.method},
              {"diagnostics", r.diagnostics}};
}

SeparationReport separation_report_from_json(const json& j) {
  SeparationReport r;
  r.value = read_number(member(j, "value", ""), "/value");
  r.lower_bound = read_number(member(j, "lower_bound", ""), "/lower_bound");
  r.argmin_point = read_complex(member(j, "argmin_point", ""), "/argmin_point");
  r.certified_radius = read_number(member(j, "certified_radius", ""), "/certified_radius");
  r.grid_evaluations = member(j, "grid_evaluations", "").get<std::size_t>();
  r.converged = member(j, "converged", "").get<bool>();
  r.method = member(j, "method", "").get<std::string>();
  r.diagnostics = read_list<std::string>(j, "diagnostics", "");
  return r;
}

json to_json(const ConstructionTrace& t) {
  return json{{"points", point_list(t.points)},
              {"multiplicities", t.multiplicities},
              {"radii", t.radii},
              {"targets", t.targets},
              {"achieved", t.achieved},
              {"scan_values", t.scan_values},
              {"scan_lower", t.scan_lower},
              {"target_delta", t.target_delta},
              {"nu", t.nu}};
}

ConstructionTrace construction_trace_from_json(const json& j) {
  ConstructionTrace t;
  t.points = read_points(member(j, "points", ""), "/points");
  t.multiplicities = read_list<unsigned>(j, "multiplicities", "");
  t.radii = read_list<double>(j, "radii", "");
  t.targets = read_list<double>(j, "targets", "");
  t.achieved = read_list<double>(j, "achieved", "");
  t.scan_values = read_list<double>(j, "scan_values", "");
  t.scan_lower = read_list<double>(j, "scan_lower", "");
  t.target_delta = read_number(member(j, "target_delta", ""), "/target_delta");
  t.nu = read_number(member(j, "nu", ""), "/nu");
  return t;
}

json to_json(const CounterexampleTrace& t) {
  return json{{"points", point_list(t.points)},
              {"midpoints", point_list(t.midpoints)},
              {"t_values", t.t_values},
              {"s_values", t.s_values},
              {"s_closed_form", t.s_closed_form},
              {"pair_rho", t.pair_rho},
              {"budgets", t.budgets},
              {"multiplicities", t.multiplicities},
              {"nu", t.nu}};
}

CounterexampleTrace counterexample_trace_from_json(const json& j) {
  CounterexampleTrace t;
  t.points = read_points(member(j, "points", ""), "/points");
  t.midpoints = read_points(member(j, "midpoints", ""), "/midpoints");
  t.t_values = read_list<double>(j, "t_values", "");
  t.s_values = read_list<double>(j, "s_values", "");
  t.s_closed_form = read_list<double>(j, "s_closed_form", "");
  t.pair_rho = read_list<double>(j, "pair_rho", "");
  t.budgets = read_list<double>(j, "budgets", "");
  t.multiplicities = read_list<unsigned>(j, "multiplicities", "");
  t.nu = read_number(member(j, "nu", ""), "/nu");
  return t;
}

json to_json(const CounterexampleDiagnostics& d) {
  json rows = json::array();
  for (const auto& r : d.rows)
    rows.push_back({{"n", r.n},
                    {"t", r.t},
                    {"t_pow", r.t_pow},
                    {"s", r.s},
                    {"s_pow", r.s_pow},
                    {"ratio", r.ratio},
                    {"leave_one_out_at_xi", r.leave_one_out_at_xi},
                    {"strong_separation", r.strong_separation}});
  return json{{"rows", rows},
              {"t_pow_decreasing", d.t_pow_decreasing},
              {"s_pow_decreasing", d.s_pow_decreasing},
              {"ratio_increasing", d.ratio_increasing},
              {"separation_floor", d.separation_floor}};
}

json to_json(const KernelBasis& b) {
  auto [lo, hi] = b.gram_spectrum();
  return json{{"atoms", atoms_json(b.atoms())},
              {"gram", complex_matrix(b.gram())},
              {"gram_min_eigenvalue", lo},
              {"gram_max_eigenvalue", hi},
              {"diagnostics", b.diagnostics()}};
}

json to_json(const RationalInterpolant& phi) {
  return json{{"atoms", atoms_json(phi.denominator.basis->atoms())},
              {"numerator", coefficients_json(phi.numerator.coefficients)},
              {"denominator", coefficients_json(phi.denominator.coefficients)},
              {"norm", phi.norm},
              {"boundary_sup", phi.boundary_sup()},
              {"degenerate", phi.degenerate},
              {"jittered", phi.jittered},
              {"diagnostics", phi.diagnostics}};
}

json to_json(const FrameBounds& f) { return json{{"lower", f.lower}, {"upper", f.upper}}; }

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

std::string counterexample_csv(const CounterexampleDiagnostics& d) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : d.rows)
    rows.push_back({static_cast<double>(r.n), r.t, r.t_pow, r.s, r.s_pow, r.leave_one_out_at_xi,
                    r.ratio, r.strong_separation});
  return csv({"n", "t", "t^m", "s", "s^m", "leaveoneout_at_xi", "ratio", "strong_separation"}, rows);
}

std::string landscape_csv(const std::vector<LandscapeSample>& samples) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back({s.re, s.im, s.value});
  return csv({"re", "im", "value"}, rows);
}

std::string boundary_trace_csv(const RationalInterpolant& phi, std::size_t n) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < n; ++k) {
    double theta = 2.0 * std::numbers::pi * k / n;
    cplx v = phi.evaluate(std::polar(1.0, theta));
    rows.push_back({theta, v.real(), v.imag(), std::abs(v)});
  }
  return csv({"theta", "re", "im", "modulus"}, rows);
}

}  // namespace carleson::io
