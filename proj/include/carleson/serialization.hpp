#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/constructor.hpp"
#include "carleson/error.hpp"
#include "carleson/interpolator.hpp"
#include "carleson/matrix_calculus.hpp"
#include "carleson/model_space.hpp"
#include "carleson/separation.hpp"

namespace carleson::io {

using nlohmann::json;

/// Schema violation at a JSON pointer such as "/matrices/2/eigenvalues/0".
class SchemaError : public InputError {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : InputError((pointer.empty() ? "/" : pointer) + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// 1-based line of the value addressed by a JSON pointer in valid JSON text,
/// or of the closest enclosing value that exists.
std::size_t line_of(const std::string& text, const std::string& pointer);

/// Parses text, turning syntax errors into InputError with line:column.
json parse_text(const std::string& text, const std::string& source = "input");
json read_file(const std::string& path);

/// Complex numbers are {"re": x, "im": y}; bare numbers are accepted on input.
cplx read_complex(const json& j, const std::string& where);
json write_complex(cplx z);

struct MatrixSequence {
  std::vector<SpectralData> matrices;
  std::vector<std::string> diagnostics;  // from dense ingestion
  bool reliable = true;
};

/// A sequence is a list of {"label", "eigenvalues": [{re, im, order}]} or
/// {"label", "dense": [[{re, im}, ...], ...]} objects, either bare or under
/// "matrices". Boundary-guard violations name the offending label.
MatrixSequence read_matrix_sequence(const json& j);
json write_matrix_sequence(const std::vector<SpectralData>& seq);

/// {"matrices": [...], "targets": [{"kind": "polynomial", "coeffs": [...]} |
///  {"kind": "blaschke", "zeros": [{re, im, order}], "scale": {re, im}}]}.
struct InterpolationProblem {
  MatrixSequence sequence;
  std::vector<JetProvider> targets;
};
InterpolationProblem read_problem(const json& j);

/// File readers; schema errors are reported as "path:line N: pointer: what".
MatrixSequence load_matrix_sequence(const std::string& path);
InterpolationProblem load_problem(const std::string& path);

json to_json(const SeparationReport& r);
SeparationReport separation_report_from_json(const json& j);

json to_json(const ConstructionTrace& t);
ConstructionTrace construction_trace_from_json(const json& j);

json to_json(const CounterexampleTrace& t);
CounterexampleTrace counterexample_trace_from_json(const json& j);

json to_json(const CounterexampleDiagnostics& d);
json to_json(const KernelBasis& b);
json to_json(const RationalInterpolant& phi);
json to_json(const FrameBounds& f);

/// CSV with a header row, '.' decimals and round-trip precision.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

std::string counterexample_csv(const CounterexampleDiagnostics& d);
std::string landscape_csv(const std::vector<LandscapeSample>& samples);
std::string boundary_trace_csv(const RationalInterpolant& phi, std::size_t n = 512);

}  // namespace carleson::io
