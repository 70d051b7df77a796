#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "viscodual/eigenstress.hpp"
#include "viscodual/kernel.hpp"
#include "viscodual/response.hpp"

namespace viscodual {

struct Metadata {
  std::optional<std::string> name;
  std::optional<std::string> units;
  friend bool operator==(const Metadata&, const Metadata&) = default;
};

struct MaterialDocument {
  AnyKernel kernel;
  Metadata metadata;
};

struct ParsedMaterial {
  MaterialDocument document;
  /// Non-fatal findings, e.g. modes merged during canonicalization.
  std::vector<std::string> warnings;
};

/// Parses and validates a material file.  Throws ValidationError on schema
/// or invariant violations, with the offending field in the message.
ParsedMaterial parse_material_document(std::string_view text, bool strict = false);
AnyKernel parse_material(std::string_view text);

/// Schema-checked but otherwise unvalidated coefficients, so that a kernel
/// violating its invariants can still be inspected.
KernelData parse_material_data(std::string_view text);

/// Canonical text: fixed key order, modes sorted by rate, 17 significant
/// digits, LF line endings, trailing newline.
std::string serialize_material(const MaterialDocument& doc);
std::string serialize_material(const AnyKernel& kernel);

enum class Spacing { linear, log };

/// Sample times from t_start to t_end inclusive.  Throws ValidationError on
/// an invalid range.
std::vector<double> sample_times(double t_start, double t_end, std::size_t count, Spacing spacing);

/// "t,value" or "t,v11,v12,...,v66" (upper triangle, row by row).  A
/// relaxation kernel at t = 0 is reported by its right limit f(0+).
std::string sample_to_csv(const AnyKernel& kernel, double t_start, double t_end, std::size_t count,
                          Spacing spacing);

/// {"spectrum": [{"rate", "mass"}], "directions": [{"vector": [6], "lambda": [...]}],
///  "equilibrium": 6x6 (optional)}
struct EigenstressDocument {
  EigenstressBasis basis;
  Matrix6 equilibrium;
  Metadata metadata;
};
EigenstressDocument parse_eigenstress(std::string_view text);

/// {"breakpoints": [{"time", "value"}], "sample_times": [...] (optional)}.
/// Values are numbers (scalar) or 6-vectors in Voigt order.
struct HistoryDocument {
  std::variant<StrainHistory, TensorHistory> history;
  std::vector<double> sample_times;
};
HistoryDocument parse_history(std::string_view text);

/// "t,value" or "t,s1,...,s6".
std::string series_to_csv(const ResponseSeries<double>& s);
std::string series_to_csv(const ResponseSeries<Vector6>& s);

/// %.17g with negative zero printed as 0.
std::string format_number(double x);

}  // namespace viscodual
