#include "viscodual/material_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "viscodual/errors.hpp"

namespace viscodual {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw ValidationError("field '" + field + "' " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where.empty() ? key : where + "." + key, "is required");
  return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      schema_error(where.empty() ? it.key() : where + "." + it.key(), "is not recognized");
}

double read_number(const json& v, const std::string& field) {
  if (!v.is_number()) schema_error(field, "must be a number");
  return v.get<double>();
}

Dense6 read_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 6) schema_error(field, "must be a 6x6 array");
  Dense6 m;
  for (int i = 0; i < 6; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 6) schema_error(field, "must be a 6x6 array");
    for (int j = 0; j < 6; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) schema_error(field, "must be a 6x6 array of numbers");
      m(i, j) = x.get<double>();
    }
  }
  return m;
}

Vector6 read_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 6) schema_error(field, "must be an array of 6 numbers");
  Vector6 out;
  for (int i = 0; i < 6; ++i) out(i) = read_number(v[static_cast<std::size_t>(i)], field);
  return out;
}

template <class W>
W read_value(const json& v, const std::string& field) {
  if constexpr (std::is_same_v<W, double>) {
    return read_number(v, field);
  } else {
    return read_matrix(v, field);
  }
}

Metadata read_metadata(const json& doc) {
  Metadata md;
  auto it = doc.find("metadata");
  if (it == doc.end()) return md;
  if (!it->is_object()) schema_error("metadata", "must be an object");
  reject_unknown(*it, {"name", "units"}, "metadata");
  for (const char* key : {"name", "units"}) {
    auto f = it->find(key);
    if (f == it->end()) continue;
    if (!f->is_string()) schema_error(std::string("metadata.") + key, "must be a string");
    (key[0] == 'n' ? md.name : md.units) = f->get<std::string>();
  }
  return md;
}

struct Names {
  const char* first;
  const char* second;
};

Names names_for(bool creep) {
  return creep ? Names{"instantaneous", "fluidity"} : Names{"dirac", "equilibrium"};
}

template <class W>
KernelCoefficients<W> read_coefficients(const json& doc, bool creep) {
  const Names n = names_for(creep);
  KernelCoefficients<W> c;
  if (auto it = doc.find(n.first); it != doc.end()) c.first = read_value<W>(*it, n.first);
  if (auto it = doc.find(n.second); it != doc.end()) c.second = read_value<W>(*it, n.second);
  if (auto it = doc.find("modes"); it != doc.end()) {
    if (!it->is_array()) schema_error("modes", "must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "modes[" + std::to_string(i) + "]";
      const json& m = (*it)[i];
      if (!m.is_object()) schema_error(where, "must be an object");
      reject_unknown(m, {"rate", "weight"}, where);
      const double rate = read_number(require(m, "rate", where), where + ".rate");
      c.modes.emplace_back(rate, read_value<W>(require(m, "weight", where), where + ".weight"));
    }
  }
  return c;
}

KernelData read_data(const json& doc) {
  if (!doc.is_object()) throw ValidationError("material must be a JSON object");
  const json& kind = require(doc, "kind", "");
  if (!kind.is_string() || (kind != "relaxation" && kind != "creep"))
    schema_error("kind", "must be \"relaxation\" or \"creep\"");
  const json& dim = require(doc, "dimension", "");
  if (!dim.is_string() || (dim != "scalar" && dim != "matrix6"))
    schema_error("dimension", "must be \"scalar\" or \"matrix6\"");
  const bool creep = kind == "creep";
  const Names n = names_for(creep);
  reject_unknown(doc, {"kind", "dimension", n.first, n.second, "modes", "metadata"}, "");

  KernelData data;
  data.creep = creep;
  if (dim == "scalar") {
    data.coefficients = read_coefficients<double>(doc, creep);
  } else {
    data.coefficients = read_coefficients<Dense6>(doc, creep);
  }
  return data;
}

int merges_of(const AnyKernel& k) {
  return std::visit([](const auto& x) { return x.merges(); }, k);
}

// -- emission -----------------------------------------------------------------

std::string quote(const std::string& s) { return json(s).dump(); }

void emit_matrix(std::string& out, const Matrix6& m, const std::string& indent) {
  out += "[\n";
  for (int i = 0; i < 6; ++i) {
    out += indent + "  [";
    for (int j = 0; j < 6; ++j) {
      if (j) out += ", ";
      out += format_number(m(i, j));
    }
    out += i < 5 ? "],\n" : "]\n";
  }
  out += indent + "]";
}

void emit_value(std::string& out, double v, const std::string&) { out += format_number(v); }
void emit_value(std::string& out, const Matrix6& v, const std::string& indent) {
  emit_matrix(out, v, indent);
}

template <class W, class Mode>
void emit_body(std::string& out, const char* kind, bool matrix, const Names& n, const W& first,
               const W& second, const std::vector<Mode>& modes) {
  out += "  \"kind\": " + quote(kind) + ",\n";
  out += std::string("  \"dimension\": ") + (matrix ? "\"matrix6\"" : "\"scalar\"") + ",\n";
  out += std::string("  \"") + n.first + "\": ";
  emit_value(out, first, "  ");
  out += ",\n";
  out += std::string("  \"") + n.second + "\": ";
  emit_value(out, second, "  ");
  out += ",\n";
  out += "  \"modes\": [";
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out += i ? ",\n" : "\n";
    if constexpr (std::is_same_v<W, double>) {
      out += "    {\"rate\": " + format_number(modes[i].rate) +
             ", \"weight\": " + format_number(modes[i].weight) + "}";
    } else {
      out += "    {\n      \"rate\": " + format_number(modes[i].rate) + ",\n      \"weight\": ";
      emit_matrix(out, modes[i].weight, "      ");
      out += "\n    }";
    }
  }
  out += modes.empty() ? "]" : "\n  ]";
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (!std::isfinite(x)) throw NumericError("cannot serialize non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

KernelData parse_material_data(std::string_view text) { return read_data(parse_json(text)); }

ParsedMaterial parse_material_document(std::string_view text, bool strict) {
  const json doc = parse_json(text);
  const KernelData data = read_data(doc);
  ParsedMaterial out{{to_kernel(data, strict), read_metadata(doc)}, {}};
  if (const int m = merges_of(out.document.kernel); m > 0)
    out.warnings.push_back(std::to_string(m) + " mode(s) with coincident rates were merged");
  return out;
}

AnyKernel parse_material(std::string_view text) { return parse_material_document(text).document.kernel; }

std::string serialize_material(const MaterialDocument& doc) {
  std::string out = "{\n";
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ScalarRelaxation>) {
          emit_body(out, "relaxation", false, names_for(false), k.newtonian(), k.equilibrium(), k.modes());
        } else if constexpr (std::is_same_v<K, ScalarCreep>) {
          emit_body(out, "creep", false, names_for(true), k.instantaneous(), k.fluidity(), k.modes());
        } else if constexpr (std::is_same_v<K, MatrixRelaxation>) {
          emit_body(out, "relaxation", true, names_for(false), k.newtonian(), k.equilibrium(), k.modes());
        } else {
          emit_body(out, "creep", true, names_for(true), k.instantaneous(), k.fluidity(), k.modes());
        }
      },
      doc.kernel);
  const Metadata& md = doc.metadata;
  if (md.name || md.units) {
    out += ",\n  \"metadata\": {";
    if (md.name) out += "\"name\": " + quote(*md.name);
    if (md.name && md.units) out += ", ";
    if (md.units) out += "\"units\": " + quote(*md.units);
    out += "}";
  }
  out += "\n}\n";
  return out;
}

std::string serialize_material(const AnyKernel& kernel) { return serialize_material(MaterialDocument{kernel, {}}); }

// -- sampling -----------------------------------------------------------------

std::vector<double> sample_times(double t_start, double t_end, std::size_t count, Spacing spacing) {
  if (count < 2) throw ValidationError("sample count must be at least 2");
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start))
    throw ValidationError("sample range must satisfy t_start < t_end");
  if (spacing == Spacing::log && !(t_start > 0.0))
    throw ValidationError("log spacing requires t_start > 0");
  if (spacing == Spacing::linear && t_start < 0.0)
    throw ValidationError("linear spacing requires t_start >= 0");
  std::vector<double> t(count);
  const double steps = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(i) / steps;
    t[i] = spacing == Spacing::log ? t_start * std::pow(t_end / t_start, u)
                                   : t_start + (t_end - t_start) * u;
  }
  t.front() = t_start;
  t.back() = t_end;
  return t;
}

namespace {

double right_limit(const ScalarRelaxation& k) {
  double v = k.equilibrium();
  for (const auto& m : k.modes()) v += m.weight;
  return v;
}

Matrix6 right_limit(const MatrixRelaxation& k) {
  Matrix6 v = k.equilibrium();
  for (const auto& m : k.modes()) v += m.weight;
  return v;
}

void append_row(std::string& out, double t, double v) {
  out += format_number(t) + "," + format_number(v) + "\n";
}

void append_row(std::string& out, double t, const Matrix6& v) {
  out += format_number(t);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) out += "," + format_number(v(i, j));
  out += "\n";
}

std::string matrix_header() {
  std::string h = "t";
  for (int i = 1; i <= 6; ++i)
    for (int j = i; j <= 6; ++j) h += ",v" + std::to_string(i) + std::to_string(j);
  return h + "\n";
}

}  // namespace

std::string sample_to_csv(const AnyKernel& kernel, double t_start, double t_end, std::size_t count,
                          Spacing spacing) {
  const auto times = sample_times(t_start, t_end, count, spacing);
  return std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        constexpr bool matrix = std::is_same_v<K, MatrixRelaxation> || std::is_same_v<K, MatrixCreep>;
        std::string out = matrix ? matrix_header() : std::string("t,value\n");
        for (double t : times) {
          if constexpr (std::is_same_v<K, ScalarRelaxation> || std::is_same_v<K, MatrixRelaxation>) {
            append_row(out, t, t == 0.0 ? right_limit(k) : eval_relaxation(k, t));
          } else {
            append_row(out, t, eval_creep(k, t));
          }
        }
        return out;
      },
      kernel);
}

std::string series_to_csv(const ResponseSeries<double>& s) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) append_row(out, s.times[i], s.values[i]);
  return out;
}

std::string series_to_csv(const ResponseSeries<Vector6>& s) {
  std::string out = "t,s1,s2,s3,s4,s5,s6\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out += format_number(s.times[i]);
    for (int j = 0; j < 6; ++j) out += "," + format_number(s.values[i](j));
    out += "\n";
  }
  return out;
}

// -- auxiliary documents ----------------------------------------------------------

EigenstressDocument parse_eigenstress(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ValidationError("eigenstress basis must be a JSON object");
  reject_unknown(doc, {"spectrum", "directions", "equilibrium", "metadata"}, "");
  EigenstressDocument out;
  const json& spectrum = require(doc, "spectrum", "");
  if (!spectrum.is_array()) schema_error("spectrum", "must be an array");
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const std::string where = "spectrum[" + std::to_string(i) + "]";
    const json& p = spectrum[i];
    if (!p.is_object()) schema_error(where, "must be an object");
    reject_unknown(p, {"rate", "mass"}, where);
    out.basis.spectrum.push_back({read_number(require(p, "rate", where), where + ".rate"),
                                  read_number(require(p, "mass", where), where + ".mass")});
  }
  const json& dirs = require(doc, "directions", "");
  if (!dirs.is_array()) schema_error("directions", "must be an array");
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string where = "directions[" + std::to_string(i) + "]";
    const json& d = dirs[i];
    if (!d.is_object()) schema_error(where, "must be an object");
    reject_unknown(d, {"vector", "lambda"}, where);
    EigenstressDirection dir;
    dir.direction = read_vector(require(d, "vector", where), where + ".vector");
    const json& lambda = require(d, "lambda", where);
    if (!lambda.is_array()) schema_error(where + ".lambda", "must be an array");
    for (const auto& x : lambda) dir.lambda.push_back(read_number(x, where + ".lambda"));
    out.basis.directions.push_back(std::move(dir));
  }
  if (auto it = doc.find("equilibrium"); it != doc.end())
    out.equilibrium = Matrix6::from_dense(read_matrix(*it, "equilibrium"));
  out.metadata = read_metadata(doc);
  return out;
}

HistoryDocument parse_history(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ValidationError("history must be a JSON object");
  reject_unknown(doc, {"breakpoints", "sample_times"}, "");
  const json& bps = require(doc, "breakpoints", "");
  if (!bps.is_array() || bps.empty()) schema_error("breakpoints", "must be a nonempty array");

  const bool tensor = bps[0].is_object() && bps[0].contains("value") && bps[0]["value"].is_array();
  StrainHistory scalar;
  TensorHistory vec;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const std::string where = "breakpoints[" + std::to_string(i) + "]";
    const json& b = bps[i];
    if (!b.is_object()) schema_error(where, "must be an object");
    reject_unknown(b, {"time", "value"}, where);
    const double t = read_number(require(b, "time", where), where + ".time");
    const json& v = require(b, "value", where);
    if (tensor) {
      vec.times.push_back(t);
      vec.values.push_back(read_vector(v, where + ".value"));
    } else {
      scalar.times.push_back(t);
      scalar.values.push_back(read_number(v, where + ".value"));
    }
  }
  HistoryDocument out;
  if (tensor) {
    vec.validate();
    out.history = std::move(vec);
  } else {
    scalar.validate();
    out.history = std::move(scalar);
  }
  if (auto it = doc.find("sample_times"); it != doc.end()) {
    if (!it->is_array()) schema_error("sample_times", "must be an array");
    for (const auto& x : *it) out.sample_times.push_back(read_number(x, "sample_times"));
  }
  return out;
}

}  // namespace viscodual
