#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "viscodual/duality.hpp"
#include "viscodual/eigenstress.hpp"
#include "viscodual/errors.hpp"
#include "viscodual/material_io.hpp"
#include "viscodual/response.hpp"
#include "viscodual/verify.hpp"

namespace viscodual::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw UsageError("failed writing " + path);
}

std::string human(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string json_number(double x) {
  if (std::isinf(x)) return "\"inf\"";
  if (std::isnan(x)) return "\"nan\"";
  return format_number(x);
}

std::string render(const LimitValue& v, bool as_json) {
  if (is_infinite(v)) return as_json ? "\"inf\"" : "inf";
  if (const auto* d = std::get_if<double>(&v)) return as_json ? format_number(*d) : human(*d);
  const auto& m = std::get<Matrix6>(v);
  std::string s = "[";
  for (int i = 0; i < 6; ++i) {
    s += i ? ", [" : "[";
    for (int j = 0; j < 6; ++j) {
      if (j) s += ", ";
      s += as_json ? format_number(m(i, j)) : human(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

// -- subcommands ------------------------------------------------------------

int cmd_dualize(const std::string& in, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ParsedMaterial parsed = parse_material_document(read_file(in));
  for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
  MaterialDocument dual{dualize(parsed.document.kernel), parsed.document.metadata};
  write_output(out_path, serialize_material(dual), out);
  return kOk;
}

void add_prefixed(CheckReport& into, const CheckReport& from, const std::string& prefix) {
  for (const auto& e : from.entries()) into.add(prefix + e.name, e.residual, e.tolerance);
}

int cmd_check(const std::string& in, const std::string& against, std::optional<double> tol,
              const std::string& format, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(in);
  CheckReport report;
  add_prefixed(report, check_wellformed(parse_material_data(text)), against.empty() ? "" : "kernel.");

  if (!against.empty()) {
    const std::string other_text = read_file(against);
    add_prefixed(report, check_wellformed(parse_material_data(other_text)), "against.");
    if (report.all_passed()) {
      const AnyKernel a = parse_material(text);
      const AnyKernel b = parse_material(other_text);
      const bool matrix = std::holds_alternative<MatrixRelaxation>(a) || std::holds_alternative<MatrixCreep>(a);
      const double rate = std::max(std::visit([](const auto& k) { return k.max_rate(); }, a),
                                   std::visit([](const auto& k) { return k.max_rate(); }, b));
      const auto grid = default_time_grid(rate);
      report.add("duality_convolution", duality_residual(a, b, grid), tol.value_or(matrix ? 1e-7 : 1e-9));
      add_prefixed(report, check_limit_identities(a, b, tol.value_or(1e-8)), "");
    }
  }

  if (format == "json") {
    out << "{\n  \"passed\": " << (report.all_passed() ? "true" : "false") << ",\n  \"checks\": [";
    bool first = true;
    for (const auto& e : report.entries()) {
      out << (first ? "\n" : ",\n") << "    {\"name\": \"" << e.name << "\", \"pass\": "
          << (e.pass ? "true" : "false") << ", \"residual\": " << json_number(e.residual)
          << ", \"tolerance\": " << json_number(e.tolerance) << "}";
      first = false;
    }
    out << "\n  ]\n}\n";
  } else {
    for (const auto& e : report.entries())
      out << (e.pass ? "PASS " : "FAIL ") << e.name << " residual=" << human(e.residual)
          << " tol=" << human(e.tolerance) << "\n";
    out << report.entries().size() - report.failures() << "/" << report.entries().size()
        << " checks passed\n";
  }
  if (!report.all_passed()) {
    err << "check failed: " << report.failures() << " check(s) above tolerance\n";
    return kValidation;
  }
  return kOk;
}

int cmd_sample(const std::string& in, double t0, double t1, std::size_t n, bool log,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ParsedMaterial parsed = parse_material_document(read_file(in));
  for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
  write_output(out_path,
               sample_to_csv(parsed.document.kernel, t0, t1, n, log ? Spacing::log : Spacing::linear), out);
  return kOk;
}

int cmd_limits(const std::string& in, const std::string& format, std::ostream& out) {
  const AnyKernel k = parse_material(read_file(in));
  const bool relaxation = std::holds_alternative<ScalarRelaxation>(k) || std::holds_alternative<MatrixRelaxation>(k);
  const bool matrix = k.index() >= 2;
  const LimitReport rep = std::visit(
      [](const auto& x) {
        using K = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<K, ScalarRelaxation> || std::is_same_v<K, MatrixRelaxation>) {
          return relaxation_limits(x);
        } else {
          return creep_limits(x);
        }
      },
      k);
  const bool json = format == "json";
  if (json) {
    out << "{\n  \"kind\": \"" << (relaxation ? "relaxation" : "creep") << "\",\n";
    if (rep.dirac) out << "  \"dirac\": " << render(*rep.dirac, true) << ",\n";
    out << "  \"value_at_zero\": " << render(rep.value_at_zero, true) << ",\n"
        << "  \"value_at_infinity\": " << render(rep.value_at_infinity, true) << ",\n"
        << "  \"derivative_at_zero\": " << render(rep.derivative_at_zero, true) << ",\n"
        << "  \"derivative_at_infinity\": " << render(rep.derivative_at_infinity, true) << "\n}\n";
    return kOk;
  }
  const std::string f = relaxation ? (matrix ? "F" : "f") : (matrix ? "C" : "h");
  const std::string zero = relaxation ? "(0+)" : "(0)";
  if (rep.dirac) out << "dirac=" << render(*rep.dirac, false) << "\n";
  out << f << zero << "=" << render(rep.value_at_zero, false) << "\n"
      << f << "(inf)=" << render(rep.value_at_infinity, false) << "\n"
      << f << "'" << zero << "=" << render(rep.derivative_at_zero, false) << "\n"
      << f << "'(inf)=" << render(rep.derivative_at_infinity, false) << "\n";
  return kOk;
}

template <class V>
std::vector<double> default_response_times(const History<V>& h, double rate) {
  const double end = h.times.size() > 1 ? 2.0 * h.times.back() : 10.0 / (rate > 0.0 ? rate : 1.0);
  return sample_times(0.0, end, 101, Spacing::linear);
}

int cmd_respond(const std::string& kernel_path, const std::string& history_path,
                const std::optional<double>& t0, const std::optional<double>& t1,
                std::size_t n, bool log, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  const AnyKernel k = parse_material(read_file(kernel_path));
  const HistoryDocument hist = parse_history(read_file(history_path));
  const double rate = std::visit([](const auto& x) { return x.max_rate(); }, k);

  auto times_for = [&](const auto& h) {
    if (t0 || t1) {
      if (!t0 || !t1) throw UsageError("--t0 and --t1 must be given together");
      return sample_times(*t0, *t1, n, log ? Spacing::log : Spacing::linear);
    }
    if (!hist.sample_times.empty()) return hist.sample_times;
    return default_response_times(h, rate);
  };
  auto report_impulses = [&](const auto& series) {
    for (const auto& [time, weight] : series.impulses) {
      double mag;
      if constexpr (std::is_same_v<std::decay_t<decltype(weight)>, double>) {
        mag = std::abs(weight);
      } else {
        mag = weight.cwiseAbs().maxCoeff();
      }
      if (mag > 0.0) err << "note: Dirac impulse at t=" << human(time) << " not included in samples\n";
    }
  };

  std::string csv;
  if (const auto* h = std::get_if<StrainHistory>(&hist.history)) {
    const auto times = times_for(*h);
    if (const auto* r = std::get_if<ScalarRelaxation>(&k)) {
      const auto s = respond(*r, *h, times);
      report_impulses(s);
      csv = series_to_csv(s);
    } else if (const auto* c = std::get_if<ScalarCreep>(&k)) {
      csv = series_to_csv(respond_creep(*c, *h, times));
    } else {
      throw ValidationError("scalar history requires a scalar kernel");
    }
  } else {
    const auto& th = std::get<TensorHistory>(hist.history);
    const auto times = times_for(th);
    if (const auto* r = std::get_if<MatrixRelaxation>(&k)) {
      const auto s = respond(*r, th, times);
      report_impulses(s);
      csv = series_to_csv(s);
    } else if (const auto* c = std::get_if<MatrixCreep>(&k)) {
      csv = series_to_csv(respond_creep(*c, th, times));
    } else {
      throw ValidationError("6-vector history requires a matrix6 kernel");
    }
  }
  write_output(out_path, csv, out);
  return kOk;
}

int cmd_eigenstress(const std::string& in, const std::string& out_path, std::ostream& out) {
  const EigenstressDocument doc = parse_eigenstress(read_file(in));
  MaterialDocument material{assemble_eigenstress(doc.basis, doc.equilibrium), doc.metadata};
  write_output(out_path, serialize_material(material), out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convert and verify relaxation / creep kernel pairs", "viscodual"};
  app.require_subcommand(1);

  std::string in, in2, out_path, against, format = "text";
  std::optional<double> tol, t0, t1;
  std::size_t n = 101;
  bool log = false;

  auto* dual = app.add_subcommand("dualize", "Write the dual kernel of a material file");
  dual->add_option("input", in, "Material JSON")->required();
  dual->add_option("-o,--output", out_path, "Output JSON (default: stdout)");

  auto* check = app.add_subcommand("check", "Check a kernel, optionally against its claimed dual");
  check->add_option("input", in, "Material JSON")->required();
  check->add_option("--against", against, "Claimed dual material JSON");
  check->add_option("--tol", tol, "Tolerance for pair checks")->check(CLI::PositiveNumber);
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* sample = app.add_subcommand("sample", "Sample a kernel to CSV");
  sample->add_option("input", in, "Material JSON")->required();
  double s0 = 0.0, s1 = 0.0;
  sample->add_option("--t0", s0, "First time")->required();
  sample->add_option("--t1", s1, "Last time")->required();
  sample->add_option("--n", n, "Number of samples")->required();
  sample->add_flag("--log", log, "Logarithmic spacing");
  sample->add_option("-o,--output", out_path, "Output CSV (default: stdout)");

  auto* limits = app.add_subcommand("limits", "Print boundary values");
  limits->add_option("input", in, "Material JSON")->required();
  limits->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* resp = app.add_subcommand("respond", "Response to a piecewise-linear history");
  resp->add_option("kernel", in, "Material JSON")->required();
  resp->add_option("history", in2, "History JSON")->required();
  resp->add_option("--t0", t0, "First sample time");
  resp->add_option("--t1", t1, "Last sample time");
  resp->add_option("--n", n, "Number of samples");
  resp->add_flag("--log", log, "Logarithmic spacing");
  resp->add_option("-o,--output", out_path, "Output CSV (default: stdout)");

  auto* eig = app.add_subcommand("eigenstress", "Assemble a relaxation kernel from an eigenstress basis");
  eig->add_option("input", in, "Basis JSON")->required();
  eig->add_option("-o,--output", out_path, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*dual) return cmd_dualize(in, out_path, out, err);
    if (*check) return cmd_check(in, against, tol, format, out, err);
    if (*sample) return cmd_sample(in, s0, s1, n, log, out_path, out, err);
    if (*limits) return cmd_limits(in, format, out);
    if (*resp) return cmd_respond(in, in2, t0, t1, n, log, out_path, out, err);
    if (*eig) return cmd_eigenstress(in, out_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace viscodual::cli
