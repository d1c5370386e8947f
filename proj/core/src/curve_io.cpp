#include "surfstates/curve_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "surfstates/error.hpp"

namespace surfstates {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_curve_csv(std::ostream& out, const EmpiricalCurve& curve) {
  out << kCurveCsvHeader << '\n';
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    out << format_number(curve.energies[i]) << ',' << format_number(curve.values[i]) << ','
        << format_number(i < curve.std_err.size() ? curve.std_err[i] : 0.0) << ',' << curve.meta.realizations << ','
        << format_number(curve.meta.L) << ',' << format_number(curve.meta.h) << ',' << curve.meta.seed0 << '\n';
  }
}

EmpiricalCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader) {
    throw Error(ErrorKind::ConfigInvalid, "curve file must start with the header " + std::string(kCurveCsvHeader));
  }
  EmpiricalCurve curve;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw Error(ErrorKind::ConfigInvalid, "row " + std::to_string(row) + " needs 7 fields");
    try {
      curve.energies.push_back(std::stod(fields[0]));
      curve.values.push_back(std::stod(fields[1]));
      curve.std_err.push_back(std::stod(fields[2]));
      curve.meta.realizations = std::stoull(fields[3]);
      curve.meta.L = std::stod(fields[4]);
      curve.meta.h = std::stod(fields[5]);
      curve.meta.seed0 = std::stoull(fields[6]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigInvalid, "row " + std::to_string(row) + " has a malformed number");
    }
  }
  return curve;
}

void write_sandwich_csv(std::ostream& out, const SandwichReport& report) {
  out << "x,lower,target,upper,target_se,lower_slack,upper_slack,pass\n";
  for (const auto& r : report.rows) {
    out << format_number(r.energy) << ',' << format_number(r.lower) << ',' << format_number(r.target) << ','
        << format_number(r.upper) << ',' << format_number(r.target_se) << ',' << format_number(r.lower_slack) << ','
        << format_number(r.upper_slack) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

void write_integer_check_csv(std::ostream& out, const IntegerCheckReport& report) {
  out << "kind,checks,violations\n" << report.kind << ',' << report.checks << ',' << report.violations.size() << '\n';
  if (report.violations.empty()) return;
  out << "realization,energy,lhs,rhs\n";
  for (const auto& v : report.violations) {
    out << v.realization << ',' << format_number(v.energy) << ',' << v.lhs << ',' << v.rhs << '\n';
  }
}

void write_fit_csv(std::ostream& out, const LifshitsFit& fit) {
  out << "lambda,abscissa,lnln_y,used,masked\n";
  for (std::size_t i = 0; i < fit.lambda.size(); ++i) {
    out << format_number(fit.lambda[i]) << ',' << format_number(fit.abscissa[i]) << ','
        << format_number(fit.transformed[i]) << ',' << (fit.used[i] ? 1 : 0) << ',' << (fit.masked[i] ? 1 : 0)
        << '\n';
  }
}

std::string fit_summary(const LifshitsFit& fit) {
  std::ostringstream out;
  out << "axis=" << (fit.axis == LifshitsAxis::log_lambda ? "ln_lambda" : "lnln_lambda") << '\n'
      << "slope=" << format_number(fit.slope) << '\n'
      << "intercept=" << format_number(fit.intercept) << '\n'
      << "slope_stderr=" << format_number(fit.slope_stderr) << '\n'
      << "ci_half_width=" << format_number(fit.ci_half_width) << '\n'
      << "confidence=" << format_number(fit.confidence) << '\n'
      << "n_used=" << fit.n_used << '\n';
  if (fit.empirical) out << "note=finite-volume fit, not expected to match the asymptotic exponent\n";
  return out.str();
}

void write_plot_data(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    out << format_number(x[i]) << ' ' << format_number(y[i]) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorKind::InvalidArgument, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace surfstates
