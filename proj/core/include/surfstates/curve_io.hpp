#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "surfstates/analysis.hpp"
#include "surfstates/counting.hpp"

namespace surfstates {

/// Shortest round-trip decimal representation; identical on every platform.
std::string format_number(double value);

inline constexpr const char* kCurveCsvHeader = "E,value,std_err,n_real,L,h,seed0";

void write_curve_csv(std::ostream& out, const EmpiricalCurve& curve);
EmpiricalCurve read_curve_csv(std::istream& in);

void write_sandwich_csv(std::ostream& out, const SandwichReport& report);
void write_integer_check_csv(std::ostream& out, const IntegerCheckReport& report);
void write_fit_csv(std::ostream& out, const LifshitsFit& fit);
std::string fit_summary(const LifshitsFit& fit);

/// Two-column whitespace-separated plot data.
void write_plot_data(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace surfstates
