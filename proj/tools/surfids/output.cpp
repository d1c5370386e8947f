#include "output.hpp"

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "surfstates/curve_io.hpp"

namespace surfids {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

nlohmann::json cell_value(const std::string& cell) {
  if (cell.empty() || cell == "nan") return nullptr;
  if (cell == "inf" || cell == "-inf") return cell;
  char* end = nullptr;
  const long long i = std::strtoll(cell.c_str(), &end, 10);
  if (end != cell.c_str() && *end == '\0') return i;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() && *end == '\0') return v;
  return cell;
}

}  // namespace

std::string csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  nlohmann::json doc;
  doc["columns"] = nlohmann::json::array();
  doc["rows"] = nlohmann::json::array();
  if (!std::getline(in, line)) return doc.dump(1) + "\n";
  for (const auto& c : split(line)) doc["columns"].push_back(c);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = nlohmann::json::array();
    for (const auto& c : split(line)) row.push_back(cell_value(c));
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(1) + "\n";
}

OutputTree::OutputTree(std::filesystem::path root, Format format, const std::string& manifest)
    : root_(std::move(root)), format_(format) {
  for (const char* group : {"curves", "reports", "fits"}) std::filesystem::create_directories(root_ / group);
  surfstates::write_file_atomic(root_ / "manifest.txt", manifest);
}

std::filesystem::path OutputTree::table(const std::string& group, const std::string& stem, const std::string& csv) {
  const bool json = format_ == Format::json;
  const auto path = root_ / group / (stem + (json ? ".json" : ".csv"));
  surfstates::write_file_atomic(path, json ? csv_to_json(csv) : csv);
  written_.push_back(path);
  return path;
}

std::filesystem::path OutputTree::text(const std::string& group, const std::string& name, const std::string& content) {
  const auto path = root_ / group / name;
  surfstates::write_file_atomic(path, content);
  written_.push_back(path);
  return path;
}

}  // namespace surfids
