#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace surfids {

enum class Format { csv, json };

/// Converts CSV text (header line plus rows) into a JSON document with the same columns.
std::string csv_to_json(const std::string& csv);

/// Output tree out/<digest>/{curves,reports,fits} with manifest.txt.
class OutputTree {
 public:
  OutputTree(std::filesystem::path root, Format format, const std::string& manifest);

  const std::filesystem::path& root() const { return root_; }

  /// Writes a table given as CSV text; returns the written path.
  std::filesystem::path table(const std::string& group, const std::string& stem, const std::string& csv);
  /// Writes free text (summaries) under the given group.
  std::filesystem::path text(const std::string& group, const std::string& name, const std::string& content);

  const std::vector<std::filesystem::path>& written() const { return written_; }

 private:
  std::filesystem::path root_;
  Format format_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace surfids
