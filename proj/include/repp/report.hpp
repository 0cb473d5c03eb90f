// Run artifacts: the report_v1 JSON document, content hashes and SVG
// scatter plots.
#pragma once

#include "repp/point_measure.hpp"
#include "repp/stats.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repp {

inline constexpr const char* kReportSchema = "report_v1";
inline constexpr const char* kVersion = "1.0.0";

/// Lowercase hex SHA-256 of a byte string or of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Library versions recorded in every report.
nlohmann::json version_info();

/// A test whose preconditions were not met is recorded with a reason and
/// does not affect the verdict.
struct TestEntry {
  GofReport report;
  bool skipped = false;
  std::string note;

  nlohmann::json to_json() const;
};

class RunReport {
 public:
  RunReport(std::string command, const std::string& canonical_config, std::optional<std::uint64_t> seed);

  /// Records a written file by its path relative to the output directory.
  void add_output(const std::filesystem::path& out_dir, const std::filesystem::path& file);
  void add_test(GofReport report, std::string note = {});
  void add_skipped(std::string test, std::string reason);
  nlohmann::json& data() { return data_; }

  bool pass() const;
  const std::vector<TestEntry>& tests() const { return tests_; }
  nlohmann::json to_json() const;
  /// Writes report.json (or `name`) and returns its path.
  std::filesystem::path write(const std::filesystem::path& out_dir,
                              const std::string& name = "report.json") const;

 private:
  std::string command_;
  std::string config_hash_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::vector<TestEntry> tests_;
  nlohmann::json data_ = nlohmann::json::object();
};

/// Writes text to a file, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

struct ScatterStyle {
  std::string title;
  std::string x_label = "t";
  std::string y_label = "mark";
  double width = 480.0;
  double height = 320.0;
};

/// SVG 1.1 scatter plot of (time, first mark) over [0, horizon) x [0, cap].
/// An empty measure yields the axes alone.
std::string scatter_svg(const PointMeasure& pm, const Window& window, const ScatterStyle& style);

}  // namespace repp
