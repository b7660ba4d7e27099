#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bihyp/types.hpp"

namespace bihyp {

inline constexpr const char* kVersion = "0.1.0";

/// One residual check. The verdict is pure arithmetic on the stored numbers:
/// pass iff residual <= tolerance.
struct CheckRecord {
  std::string check_id;
  int point_index = -1;
  std::vector<double> point;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Machine-readable outcome of one suite run: sorted records plus free-form
/// diagnostic sections that never influence verdicts.
class ResidualReport {
 public:
  nlohmann::json meta = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  std::vector<CheckRecord> records;

  void add(const std::string& check_id, int point_index,
           const std::vector<double>& point, double residual,
           double tolerance);
  void add(const std::string& check_id, int point_index, const Vec& point,
           double residual, double tolerance);

  /// Stable order: by check_id, then point index.
  void sort_records();

  bool all_pass() const;
  int failed_count() const;
  /// Largest residual per check_id, insertion order of first appearance.
  std::vector<std::pair<std::string, double>> max_residuals() const;

  nlohmann::json to_json() const;
  static ResidualReport from_json(const nlohmann::json& j);

  void write_json(const std::string& path) const;
  void write_csv(const std::string& path) const;
  void print_summary(std::ostream& os) const;
};

/// Round-trip safe 12 significant digit formatting used in CSV and summaries.
std::string format_sig(double value);

}  // namespace bihyp
