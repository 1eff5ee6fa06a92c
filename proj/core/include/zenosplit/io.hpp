#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "zenosplit/analysis.hpp"
#include "zenosplit/error.hpp"

namespace zenosplit::io {

enum class OutputFormat { csv, json };

struct OutputSpec {
  OutputFormat format = OutputFormat::csv;
  std::string path;  // empty = standard output
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
  ScenarioConfig config;
  OutputSpec output;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Raised for malformed documents; carries the 1-based line (0 if unknown).
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses an INI-style scenario document with sections [grating],
/// [aperture], [run] and [output]. Unknown sections or keys are rejected and
/// every ScenarioConfig invariant is checked.
Scenario parse_scenario(std::string_view document);
std::string emit_scenario(const Scenario& scenario);

std::string format_double(double value);  // 17 significant digits
double parse_double(std::string_view text);

std::string emit_trace_csv(const IntensityTrace& trace);
IntensityTrace parse_trace_csv(std::string_view text);
std::string emit_trace_json(const IntensityTrace& trace);

std::string emit_summary_json(const SwitchPointResult& result);
std::string emit_summary_json(const std::vector<LossCurvePoint>& curve);
std::string emit_summary_json(const std::vector<Contour>& contours);
/// Switch-point summary followed by caller-supplied scalar keys, in order.
std::string emit_summary_json(const SwitchPointResult& result,
                              const std::vector<std::pair<std::string, double>>& extra);
/// Contours plus the material table with each row's V_MIP * lambda product.
std::string emit_survey_json(const std::vector<Contour>& contours,
                             const std::vector<MaterialRecord>& materials);
std::string emit_summary_csv(const SwitchPointResult& result);
std::string emit_summary_csv(const std::vector<LossCurvePoint>& curve);
std::string emit_summary_csv(const std::vector<Contour>& contours);

SwitchPointResult parse_switch_point_json(std::string_view text);
std::vector<LossCurvePoint> parse_loss_curve_json(std::string_view text);
std::vector<Contour> parse_contours_json(std::string_view text);

/// Tab-separated table with header: name, V_MIP_volts, mfp_nm, source.
std::vector<MaterialRecord> parse_materials(std::string_view text);
std::string emit_materials(const std::vector<MaterialRecord>& records);

/// Carbon and gold rows back-derived from their 200 keV phase amplitudes.
std::vector<MaterialRecord> bundled_materials();
const MaterialRecord& find_material(const std::vector<MaterialRecord>& records,
                                    std::string_view name);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace zenosplit::io
