#include "zenosplit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace zenosplit::io {
namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> values;
  for (std::string_view item : split(text, ',')) values.push_back(parse_int(item));
  return values;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  throw ValidationError("expected true or false, got '" + std::string(text) + "'");
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string_view kind_name(GratingKind kind) {
  switch (kind) {
    case GratingKind::crystal_two_beam: return "crystal_two_beam";
    case GratingKind::sinusoidal: return "sinusoidal";
    case GratingKind::fork_hologram: return "fork_hologram";
  }
  return "?";
}

// Shortest-search for a decimal a with fl(a * pi) == radians, so scenario
// files keep amplitudes in units of pi without losing the stored value.
double amplitude_over_pi(double radians) {
  const double guess = radians / std::numbers::pi;
  double candidate = guess;
  for (int step = 0; step < 8; ++step) {
    if (candidate * std::numbers::pi == radians) return candidate;
    candidate = std::nextafter(candidate, step % 2 ? -INFINITY : INFINITY);
  }
  double down = guess;
  double up = guess;
  for (int step = 0; step < 8; ++step) {
    down = std::nextafter(down, -INFINITY);
    up = std::nextafter(up, INFINITY);
    if (down * std::numbers::pi == radians) return down;
    if (up * std::numbers::pi == radians) return up;
  }
  return guess;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry, std::less<>>;

const std::map<std::string, std::vector<std::string>, std::less<>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> keys{
      {"grating", {"kind", "A_over_pi", "t_over_xi", "thickness_nm", "mfp_nm", "pitch_nm"}},
      {"aperture", {"passed_orders"}},
      {"run", {"M", "N_max", "attenuation", "tracked_orders"}},
      {"output", {"format", "path"}},
  };
  return keys;
}

class ScenarioReader {
 public:
  explicit ScenarioReader(std::string_view document) {
    std::string current;
    int line_no = 0;
    for (std::string_view raw : lines_of(document)) {
      ++line_no;
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
        current = std::string(trim(line.substr(1, line.size() - 2)));
        if (!known_keys().contains(current)) {
          throw ParseError(line_no, "unknown section [" + current + "]");
        }
        if (!sections_.emplace(current, Section{}).second) {
          throw ParseError(line_no, "duplicate section [" + current + "]");
        }
        section_lines_[current] = line_no;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
      if (current.empty()) throw ParseError(line_no, "key outside of any section");
      const std::string key(trim(line.substr(0, eq)));
      const auto& allowed = known_keys().at(current);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ParseError(line_no, "unknown key '" + key + "' in [" + current + "]");
      }
      Section& section = sections_[current];
      if (section.contains(key)) {
        throw ParseError(line_no, "duplicate key '" + key + "' in [" + current + "]");
      }
      section.emplace(key, Entry{std::string(trim(line.substr(eq + 1))), line_no});
    }
  }

  bool has_section(std::string_view name) const { return sections_.contains(name); }
  int section_line(const std::string& name) const {
    const auto it = section_lines_.find(name);
    return it == section_lines_.end() ? 0 : it->second;
  }

  const Entry* find(std::string_view section, std::string_view key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  const Entry& require(const std::string& section, const std::string& key) const {
    if (const Entry* e = find(section, key)) return *e;
    throw ParseError(section_line(section), "missing required key '" + key + "' in [" + section + "]");
  }

  template <typename Fn>
  auto convert(const Entry& entry, const std::string& key, Fn&& fn) const {
    try {
      return fn(std::string_view(entry.value));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(entry.line, key + ": " + e.what());
    }
  }

 private:
  std::map<std::string, Section, std::less<>> sections_;
  std::map<std::string, int, std::less<>> section_lines_;
};

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::string format_double(double value) {
  char buffer[32];
  const int n = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer, static_cast<std::size_t>(n));
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

Scenario parse_scenario(std::string_view document) {
  const ScenarioReader reader(document);
  if (!reader.has_section("grating")) throw ParseError(0, "missing [grating] section");
  if (!reader.has_section("run")) throw ParseError(0, "missing [run] section");

  Scenario scenario;
  ScenarioConfig& config = scenario.config;
  GratingSpec& grating = config.grating;

  const Entry& kind = reader.require("grating", "kind");
  if (kind.value == "crystal_two_beam") grating.kind = GratingKind::crystal_two_beam;
  else if (kind.value == "sinusoidal") grating.kind = GratingKind::sinusoidal;
  else if (kind.value == "fork_hologram") grating.kind = GratingKind::fork_hologram;
  else throw ParseError(kind.line, "kind: unknown grating kind '" + kind.value + "'");

  const bool crystal = grating.kind == GratingKind::crystal_two_beam;
  const char* needed = crystal ? "t_over_xi" : "A_over_pi";
  const char* foreign = crystal ? "A_over_pi" : "t_over_xi";
  if (const Entry* e = reader.find("grating", foreign)) {
    throw ParseError(e->line, std::string(foreign) + " does not apply to kind " + kind.value);
  }
  const Entry& strength = reader.require("grating", needed);
  const double value = reader.convert(strength, needed, parse_double);
  if (crystal) grating.t_over_xi = value;
  else grating.phase_amplitude = value * std::numbers::pi;

  auto optional_double = [&](const char* key) -> std::optional<double> {
    if (const Entry* e = reader.find("grating", key)) return reader.convert(*e, key, parse_double);
    return std::nullopt;
  };
  grating.thickness_nm = optional_double("thickness_nm");
  grating.mfp_nm = optional_double("mfp_nm");
  grating.pitch_nm = optional_double("pitch_nm");
  try {
    grating.validate();
  } catch (const ValidationError& e) {
    throw ParseError(strength.line, e.what());
  }

  if (reader.has_section("aperture")) {
    const Entry& passed = reader.require("aperture", "passed_orders");
    const std::vector<int> orders = reader.convert(passed, "passed_orders", parse_int_list);
    config.aperture = ApertureSpec{{orders.begin(), orders.end()}};
  }

  if (const Entry* e = reader.find("run", "M")) config.truncation = reader.convert(*e, "M", parse_int);
  const Entry& n_max = reader.require("run", "N_max");
  config.max_passes = reader.convert(n_max, "N_max", parse_int);
  if (const Entry* e = reader.find("run", "attenuation")) {
    config.attenuation_enabled = reader.convert(*e, "attenuation", parse_bool);
  }
  if (const Entry* e = reader.find("run", "tracked_orders")) {
    config.tracked_orders = reader.convert(*e, "tracked_orders", parse_int_list);
  }

  // Cross-field invariants, reported at the line of the field that breaks them.
  if (config.max_passes < 1) throw ParseError(n_max.line, "N_max must be >= 1");
  if (const Entry* e = reader.find("run", "M"); e && config.truncation < 1) {
    throw ParseError(e->line, "M must be >= 1");
  }
  const OrderBasis basis = config.basis();
  if (config.aperture) {
    const Entry& passed = reader.require("aperture", "passed_orders");
    for (int order : config.aperture->passed_orders) {
      if (!basis.contains(order)) {
        throw ParseError(passed.line, "passed_orders: order " + std::to_string(order) +
                                          " outside the truncation window");
      }
    }
    const Entry* tracked = reader.find("run", "tracked_orders");
    for (int order : config.tracked_orders) {
      if (!config.aperture->passed_orders.contains(order)) {
        throw ParseError(tracked ? tracked->line : passed.line,
                         "tracked_orders: order " + std::to_string(order) +
                             " is blocked by the aperture");
      }
    }
  }
  if (config.attenuation_enabled && (!grating.thickness_nm || !grating.mfp_nm)) {
    throw ParseError(reader.find("run", "attenuation")->line,
                     "attenuation = true requires thickness_nm and mfp_nm in [grating]");
  }
  try {
    config.validate();
  } catch (const ValidationError& e) {
    const Entry* tracked = reader.find("run", "tracked_orders");
    throw ParseError(tracked ? tracked->line : 0, e.what());
  }

  if (const Entry* e = reader.find("output", "format")) {
    if (e->value == "csv") scenario.output.format = OutputFormat::csv;
    else if (e->value == "json") scenario.output.format = OutputFormat::json;
    else throw ParseError(e->line, "format: expected csv or json, got '" + e->value + "'");
  }
  if (const Entry* e = reader.find("output", "path")) scenario.output.path = e->value;
  return scenario;
}

std::string emit_scenario(const Scenario& scenario) {
  const ScenarioConfig& config = scenario.config;
  const GratingSpec& grating = config.grating;
  std::ostringstream out;
  out << "[grating]\n";
  out << "kind = " << kind_name(grating.kind) << "\n";
  if (grating.kind == GratingKind::crystal_two_beam) {
    out << "t_over_xi = " << format_double(grating.t_over_xi) << "\n";
  } else {
    out << "A_over_pi = " << format_double(amplitude_over_pi(grating.phase_amplitude)) << "\n";
  }
  if (grating.thickness_nm) out << "thickness_nm = " << format_double(*grating.thickness_nm) << "\n";
  if (grating.mfp_nm) out << "mfp_nm = " << format_double(*grating.mfp_nm) << "\n";
  if (grating.pitch_nm) out << "pitch_nm = " << format_double(*grating.pitch_nm) << "\n";
  if (config.aperture) {
    out << "\n[aperture]\n";
    out << "passed_orders = "
        << join_ints({config.aperture->passed_orders.begin(), config.aperture->passed_orders.end()})
        << "\n";
  }
  out << "\n[run]\n";
  out << "M = " << config.truncation << "\n";
  out << "N_max = " << config.max_passes << "\n";
  out << "attenuation = " << (config.attenuation_enabled ? "true" : "false") << "\n";
  out << "tracked_orders = " << join_ints(config.tracked_orders) << "\n";
  out << "\n[output]\n";
  out << "format = " << (scenario.output.format == OutputFormat::csv ? "csv" : "json") << "\n";
  if (!scenario.output.path.empty()) out << "path = " << scenario.output.path << "\n";
  return out.str();
}

std::string emit_trace_csv(const IntensityTrace& trace) {
  std::string out = "N";
  for (int order : trace.tracked_orders) out += ",I_" + std::to_string(order);
  out += ",total,loss\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.pass);
    for (double value : row.intensities) out += "," + format_double(value);
    out += "," + format_double(row.total) + "," + format_double(row.loss) + "\n";
  }
  return out;
}

IntensityTrace parse_trace_csv(std::string_view text) {
  const std::vector<std::string_view> lines = lines_of(text);
  if (lines.empty()) throw ParseError(0, "empty trace CSV");
  const std::vector<std::string_view> header = split(lines[0], ',');
  if (header.size() < 3 || header.front() != "N" || header[header.size() - 2] != "total" ||
      header.back() != "loss") {
    throw ParseError(1, "trace CSV header must be N,I_<order>...,total,loss");
  }
  IntensityTrace trace;
  for (std::size_t c = 1; c + 2 < header.size(); ++c) {
    if (!header[c].starts_with("I_")) throw ParseError(1, "bad column '" + std::string(header[c]) + "'");
    try {
      trace.tracked_orders.push_back(parse_int(header[c].substr(2)));
    } catch (const ValidationError& e) {
      throw ParseError(1, e.what());
    }
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::vector<std::string_view> cells = split(lines[i], ',');
    if (cells.size() != header.size()) throw ParseError(line_no, "wrong number of columns");
    try {
      TraceRow row;
      row.pass = parse_int(cells[0]);
      if (row.pass != static_cast<int>(i) - 1) throw ValidationError("rows must be ordered by N from 0");
      for (std::size_t c = 1; c + 2 < cells.size(); ++c) row.intensities.push_back(parse_double(cells[c]));
      row.total = parse_double(cells[cells.size() - 2]);
      row.loss = parse_double(cells.back());
      trace.rows.push_back(std::move(row));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return trace;
}

std::string emit_trace_json(const IntensityTrace& trace) {
  Json j;
  j["tracked_orders"] = trace.tracked_orders;
  Json rows = Json::array();
  for (const TraceRow& row : trace.rows) {
    rows.push_back(Json{{"N", row.pass}, {"I", row.intensities}, {"total", row.total}, {"loss", row.loss}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

namespace {

Json switch_point_json(const SwitchPointResult& r) {
  return Json{{"switch_point", r.switch_point},     {"I_direct", r.I_direct},
              {"I_diffracted", r.I_diffracted},     {"loss_at_switch", r.loss_at_switch},
              {"inelastic_loss", r.inelastic_loss}, {"efficiency", r.efficiency}};
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
}

template <typename Fn>
auto json_field(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ParseError(0, std::string("malformed summary JSON: ") + e.what());
  }
}

}  // namespace

std::string emit_summary_json(const SwitchPointResult& result) {
  return switch_point_json(result).dump(2) + "\n";
}

std::string emit_summary_json(const SwitchPointResult& result,
                              const std::vector<std::pair<std::string, double>>& extra) {
  Json j = switch_point_json(result);
  for (const auto& [key, value] : extra) j[key] = value;
  return j.dump(2) + "\n";
}

std::string emit_summary_json(const std::vector<LossCurvePoint>& curve) {
  std::vector<LossCurvePoint> sorted = curve;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.switch_point < b.switch_point; });
  Json points = Json::array();
  for (const LossCurvePoint& p : sorted) {
    points.push_back(Json{{"phase_amplitude", p.phase_amplitude},
                          {"A_over_pi", p.phase_amplitude / std::numbers::pi},
                          {"N_s", p.switch_point},
                          {"loss", p.loss}});
  }
  return Json{{"curve", std::move(points)}}.dump(2) + "\n";
}

std::string emit_summary_json(const std::vector<Contour>& contours) {
  Json list = Json::array();
  for (const Contour& c : contours) {
    Json points = Json::array();
    for (const auto& [v, mfp] : c.points) points.push_back(Json::array({v, mfp}));
    list.push_back(Json{{"product", c.product}, {"points", std::move(points)}});
  }
  return Json{{"contours", std::move(list)}}.dump(2) + "\n";
}

std::string emit_survey_json(const std::vector<Contour>& contours,
                             const std::vector<MaterialRecord>& materials) {
  Json j = Json::parse(emit_summary_json(contours));
  Json rows = Json::array();
  for (const MaterialRecord& m : materials) {
    rows.push_back(Json{{"name", m.name},
                        {"V_MIP", m.v_mip},
                        {"mfp_nm", m.mfp_nm},
                        {"product", m.v_mip * m.mfp_nm},
                        {"source", m.source}});
  }
  j["materials"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string emit_summary_csv(const SwitchPointResult& r) {
  return "switch_point,I_direct,I_diffracted,loss_at_switch,inelastic_loss,efficiency\n" +
         std::to_string(r.switch_point) + "," + format_double(r.I_direct) + "," +
         format_double(r.I_diffracted) + "," + format_double(r.loss_at_switch) + "," +
         format_double(r.inelastic_loss) + "," + format_double(r.efficiency) + "\n";
}

std::string emit_summary_csv(const std::vector<LossCurvePoint>& curve) {
  std::vector<LossCurvePoint> sorted = curve;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.switch_point < b.switch_point; });
  std::string out = "A_over_pi,N_s,loss\n";
  for (const LossCurvePoint& p : sorted) {
    out += format_double(p.phase_amplitude / std::numbers::pi) + "," + std::to_string(p.switch_point) +
           "," + format_double(p.loss) + "\n";
  }
  return out;
}

std::string emit_summary_csv(const std::vector<Contour>& contours) {
  std::string out = "product,V_MIP,mfp_nm\n";
  for (const Contour& c : contours) {
    for (const auto& [v, mfp] : c.points) {
      out += format_double(c.product) + "," + format_double(v) + "," + format_double(mfp) + "\n";
    }
  }
  return out;
}

SwitchPointResult parse_switch_point_json(std::string_view text) {
  const Json j = parse_json(text);
  return json_field([&] {
    SwitchPointResult r;
    r.switch_point = j.at("switch_point").get<int>();
    r.I_direct = j.at("I_direct").get<double>();
    r.I_diffracted = j.at("I_diffracted").get<double>();
    r.loss_at_switch = j.at("loss_at_switch").get<double>();
    r.inelastic_loss = j.at("inelastic_loss").get<double>();
    r.efficiency = j.at("efficiency").get<double>();
    return r;
  });
}

std::vector<LossCurvePoint> parse_loss_curve_json(std::string_view text) {
  const Json j = parse_json(text);
  return json_field([&] {
    std::vector<LossCurvePoint> curve;
    for (const Json& p : j.at("curve")) {
      curve.push_back({p.at("phase_amplitude").get<double>(), p.at("N_s").get<int>(),
                       p.at("loss").get<double>()});
    }
    return curve;
  });
}

std::vector<Contour> parse_contours_json(std::string_view text) {
  const Json j = parse_json(text);
  return json_field([&] {
    std::vector<Contour> contours;
    for (const Json& c : j.at("contours")) {
      Contour contour{c.at("product").get<double>(), {}};
      for (const Json& p : c.at("points")) {
        contour.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
      contours.push_back(std::move(contour));
    }
    return contours;
  });
}

std::vector<MaterialRecord> parse_materials(std::string_view text) {
  const std::vector<std::string_view> lines = lines_of(text);
  if (lines.empty() || trim(lines[0]) != "name\tV_MIP_volts\tmfp_nm\tsource") {
    throw ParseError(1, "material header must be: name<TAB>V_MIP_volts<TAB>mfp_nm<TAB>source");
  }
  std::vector<MaterialRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string_view> cells = split(lines[i], '\t');
    if (cells.size() != 4) throw ParseError(line_no, "expected 4 tab-separated columns");
    try {
      MaterialRecord r{std::string(trim(cells[0])), parse_double(cells[1]), parse_double(cells[2]),
                       std::string(trim(cells[3]))};
      r.validate();
      for (const MaterialRecord& other : records) {
        if (other.name == r.name) throw ValidationError("duplicate material '" + r.name + "'");
      }
      records.push_back(std::move(r));
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return records;
}

std::string emit_materials(const std::vector<MaterialRecord>& records) {
  std::string out = "name\tV_MIP_volts\tmfp_nm\tsource\n";
  for (const MaterialRecord& r : records) {
    out += r.name + "\t" + format_double(r.v_mip) + "\t" + format_double(r.mfp_nm) + "\t" + r.source + "\n";
  }
  return out;
}

// Keep in sync with data/materials.tsv (checked by the io tests).
std::vector<MaterialRecord> bundled_materials() {
  static constexpr std::string_view kTable =
      "name\tV_MIP_volts\tmfp_nm\tsource\n"
      "carbon\t8.6208\t160\tcomputed from A=0.02pi at 1 nm, 200 keV\n"
      "gold\t25.000\t84\tcomputed from A=0.058pi at 1 nm, 200 keV\n";
  return parse_materials(kTable);
}

const MaterialRecord& find_material(const std::vector<MaterialRecord>& records, std::string_view name) {
  for (const MaterialRecord& r : records) {
    if (r.name == name) return r;
  }
  throw ValidationError("unknown material '" + std::string(name) + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw RuntimeError("failed writing '" + path + "'");
}

}  // namespace zenosplit::io
