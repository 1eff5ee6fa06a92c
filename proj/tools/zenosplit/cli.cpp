#include "zenosplit/cli.hpp"

#include <algorithm>
#include <numbers>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "zenosplit/analysis.hpp"
#include "zenosplit/io.hpp"

namespace zenosplit::cli {
namespace {

struct Globals {
  std::string out;
  std::string format;  // empty = command default
  bool quiet = false;
};

struct ApertureFlags {
  std::vector<int> orders{0, 1};
  bool none = false;

  void attach(CLI::App& cmd) {
    auto* aperture = cmd.add_option("--aperture", orders, "Orders passed by the aperture")
                         ->delimiter(',')
                         ->capture_default_str();
    cmd.add_flag("--no-aperture", none, "Run without an aperture")->excludes(aperture);
  }
  std::optional<ApertureSpec> spec() const {
    if (none) return std::nullopt;
    return ApertureSpec{{orders.begin(), orders.end()}};
  }
};

struct Preset {
  double a_over_pi;
  double thickness_nm;
  double mfp_nm;
};

std::optional<Preset> preset(const std::string& name) {
  if (name == "carbon") return Preset{0.02, 1.0, 160.0};
  if (name == "gold") return Preset{0.058, 1.0, 84.0};
  return std::nullopt;
}

double radians(double a_over_pi) { return a_over_pi * std::numbers::pi; }

class Runner {
 public:
  Runner(const Globals& globals, std::ostream& out, std::ostream& err)
      : globals_(globals), out_(out), err_(err) {}

  io::OutputFormat format(io::OutputFormat fallback) const {
    if (globals_.format == "csv") return io::OutputFormat::csv;
    if (globals_.format == "json") return io::OutputFormat::json;
    return fallback;
  }

  void emit(const std::string& text, const std::string& path_override = {}) const {
    const std::string& path = globals_.out.empty() ? path_override : globals_.out;
    if (path.empty()) {
      out_ << text;
      return;
    }
    io::write_file(path, text);
    if (!globals_.quiet) err_ << "zenosplit: wrote " << path << "\n";
  }

  void trace(const IntensityTrace& t, io::OutputFormat fallback = io::OutputFormat::csv,
             const std::string& path = {}) const {
    emit(format(fallback) == io::OutputFormat::csv ? io::emit_trace_csv(t) : io::emit_trace_json(t),
         path);
  }

  template <typename Summary>
  void summary(const Summary& s) const {
    emit(format(io::OutputFormat::json) == io::OutputFormat::json ? io::emit_summary_json(s)
                                                                  : io::emit_summary_csv(s));
  }

 private:
  const Globals& globals_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-pass phase-grating beam splitter simulator", "zenosplit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--out", globals.out, "Write results to this file instead of standard output");
  app.add_option("--format", globals.format, "Output format (default: csv for traces, json for summaries)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", globals.quiet, "Suppress informational messages");

  // two-beam
  double tb_ratio = 0.0;
  int tb_passes = 0;
  auto* two_beam = app.add_subcommand("two-beam", "Two-beam crystal trace, I_0 and I_1 per pass");
  two_beam->add_option("--t-over-xi", tb_ratio, "Crystal thickness over extinction distance")->required();
  two_beam->add_option("--passes", tb_passes, "Number of passes")->required();

  // grating
  double gr_a = 0.0;
  int gr_m = kDefaultTruncation;
  int gr_passes = 0;
  std::vector<int> gr_tracked{0, 1};
  std::optional<double> gr_thickness, gr_mfp;
  ApertureFlags gr_aperture;
  auto* grating = app.add_subcommand("grating", "Sinusoidal grating trace with optional aperture");
  grating->add_option("--A-over-pi", gr_a, "Phase amplitude in units of pi")->required();
  grating->add_option("--M", gr_m, "Truncation half-width")->capture_default_str();
  grating->add_option("--passes", gr_passes, "Number of passes")->required();
  grating->add_option("--tracked", gr_tracked, "Orders to record")->delimiter(',')->capture_default_str();
  auto* gr_t = grating->add_option("--thickness-nm", gr_thickness, "Grating thickness (enables attenuation)");
  auto* gr_l = grating->add_option("--mfp-nm", gr_mfp, "Inelastic mean free path (enables attenuation)");
  gr_t->needs(gr_l);
  gr_l->needs(gr_t);
  gr_aperture.attach(*grating);

  // switch-point
  std::optional<double> sp_a, sp_ratio;
  int sp_m = kDefaultTruncation;
  int sp_passes = 0;
  int sp_target = 1;
  ApertureFlags sp_aperture;
  auto* switch_point = app.add_subcommand("switch-point", "Switch point and intensities at it");
  auto* sp_a_opt = switch_point->add_option("--A-over-pi", sp_a, "Sinusoidal phase amplitude in units of pi");
  auto* sp_r_opt = switch_point->add_option("--t-over-xi", sp_ratio, "Two-beam crystal thickness ratio");
  sp_a_opt->excludes(sp_r_opt);
  switch_point->add_option("--M", sp_m, "Truncation half-width")->capture_default_str();
  switch_point->add_option("--passes", sp_passes, "Pass budget N_max (default: estimated)");
  switch_point->add_option("--target", sp_target, "Diffracted order")->capture_default_str();
  sp_aperture.attach(*switch_point);

  // loss-curve
  std::vector<double> lc_amplitudes;
  int lc_m = kDefaultTruncation;
  std::vector<int> lc_aperture{0, 1};
  auto* loss = app.add_subcommand("loss-curve", "Diffraction loss at the switch point per amplitude");
  loss->add_option("--amplitudes", lc_amplitudes, "Phase amplitudes in units of pi")
      ->delimiter(',')
      ->required();
  loss->add_option("--M", lc_m, "Truncation half-width")->capture_default_str();
  loss->add_option("--aperture", lc_aperture, "Orders passed by the aperture")
      ->delimiter(',')
      ->capture_default_str();

  // inelastic
  std::string in_material = "carbon";
  std::optional<double> in_a, in_thickness, in_mfp;
  int in_m = kDefaultTruncation;
  double in_energy = 200.0;
  std::string in_rule = "unitary";
  auto* inelastic = app.add_subcommand("inelastic", "Efficiency at the switch point with inelastic loss");
  inelastic->add_option("--material", in_material, "Preset: carbon, gold or custom")
      ->check(CLI::IsMember({"carbon", "gold", "custom"}))
      ->capture_default_str();
  inelastic->add_option("--A-over-pi", in_a, "Phase amplitude in units of pi (overrides preset)");
  inelastic->add_option("--thickness-nm", in_thickness, "Grating thickness (overrides preset)");
  inelastic->add_option("--mfp-nm", in_mfp, "Inelastic mean free path (overrides preset)");
  inelastic->add_option("--M", in_m, "Truncation half-width")->capture_default_str();
  inelastic->add_option("--energy-kev", in_energy, "Electron energy for the transmission estimate")
      ->capture_default_str();
  inelastic->add_option("--rule", in_rule, "Switch point from the unitary or the attenuated trace")
      ->check(CLI::IsMember({"unitary", "attenuated"}))
      ->capture_default_str();

  // materials
  std::vector<double> mt_products{1200.0, 1600.0, 2000.0};
  std::vector<double> mt_range{5.0, 30.0};
  int mt_samples = 26;
  std::string mt_dataset;
  auto* materials = app.add_subcommand("materials", "Constant V_MIP*lambda contours and material table");
  materials->add_option("--contours", mt_products, "MIP-MFP products in nm V")
      ->delimiter(',')
      ->capture_default_str();
  materials->add_option("--vmip-range", mt_range, "V_MIP range lo,hi in volts")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  materials->add_option("--samples", mt_samples, "Points per contour")->capture_default_str();
  materials->add_option("--dataset", mt_dataset, "Material table (name, V_MIP_volts, mfp_nm, source)");

  // vortex
  int vx_charge = 2;
  double vx_a = 0.0;
  int vx_m = kDefaultTruncation;
  int vx_passes = 0;
  auto* vortex = app.add_subcommand("vortex", "Fork hologram selecting one vortex order");
  vortex->add_option("--charge", vx_charge, "Topological charge l")->required();
  vortex->add_option("--A-over-pi", vx_a, "Phase amplitude in units of pi")->required();
  vortex->add_option("--M", vx_m, "Truncation half-width")->capture_default_str();
  vortex->add_option("--passes", vx_passes, "Pass budget N_max (default: estimated)");

  // run
  std::string run_config;
  auto* run = app.add_subcommand("run", "Execute a scenario file");
  run->add_option("--config", run_config, "Scenario file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Runner runner(globals, out, err);
  try {
    if (*two_beam) {
      ScenarioConfig config;
      config.grating.kind = GratingKind::crystal_two_beam;
      config.grating.t_over_xi = tb_ratio;
      config.max_passes = tb_passes;
      runner.trace(propagate(config));
    } else if (*grating) {
      ScenarioConfig config;
      config.grating.phase_amplitude = radians(gr_a);
      config.grating.thickness_nm = gr_thickness;
      config.grating.mfp_nm = gr_mfp;
      config.attenuation_enabled = gr_thickness.has_value();
      config.truncation = gr_m;
      config.max_passes = gr_passes;
      config.tracked_orders = gr_tracked;
      config.aperture = gr_aperture.spec();
      runner.trace(propagate(config));
    } else if (*switch_point) {
      if (!sp_a && !sp_ratio) throw ValidationError("switch-point needs --A-over-pi or --t-over-xi");
      ScenarioConfig config;
      config.tracked_orders = {0, sp_target};
      if (sp_ratio) {
        config.grating.kind = GratingKind::crystal_two_beam;
        config.grating.t_over_xi = *sp_ratio;
        config.max_passes = sp_passes > 0 ? sp_passes : 4 * static_cast<int>(0.5 / std::max(*sp_ratio, 1e-6)) + 8;
      } else {
        config.grating.phase_amplitude = radians(*sp_a);
        config.truncation = sp_m;
        config.aperture = sp_aperture.spec();
        config.max_passes = sp_passes > 0 ? sp_passes
                                          : suggested_pass_budget(config.grating.phase_amplitude, sp_target);
      }
      runner.summary(find_switch_point(config));
    } else if (*loss) {
      std::vector<double> amplitudes;
      for (double a : lc_amplitudes) amplitudes.push_back(radians(a));
      runner.summary(loss_curve(amplitudes, ApertureSpec{{lc_aperture.begin(), lc_aperture.end()}}, lc_m));
    } else if (*inelastic) {
      const std::optional<Preset> base = preset(in_material);
      if (!base && (!in_a || !in_thickness || !in_mfp)) {
        throw ValidationError("--material custom needs --A-over-pi, --thickness-nm and --mfp-nm");
      }
      const double a = radians(in_a.value_or(base ? base->a_over_pi : 0.0));
      ScenarioConfig config;
      config.grating.phase_amplitude = a;
      config.grating.thickness_nm = in_thickness.value_or(base ? base->thickness_nm : 0.0);
      config.grating.mfp_nm = in_mfp.value_or(base ? base->mfp_nm : 0.0);
      config.attenuation_enabled = true;
      config.aperture = ApertureSpec{{0, 1}};
      config.truncation = in_m;
      config.max_passes = suggested_pass_budget(a, 1);
      const SwitchPointRule rule =
          in_rule == "attenuated" ? SwitchPointRule::attenuated_maximum : SwitchPointRule::unitary_maximum;
      const SwitchPointResult result = inelastic_efficiency(config, rule);

      // V_MIP implied by the per-pass phase at this thickness and energy.
      const double c = interaction_constant(in_energy);
      const double t = *config.grating.thickness_nm;
      const double v_mip = a / (c * t);
      const double total_phase = result.switch_point * a;
      const double estimate = efficiency_estimate(total_phase, v_mip, *config.grating.mfp_nm, c);
      if (runner.format(io::OutputFormat::json) == io::OutputFormat::json) {
        runner.emit(io::emit_summary_json(result, {{"V_MIP", v_mip},
                                                   {"interaction_constant", c},
                                                   {"efficiency_estimate", estimate}}));
      } else {
        runner.emit(io::emit_summary_csv(result));
      }
    } else if (*materials) {
      const std::vector<MaterialRecord> table =
          mt_dataset.empty() ? io::bundled_materials() : io::parse_materials(io::read_file(mt_dataset));
      const std::vector<Contour> contours = mip_mfp_contours(mt_products, mt_range[0], mt_range[1], mt_samples);
      if (runner.format(io::OutputFormat::json) == io::OutputFormat::json) {
        runner.emit(io::emit_survey_json(contours, table));
      } else {
        runner.emit(io::emit_summary_csv(contours));
      }
    } else if (*vortex) {
      runner.summary(vortex_selection(radians(vx_a), vx_charge, vx_m, vx_passes));
    } else if (*run) {
      const io::Scenario scenario = io::parse_scenario(io::read_file(run_config));
      runner.trace(propagate(scenario.config), scenario.output.format, scenario.output.path);
    }
  } catch (const ValidationError& e) {
    err << "zenosplit: invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "zenosplit: error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}

}  // namespace zenosplit::cli
