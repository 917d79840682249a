#include "franson/scenario.hpp"

#include "franson/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace franson {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
std::optional<T> parse_number(std::string_view v) {
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    // std::from_chars for double is not available everywhere; strtod is locale-free enough here.
    std::string tmp(v);
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size()) return std::nullopt;
    return out;
  } else {
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) return std::nullopt;
    return out;
  }
}

using Setter = std::function<std::optional<std::string>(Scenario&, std::string_view)>;

template <class Member>
Setter real(Member member) {
  return [member](Scenario& s, std::string_view v) -> std::optional<std::string> {
    auto x = parse_number<double>(v);
    if (!x) return "expected a number";
    std::invoke(member, s) = *x;
    return std::nullopt;
  };
}

template <class Member>
Setter integer(Member member) {
  return [member](Scenario& s, std::string_view v) -> std::optional<std::string> {
    using T = std::remove_reference_t<decltype(std::invoke(member, s))>;
    // Accept "1e6"-style integers as long as they are exact.
    if (auto x = parse_number<T>(v)) {
      std::invoke(member, s) = *x;
      return std::nullopt;
    }
    auto d = parse_number<double>(v);
    if (d && *d == std::floor(*d) && std::abs(*d) < 9.0e15) {
      std::invoke(member, s) = static_cast<T>(*d);
      return std::nullopt;
    }
    return "expected an integer";
  };
}

Setter boolean(std::function<bool&(Scenario&)> member) {
  return [member](Scenario& s, std::string_view v) -> std::optional<std::string> {
    if (v == "true" || v == "1" || v == "yes") member(s) = true;
    else if (v == "false" || v == "0" || v == "no") member(s) = false;
    else return "expected true or false";
    return std::nullopt;
  };
}

template <class E>
Setter choice(std::function<E&(Scenario&)> member, std::vector<std::pair<std::string_view, E>> names) {
  return [member, names](Scenario& s, std::string_view v) -> std::optional<std::string> {
    for (const auto& [n, e] : names) {
      if (n == v) {
        member(s) = e;
        return std::nullopt;
      }
    }
    std::string allowed;
    for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : "|") + std::string(n);
    return "expected one of " + allowed;
  };
}

// Accessor helpers so setters can reach nested members.
#define FIELD(expr) [](Scenario& s) -> auto& { return s.expr; }

const std::map<std::string, std::map<std::string, Setter>, std::less<>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>, std::less<>> table = {
      {"scenario",
       {
           {"engine", choice<Engine>(FIELD(engine), {{"analytic", Engine::analytic},
                                                      {"monte-carlo", Engine::monte_carlo},
                                                      {"mc", Engine::monte_carlo}})},
           {"mode", choice<Mode>(FIELD(mode), {{"quantum-pair", Mode::quantum_pair},
                                               {"classical-beam", Mode::classical_beam}})},
           {"seed", [](Scenario& s, std::string_view v) -> std::optional<std::string> {
              auto x = parse_number<std::uint64_t>(v);
              if (!x) return "expected an unsigned 64-bit integer";
              s.seed = *x;
              return std::nullopt;
            }},
           {"output_dir", [](Scenario& s, std::string_view v) -> std::optional<std::string> {
              if (v.empty()) return "must not be empty";
              s.output_dir = std::string(v);
              return std::nullopt;
            }},
           {"target_coincidence_rate", real(FIELD(target_coincidence_rate))},
       }},
      {"pulse",
       {
           {"repetition_rate_mhz", real(FIELD(pipeline.pulse.repetition_rate_mhz))},
           {"pulse_duration_ns", real(FIELD(pipeline.pulse.pulse_duration_ns))},
           {"envelope_shape",
            choice<EnvelopeShape>(FIELD(pipeline.pulse.envelope_shape),
                                  {{"raised-cosine-flattop", EnvelopeShape::raised_cosine_flattop},
                                   {"gaussian", EnvelopeShape::gaussian}})},
           {"edge_fraction", real(FIELD(pipeline.pulse.edge_fraction))},
           {"center_ns", real(FIELD(pipeline.pulse.center_ns))},
           {"edge_swing_beta", real(FIELD(pipeline.pulse.edge_swing_beta))},
           {"pulse_count", integer(FIELD(pipeline.pulse.pulse_count))},
       }},
      {"spdc",
       {
           {"pump_power_mw", real(FIELD(pipeline.spdc.pump_power_mw))},
           {"pair_yield_per_mw_s", real(FIELD(pipeline.spdc.pair_yield_per_mw_s))},
           {"signal_wavelength_nm", real(FIELD(pipeline.spdc.signal_wavelength_nm))},
           {"single_photon_coherence_ps", real(FIELD(pipeline.spdc.single_photon_coherence_ps))},
           {"spdc_poling_period_um", real(FIELD(pipeline.spdc.spdc_poling_period_um))},
           {"upconversion_poling_period_um", real(FIELD(pipeline.spdc.upconversion_poling_period_um))},
       }},
      {"upconversion",
       {
           {"internal_efficiency", real(FIELD(pipeline.upconversion.internal_efficiency))},
           {"noise_rate_per_pulse", real(FIELD(pipeline.upconversion.noise_rate_per_pulse))},
           {"pump_wavelength_nm", real(FIELD(pipeline.upconversion.pump_wavelength_nm))},
       }},
      {"interferometer",
       {
           {"delta_L_nm", real(FIELD(pipeline.interferometer.delta_L_nm))},
           {"mode_overlap_visibility", real(FIELD(pipeline.interferometer.mode_overlap_visibility))},
           {"splitting_ratio", real(FIELD(pipeline.interferometer.splitting_ratio))},
           {"two_photon_law", choice<ModeOverlapLaw>(FIELD(pipeline.interferometer.two_photon_law),
                                                     {{"linear", ModeOverlapLaw::linear},
                                                      {"squared", ModeOverlapLaw::squared}})},
       }},
      {"detector",
       {
           {"quantum_efficiency", real(FIELD(pipeline.detector.quantum_efficiency))},
           {"jitter_fwhm_ps", real(FIELD(pipeline.detector.jitter_fwhm_ps))},
           {"dead_time_ns", real(FIELD(pipeline.detector.dead_time_ns))},
           {"dark_rate_per_s", real(FIELD(pipeline.detector.dark_rate_per_s))},
       }},
      {"analysis",
       {
           {"coincidence_half_window_ps", real(FIELD(pipeline.analysis.coincidence_half_window_ps))},
           {"histogram_span_ps", real(FIELD(pipeline.analysis.histogram_span_ps))},
           {"accidental_offsets", integer(FIELD(pipeline.analysis.accidental_offsets))},
       }},
      {"scan",
       {
           {"start_nm", real(FIELD(scan.start_nm))},
           {"stop_nm", real(FIELD(scan.stop_nm))},
           {"step_nm", real(FIELD(scan.step_nm))},
           {"pulses_per_point", integer(FIELD(scan.pulses_per_point))},
       }},
      {"histogram",
       {
           {"phase_points", integer(FIELD(histogram_phase_points))},
           {"dump_tags", boolean(FIELD(dump_tags))},
       }},
      {"profile",
       {
           {"t_begin_ns", real(FIELD(profile.t_begin_ns))},
           {"t_end_ns", real(FIELD(profile.t_end_ns))},
           {"step_ns", real(FIELD(profile.step_ns))},
           {"window_begin_ns", real(FIELD(profile.window_begin_ns))},
           {"window_end_ns", real(FIELD(profile.window_end_ns))},
       }},
      {"classical",
       {
           {"photons_per_pulse", real(FIELD(pipeline.classical_photons_per_pulse))},
       }},
  };
  return table;
}

#undef FIELD

} // namespace

std::vector<std::string> validate(const Scenario& s) {
  auto errs = validate(s.pipeline);
  if (s.engine == Engine::monte_carlo && !s.seed)
    errs.emplace_back("scenario.seed is required for the monte-carlo engine");
  if (s.output_dir.empty()) errs.emplace_back("scenario.output_dir must not be empty");
  if (!(s.scan.step_nm > 0.0)) errs.emplace_back("scan.step_nm must be > 0");
  if (!(s.scan.stop_nm >= s.scan.start_nm)) errs.emplace_back("scan.stop_nm must be >= scan.start_nm");
  if (s.scan.pulses_per_point < 0) errs.emplace_back("scan.pulses_per_point must be >= 0");
  if (s.histogram_phase_points < 1) errs.emplace_back("histogram.phase_points must be >= 1");
  const auto& p = s.profile;
  if (!(p.step_ns > 0.0)) errs.emplace_back("profile.step_ns must be > 0");
  if (!(p.t_end_ns > p.t_begin_ns)) errs.emplace_back("profile.t_end_ns must exceed profile.t_begin_ns");
  if (!(p.window_end_ns > p.window_begin_ns))
    errs.emplace_back("profile.window_end_ns must exceed profile.window_begin_ns");
  if (!(s.target_coincidence_rate > 0.0)) errs.emplace_back("scenario.target_coincidence_rate must be > 0");
  return errs;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::vector<std::string> errs;
  const auto& table = schema();
  const std::map<std::string, Setter>* section = nullptr;
  std::string section_name;
  bool saw_scenario = false, saw_engine = false, saw_mode = false, saw_anything = false;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto c = raw.find_first_of("#;"); c != std::string_view::npos) raw = raw.substr(0, c);
    const auto line = trim(raw);
    if (line.empty()) continue;
    saw_anything = true;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back(fmt::format("line {}: malformed section header '{}'", lineno, line));
        section = nullptr;
        continue;
      }
      section_name = std::string(trim(line.substr(1, line.size() - 2)));
      const auto it = table.find(section_name);
      if (it == table.end()) {
        errs.push_back(fmt::format("line {}: unknown section [{}]", lineno, section_name));
        section = nullptr;
      } else {
        section = &it->second;
        saw_scenario = saw_scenario || section_name == "scenario";
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errs.push_back(fmt::format("line {}: expected key = value", lineno));
      continue;
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (!section) {
      if (section_name.empty()) errs.push_back(fmt::format("line {}: key '{}' outside any section", lineno, key));
      continue;
    }
    const auto it = section->find(key);
    if (it == section->end()) {
      errs.push_back(fmt::format("line {}: unknown key '{}' in [{}]", lineno, key, section_name));
      continue;
    }
    if (auto problem = it->second(s, value))
      errs.push_back(fmt::format("{}.{}: {} (got '{}')", section_name, key, *problem, value));
    if (section_name == "scenario" && key == "engine") saw_engine = true;
    if (section_name == "scenario" && key == "mode") saw_mode = true;
  }

  if (!saw_anything) throw ValidationError({"scenario file is empty"});
  if (!saw_scenario) errs.emplace_back("missing [scenario] section");
  if (saw_scenario && !saw_engine) errs.emplace_back("scenario.engine is required");
  if (saw_scenario && !saw_mode) errs.emplace_back("scenario.mode is required");
  auto more = validate(s);
  errs.insert(errs.end(), more.begin(), more.end());
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string_view to_string(Engine e) { return e == Engine::analytic ? "analytic" : "monte-carlo"; }

std::string_view to_string(Mode m) { return m == Mode::quantum_pair ? "quantum-pair" : "classical-beam"; }

std::string_view to_string(Command c) {
  switch (c) {
  case Command::simulate_histogram: return "simulate-histogram";
  case Command::scan_fringe: return "scan-fringe";
  case Command::classical_fringe: return "classical-fringe";
  case Command::pulse_profile: return "pulse-profile";
  case Command::report_table1: return "report-table1";
  case Command::calibrate: return "calibrate";
  }
  return "unknown";
}

std::string to_config_text(const Scenario& s) {
  const auto& p = s.pipeline;
  std::string out;
  auto line = [&](std::string_view k, auto v) { out += fmt::format("{} = {}\n", k, v); };
  out += "[scenario]\n";
  line("engine", to_string(s.engine));
  line("mode", to_string(s.mode));
  if (s.seed) line("seed", *s.seed);
  line("output_dir", s.output_dir);
  line("target_coincidence_rate", s.target_coincidence_rate);
  out += "\n[pulse]\n";
  line("repetition_rate_mhz", p.pulse.repetition_rate_mhz);
  line("pulse_duration_ns", p.pulse.pulse_duration_ns);
  line("envelope_shape", p.pulse.envelope_shape == EnvelopeShape::gaussian ? "gaussian" : "raised-cosine-flattop");
  line("edge_fraction", p.pulse.edge_fraction);
  line("center_ns", p.pulse.center_ns);
  line("edge_swing_beta", p.pulse.edge_swing_beta);
  line("pulse_count", p.pulse.pulse_count);
  out += "\n[spdc]\n";
  line("pump_power_mw", p.spdc.pump_power_mw);
  line("pair_yield_per_mw_s", p.spdc.pair_yield_per_mw_s);
  line("signal_wavelength_nm", p.spdc.signal_wavelength_nm);
  line("single_photon_coherence_ps", p.spdc.single_photon_coherence_ps);
  line("spdc_poling_period_um", p.spdc.spdc_poling_period_um);
  line("upconversion_poling_period_um", p.spdc.upconversion_poling_period_um);
  out += "\n[upconversion]\n";
  line("internal_efficiency", p.upconversion.internal_efficiency);
  line("noise_rate_per_pulse", p.upconversion.noise_rate_per_pulse);
  line("pump_wavelength_nm", p.upconversion.pump_wavelength_nm);
  out += "\n[interferometer]\n";
  line("delta_L_nm", p.interferometer.delta_L_nm);
  line("mode_overlap_visibility", p.interferometer.mode_overlap_visibility);
  line("splitting_ratio", p.interferometer.splitting_ratio);
  line("two_photon_law", p.interferometer.two_photon_law == ModeOverlapLaw::squared ? "squared" : "linear");
  out += "\n[detector]\n";
  line("quantum_efficiency", p.detector.quantum_efficiency);
  line("jitter_fwhm_ps", p.detector.jitter_fwhm_ps);
  line("dead_time_ns", p.detector.dead_time_ns);
  line("dark_rate_per_s", p.detector.dark_rate_per_s);
  out += "\n[analysis]\n";
  line("coincidence_half_window_ps", p.analysis.coincidence_half_window_ps);
  line("histogram_span_ps", p.analysis.histogram_span_ps);
  line("accidental_offsets", p.analysis.accidental_offsets);
  out += "\n[scan]\n";
  line("start_nm", s.scan.start_nm);
  line("stop_nm", s.scan.stop_nm);
  line("step_nm", s.scan.step_nm);
  line("pulses_per_point", s.scan.pulses_per_point);
  out += "\n[histogram]\n";
  line("phase_points", s.histogram_phase_points);
  line("dump_tags", s.dump_tags ? "true" : "false");
  out += "\n[profile]\n";
  line("t_begin_ns", s.profile.t_begin_ns);
  line("t_end_ns", s.profile.t_end_ns);
  line("step_ns", s.profile.step_ns);
  line("window_begin_ns", s.profile.window_begin_ns);
  line("window_end_ns", s.profile.window_end_ns);
  out += "\n[classical]\n";
  line("photons_per_pulse", p.classical_photons_per_pulse);
  return out;
}

namespace {

// Operating point of the up-converted pair experiment. beta, V_mode and qe
// come from `franson_sim calibrate` (see README, "Calibration").
std::string operating_point(std::string_view scenario_block) {
  return fmt::format(R"({}
[pulse]
repetition_rate_mhz = 4
pulse_duration_ns = 7.5
envelope_shape = raised-cosine-flattop
edge_fraction = {}
center_ns = 5
edge_swing_beta = {}
pulse_count = 8000000

[spdc]
pump_power_mw = 9
pair_yield_per_mw_s = 4.0e4
signal_wavelength_nm = 1550
single_photon_coherence_ps = 1

[upconversion]
internal_efficiency = 0.96
noise_rate_per_pulse = 0.01
pump_wavelength_nm = 775

[interferometer]
delta_L_nm = 36000000
mode_overlap_visibility = {}
splitting_ratio = 0.5
two_photon_law = linear

[detector]
quantum_efficiency = {}
jitter_fwhm_ps = {}
dead_time_ns = 50
dark_rate_per_s = 100

[analysis]
coincidence_half_window_ps = 46
histogram_span_ps = 400
accidental_offsets = 1

[scan]
start_nm = 36000000
stop_nm = 36001600
step_nm = 6
pulses_per_point = 100000

[histogram]
phase_points = 12

[profile]
t_begin_ns = 0
t_end_ns = 10
step_ns = 0.01
window_begin_ns = 2.5
window_end_ns = 7.5

[classical]
photons_per_pulse = 0.05
)",
                     scenario_block, kCalibratedEdgeFraction, kCalibratedBeta, kCalibratedModeOverlap,
                     kCalibratedQuantumEfficiency, kCalibratedJitterFwhm_ps);
}

} // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"fig2", Command::simulate_histogram,
       "correlation histogram at dL = 36 mm, fringe-phase averaged",
       operating_point("[scenario]\nengine = monte-carlo\nmode = quantum-pair\nseed = 2016\noutput_dir = out/fig2\n")},
      {"fig3a", Command::scan_fringe, "two-photon fringe scan, 6 nm steps, 1e5 pulses per point",
       operating_point("[scenario]\nengine = monte-carlo\nmode = quantum-pair\nseed = 3001\noutput_dir = out/fig3a\n")},
      {"fig3b", Command::classical_fringe, "classical up-converted beam fringe scan",
       operating_point("[scenario]\nengine = monte-carlo\nmode = classical-beam\nseed = 3002\noutput_dir = out/fig3b\n")},
      {"fig4", Command::pulse_profile, "pulse profiles at bright and dark classical fringe positions",
       operating_point("[scenario]\nengine = analytic\nmode = classical-beam\noutput_dir = out/fig4\n")},
      {"table1", Command::report_table1, "event-probability comparison table",
       operating_point("[scenario]\nengine = analytic\nmode = quantum-pair\noutput_dir = out/table1\n")},
      {"calibration", Command::calibrate, "re-derive beta, V_mode and qe from the visibility and rate targets",
       operating_point("[scenario]\nengine = analytic\nmode = classical-beam\noutput_dir = out/calibration\n")},
  };
  return all;
}

const Preset& find_preset(std::string_view name) {
  const auto& all = presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == name; });
  if (it == all.end()) {
    std::string names;
    for (const auto& p : all) names += (names.empty() ? "" : ", ") + p.name;
    throw ValidationError({fmt::format("unknown preset '{}' (available: {})", name, names)});
  }
  return *it;
}

} // namespace franson
