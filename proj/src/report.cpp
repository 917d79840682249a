#include "franson/report.hpp"

#include "franson/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>

namespace franson {

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {"S. Tanzilli et al.", 2, 448.6, 8.0, 0.0, 0.0},
      {"P. Walther et al. (2-photon)", 2, 395.0, 4800.0, 76.0, 6.4e-5},
      {"T. Nagata et al.", 4, 195.0, 0.04, 77.0, 5.2e-10},
      {"P. Walther et al. (4-photon)", 4, 197.5, 0.06, 76.0, 7.7e-10},
      {"I. Afek et al.", 5, 161.6, 0.015, 80.0, 1.9e-10},
      {"up-converted pairs (published)", 2, 258.3, 2000.0, 4.0, 5e-4},
  };
  return rows;
}

std::string format_probability(double p) {
  if (p == 0.0) return "0";
  return fmt::format("{:.1e}", p);
}

namespace {

class OutputDir {
public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory {}: {}", dir_.string(), ec.message()));
  }

  template <class Writer>
  void write(const std::string& name, Writer&& writer) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
    files_.push_back(path);
  }

  std::vector<std::filesystem::path> files() const { return files_; }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

void add(Summary& s, std::string key, std::string value) { s.emplace_back(std::move(key), std::move(value)); }

template <class T>
void add(Summary& s, std::string key, T value) {
  s.emplace_back(std::move(key), fmt::format("{}", value));
}

void add_calibration(Summary& s, const Scenario& sc) {
  const auto& p = sc.pipeline;
  add(s, "calibration.edge_swing_beta_rad", p.pulse.edge_swing_beta);
  add(s, "calibration.edge_fraction", p.pulse.edge_fraction);
  add(s, "calibration.mode_overlap_visibility", p.interferometer.mode_overlap_visibility);
  add(s, "calibration.two_photon_law",
      std::string(p.interferometer.two_photon_law == ModeOverlapLaw::squared ? "squared" : "linear"));
  add(s, "calibration.quantum_efficiency", p.detector.quantum_efficiency);
  add(s, "calibration.jitter_fwhm_ps", p.detector.jitter_fwhm_ps);
  add(s, "calibration.noise_rate_per_pulse", p.upconversion.noise_rate_per_pulse);
}

double peak_area(const CorrelationHistogram& sig, const CorrelationHistogram& acc, double centre,
                 double half_width) {
  double area = 0.0;
  for (std::size_t i = 0; i < sig.counts.size(); ++i) {
    if (std::abs(sig.bin_center(i) - centre) <= half_width)
      area += static_cast<double>(sig.counts[i]) - static_cast<double>(acc.counts[i]);
  }
  return area;
}

void fit_summary(Summary& s, const FringeScan& scan, OutputDir& out) {
  try {
    const auto fit = fit_fringe(scan);
    out.write("fit.txt", [&](std::ostream& os) { write_fit_report(os, fit); });
    add(s, "fit.status", std::string("ok"));
    add(s, "fit.period_nm", fmt::format("{:.4f}", fit.period_nm));
    add(s, "fit.visibility", fmt::format("{:.4f}", fit.visibility));
    add(s, "fit.phase_rad", fmt::format("{:.4f}", fit.phase_rad));
    add(s, "fit.offset", fmt::format("{:.4f}", fit.offset));
    add(s, "fit.residual_rms", fmt::format("{:.4f}", fit.residual_rms));
  } catch (const FitError& e) {
    out.write("fit.txt", [&](std::ostream& os) { os << "status = failed\nreason = " << e.what() << '\n'; });
    add(s, "fit.status", fmt::format("failed: {}", e.what()));
  }
}

} // namespace

RunResult run_scenario(const Scenario& sc, Command command, int jobs) {
  if (auto errs = validate(sc); !errs.empty()) throw ValidationError(std::move(errs));
  const auto& cfg = sc.pipeline;
  OutputDir out(sc.output_dir);
  RunResult result;
  Summary& s = result.summary;

  add(s, "command", std::string(to_string(command)));
  add(s, "engine", std::string(to_string(sc.engine)));
  add(s, "mode", std::string(to_string(command == Command::classical_fringe ? Mode::classical_beam : sc.mode)));
  add(s, "seed", sc.seed ? fmt::format("{}", *sc.seed) : std::string("none"));
  add_calibration(s, sc);
  const double mu = mean_pairs_per_pulse(cfg.spdc, cfg.pulse);
  add(s, "rates.mean_pairs_per_pulse", mu);
  add(s, "rates.generated_pairs_per_s", mu * cfg.pulse.repetition_rate_mhz * 1e6);
  const double predicted_rate = analytic_coincidence_rate(cfg);
  add(s, "rates.predicted_coincidence_per_s", fmt::format("{:.1f}", predicted_rate));
  add(s, "rates.predicted_event_probability",
      format_probability(event_probability(predicted_rate, cfg.pulse.repetition_rate_mhz)));
  if (!single_photon_coherence_ok(cfg.spdc, cfg.interferometer))
    add(s, "warning", std::string("single-photon coherence time is not << dtau_L; side peaks may interfere"));

  const std::uint64_t seed = sc.seed.value_or(0);

  switch (command) {
  case Command::simulate_histogram: {
    if (sc.engine != Engine::monte_carlo)
      throw ValidationError({"simulate-histogram requires the monte-carlo engine"});
    const auto run = run_histogram(cfg, cfg.pulse.pulse_count, sc.histogram_phase_points, seed, jobs);
    out.write("histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, run.signal); });
    out.write("accidental_histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, run.accidental); });
    if (sc.dump_tags) out.write("tags.txt", [&](std::ostream& os) { write_tags_text(os, run.tags); });

    const double dtau = time_delay(Length::nanometers(cfg.interferometer.delta_L_nm)).ps;
    const auto peaks = find_histogram_peaks(run.signal, std::abs(dtau));
    std::string peak_list;
    for (const double p : peaks) peak_list += fmt::format("{}{:.1f}", peak_list.empty() ? "" : " ", p);
    const double seconds = static_cast<double>(run.pulses) * cfg.pulse.period_ps() * 1e-12;
    const double half = 0.5 * std::abs(dtau);
    add(s, "histogram.pulses", run.pulses);
    add(s, "histogram.phase_points", sc.histogram_phase_points);
    add(s, "histogram.delta_tau_L_ps", fmt::format("{:.2f}", dtau));
    add(s, "histogram.peaks_ps", peak_list.empty() ? std::string("none") : peak_list);
    add(s, "histogram.central_area", peak_area(run.signal, run.accidental, 0.0, half));
    add(s, "histogram.side_minus_area", peak_area(run.signal, run.accidental, -std::abs(dtau), half));
    add(s, "histogram.side_plus_area", peak_area(run.signal, run.accidental, std::abs(dtau), half));
    add(s, "histogram.singles_det1_per_s", fmt::format("{:.1f}", static_cast<double>(run.tags.det1.size()) / seconds));
    add(s, "histogram.singles_det2_per_s", fmt::format("{:.1f}", static_cast<double>(run.tags.det2.size()) / seconds));
    add(s, "histogram.window_coincidences", run.window_coincidences);
    add(s, "histogram.window_accidentals", run.window_accidentals);
    const double net_rate =
        subtract_accidentals(static_cast<double>(run.window_coincidences), static_cast<double>(run.window_accidentals)) / seconds;
    add(s, "histogram.net_coincidence_per_s", fmt::format("{:.1f}", net_rate));
    add(s, "histogram.event_probability", format_probability(event_probability(net_rate, cfg.pulse.repetition_rate_mhz)));
    break;
  }
  case Command::scan_fringe:
  case Command::classical_fringe: {
    const Mode mode = command == Command::classical_fringe ? Mode::classical_beam : sc.mode;
    const auto scan = scan_fringe(cfg, sc.scan, sc.engine, mode, seed, jobs);
    out.write("fringe.csv", [&](std::ostream& os) { write_fringe_csv(os, scan); });
    add(s, "scan.points", scan.samples.size());
    add(s, "scan.step_nm", sc.scan.step_nm);
    add(s, "scan.pulses_per_point", sc.scan.pulses_per_point);
    const auto expected = fringe_period(kFundamentalWavelength,
                                        mode == Mode::classical_beam ? PhaseModel::upconverted_beam() : PhaseModel::pair_sum());
    add(s, "scan.expected_period_nm", fmt::format("{:.4f}", expected.nm));
    fit_summary(s, scan, out);
    const auto model = visibility_model(cfg, sc.profile);
    add(s, "model.visibility",
        fmt::format("{:.4f}", mode == Mode::classical_beam ? model.classical_fringe : model.two_photon));
    break;
  }
  case Command::pulse_profile: {
    const auto prof = pulse_profiles(cfg, sc.profile);
    out.write("profile_A.csv", [&](std::ostream& os) { write_profile_csv(os, prof.bright); });
    out.write("profile_B.csv", [&](std::ostream& os) { write_profile_csv(os, prof.dark); });
    add(s, "profile.delta_L_A_nm", fmt::format("{:.3f}", prof.delta_L_bright_nm));
    add(s, "profile.delta_L_B_nm", fmt::format("{:.3f}", prof.delta_L_dark_nm));
    add(s, "profile.visibility_full", fmt::format("{:.4f}", prof.visibility_full));
    add(s, "profile.visibility_window", fmt::format("{:.4f}", prof.visibility_window));
    add(s, "profile.window_ns", fmt::format("{}-{}", sc.profile.window_begin_ns, sc.profile.window_end_ns));
    break;
  }
  case Command::report_table1: {
    out.write("table1.csv", [&](std::ostream& os) {
      os << "experiment,interfering_photons,fringe_period_nm,event_rate_per_s,repetition_mhz,"
            "event_probability,published_probability\n";
      for (const auto& r : table1_rows()) {
        const bool cw = r.repetition_mhz == 0.0;
        fmt::print(os, "{},{},{},{},{},{},{}\n", r.experiment, r.interfering_photons, r.fringe_period_nm,
                   r.event_rate_per_s, cw ? std::string("cw") : fmt::format("{}", r.repetition_mhz),
                   cw ? std::string("") : format_probability(event_probability(r.event_rate_per_s, r.repetition_mhz)),
                   r.published_probability == 0.0 ? std::string("") : format_probability(r.published_probability));
      }
      const double period = fringe_period(kFundamentalWavelength, PhaseModel::pair_sum()).nm;
      fmt::print(os, "this simulation,2,{:.1f},{:.1f},{},{},\n", period, predicted_rate,
                 cfg.pulse.repetition_rate_mhz,
                 format_probability(event_probability(predicted_rate, cfg.pulse.repetition_rate_mhz)));
    });
    for (const auto& r : table1_rows()) {
      if (r.repetition_mhz == 0.0) continue;
      add(s, "table1." + r.experiment, format_probability(event_probability(r.event_rate_per_s, r.repetition_mhz)));
    }
    break;
  }
  case Command::calibrate: {
    const auto cal = calibrate_visibility(cfg, sc.profile);
    auto calibrated = cfg;
    calibrated.pulse.edge_swing_beta = cal.beta;
    calibrated.interferometer.mode_overlap_visibility = cal.mode_overlap_visibility;
    const double qe = calibrate_quantum_efficiency(calibrated, sc.target_coincidence_rate);
    std::string roots;
    for (const double b : cal.candidate_betas) roots += fmt::format("{}{:.4f}", roots.empty() ? "" : " ", b);
    out.write("calibration.txt", [&](std::ostream& os) {
      fmt::print(os, "edge_swing_beta = {:.4f}\n", cal.beta);
      fmt::print(os, "mode_overlap_visibility = {:.4f}\n", cal.mode_overlap_visibility);
      fmt::print(os, "quantum_efficiency = {:.4f}\n", qe);
      fmt::print(os, "candidate_betas = {}\n", roots);
      fmt::print(os, "classical_full = {:.4f}\n", cal.achieved.classical_full);
      fmt::print(os, "classical_window = {:.4f}\n", cal.achieved.classical_window);
      fmt::print(os, "classical_fringe = {:.4f}\n", cal.achieved.classical_fringe);
      fmt::print(os, "two_photon = {:.4f}\n", cal.achieved.two_photon);
    });
    add(s, "calibrated.edge_swing_beta_rad", fmt::format("{:.4f}", cal.beta));
    add(s, "calibrated.mode_overlap_visibility", fmt::format("{:.4f}", cal.mode_overlap_visibility));
    add(s, "calibrated.quantum_efficiency", fmt::format("{:.4f}", qe));
    add(s, "calibrated.candidate_betas", roots);
    add(s, "calibrated.classical_full", fmt::format("{:.4f}", cal.achieved.classical_full));
    add(s, "calibrated.classical_window", fmt::format("{:.4f}", cal.achieved.classical_window));
    add(s, "calibrated.classical_fringe", fmt::format("{:.4f}", cal.achieved.classical_fringe));
    add(s, "calibrated.two_photon", fmt::format("{:.4f}", cal.achieved.two_photon));
    break;
  }
  }

  out.write("summary.txt", [&](std::ostream& os) {
    for (const auto& [k, v] : s) os << k << " = " << v << '\n';
  });
  result.files = out.files();
  return result;
}

} // namespace franson
