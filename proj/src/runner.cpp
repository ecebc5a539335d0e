#include "lfs/runner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lfs/analytic.hpp"
#include "lfs/config.hpp"
#include "lfs/error.hpp"

namespace lfs {

namespace fs = std::filesystem;

Simulation simulate(const ScenarioConfig& config, bool parallel) {
  config.validate();
  Simulation sim;
  sim.trajectory = integrate_atom(config);
  const ModeGrid grid = ModeGrid::from_config(config);
  const double t_det = config.resolved_detection_time();
  const double t_end = config.resolved_t_end();
  sim.spectrum = parallel ? spectrum_sweep(sim.trajectory, grid, t_det, t_end)
                          : spectrum_sweep_serial(sim.trajectory, grid, t_det, t_end);
  sim.spectrum.params = config;
  return sim;
}

Spectrum analytic(const ScenarioConfig& config) {
  config.validate();
  const ModeGrid grid = ModeGrid::from_config(config);
  const double t1 = std::max(0.0, config.resolved_detection_time() - config.pulse.duration_T);
  Spectrum s = perturbative_spectrum(grid, config.B(), config.pulse.rabi_R,
                                     config.pulse.duration_T, t1, config.numerics.analytic_mode,
                                     config.numerics.truncation_J);
  s.params = config;
  return s;
}

std::vector<std::pair<std::string, std::string>> manifest(const ScenarioConfig& config,
                                                          const PolarizationTrajectory* traj) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(write_config(config));
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find(" = ");
    out.emplace_back(section + "." + line.substr(0, eq), line.substr(eq + 3));
  }
  const MediumParams m = config.medium();
  out.emplace_back("derived.B", format_number(config.B()));
  out.emplace_back("derived.C", format_number(m.local_field_C));
  out.emplace_back("derived.pulse_area", format_number(config.pulse.area()));
  out.emplace_back("derived.dt", format_number(config.resolved_dt()));
  out.emplace_back("derived.steps", std::to_string(config.resolved_steps()));
  out.emplace_back("derived.t_end", format_number(config.resolved_t_end()));
  out.emplace_back("derived.detection_time", format_number(config.resolved_detection_time()));
  const int J = config.numerics.truncation_J > 0 ? config.numerics.truncation_J
                                                 : default_truncation(config.B());
  out.emplace_back("derived.truncation_J", std::to_string(J));
  out.emplace_back("derived.seed", "none");
  if (traj) {
    out.emplace_back("result.sigma_T.re", format_number(traj->final_state.coherence.real()));
    out.emplace_back("result.sigma_T.im", format_number(traj->final_state.coherence.imag()));
    out.emplace_back("result.rho22_T", format_number(traj->final_state.pop_excited));
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<double>& SpectrumTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidInput("table has no column '" + name + "'");
  return values[static_cast<std::size_t>(it - columns.begin())];
}

Spectrum SpectrumTable::to_spectrum() const {
  Spectrum s;
  s.nu = column("nu");
  const auto has = [&](const char* n) {
    return std::find(columns.begin(), columns.end(), n) != columns.end();
  };
  s.intensity_at_detection =
      has("I_detection") ? column("I_detection") : std::vector<double>(s.nu.size(), 0.0);
  s.integrated = has("I_integrated") ? column("I_integrated") : std::vector<double>(s.nu.size(), 0.0);
  return s;
}

void write_spectrum_table(std::ostream& out, const std::string& kind, const Spectrum& spectrum,
                          const std::vector<std::pair<std::string, std::string>>& entries,
                          Normalization normalization, bool with_integrated) {
  std::vector<double> det = spectrum.intensity_at_detection;
  std::vector<double> integ = spectrum.integrated;
  if (normalization == Normalization::unit_max) {
    for (auto* col : {&det, &integ}) {
      const double mx = col->empty() ? 0.0 : *std::max_element(col->begin(), col->end());
      if (mx > 0.0)
        for (double& v : *col) v /= mx;
    }
  }
  out << "# lfs " << kind << '\n';
  for (const auto& [k, v] : entries) out << "# " << k << " = " << v << '\n';
  out << "nu,I_detection";
  if (with_integrated) out << ",I_integrated";
  out << '\n';
  for (std::size_t i = 0; i < spectrum.nu.size(); ++i) {
    out << format_number(spectrum.nu[i]) << ',' << format_number(det[i]);
    if (with_integrated) out << ',' << format_number(integ[i]);
    out << '\n';
  }
}

SpectrumTable read_spectrum_table(std::istream& in) {
  SpectrumTable t;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos && line.size() > 2)
        t.manifest[line.substr(2, eq - 2)] = line.substr(eq + 3);
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!have_header) {
      t.columns = fields;
      t.values.resize(fields.size());
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size())
      throw InvalidInput("table line " + std::to_string(line_no) + ": expected " +
                         std::to_string(t.columns.size()) + " fields");
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        t.values[c].push_back(parse_number(fields[c], line_no));
      } catch (const ConfigError& e) {
        throw InvalidInput(std::string("table: ") + e.what());
      }
    }
  }
  if (!have_header) throw InvalidInput("table has no header row");
  return t;
}

SpectrumTable read_spectrum_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return read_spectrum_table(in);
}

// ---------------------------------------------------------------------------

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw ConfigError("output.dir: cannot create '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("output.dir: cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

RunFiles run_simulate(const ScenarioConfig& config, bool parallel) {
  const Simulation sim = simulate(config, parallel);
  const fs::path dir = config.output.dir;
  RunFiles files{dir / (config.output.name + "_spectrum.csv"),
                 dir / (config.output.name + "_manifest.ini")};
  const auto entries = manifest(config, &sim.trajectory);
  {
    auto out = open_output(files.table);
    write_spectrum_table(out, "simulate", sim.spectrum, entries, config.output.normalization);
  }
  {
    auto out = open_output(files.manifest);
    out << write_config(config) << "\n# derived\n";
    for (const auto& [k, v] : entries)
      if (k.rfind("derived.", 0) == 0 || k.rfind("result.", 0) == 0)
        out << "# " << k << " = " << v << '\n';
  }
  return files;
}

RunFiles run_analytic(const ScenarioConfig& config) {
  const Spectrum s = analytic(config);
  const fs::path dir = config.output.dir;
  RunFiles files{dir / (config.output.name + "_analytic.csv"), {}};
  auto out = open_output(files.table);
  write_spectrum_table(out, "analytic", s, manifest(config, nullptr), config.output.normalization);
  return files;
}

SpectrumComparison run_compare(const fs::path& a, const fs::path& b, const fs::path& out_file,
                               SpectrumColumn which) {
  const Spectrum sa = read_spectrum_table(a).to_spectrum();
  const Spectrum sb = read_spectrum_table(b).to_spectrum();
  const SpectrumComparison cmp = compare_spectra(sa, sb, which);
  auto out = open_output(out_file);
  out << "# lfs compare\n# a = " << a.string() << "\n# b = " << b.string() << '\n';
  out << "metric,value\n";
  out << "max_rel_peak_diff," << format_number(cmp.max_rel_peak_diff) << '\n';
  out << "l2_rel," << format_number(cmp.l2_rel) << '\n';
  return cmp;
}

void write_peak_table(std::ostream& out, const PeakSet& peaks, const LineAssignment& lines) {
  out << "# threshold = " << format_number(peaks.threshold_used) << '\n';
  out << "nu_center,height,fwhm,assigned_j\n";
  for (const Peak& p : peaks.peaks) {
    std::string j;
    for (const auto& [order, q] : lines.peak)
      if (q.index == p.index) j = std::to_string(order);
    out << format_number(p.nu_center) << ',' << format_number(p.height) << ','
        << format_number(p.fwhm) << ',' << j << '\n';
  }
}

LineAssignment run_peaks(const fs::path& table, const fs::path& out_file, SpectrumColumn which,
                         double rel_threshold) {
  const SpectrumTable t = read_spectrum_table(table);
  const auto it = t.manifest.find("pulse.rabi");
  if (it == t.manifest.end()) throw InvalidInput("peaks: table manifest lacks pulse.rabi");
  const double R = parse_number(it->second);
  const PeakSet peaks = find_peaks(t.to_spectrum(), rel_threshold, which);
  const LineAssignment lines = line_ratios(peaks, R);
  auto out = open_output(out_file);
  out << "# lfs peaks\n# source = " << table.string() << '\n';
  write_peak_table(out, peaks, lines);
  return lines;
}

}  // namespace lfs
