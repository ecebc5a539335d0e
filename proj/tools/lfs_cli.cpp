// Command-line front end: simulate | analytic | compare | peaks | presets.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lfs/analysis.hpp"
#include "lfs/config.hpp"
#include "lfs/error.hpp"
#include "lfs/runner.hpp"

namespace {

struct ScenarioFlags {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Config file (key = value sections)");
    cmd->add_option("--preset", preset_name, "Named preset; keys in --config override it");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--threads", threads, "Worker threads (default: all cores)")
        ->check(CLI::NonNegativeNumber);
  }

  lfs::ScenarioConfig resolve() const {
    lfs::ScenarioConfig base;
    if (!preset_name.empty()) base = lfs::preset(preset_name);
    if (config_path.empty() && preset_name.empty())
      throw lfs::ConfigError("need --config or --preset");
    lfs::ScenarioConfig cfg = config_path.empty() ? base : lfs::load_config(config_path, base);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    cfg.validate();
    return cfg;
  }

  void apply_threads() const {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
  }
};

lfs::SpectrumColumn parse_column(const std::string& s) {
  if (s == "detection") return lfs::SpectrumColumn::detection;
  if (s == "integrated") return lfs::SpectrumColumn::integrated;
  throw lfs::ConfigError("--column: expected detection|integrated");
}

void print_lines(const lfs::LineAssignment& lines) {
  for (const auto& [j, h] : lines.relative_height)
    std::cout << "line j=" << j << " nu=" << lfs::format_number(lines.peak.at(j).nu_center)
              << " relative_height=" << lfs::format_number(h) << '\n';
  for (const auto& p : lines.unassigned)
    std::cout << "unassigned nu=" << lfs::format_number(p.nu_center)
              << " height=" << lfs::format_number(p.height) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient stimulated-scattering spectra of a dense two-level medium"};
  app.require_subcommand(1);

  ScenarioFlags sim_flags;
  bool serial = false;
  auto* sim = app.add_subcommand("simulate", "Integrate atom and modes, write the spectrum table");
  sim_flags.attach(sim);
  sim->add_flag("--serial", serial, "Use the serial reference sweep");

  ScenarioFlags ana_flags;
  std::string ana_mode;
  auto* ana = app.add_subcommand("analytic", "Write the first-order perturbative spectrum");
  ana_flags.attach(ana);
  ana->add_option("--mode", ana_mode, "exact | long_pulse | short_pulse");

  std::string cmp_a, cmp_b, cmp_out = ".", cmp_column = "detection";
  auto* cmp = app.add_subcommand("compare", "Compare two result tables on the same grid");
  cmp->add_option("a", cmp_a, "First table")->required();
  cmp->add_option("b", cmp_b, "Second table")->required();
  cmp->add_option("--out", cmp_out, "Output directory");
  cmp->add_option("--column", cmp_column, "detection | integrated");

  ScenarioFlags pk_flags;
  std::string pk_file, pk_column = "detection";
  std::optional<double> pk_threshold;
  auto* pk = app.add_subcommand("peaks", "Peak table of a result file (or of a fresh simulation)");
  pk->add_option("table", pk_file, "Result table; omit to simulate --preset/--config");
  pk_flags.attach(pk);
  pk->add_option("--column", pk_column, "detection | integrated");
  pk->add_option("--threshold", pk_threshold, "Relative peak threshold in (0,1)");

  std::string show_preset;
  auto* pre = app.add_subcommand("presets", "List presets, or print one as a config");
  pre->add_option("--preset", show_preset, "Print this preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lfs::kExitConfig;
  }

  try {
    if (*sim) {
      sim_flags.apply_threads();
      const auto files = lfs::run_simulate(sim_flags.resolve(), !serial);
      std::cout << files.table.string() << '\n' << files.manifest.string() << '\n';
    } else if (*ana) {
      auto cfg = ana_flags.resolve();
      if (!ana_mode.empty())
        cfg = lfs::parse_config("[numerics]\nanalytic_mode = " + ana_mode + "\n", cfg);
      const auto files = lfs::run_analytic(cfg);
      std::cout << files.table.string() << '\n';
    } else if (*cmp) {
      const auto out = std::filesystem::path(cmp_out) / "compare.csv";
      const auto r = lfs::run_compare(cmp_a, cmp_b, out, parse_column(cmp_column));
      std::cout << "max_rel_peak_diff=" << lfs::format_number(r.max_rel_peak_diff)
                << " l2_rel=" << lfs::format_number(r.l2_rel) << '\n';
    } else if (*pk) {
      const auto column = parse_column(pk_column);
      std::filesystem::path table = pk_file;
      std::filesystem::path out_dir = pk_flags.out_dir.empty() ? "." : pk_flags.out_dir;
      double threshold = pk_threshold.value_or(0.02);
      std::string stem = "peaks";
      if (table.empty()) {
        pk_flags.apply_threads();
        const auto cfg = pk_flags.resolve();
        table = lfs::run_simulate(cfg).table;
        threshold = pk_threshold.value_or(cfg.numerics.peak_threshold);
        stem = cfg.output.name + "_peaks";
      } else {
        stem = table.stem().string() + "_peaks";
      }
      const auto lines = lfs::run_peaks(table, out_dir / (stem + ".csv"), column, threshold);
      print_lines(lines);
    } else if (*pre) {
      if (show_preset.empty()) {
        for (const auto& n : lfs::preset_names()) std::cout << n << '\n';
      } else {
        std::cout << lfs::write_config(lfs::preset(show_preset));
      }
    }
  } catch (const lfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lfs::kExitConfig;
  } catch (const lfs::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return lfs::kExitConfig;
  } catch (const lfs::InvalidParameter& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return lfs::kExitConfig;
  } catch (const lfs::AccuracyError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return lfs::kExitNumerical;
  } catch (const lfs::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return lfs::kExitNumerical;
  } catch (const lfs::TruncationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return lfs::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lfs::kExitInternal;
  }
  return lfs::kExitOk;
}
