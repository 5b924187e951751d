#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nuclib/config.hpp"
#include "nuclib/error.hpp"
#include "nuclib/export.hpp"
#include "nuclib/identify.hpp"
#include "nuclib/nuclide.hpp"
#include "nuclib/run.hpp"
#include "nuclib/text.hpp"

namespace {

int cmd_generate(const std::string& config_path, const nuclib::RunOptions& opts) {
  const nuclib::RunConfig cfg = nuclib::load_config(config_path);
  const nuclib::RunReport report = nuclib::run(cfg, opts);
  std::cout << report.to_text();
  return report.ok() ? 0 : 1;
}

int cmd_qualify(const std::string& peaks_path, const std::string& library_path, double tol_kev) {
  const auto peaks = nuclib::read_peak_csv(peaks_path);
  const auto lib = nuclib::read_library_csv(library_path);
  for (const auto& m : nuclib::qualify_peaks(peaks, lib, tol_kev)) {
    std::cout << nuclib::text::format_double(m.peak.centroid_kev) << " keV";
    if (m.unassigned()) {
      std::cout << ": unassigned\n";
      continue;
    }
    std::cout << ":\n";
    for (const auto& c : m.candidates) {
      std::cout << "  " << nuclib::format_nuclide_id(c.nuclide) << " " << nuclib::text::format_double(c.energy.kev)
                << " keV";
      if (c.intensity_percent) std::cout << " " << nuclib::text::format_double(*c.intensity_percent) << "%";
      std::cout << " (dE " << nuclib::text::format_double(c.energy.kev - m.peak.centroid_kev) << " keV)\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radionuclide library generator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string cache_dir;
  std::string out_dir;
  bool offline = false;
  bool no_registry = false;
  int jobs = 1;
  auto* gen = app.add_subcommand("generate", "Build libraries from a YAML configuration");
  gen->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  gen->add_flag("--offline", offline, "Use only cached datasets");
  gen->add_option("--cache-dir", cache_dir, "Dataset cache directory");
  gen->add_flag("--no-registry", no_registry, "Do not consult the absence registry");
  gen->add_option("--out-dir", out_dir, "Output directory");
  gen->add_option("--jobs", jobs, "Jobs to run in parallel")->check(CLI::Range(1, 64));

  std::string peaks_path;
  std::string library_path;
  double tol_kev = 1.0;
  auto* qual = app.add_subcommand("qualify", "Match spectrum peaks against a library table");
  qual->add_option("peaks", peaks_path, "Peak list CSV")->required()->check(CLI::ExistingFile);
  qual->add_option("library", library_path, "Library CSV")->required()->check(CLI::ExistingFile);
  qual->add_option("--tol-kev", tol_kev, "Energy tolerance in keV")->required()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      nuclib::RunOptions opts;
      if (offline) opts.offline = true;
      if (!cache_dir.empty()) opts.cache_dir = cache_dir;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      opts.no_registry = no_registry;
      opts.parallel_jobs = jobs;
      return cmd_generate(config_path, opts);
    }
    return cmd_qualify(peaks_path, library_path, tol_kev);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
