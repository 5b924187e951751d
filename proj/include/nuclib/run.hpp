#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nuclib/config.hpp"
#include "nuclib/data_access.hpp"

namespace nuclib {

// Command-line and test overrides applied on top of the configuration and
// the environment.
struct RunOptions {
  std::optional<bool> offline;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> out_dir;
  bool no_registry = false;
  int parallel_jobs = 1;
  bool use_environment = true;
  std::shared_ptr<HttpTransport> transport;  // default: real HTTP
  bool write_report = true;
};

struct PhaseTimings {
  double subset_s = 0.0;
  double library_s = 0.0;
  double prune_s = 0.0;
  double export_s = 0.0;
};

struct JobReport {
  std::string name;
  bool ok = false;
  std::string error;
  std::size_t subset_size = 0;
  std::size_t entries_pre_prune = 0;
  std::size_t entries_post_prune = 0;
  AccessStats access;
  PhaseTimings phases;
  double wall_s = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

struct RunReport {
  std::vector<JobReport> jobs;
  AccessStats access;
  double wall_s = 0.0;
  std::vector<std::string> warnings;

  bool ok() const;
  std::string to_text() const;
  std::string to_json() const;
};

// Runs every job, writing tables, lineages, plots and template outputs under
// the output directory, plus report.txt and report.json. A failing job is
// recorded in the report and does not stop the others.
RunReport run(const RunConfig& config, const RunOptions& opts = {});

}  // namespace nuclib
