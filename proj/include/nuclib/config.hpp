#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nuclib/export.hpp"
#include "nuclib/level_validation.hpp"
#include "nuclib/library.hpp"

namespace nuclib {

struct PlotConfig {
  bool enabled = true;
  std::vector<PlotWindow> windows{PlotWindow{}};
};

struct TemplateOutput {
  std::filesystem::path template_path;
  std::string file_name;  // written under the output directory
};

struct JobConfig {
  std::string name;
  // Nuclide ids as written; they are parsed when the job runs so that one bad
  // id fails only its own job.
  std::vector<std::string> recursive_progenitors;
  std::vector<std::string> static_nuclides;
  std::vector<std::string> exclusions;
  RadiationType radiation = RadiationType::gamma;
  PruneBounds prune;
  std::vector<TableFormat> outputs{TableFormat::csv};
  PlotConfig plot;
  std::vector<TemplateOutput> templates;
  bool lineage = true;
};

struct RunConfig {
  std::vector<JobConfig> jobs;
  std::filesystem::path cache_dir = "nucdata_cache";
  std::filesystem::path out_dir = "nuclib_out";
  std::string base_url;  // empty: the adapter default
  bool offline = false;
  bool registry_enabled = true;
  double timeout_s = 30.0;
  int retries = 0;
  int parallel_downloads = 4;
  std::optional<std::filesystem::path> markers;
  ValidationConfig validation;
  std::size_t depth_cap = 500;
};

// Strict YAML schema; see README for the keys. A document without "jobs"
// describes a single job through top-level job keys. Relative paths are
// resolved against base_dir.
// Throws Error(config_parse_error | unknown_key).
RunConfig parse_config(std::string_view yaml, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nuclib
