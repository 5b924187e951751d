#include "nuclib/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <set>

#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace {

using Keys = std::set<std::string, std::less<>>;

const Keys kJobKeys = {"name",  "progenitors", "statics", "exclusions", "radiation",
                       "prune", "outputs",     "plot",    "templates",  "lineage"};
const Keys kRunKeys = {"jobs",    "cache_dir", "out_dir", "base_url",           "offline",    "registry",
                       "timeout_s", "retries", "markers", "parallel_downloads", "validation", "depth_cap"};

std::string where(const YAML::Node& n, const std::string& field) {
  const auto m = n.Mark();
  std::string s = "'" + field + "'";
  if (m.line >= 0) s += " (line " + std::to_string(m.line + 1) + ")";
  return s;
}

[[noreturn]] void bad(const YAML::Node& n, const std::string& field, const std::string& what) {
  throw Error(Errc::config_parse_error, where(n, field) + ": " + what);
}

void require_map(const YAML::Node& n, const std::string& field) {
  if (!n.IsMap()) bad(n, field, "expected a mapping");
}

void check_keys(const YAML::Node& n, const std::string& field, const Keys& allowed) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string msg = where(kv.first, field.empty() ? key : field + "." + key) + ": unknown key";
      throw Error(Errc::unknown_key, msg);
    }
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) bad(n, field, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    bad(n, field, "cannot convert '" + n.Scalar() + "'");
  }
}

double bound(const YAML::Node& n, const std::string& field, double if_null) {
  if (n.IsNull()) return if_null;
  return scalar<double>(n, field);
}

Interval interval(const YAML::Node& n, const std::string& field, Interval defaults) {
  if (!n.IsSequence() || n.size() != 2) bad(n, field, "expected [lo, hi]");
  return {bound(n[0], field, defaults.lo), bound(n[1], field, std::numeric_limits<double>::infinity())};
}

std::string nuclide_spec(const YAML::Node& n, const std::string& field) {
  if (n.IsScalar()) return n.Scalar();
  if (!n.IsMap()) bad(n, field, "expected a nuclide id or {nuclide, level}");
  check_keys(n, field, {"nuclide", "level"});
  if (!n["nuclide"]) bad(n, field, "missing 'nuclide'");
  std::string id = scalar<std::string>(n["nuclide"], field + ".nuclide");
  if (n["level"]) {
    const std::string level = text::to_lower(text::trim(scalar<std::string>(n["level"], field + ".level")));
    if (level != "ground" && level != "0") id += "@" + level;
  }
  return id;
}

std::vector<std::string> nuclide_list(const YAML::Node& n, const std::string& field) {
  std::vector<std::string> out;
  if (!n || n.IsNull()) return out;
  if (!n.IsSequence()) bad(n, field, "expected a list");
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(nuclide_spec(n[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::filesystem::path path_of(const YAML::Node& n, const std::string& field, const std::filesystem::path& base) {
  std::filesystem::path p = scalar<std::string>(n, field);
  return p.is_relative() && !base.empty() ? base / p : p;
}

PruneBounds parse_prune(const YAML::Node& n, const std::string& field) {
  require_map(n, field);
  check_keys(n, field, {"energy_kev", "intensity_percent", "half_life_s"});
  PruneBounds b;
  if (n["energy_kev"]) b.energy_kev = interval(n["energy_kev"], field + ".energy_kev", b.energy_kev);
  if (n["intensity_percent"])
    b.intensity_percent = interval(n["intensity_percent"], field + ".intensity_percent", b.intensity_percent);
  if (n["half_life_s"] && !n["half_life_s"].IsNull())
    b.half_life_seconds = interval(n["half_life_s"], field + ".half_life_s", Interval{});
  try {
    b.validate();
  } catch (const Error& e) {
    bad(n, field, e.what());
  }
  return b;
}

PlotConfig parse_plot(const YAML::Node& n, const std::string& field) {
  PlotConfig p;
  if (n.IsScalar()) {
    p.enabled = scalar<bool>(n, field);
    return p;
  }
  require_map(n, field);
  check_keys(n, field, {"enabled", "windows"});
  if (n["enabled"]) p.enabled = scalar<bool>(n["enabled"], field + ".enabled");
  if (const auto w = n["windows"]) {
    if (!w.IsSequence()) bad(w, field + ".windows", "expected a list");
    p.windows.clear();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string f = field + ".windows[" + std::to_string(i) + "]";
      require_map(w[i], f);
      check_keys(w[i], f, {"energy_kev", "intensity_percent", "annotate", "annotate_min_percent"});
      PlotWindow pw;
      if (w[i]["energy_kev"]) pw.energy_kev = interval(w[i]["energy_kev"], f + ".energy_kev", pw.energy_kev);
      if (w[i]["intensity_percent"])
        pw.intensity_percent = interval(w[i]["intensity_percent"], f + ".intensity_percent", pw.intensity_percent);
      if (w[i]["annotate"]) pw.annotate = scalar<bool>(w[i]["annotate"], f + ".annotate");
      if (w[i]["annotate_min_percent"])
        pw.annotation_min_intensity = scalar<double>(w[i]["annotate_min_percent"], f + ".annotate_min_percent");
      if (pw.energy_kev.lo > pw.energy_kev.hi || pw.intensity_percent.lo > pw.intensity_percent.hi)
        bad(w[i], f, "window interval is empty");
      p.windows.push_back(pw);
    }
  }
  return p;
}

JobConfig parse_job(const YAML::Node& n, const std::string& field, const std::filesystem::path& base,
                    const Keys& allowed) {
  require_map(n, field);
  check_keys(n, field, allowed);
  JobConfig job;
  job.name = n["name"] ? scalar<std::string>(n["name"], field + ".name") : std::string();
  job.recursive_progenitors = nuclide_list(n["progenitors"], field + ".progenitors");
  job.static_nuclides = nuclide_list(n["statics"], field + ".statics");
  job.exclusions = nuclide_list(n["exclusions"], field + ".exclusions");
  if (job.recursive_progenitors.empty() && job.static_nuclides.empty())
    bad(n, field, "a job needs at least one progenitor or static nuclide");
  if (const auto r = n["radiation"]) {
    auto rad = parse_radiation(scalar<std::string>(r, field + ".radiation"));
    if (!rad) bad(r, field + ".radiation", "unknown radiation type '" + r.Scalar() + "'");
    job.radiation = *rad;
  }
  if (n["prune"]) job.prune = parse_prune(n["prune"], field + ".prune");
  if (const auto o = n["outputs"]) {
    if (!o.IsSequence()) bad(o, field + ".outputs", "expected a list");
    job.outputs.clear();
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string f = field + ".outputs[" + std::to_string(i) + "]";
      try {
        job.outputs.push_back(parse_table_format(scalar<std::string>(o[i], f)));
      } catch (const Error& e) {
        if (e.code() != Errc::unsupported_format) throw;
        bad(o[i], f, e.what());
      }
    }
  }
  if (n["plot"]) job.plot = parse_plot(n["plot"], field + ".plot");
  if (const auto t = n["templates"]) {
    if (!t.IsSequence()) bad(t, field + ".templates", "expected a list");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string f = field + ".templates[" + std::to_string(i) + "]";
      require_map(t[i], f);
      check_keys(t[i], f, {"template", "output"});
      if (!t[i]["template"] || !t[i]["output"]) bad(t[i], f, "needs 'template' and 'output'");
      job.templates.push_back({path_of(t[i]["template"], f + ".template", base),
                               scalar<std::string>(t[i]["output"], f + ".output")});
    }
  }
  if (n["lineage"]) job.lineage = scalar<bool>(n["lineage"], field + ".lineage");
  return job;
}

}  // namespace

RunConfig parse_config(std::string_view yaml, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::ParserException& e) {
    throw Error(Errc::config_parse_error, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(Errc::config_parse_error, "the configuration must be a mapping");

  RunConfig cfg;
  const bool single = !root["jobs"];
  Keys allowed = kRunKeys;
  if (single) allowed.insert(kJobKeys.begin(), kJobKeys.end());
  check_keys(root, "", allowed);

  if (root["cache_dir"]) cfg.cache_dir = path_of(root["cache_dir"], "cache_dir", base_dir);
  if (root["out_dir"]) cfg.out_dir = path_of(root["out_dir"], "out_dir", base_dir);
  if (root["base_url"]) cfg.base_url = scalar<std::string>(root["base_url"], "base_url");
  if (root["offline"]) cfg.offline = scalar<bool>(root["offline"], "offline");
  if (root["registry"]) cfg.registry_enabled = scalar<bool>(root["registry"], "registry");
  if (root["timeout_s"]) cfg.timeout_s = scalar<double>(root["timeout_s"], "timeout_s");
  if (root["retries"]) cfg.retries = scalar<int>(root["retries"], "retries");
  if (root["parallel_downloads"]) cfg.parallel_downloads = scalar<int>(root["parallel_downloads"], "parallel_downloads");
  if (root["markers"]) cfg.markers = path_of(root["markers"], "markers", base_dir);
  if (root["depth_cap"]) cfg.depth_cap = scalar<std::size_t>(root["depth_cap"], "depth_cap");
  if (cfg.timeout_s <= 0) bad(root["timeout_s"], "timeout_s", "must be positive");
  if (cfg.retries < 0 || cfg.retries > 3) bad(root["retries"], "retries", "must be between 0 and 3");
  if (cfg.parallel_downloads < 1) bad(root["parallel_downloads"], "parallel_downloads", "must be at least 1");

  if (const auto v = root["validation"]) {
    require_map(v, "validation");
    check_keys(v, "validation", {"cascade", "isomer_threshold_s", "sigmas", "floor_kev"});
    if (v["cascade"]) cfg.validation.cascade = scalar<bool>(v["cascade"], "validation.cascade");
    if (v["isomer_threshold_s"])
      cfg.validation.isomer_threshold_s = scalar<double>(v["isomer_threshold_s"], "validation.isomer_threshold_s");
    if (v["sigmas"]) cfg.validation.tolerance.sigmas = scalar<double>(v["sigmas"], "validation.sigmas");
    if (v["floor_kev"]) cfg.validation.tolerance.floor_kev = scalar<double>(v["floor_kev"], "validation.floor_kev");
  }

  if (single) {
    JobConfig job = parse_job(root, "", base_dir, allowed);
    if (job.name.empty()) job.name = "job1";
    cfg.jobs.push_back(std::move(job));
  } else {
    const auto jobs = root["jobs"];
    if (!jobs.IsSequence() || jobs.size() == 0) bad(jobs, "jobs", "expected a non-empty list");
    std::set<std::string> names;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      JobConfig job = parse_job(jobs[i], "jobs[" + std::to_string(i) + "]", base_dir, kJobKeys);
      if (job.name.empty()) job.name = "job" + std::to_string(i + 1);
      if (!names.insert(job.name).second) bad(jobs[i], "jobs[" + std::to_string(i) + "].name", "duplicate job name");
      cfg.jobs.push_back(std::move(job));
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string body;
  try {
    body = read_text_file(path);
  } catch (const Error& e) {
    throw Error(Errc::config_parse_error, e.what());
  }
  return parse_config(body, path.parent_path());
}

}  // namespace nuclib
