#include "nuclib/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <thread>

#include "json.hpp"
#include "nuclib/chain.hpp"
#include "nuclib/error.hpp"
#include "nuclib/export.hpp"

namespace nuclib {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_s(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

std::string safe_name(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "job" : out;
}

std::vector<Nuclide> parse_ids(const std::vector<std::string>& ids) {
  std::vector<Nuclide> out;
  for (const auto& id : ids) out.push_back(parse_nuclide_id(id));
  return out;
}

JobReport run_job(const JobConfig& job, const RunConfig& cfg, const std::filesystem::path& out_dir,
                  NuclearData& data, const MarkerRegistry& markers) {
  JobReport rep;
  rep.name = job.name;
  StatsSink sink;
  ScopedStats scope(sink);
  const auto t0 = Clock::now();
  try {
    const auto recursive = parse_ids(job.recursive_progenitors);
    const auto statics = parse_ids(job.static_nuclides);
    const auto exclusions = parse_ids(job.exclusions);

    SubsetOptions so;
    so.validation = cfg.validation;
    so.progeny.depth_cap = cfg.depth_cap;
    auto t = Clock::now();
    const RadionuclideSubset subset = assemble_subset(recursive, statics, exclusions, data, so);
    rep.phases.subset_s = seconds_since(t);
    rep.subset_size = subset.members.size();
    rep.warnings = subset.warnings;

    t = Clock::now();
    const RadionuclideLibrary full = assemble_library(subset, job.radiation, data, cfg.validation);
    rep.phases.library_s = seconds_since(t);
    rep.entries_pre_prune = full.entries.size();

    t = Clock::now();
    const RadionuclideLibrary lib = prune(full, job.prune);
    rep.phases.prune_s = seconds_since(t);
    rep.entries_post_prune = lib.entries.size();
    for (const auto& e : lib.entries)
      if (e.unvalidated)
        rep.warnings.push_back(format_nuclide_id(e.nuclide) + " " + std::to_string(e.energy.kev) +
                               " keV: level not validated");

    t = Clock::now();
    const std::string stem = safe_name(job.name);
    const std::filesystem::path dir = out_dir / stem;
    const std::string base = stem + "_" + std::string(radiation_name(job.radiation));
    for (auto f : job.outputs) {
      const auto path = dir / (base + "." + std::string(table_format_name(f)));
      export_table(lib, f, path);
      rep.outputs.push_back(path.string());
    }
    const auto meta = dir / (base + ".meta.json");
    write_text_file(meta, render_provenance(lib));
    rep.outputs.push_back(meta.string());
    if (job.lineage) {
      for (const auto& p : subset.recursive) {
        const auto path = lineage_path(out_dir, p.chain.progenitor);
        write_text_file(path, render_lineage(p.tree));
        rep.outputs.push_back(path.string());
      }
    }
    if (job.plot.enabled) {
      const auto path = dir / (base + ".svg");
      PlotOptions po;
      po.title = job.name + " (" + std::string(radiation_name(job.radiation)) + ")";
      plot_library(lib, markers, job.plot.windows, path, po);
      rep.outputs.push_back(path.string());
    }
    for (const auto& tpl : job.templates) {
      const auto path = dir / tpl.file_name;
      export_template(lib, read_text_file(tpl.template_path), path);
      rep.outputs.push_back(path.string());
    }
    rep.phases.export_s = seconds_since(t);
    rep.ok = true;
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.error = e.what();
  }
  rep.access = sink.snapshot();
  rep.wall_s = seconds_since(t0);
  return rep;
}

nlohmann::ordered_json stats_json(const AccessStats& s) {
  return {{"network_calls", s.network_calls},
          {"cache_hits", s.cache_hits},
          {"registry_skips", s.registry_skips},
          {"absent_recorded", s.absent_recorded}};
}

}  // namespace

bool RunReport::ok() const {
  return std::all_of(jobs.begin(), jobs.end(), [](const JobReport& j) { return j.ok; });
}

std::string RunReport::to_text() const {
  std::string out;
  for (const auto& j : jobs) {
    out += "job " + j.name + ": " + (j.ok ? "ok" : "FAILED: " + j.error) + "\n";
    out += "  subset size: " + std::to_string(j.subset_size) + "\n";
    out += "  entries: " + std::to_string(j.entries_pre_prune) + " before pruning, " +
           std::to_string(j.entries_post_prune) + " after\n";
    out += "  network calls: " + std::to_string(j.access.network_calls) +
           ", cache hits: " + std::to_string(j.access.cache_hits) +
           ", registry skips: " + std::to_string(j.access.registry_skips) +
           ", newly absent: " + std::to_string(j.access.absent_recorded) + "\n";
    out += "  phases: subset " + fmt_s(j.phases.subset_s) + " s, library " + fmt_s(j.phases.library_s) +
           " s, prune " + fmt_s(j.phases.prune_s) + " s, export " + fmt_s(j.phases.export_s) + " s\n";
    out += "  wall time: " + fmt_s(j.wall_s) + " s\n";
    for (const auto& o : j.outputs) out += "  wrote " + o + "\n";
    for (const auto& w : j.warnings) out += "  warning: " + w + "\n";
  }
  for (const auto& w : warnings) out += "warning: " + w + "\n";
  out += "total: " + std::to_string(jobs.size()) + " job(s), network calls " + std::to_string(access.network_calls) +
         ", cache hits " + std::to_string(access.cache_hits) + ", registry skips " +
         std::to_string(access.registry_skips) + ", wall time " + fmt_s(wall_s) + " s\n";
  return out;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["ok"] = ok();
  doc["wall_s"] = wall_s;
  doc["access"] = stats_json(access);
  doc["warnings"] = warnings;
  doc["jobs"] = nlohmann::ordered_json::array();
  for (const auto& j : jobs) {
    nlohmann::ordered_json r;
    r["name"] = j.name;
    r["ok"] = j.ok;
    r["error"] = j.ok ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(j.error);
    r["subset_size"] = j.subset_size;
    r["entries_pre_prune"] = j.entries_pre_prune;
    r["entries_post_prune"] = j.entries_post_prune;
    r["access"] = stats_json(j.access);
    r["phases_s"] = {{"subset", j.phases.subset_s},
                     {"library", j.phases.library_s},
                     {"prune", j.phases.prune_s},
                     {"export", j.phases.export_s}};
    r["wall_s"] = j.wall_s;
    r["outputs"] = j.outputs;
    r["warnings"] = j.warnings;
    doc["jobs"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

RunReport run(const RunConfig& config, const RunOptions& opts) {
  const auto t0 = Clock::now();
  AccessConfig ac;
  ac.cache_dir = config.cache_dir;
  if (!config.base_url.empty()) ac.base_url = config.base_url;
  ac.offline = config.offline;
  ac.registry_enabled = config.registry_enabled;
  ac.timeout = std::chrono::milliseconds(static_cast<long long>(config.timeout_s * 1000));
  ac.max_retries = config.retries;
  ac.max_parallel = config.parallel_downloads;
  if (opts.use_environment) ac.apply_environment();
  if (opts.offline) ac.offline = *opts.offline;
  if (opts.cache_dir) ac.cache_dir = *opts.cache_dir;
  if (opts.no_registry) ac.registry_enabled = false;
  const std::filesystem::path out_dir = opts.out_dir.value_or(config.out_dir);

  DataAccess access(ac, nullptr, opts.transport);
  NuclearData data(access, config.validation.tolerance);
  const MarkerRegistry markers = config.markers ? MarkerRegistry::load(*config.markers) : MarkerRegistry{};

  RunReport report;
  report.jobs.resize(config.jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.jobs.size(); i = next++)
      report.jobs[i] = run_job(config.jobs[i], config, out_dir, data, markers);
  };
  const std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opts.parallel_jobs, 1)), 1,
                                                std::max<std::size_t>(config.jobs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
  }

  report.warnings = data.warnings();
  report.access = access.stats();
  report.wall_s = seconds_since(t0);
  if (opts.write_report) {
    write_text_file(out_dir / "report.txt", report.to_text());
    write_text_file(out_dir / "report.json", report.to_json());
  }
  return report;
}

}  // namespace nuclib
