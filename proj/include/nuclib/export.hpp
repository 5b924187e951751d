#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nuclib/library.hpp"

namespace nuclib {

enum class TableFormat { csv, html, xml, tex, json };

// csv, html, xml, tex, json (case-insensitive). Throws Error(unsupported_format).
TableFormat parse_table_format(std::string_view name);
std::string_view table_format_name(TableFormat f) noexcept;

// Deterministic rendering; numbers use the shortest round-trip form.
std::string render_table(const RadionuclideLibrary& lib, TableFormat format);

// Writes atomically. Throws Error(io_error).
void export_table(const RadionuclideLibrary& lib, TableFormat format, const std::filesystem::path& path);

// Reads the CSV table back. The radiation type is taken from the rows (gamma
// for a header-only file). Throws Error(header_mismatch | malformed_id).
RadionuclideLibrary parse_library_csv(std::string_view body);
RadionuclideLibrary read_library_csv(const std::filesystem::path& path);

// Sidecar metadata: data source, dataset retrieval times, prune bounds. Kept
// out of the tables so that they stay byte-identical between runs.
std::string render_provenance(const RadionuclideLibrary& lib);

// Mustache-style subset:
//   {{count}} {{radiation}} {{source}}
//   {{#entries}} ... {{/entries}} with entry fields nuclide, name, radiation,
//   energy_kev, energy_unc_kev, intensity_pct, intensity_unc_pct, half_life_s,
//   parent_level_kev, flags, index
//   filters: {{energy_kev | fixed:2}}, {{nuclide | upper}}
// Throws Error(template_syntax_error | unknown_placeholder).
std::string render_template(const RadionuclideLibrary& lib, std::string_view tmpl);
// Renders fully before creating the file, so a bad template writes nothing.
void export_template(const RadionuclideLibrary& lib, std::string_view tmpl, const std::filesystem::path& path);

// Writes body to path through a temporary file and a rename. Throws Error(io_error).
void write_text_file(const std::filesystem::path& path, std::string_view body);
std::string read_text_file(const std::filesystem::path& path);

struct MarkerStyle {
  std::string shape;  // circle, square, triangle, diamond, cross
  std::string color;  // #rrggbb
  std::string label;

  friend bool operator==(const MarkerStyle&, const MarkerStyle&) = default;
};

// Nuclide to marker style, loaded from CSV "nuclide,shape,color,label".
// Nuclides without an entry get a style picked from a fixed palette by a hash
// of their canonical id, so a nuclide looks the same in every plot.
class MarkerRegistry {
 public:
  MarkerRegistry() = default;
  // Throws Error(header_mismatch | malformed_id | unknown_element | io_error).
  static MarkerRegistry parse(std::string_view csv);
  static MarkerRegistry load(const std::filesystem::path& path);

  void set(const Nuclide& n, MarkerStyle style);
  std::optional<MarkerStyle> find(const Nuclide& n) const;
  MarkerStyle style_for(const Nuclide& n) const;

 private:
  std::map<std::string, MarkerStyle> styles_;  // by canonical id
};

MarkerStyle fallback_marker(const Nuclide& n);

struct PlotWindow {
  Interval energy_kev{0.0, std::numeric_limits<double>::infinity()};
  Interval intensity_percent{0.0, std::numeric_limits<double>::infinity()};
  bool annotate = true;
  double annotation_min_intensity = 10.0;
};

struct PlotOptions {
  int width = 960;
  int height = 540;
  std::string title;
};

// Energy on x, emission probability on a log y axis, one marker per entry
// with an intensity. Entries inside an annotating window at or above its
// threshold are labelled with their energy. Without windows nothing is
// annotated.
std::string render_svg(const RadionuclideLibrary& lib, const MarkerRegistry& markers,
                       const std::vector<PlotWindow>& windows, const PlotOptions& opts = {});
void plot_library(const RadionuclideLibrary& lib, const MarkerRegistry& markers,
                  const std::vector<PlotWindow>& windows, const std::filesystem::path& path,
                  const PlotOptions& opts = {});

}  // namespace nuclib
