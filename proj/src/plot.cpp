#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "nuclib/error.hpp"
#include "nuclib/export.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace {

constexpr std::string_view kShapes[] = {"circle", "square", "triangle", "diamond", "cross"};
constexpr std::string_view kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                         "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                         "#8c6d31", "#843c39", "#7b4173", "#3182bd"};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool valid_color(std::string_view c) {
  if (c.size() != 7 || c[0] != '#') return false;
  return std::all_of(c.begin() + 1, c.end(), [](unsigned char x) { return std::isxdigit(x); });
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string marker_svg(const MarkerStyle& s, double x, double y, const std::string& id, std::string_view cls) {
  const double r = 4.0;
  std::string g = "<g class=\"" + std::string(cls) + "\" data-nuclide=\"" + xml_escape(id) + "\" data-shape=\"" + s.shape +
                  "\" fill=\"" + s.color + "\" stroke=\"" + s.color + "\">";
  if (s.shape == "square") {
    g += "<rect x=\"" + num(x - r) + "\" y=\"" + num(y - r) + "\" width=\"" + num(2 * r) + "\" height=\"" +
         num(2 * r) + "\"/>";
  } else if (s.shape == "triangle") {
    g += "<polygon points=\"" + num(x) + "," + num(y - r) + " " + num(x - r) + "," + num(y + r) + " " +
         num(x + r) + "," + num(y + r) + "\"/>";
  } else if (s.shape == "diamond") {
    g += "<polygon points=\"" + num(x) + "," + num(y - r) + " " + num(x + r) + "," + num(y) + " " + num(x) + "," +
         num(y + r) + " " + num(x - r) + "," + num(y) + "\"/>";
  } else if (s.shape == "cross") {
    g += "<path d=\"M" + num(x - r) + " " + num(y - r) + "L" + num(x + r) + " " + num(y + r) + "M" + num(x - r) +
         " " + num(y + r) + "L" + num(x + r) + " " + num(y - r) + "\" fill=\"none\" stroke-width=\"1.5\"/>";
  } else {
    g += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\"/>";
  }
  return g + "</g>";
}

double nice_step(double span) {
  const double raw = span / 8.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

MarkerStyle fallback_marker(const Nuclide& n) {
  const std::string id = format_nuclide_id(n);
  const std::uint64_t h = fnv1a(id);
  return {std::string(kShapes[h % std::size(kShapes)]),
          std::string(kPalette[(h / std::size(kShapes)) % std::size(kPalette)]), display_name(n)};
}

MarkerRegistry MarkerRegistry::parse(std::string_view csv) {
  const auto rows = text::parse_csv(csv);
  if (rows.empty()) throw Error(Errc::header_mismatch, "marker registry has no header");
  const std::vector<std::string> expected = {"nuclide", "shape", "color", "label"};
  std::vector<std::string> header;
  for (const auto& h : rows.front()) header.push_back(text::to_lower(text::trim(h)));
  if (header != expected) throw Error(Errc::header_mismatch, "marker registry header must be nuclide,shape,color,label");

  MarkerRegistry reg;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() == 1 && text::trim(f[0]).empty()) continue;
    if (f.size() != 4) throw Error(Errc::header_mismatch, "marker registry row " + std::to_string(r) + " needs 4 fields");
    const Nuclide n = parse_nuclide_id(f[0]);
    MarkerStyle s{text::to_lower(text::trim(f[1])), text::to_lower(text::trim(f[2])), std::string(text::trim(f[3]))};
    if (std::find(std::begin(kShapes), std::end(kShapes), s.shape) == std::end(kShapes))
      throw Error(Errc::header_mismatch, "marker registry row " + std::to_string(r) + ": unknown shape " + s.shape);
    if (!valid_color(s.color))
      throw Error(Errc::header_mismatch, "marker registry row " + std::to_string(r) + ": color must be #rrggbb");
    if (s.label.empty()) s.label = display_name(n);
    reg.set(n, std::move(s));
  }
  return reg;
}

MarkerRegistry MarkerRegistry::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

void MarkerRegistry::set(const Nuclide& n, MarkerStyle style) { styles_[format_nuclide_id(n)] = std::move(style); }

std::optional<MarkerStyle> MarkerRegistry::find(const Nuclide& n) const {
  if (auto it = styles_.find(format_nuclide_id(n)); it != styles_.end()) return it->second;
  return std::nullopt;
}

MarkerStyle MarkerRegistry::style_for(const Nuclide& n) const { return find(n).value_or(fallback_marker(n)); }

std::string render_svg(const RadionuclideLibrary& lib, const MarkerRegistry& markers,
                       const std::vector<PlotWindow>& windows, const PlotOptions& opts) {
  const double W = opts.width, H = opts.height;
  const double left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  std::vector<const LibraryEntry*> shown;
  for (const auto& e : lib.entries)
    if (e.intensity_percent && *e.intensity_percent > 0.0) shown.push_back(&e);

  double emin = 0, emax = 1, dlo = -3, dhi = 2;
  if (!shown.empty()) {
    emin = emax = shown.front()->energy.kev;
    double imin = *shown.front()->intensity_percent, imax = imin;
    for (const auto* e : shown) {
      emin = std::min(emin, e->energy.kev);
      emax = std::max(emax, e->energy.kev);
      imin = std::min(imin, *e->intensity_percent);
      imax = std::max(imax, *e->intensity_percent);
    }
    const double pad = std::max((emax - emin) * 0.05, 1.0);
    emin = std::max(0.0, emin - pad);
    emax += pad;
    dlo = std::floor(std::log10(imin));
    dhi = std::ceil(std::log10(imax));
    if (dhi <= dlo) dhi = dlo + 1;
  }
  auto xpos = [&](double e) { return left + (e - emin) / (emax - emin) * pw; };
  auto ypos = [&](double i) { return top + (dhi - std::log10(i)) / (dhi - dlo) * ph; };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(opts.width) + "\" height=\"" + std::to_string(opts.height) + "\" viewBox=\"0 0 " +
                    std::to_string(opts.width) + " " + std::to_string(opts.height) +
                    "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  const std::string title =
      opts.title.empty() ? std::string(radiation_name(lib.radiation)) + " library" : opts.title;
  svg += "<text class=\"title\" x=\"" + num(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         xml_escape(title) + "</text>\n";

  svg += "<g class=\"axes\" stroke=\"#000000\" fill=\"none\">";
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) + "\"/>";
  svg += "</g>\n<g class=\"ticks\">";
  const double step = nice_step(emax - emin);
  for (long k = static_cast<long>(std::ceil(emin / step)); k * step <= emax + 1e-9; ++k) {
    const double t = k * step;
    const double x = xpos(t);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(x) + "\" y2=\"" + num(top + ph + 5) +
           "\" stroke=\"#000000\"/><text x=\"" + num(x) + "\" y=\"" + num(top + ph + 18) +
           "\" text-anchor=\"middle\">" + text::format_double(std::round(t * 1e6) / 1e6) + "</text>";
  }
  for (int d = static_cast<int>(dlo); d <= static_cast<int>(dhi); ++d) {
    const double y = ypos(std::pow(10.0, d));
    char label[16];
    std::snprintf(label, sizeof label, "1e%d", d);
    svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) + "\" y2=\"" + num(y) +
           "\" stroke=\"#000000\"/><text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           label + "</text>";
  }
  svg += "</g>\n";
  svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\">Energy (keV)</text>\n";
  svg += "<text transform=\"translate(16 " + num(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">Emission probability (%)</text>\n";

  svg += "<g class=\"data\">\n";
  std::string labels;
  for (const auto* e : shown) {
    const double x = xpos(e->energy.kev), y = ypos(*e->intensity_percent);
    svg += marker_svg(markers.style_for(e->nuclide), x, y, format_nuclide_id(e->nuclide), "marker") + "\n";
    const bool annotate = std::any_of(windows.begin(), windows.end(), [&](const PlotWindow& w) {
      return w.annotate && w.energy_kev.contains(e->energy.kev) && w.intensity_percent.contains(*e->intensity_percent) &&
             *e->intensity_percent >= w.annotation_min_intensity;
    });
    if (annotate)
      labels += "<text class=\"label\" x=\"" + num(x + 5) + "\" y=\"" + num(y - 6) + "\">" +
                text::format_double(e->energy.kev) + "</text>\n";
  }
  svg += labels + "</g>\n";

  svg += "<g class=\"legend\">\n";
  double ly = top + 10;
  for (const auto& n : emitters(lib)) {
    const MarkerStyle s = markers.style_for(n);
    svg += marker_svg(s, left + pw + 20, ly, format_nuclide_id(n), "legend-marker") + "<text x=\"" + num(left + pw + 32) + "\" y=\"" +
           num(ly + 4) + "\">" + xml_escape(s.label) + "</text>\n";
    ly += 16;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void plot_library(const RadionuclideLibrary& lib, const MarkerRegistry& markers,
                  const std::vector<PlotWindow>& windows, const std::filesystem::path& path, const PlotOptions& opts) {
  write_text_file(path, render_svg(lib, markers, windows, opts));
}

}  // namespace nuclib
