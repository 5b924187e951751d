#include "nuclib/export.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "entry_fields.hpp"
#include "json.hpp"
#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace detail {

std::array<std::string, 9> entry_fields(const LibraryEntry& e) {
  std::string flags;
  if (e.unvalidated) flags = "unvalidated";
  if (e.no_uncertainty) flags += flags.empty() ? "no-uncertainty" : ";no-uncertainty";
  return {format_nuclide_id(e.nuclide),
          std::string(radiation_name(e.radiation)),
          text::format_double(e.energy.kev),
          text::format_double(e.energy.uncertainty_kev),
          e.intensity_percent ? text::format_double(*e.intensity_percent) : std::string(),
          text::format_double(e.intensity_uncertainty),
          e.half_life && !e.half_life->is_stable() ? text::format_double(e.half_life->seconds()) : std::string(),
          text::format_double(e.parent_level.kev),
          flags};
}

}  // namespace detail

namespace {

using detail::entry_fields;
using detail::kTableColumns;

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

std::string tex_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '&': case '%': case '$': case '#': case '_': case '{': case '}':
        out += '\\';
        out += c;
        break;
      case '~': out += "\\textasciitilde{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_csv(const RadionuclideLibrary& lib) {
  std::string out;
  for (std::size_t i = 0; i < kTableColumns.size(); ++i) {
    if (i) out += ',';
    out += kTableColumns[i];
  }
  out += '\n';
  for (const auto& e : lib.entries) {
    const auto f = entry_fields(e);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += text::csv_escape(f[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_html(const RadionuclideLibrary& lib) {
  std::string out = "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>" +
                    std::string(radiation_name(lib.radiation)) + " library</title></head>\n<body>\n<table>\n<thead><tr>";
  for (auto c : kTableColumns) out += "<th>" + std::string(c) + "</th>";
  out += "</tr></thead>\n<tbody>\n";
  for (const auto& e : lib.entries) {
    out += "<tr>";
    for (const auto& f : entry_fields(e)) out += "<td>" + xml_escape(f) + "</td>";
    out += "</tr>\n";
  }
  out += "</tbody>\n</table>\n</body>\n</html>\n";
  return out;
}

std::string render_xml(const RadionuclideLibrary& lib) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<library radiation=\"" +
                    std::string(radiation_name(lib.radiation)) + "\" count=\"" +
                    std::to_string(lib.entries.size()) + "\">\n";
  for (const auto& e : lib.entries) {
    out += "  <entry";
    const auto f = entry_fields(e);
    for (std::size_t i = 0; i < f.size(); ++i)
      out += " " + std::string(kTableColumns[i]) + "=\"" + xml_escape(f[i]) + "\"";
    out += "/>\n";
  }
  out += "</library>\n";
  return out;
}

std::string render_tex(const RadionuclideLibrary& lib) {
  std::string out = "\\begin{tabular}{lllllllll}\n\\hline\n";
  for (std::size_t i = 0; i < kTableColumns.size(); ++i) {
    if (i) out += " & ";
    out += tex_escape(kTableColumns[i]);
  }
  out += " \\\\\n\\hline\n";
  for (const auto& e : lib.entries) {
    const auto f = entry_fields(e);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += " & ";
      out += tex_escape(f[i]);
    }
    out += " \\\\\n";
  }
  out += "\\hline\n\\end{tabular}\n";
  return out;
}

std::string render_json(const RadionuclideLibrary& lib) {
  nlohmann::ordered_json doc;
  doc["radiation"] = radiation_name(lib.radiation);
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : lib.entries) {
    nlohmann::ordered_json j;
    j["nuclide"] = format_nuclide_id(e.nuclide);
    j["radiation"] = radiation_name(e.radiation);
    j["energy_kev"] = e.energy.kev;
    j["energy_unc_kev"] = e.energy.uncertainty_kev;
    j["intensity_pct"] = e.intensity_percent ? nlohmann::ordered_json(*e.intensity_percent) : nullptr;
    j["intensity_unc_pct"] = e.intensity_uncertainty;
    j["half_life_s"] =
        e.half_life && !e.half_life->is_stable() ? nlohmann::ordered_json(e.half_life->seconds()) : nullptr;
    j["parent_level_kev"] = e.parent_level.kev;
    auto flags = nlohmann::ordered_json::array();
    if (e.unvalidated) flags.push_back("unvalidated");
    if (e.no_uncertainty) flags.push_back("no-uncertainty");
    j["flags"] = flags;
    doc["entries"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::optional<double> optional_number(const std::string& s, std::size_t row, const char* column) {
  if (text::trim(s).empty()) return std::nullopt;
  auto v = text::parse_double(s);
  if (!v)
    throw Error(Errc::header_mismatch, "row " + std::to_string(row) + ": " + column + " is not a number: " + s);
  return v;
}

nlohmann::json interval_json(const Interval& i) {
  auto bound = [](double v) { return std::isinf(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return nlohmann::json::array({bound(i.lo), bound(i.hi)});
}

std::string iso_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

TableFormat parse_table_format(std::string_view name) {
  const std::string n = text::to_lower(text::trim(name));
  if (n == "csv") return TableFormat::csv;
  if (n == "html") return TableFormat::html;
  if (n == "xml") return TableFormat::xml;
  if (n == "tex") return TableFormat::tex;
  if (n == "json") return TableFormat::json;
  throw Error(Errc::unsupported_format, "unsupported table format: " + std::string(name));
}

std::string_view table_format_name(TableFormat f) noexcept {
  switch (f) {
    case TableFormat::csv: return "csv";
    case TableFormat::html: return "html";
    case TableFormat::xml: return "xml";
    case TableFormat::tex: return "tex";
    case TableFormat::json: return "json";
  }
  return "csv";
}

std::string render_table(const RadionuclideLibrary& lib, TableFormat format) {
  switch (format) {
    case TableFormat::csv: return render_csv(lib);
    case TableFormat::html: return render_html(lib);
    case TableFormat::xml: return render_xml(lib);
    case TableFormat::tex: return render_tex(lib);
    case TableFormat::json: return render_json(lib);
  }
  throw Error(Errc::unsupported_format, "unsupported table format");
}

void export_table(const RadionuclideLibrary& lib, TableFormat format, const std::filesystem::path& path) {
  write_text_file(path, render_table(lib, format));
}

RadionuclideLibrary parse_library_csv(std::string_view body) {
  const auto rows = text::parse_csv(body);
  if (rows.empty()) throw Error(Errc::header_mismatch, "library table has no header");
  const auto& header = rows.front();
  bool ok = header.size() == kTableColumns.size();
  for (std::size_t i = 0; ok && i < header.size(); ++i) ok = text::trim(header[i]) == kTableColumns[i];
  if (!ok) throw Error(Errc::header_mismatch, "library table header does not match the expected columns");

  RadionuclideLibrary lib;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() == 1 && text::trim(f[0]).empty()) continue;
    if (f.size() != kTableColumns.size())
      throw Error(Errc::header_mismatch, "row " + std::to_string(r) + " has " + std::to_string(f.size()) + " fields");
    LibraryEntry e;
    e.nuclide = parse_nuclide_id(f[0]);
    auto rad = parse_radiation(f[1]);
    if (!rad) throw Error(Errc::header_mismatch, "row " + std::to_string(r) + ": unknown radiation " + f[1]);
    e.radiation = *rad;
    e.energy.kev = optional_number(f[2], r, "energy_kev").value_or(0.0);
    e.energy.uncertainty_kev = optional_number(f[3], r, "energy_unc_kev").value_or(0.0);
    e.intensity_percent = optional_number(f[4], r, "intensity_pct");
    e.intensity_uncertainty = optional_number(f[5], r, "intensity_unc_pct").value_or(0.0);
    if (auto hl = optional_number(f[6], r, "half_life_s")) e.half_life = HalfLife::from_seconds(*hl);
    e.parent_level.kev = optional_number(f[7], r, "parent_level_kev").value_or(0.0);
    e.unvalidated = f[8].find("unvalidated") != std::string::npos;
    e.no_uncertainty = f[8].find("no-uncertainty") != std::string::npos;
    e.source_row = r;
    if (lib.entries.empty()) lib.radiation = e.radiation;
    lib.entries.push_back(std::move(e));
  }
  return lib;
}

RadionuclideLibrary read_library_csv(const std::filesystem::path& path) {
  return parse_library_csv(read_text_file(path));
}

std::string render_provenance(const RadionuclideLibrary& lib) {
  nlohmann::json doc;
  doc["source"] = lib.provenance.source_id;
  doc["radiation"] = radiation_name(lib.radiation);
  doc["entries"] = lib.entries.size();
  if (lib.bounds) {
    doc["bounds"]["energy_kev"] = interval_json(lib.bounds->energy_kev);
    doc["bounds"]["intensity_percent"] = interval_json(lib.bounds->intensity_percent);
    doc["bounds"]["half_life_seconds"] =
        lib.bounds->half_life_seconds ? interval_json(*lib.bounds->half_life_seconds) : nlohmann::json(nullptr);
  } else {
    doc["bounds"] = nullptr;
  }
  doc["datasets"] = nlohmann::json::array();
  for (const auto& d : lib.provenance.datasets)
    doc["datasets"].push_back({{"key", d.key},
                               {"origin", d.origin == DatasetOrigin::cache ? "cache" : "remote"},
                               {"retrieved", iso_utc(d.retrieved)}});
  return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view body) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw Error(Errc::io_error, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io_error, "cannot move output into place: " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nuclib
