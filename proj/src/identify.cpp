#include "nuclib/identify.hpp"

#include <algorithm>
#include <cmath>

#include "nuclib/error.hpp"
#include "nuclib/export.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

std::vector<PeakMatch> qualify_peaks(const PeakList& peaks, const RadionuclideLibrary& lib, double tol_kev) {
  std::vector<PeakMatch> out;
  out.reserve(peaks.peaks.size());
  for (const auto& p : peaks.peaks) {
    PeakMatch m{p, {}};
    for (const auto& e : lib.entries)
      if (std::abs(e.energy.kev - p.centroid_kev) <= tol_kev) m.candidates.push_back(e);
    std::stable_sort(m.candidates.begin(), m.candidates.end(), [&](const LibraryEntry& a, const LibraryEntry& b) {
      const double da = std::abs(a.energy.kev - p.centroid_kev), db = std::abs(b.energy.kev - p.centroid_kev);
      if (da != db) return da < db;
      return a.intensity_percent.value_or(-1.0) > b.intensity_percent.value_or(-1.0);
    });
    out.push_back(std::move(m));
  }
  return out;
}

PeakList parse_peak_csv(std::string_view body) {
  PeakList out;
  const auto rows = text::parse_csv(body);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.empty() || (f.size() == 1 && text::trim(f[0]).empty())) continue;
    const auto c = text::parse_double(f[0]);
    if (!c) {
      if (r == 0 && text::to_lower(text::trim(f[0])) == "centroid_kev") continue;
      throw Error(Errc::header_mismatch, "peak row " + std::to_string(r + 1) + ": bad centroid '" + f[0] + "'");
    }
    if (!std::isfinite(*c) || *c < 0)
      throw Error(Errc::header_mismatch, "peak row " + std::to_string(r + 1) + ": centroid must be finite and >= 0");
    Peak p{*c, std::nullopt};
    if (f.size() > 1 && !text::trim(f[1]).empty()) {
      p.net_area = text::parse_double(f[1]);
      if (!p.net_area) throw Error(Errc::header_mismatch, "peak row " + std::to_string(r + 1) + ": bad net area");
    }
    out.peaks.push_back(p);
  }
  return out;
}

PeakList read_peak_csv(const std::filesystem::path& path) { return parse_peak_csv(read_text_file(path)); }

}  // namespace nuclib
