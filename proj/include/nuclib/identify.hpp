#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "nuclib/library.hpp"

namespace nuclib {

struct Peak {
  double centroid_kev = 0.0;
  std::optional<double> net_area;

  friend bool operator==(const Peak&, const Peak&) = default;
};

struct PeakList {
  std::vector<Peak> peaks;
};

struct PeakMatch {
  Peak peak;
  // Entries within tolerance, closest first, then by descending intensity.
  std::vector<LibraryEntry> candidates;
  bool unassigned() const noexcept { return candidates.empty(); }
};

// A candidate is any entry with |E - centroid| <= tol_kev. One result per
// peak, in peak order. Requires tol_kev > 0.
std::vector<PeakMatch> qualify_peaks(const PeakList& peaks, const RadionuclideLibrary& lib, double tol_kev);

// CSV "centroid_kev[,net_area]"; a header row is optional.
// Throws Error(header_mismatch) for a bad or negative centroid.
PeakList parse_peak_csv(std::string_view body);
PeakList read_peak_csv(const std::filesystem::path& path);

}  // namespace nuclib
