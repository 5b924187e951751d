#include "nuclib/dataset_key.hpp"

#include "nuclib/error.hpp"

namespace nuclib {

std::string DatasetKind::code() const {
  switch (category_) {
    case DatasetCategory::decay_rads: return "dr-" + std::string(radiation_code(radiation_));
    case DatasetCategory::levels: return "lv";
    case DatasetCategory::transitions: return "tr";
  }
  return "?";
}

std::optional<DatasetKind> DatasetKind::from_code(std::string_view code) noexcept {
  if (code == "lv") return levels();
  if (code == "tr") return transitions();
  if (code.substr(0, 3) == "dr-") {
    auto rad = code.substr(3);
    for (auto r : kAllRadiationTypes)
      if (radiation_code(r) == rad) return decay(r);
  }
  return std::nullopt;
}

std::string DatasetKey::serialize() const { return format_nuclide_id(nuclide_) + ":" + kind_.code(); }

std::string DatasetKey::file_stem() const { return format_nuclide_id(nuclide_) + "_" + kind_.code(); }

DatasetKey DatasetKey::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error(Errc::malformed_id, "dataset key '" + std::string(text) + "'");
  auto kind = DatasetKind::from_code(text.substr(colon + 1));
  if (!kind) throw Error(Errc::malformed_id, "dataset kind in '" + std::string(text) + "'");
  return DatasetKey(parse_nuclide_id(text.substr(0, colon)), *kind);
}

}  // namespace nuclib
