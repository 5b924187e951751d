#include "nuclib/error.hpp"

namespace nuclib {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::unknown_element: return "UnknownElement";
    case Errc::malformed_id: return "MalformedId";
    case Errc::mass_out_of_range: return "MassOutOfRange";
    case Errc::network_error: return "NetworkError";
    case Errc::offline_miss: return "OfflineMiss";
    case Errc::cache_write_error: return "CacheWriteError";
    case Errc::registry_io_error: return "RegistryIoError";
    case Errc::header_mismatch: return "HeaderMismatch";
    case Errc::nuclide_mismatch: return "NuclideMismatch";
    case Errc::data_unavailable: return "DataUnavailable";
    case Errc::depth_exceeded: return "DepthExceeded";
    case Errc::empty_subset: return "EmptySubset";
    case Errc::unresolved_level: return "UnresolvedLevel";
    case Errc::inverted_bounds: return "InvertedBounds";
    case Errc::io_error: return "IoError";
    case Errc::unsupported_format: return "UnsupportedFormat";
    case Errc::template_syntax_error: return "TemplateSyntaxError";
    case Errc::unknown_placeholder: return "UnknownPlaceholder";
    case Errc::config_parse_error: return "ConfigParseError";
    case Errc::unknown_key: return "UnknownKey";
  }
  return "Error";
}

}  // namespace nuclib
