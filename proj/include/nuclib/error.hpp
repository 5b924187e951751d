#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nuclib {

enum class Errc {
  unknown_element,
  malformed_id,
  mass_out_of_range,
  network_error,
  offline_miss,
  cache_write_error,
  registry_io_error,
  header_mismatch,
  nuclide_mismatch,
  data_unavailable,
  depth_exceeded,
  empty_subset,
  unresolved_level,
  inverted_bounds,
  io_error,
  unsupported_format,
  template_syntax_error,
  unknown_placeholder,
  config_parse_error,
  unknown_key,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can branch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nuclib
