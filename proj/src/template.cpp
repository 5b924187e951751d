#include <algorithm>
#include <cstdio>
#include <cctype>
#include <span>

#include "entry_fields.hpp"
#include "nuclib/error.hpp"
#include "nuclib/export.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace {

enum class Scope { library, entry };

struct Filter {
  enum class Kind { fixed, upper } kind;
  int decimals = 0;
};

struct Node {
  enum class Kind { text, field, section } kind = Kind::text;
  std::string text;  // literal text, or field name
  std::vector<Filter> filters;
  std::vector<Node> children;  // section body
};

constexpr std::string_view kLibraryFields[] = {"count", "radiation", "source"};
constexpr std::string_view kEntryOnlyFields[] = {"name", "index"};
constexpr std::string_view kNumericFields[] = {"count",         "index",         "energy_kev",       "energy_unc_kev",
                                               "intensity_pct", "intensity_unc_pct", "half_life_s", "parent_level_kev"};

bool contains(std::span<const std::string_view> set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_entry_field(std::string_view name) {
  return contains(detail::kTableColumns, name) || contains(kEntryOnlyFields, name);
}

[[noreturn]] void syntax(const std::string& what, std::size_t offset) {
  throw Error(Errc::template_syntax_error, what + " at offset " + std::to_string(offset));
}

Filter parse_filter(std::string_view spec, std::size_t offset) {
  spec = text::trim(spec);
  if (spec == "upper") return {Filter::Kind::upper, 0};
  if (spec.substr(0, 6) == "fixed:") {
    auto n = text::parse_double(spec.substr(6));
    if (!n || *n < 0 || *n > 17 || *n != static_cast<int>(*n)) syntax("bad decimal count in filter", offset);
    return {Filter::Kind::fixed, static_cast<int>(*n)};
  }
  syntax("unknown filter '" + std::string(spec) + "'", offset);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::vector<Node> parse() { return parse_until(Scope::library, ""); }

 private:
  std::vector<Node> parse_until(Scope scope, std::string_view closing) {
    std::vector<Node> out;
    while (pos_ < src_.size()) {
      const std::size_t open = src_.find("{{", pos_);
      if (open == std::string_view::npos) {
        out.push_back({Node::Kind::text, std::string(src_.substr(pos_)), {}, {}});
        pos_ = src_.size();
        break;
      }
      if (open > pos_) out.push_back({Node::Kind::text, std::string(src_.substr(pos_, open - pos_)), {}, {}});
      const std::size_t close = src_.find("}}", open + 2);
      if (close == std::string_view::npos) syntax("unterminated tag", open);
      const std::string_view tag = text::trim(src_.substr(open + 2, close - open - 2));
      pos_ = close + 2;
      if (tag.empty()) syntax("empty tag", open);

      if (tag[0] == '#') {
        const std::string_view name = text::trim(tag.substr(1));
        if (name != "entries") throw Error(Errc::unknown_placeholder, "unknown section '" + std::string(name) + "'");
        if (scope == Scope::entry) syntax("nested entries section", open);
        Node section{Node::Kind::section, std::string(name), {}, {}};
        section.children = parse_until(Scope::entry, name);
        out.push_back(std::move(section));
        continue;
      }
      if (tag[0] == '/') {
        const std::string_view name = text::trim(tag.substr(1));
        if (closing.empty() || name != closing) syntax("unmatched closing tag '" + std::string(name) + "'", open);
        return out;
      }

      Node field{Node::Kind::field, {}, {}, {}};
      std::size_t start = 0;
      for (bool first = true;; first = false) {
        const std::size_t bar = tag.find('|', start);
        const std::string_view part = tag.substr(start, bar == std::string_view::npos ? bar : bar - start);
        if (first)
          field.text = std::string(text::trim(part));
        else
          field.filters.push_back(parse_filter(part, open));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
      }
      const bool known = contains(kLibraryFields, field.text) || (scope == Scope::entry && is_entry_field(field.text));
      if (!known) throw Error(Errc::unknown_placeholder, "unknown placeholder '" + field.text + "'");
      for (const auto& f : field.filters)
        if (f.kind == Filter::Kind::fixed && !contains(kNumericFields, field.text))
          syntax("fixed filter applied to non-numeric field '" + field.text + "'", open);
      out.push_back(std::move(field));
    }
    if (!closing.empty()) syntax("unclosed section '" + std::string(closing) + "'", src_.size());
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string apply(std::string value, const std::vector<Filter>& filters) {
  for (const auto& f : filters) {
    if (f.kind == Filter::Kind::upper) {
      std::transform(value.begin(), value.end(), value.begin(),
                     [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    } else if (!value.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", f.decimals, *text::parse_double(value));
      value = buf;
    }
  }
  return value;
}

std::string library_field(const RadionuclideLibrary& lib, const std::string& name) {
  if (name == "count") return std::to_string(lib.entries.size());
  if (name == "radiation") return std::string(radiation_name(lib.radiation));
  return lib.provenance.source_id;
}

std::string entry_field(const LibraryEntry& e, std::size_t index, const std::string& name) {
  if (name == "name") return display_name(e.nuclide);
  if (name == "index") return std::to_string(index + 1);
  const auto fields = detail::entry_fields(e);
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (detail::kTableColumns[i] == name) return fields[i];
  return {};
}

void render(const RadionuclideLibrary& lib, const std::vector<Node>& nodes, const LibraryEntry* entry,
            std::size_t index, std::string& out) {
  for (const auto& n : nodes) {
    switch (n.kind) {
      case Node::Kind::text: out += n.text; break;
      case Node::Kind::field: {
        const bool from_entry = entry && is_entry_field(n.text);
        out += apply(from_entry ? entry_field(*entry, index, n.text) : library_field(lib, n.text), n.filters);
        break;
      }
      case Node::Kind::section:
        for (std::size_t i = 0; i < lib.entries.size(); ++i) render(lib, n.children, &lib.entries[i], i, out);
        break;
    }
  }
}

}  // namespace

std::string render_template(const RadionuclideLibrary& lib, std::string_view tmpl) {
  const auto nodes = Parser(tmpl).parse();
  std::string out;
  render(lib, nodes, nullptr, 0, out);
  return out;
}

void export_template(const RadionuclideLibrary& lib, std::string_view tmpl, const std::filesystem::path& path) {
  write_text_file(path, render_template(lib, tmpl));
}

}  // namespace nuclib
