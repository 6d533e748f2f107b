#include "probekit/oui.hpp"

#include <cstdio>

namespace probekit {

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// "XX:XX:XX" or "XX-XX-XX".
std::optional<OuiPrefix> parse_prefix(std::string_view text, char sep) {
  if (text.size() != 8) return std::nullopt;
  OuiPrefix prefix{};
  for (int i = 0; i < 3; ++i) {
    const int pos = i * 3;
    const int hi = hex_nibble(text[pos]);
    const int lo = hex_nibble(text[pos + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    if (i < 2 && text[pos + 2] != sep) return std::nullopt;
    prefix[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return prefix;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

void OuiTable::insert(OuiPrefix prefix, std::string name) {
  entries_[prefix] = std::move(name);
}

std::optional<std::string> OuiTable::lookup(const MacAddress& mac) const {
  const auto it = entries_.find(mac.oui_prefix());
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

OuiLoadResult load_oui(std::string_view text) {
  OuiLoadResult result;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = strip_cr(text.substr(0, eol));
    text = (eol == std::string_view::npos) ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      result.errors.push_back({line_no, "missing tab separator"});
      continue;
    }
    const auto prefix = parse_prefix(line.substr(0, tab), ':');
    if (!prefix) {
      result.errors.push_back({line_no, "bad prefix"});
      continue;
    }
    std::string_view name = line.substr(tab + 1);
    if (name.empty()) {
      result.errors.push_back({line_no, "empty manufacturer name"});
      continue;
    }
    result.table.insert(*prefix, std::string(name));
  }
  return result;
}

std::string convert_ieee_dump(std::string_view text) {
  std::string out;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = strip_cr(text.substr(0, eol));
    text = (eol == std::string_view::npos) ? std::string_view{} : text.substr(eol + 1);

    // Lines of interest look like "80-7A-BF   (hex)\t\tApple, Inc."
    if (line.size() < 8) continue;
    const auto prefix = parse_prefix(line.substr(0, 8), '-');
    if (!prefix) continue;
    const auto hex_tag = line.find("(hex)");
    if (hex_tag == std::string_view::npos) continue;
    std::string_view name = line.substr(hex_tag + 5);
    while (!name.empty() && (name.front() == ' ' || name.front() == '\t')) {
      name.remove_prefix(1);
    }
    if (name.empty()) continue;
    char prefix_text[9];
    std::snprintf(prefix_text, sizeof(prefix_text), "%02x:%02x:%02x",
                  (*prefix)[0], (*prefix)[1], (*prefix)[2]);
    out += prefix_text;
    out += '\t';
    out += name;
    out += '\n';
  }
  return out;
}

}  // namespace probekit
