#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "probekit/mac.hpp"

namespace probekit {

using OuiPrefix = std::array<std::uint8_t, 3>;

// Prefix -> manufacturer name. Immutable after load; lookups use the raw
// first three octets verbatim (locally-administered addresses simply miss).
class OuiTable {
 public:
  void insert(OuiPrefix prefix, std::string name);  // later duplicates overwrite
  std::optional<std::string> lookup(const MacAddress& mac) const;
  std::size_t size() const { return entries_.size(); }
  bool operator==(const OuiTable&) const = default;

 private:
  std::map<OuiPrefix, std::string> entries_;
};

struct OuiParseError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct OuiLoadResult {
  OuiTable table;
  std::vector<OuiParseError> errors;  // malformed lines; parsing continues
};

// Registry document: one `XX:XX:XX<TAB>Manufacturer Name` per line,
// `#` comments and blank lines ignored.
OuiLoadResult load_oui(std::string_view text);

// Converts the IEEE oui.txt dump into the registry format above,
// keeping only the `XX-XX-XX   (hex)  Name` lines. Non-core utility.
std::string convert_ieee_dump(std::string_view text);

}  // namespace probekit
