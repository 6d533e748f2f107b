#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace probekit {

// 48-bit hardware address. Canonical text form is exactly 17 characters:
// six lowercase hex pairs joined by colons, e.g. "80:7a:bf:3b:bd:d9".
class MacAddress {
 public:
  MacAddress() = default;
  explicit MacAddress(const std::array<std::uint8_t, 6>& octets) : octets_(octets) {}

  // Accepts upper- or lowercase hex; anything else is rejected.
  static std::optional<MacAddress> parse(std::string_view text);
  static MacAddress broadcast();

  std::string to_string() const;
  const std::array<std::uint8_t, 6>& octets() const { return octets_; }

  bool is_broadcast() const;
  // Bit 0x02 of the first octet; set on software-assigned addresses.
  bool is_locally_administered() const { return (octets_[0] & 0x02) != 0; }
  bool is_multicast() const { return (octets_[0] & 0x01) != 0; }

  // First three octets, the manufacturer-registered block.
  std::array<std::uint8_t, 3> oui_prefix() const {
    return {octets_[0], octets_[1], octets_[2]};
  }

  // Byte order equals canonical-text order, so this doubles as the
  // tie-break ordering used throughout the identification engine.
  auto operator<=>(const MacAddress&) const = default;

 private:
  std::array<std::uint8_t, 6> octets_{};
};

}  // namespace probekit

template <>
struct std::hash<probekit::MacAddress> {
  std::size_t operator()(const probekit::MacAddress& mac) const noexcept {
    const auto& o = mac.octets();
    std::uint64_t v = 0;
    for (auto b : o) v = (v << 8) | b;
    return std::hash<std::uint64_t>{}(v);
  }
};
