#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "probekit/mac.hpp"
#include "probekit/time.hpp"

namespace probekit {

// Network name carried in a probe request: 0-32 raw bytes, preserved
// verbatim (no case folding, no charset normalization). Zero length is
// the wildcard and never appears inside a parsed ProbeRequest — an empty
// SSID element parses to an absent ssid instead.
class Ssid {
 public:
  static constexpr std::size_t kMaxLen = 32;

  Ssid() = default;
  static std::optional<Ssid> from_bytes(std::string_view bytes);

  const std::string& bytes() const { return bytes_; }
  bool empty() const { return bytes_.empty(); }
  auto operator<=>(const Ssid&) const = default;

 private:
  explicit Ssid(std::string bytes) : bytes_(std::move(bytes)) {}
  std::string bytes_;
};

struct ProbeRequest {
  MacAddress mac;
  std::optional<Ssid> ssid;  // absent = undirected probe
  Timestamp captured_at;     // always the capture-record header time

  bool operator==(const ProbeRequest&) const = default;
};

enum class LinkType { Radiotap, Bare80211 };

// pcap link-layer types accepted by read_capture.
inline constexpr std::uint32_t kDltBare80211 = 105;
inline constexpr std::uint32_t kDltRadiotap = 127;

struct CaptureRecord {
  Timestamp ts;
  std::vector<std::uint8_t> frame;
};

struct CaptureFile {
  LinkType link_type = LinkType::Bare80211;
  std::vector<CaptureRecord> records;  // file order
};

class CaptureError : public std::runtime_error {
 public:
  enum class Kind { UnsupportedMagic, UnsupportedLinkType, TruncatedRecord };
  CaptureError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class FrameError : public std::runtime_error {
 public:
  enum class Kind {
    BadRadiotapVersion,
    HeaderLongerThanFrame,
    TruncatedFrame,
    OversizedSsid,
  };
  FrameError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Parses a classic pcap file (24-byte global header, 16-byte record
// headers, endianness dictated by the magic). Only link types 105 and
// 127 are accepted.
CaptureFile read_capture(std::span<const std::uint8_t> bytes);

// Returns the offset of the 802.11 frame behind a radiotap header: the
// little-endian u16 at bytes 2-3. Version byte must be 0.
std::size_t radiotap_payload_offset(std::span<const std::uint8_t> frame);

// Parses one bare 802.11 frame. Probe requests (management type 0,
// subtype 4) yield a ProbeRequest; every other frame type yields nullopt.
// Frames too short for the 24-byte management header, or whose SSID
// element overruns the frame, throw FrameError.
std::optional<ProbeRequest> parse_probe_request(std::span<const std::uint8_t> frame,
                                                Timestamp ts);

struct ExtractResult {
  std::vector<ProbeRequest> probes;       // capture order
  std::size_t malformed_records = 0;      // skipped, never fatal
};

// Runs the full per-record pipeline: radiotap strip (when applicable),
// then parse_probe_request. Malformed records are tallied and skipped.
ExtractResult extract_probes(const CaptureFile& capture);

}  // namespace probekit
