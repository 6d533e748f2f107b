#include "probekit/frame.hpp"

#include <cstring>

namespace probekit {

namespace {

// pcap classic layout:
//   global header (24): magic u32, ver_major u16, ver_minor u16,
//                       thiszone i32, sigfigs u32, snaplen u32, network u32
//   record header (16): ts_sec u32, ts_usec u32, incl_len u32, orig_len u32
constexpr std::size_t kGlobalHeaderLen = 24;
constexpr std::size_t kRecordHeaderLen = 16;
constexpr std::uint32_t kMagicNative = 0xa1b2c3d4;
constexpr std::uint32_t kMagicSwapped = 0xd4c3b2a1;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off, bool swapped) {
  std::uint32_t v = static_cast<std::uint32_t>(b[off]) |
                    static_cast<std::uint32_t>(b[off + 1]) << 8 |
                    static_cast<std::uint32_t>(b[off + 2]) << 16 |
                    static_cast<std::uint32_t>(b[off + 3]) << 24;
  if (swapped) v = __builtin_bswap32(v);
  return v;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off, bool swapped) {
  std::uint16_t v = static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
  if (swapped) v = static_cast<std::uint16_t>(v >> 8 | v << 8);
  return v;
}

}  // namespace

std::optional<Ssid> Ssid::from_bytes(std::string_view bytes) {
  if (bytes.size() > kMaxLen) return std::nullopt;
  return Ssid(std::string(bytes));
}

CaptureFile read_capture(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) {
    throw CaptureError(CaptureError::Kind::UnsupportedMagic,
                       "input too short for pcap magic");
  }
  const std::uint32_t magic = read_u32(bytes, 0, false);
  bool swapped = false;
  if (magic == kMagicSwapped) {
    swapped = true;
  } else if (magic != kMagicNative) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "unsupported pcap magic 0x%08x", magic);
    throw CaptureError(CaptureError::Kind::UnsupportedMagic, buf);
  }
  if (bytes.size() < kGlobalHeaderLen) {
    throw CaptureError(CaptureError::Kind::TruncatedRecord,
                       "incomplete pcap global header");
  }
  const std::uint16_t ver_major = read_u16(bytes, 4, swapped);
  const std::uint16_t ver_minor = read_u16(bytes, 6, swapped);
  if (ver_major != 2 || ver_minor != 4) {
    throw CaptureError(CaptureError::Kind::UnsupportedMagic,
                       "unsupported pcap version " + std::to_string(ver_major) +
                           "." + std::to_string(ver_minor));
  }
  const std::uint32_t link = read_u32(bytes, 20, swapped);
  CaptureFile out;
  if (link == kDltRadiotap) {
    out.link_type = LinkType::Radiotap;
  } else if (link == kDltBare80211) {
    out.link_type = LinkType::Bare80211;
  } else {
    throw CaptureError(CaptureError::Kind::UnsupportedLinkType,
                       "unsupported link type " + std::to_string(link));
  }

  std::size_t pos = kGlobalHeaderLen;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kRecordHeaderLen) {
      throw CaptureError(CaptureError::Kind::TruncatedRecord,
                         "incomplete record header at offset " + std::to_string(pos));
    }
    const std::uint32_t ts_sec = read_u32(bytes, pos, swapped);
    const std::uint32_t ts_usec = read_u32(bytes, pos + 4, swapped);
    const std::uint32_t incl_len = read_u32(bytes, pos + 8, swapped);
    pos += kRecordHeaderLen;
    if (bytes.size() - pos < incl_len) {
      throw CaptureError(CaptureError::Kind::TruncatedRecord,
                         "record data truncated: declared " +
                             std::to_string(incl_len) + " bytes, " +
                             std::to_string(bytes.size() - pos) + " available");
    }
    CaptureRecord rec;
    rec.ts = Timestamp{static_cast<std::int64_t>(ts_sec), ts_usec};
    rec.frame.assign(bytes.begin() + pos, bytes.begin() + pos + incl_len);
    out.records.push_back(std::move(rec));
    pos += incl_len;
  }
  return out;
}

std::size_t radiotap_payload_offset(std::span<const std::uint8_t> frame) {
  if (frame.size() < 4) {
    throw FrameError(FrameError::Kind::HeaderLongerThanFrame,
                     "frame too short for a radiotap header");
  }
  if (frame[0] != 0) {
    throw FrameError(FrameError::Kind::BadRadiotapVersion,
                     "radiotap version " + std::to_string(frame[0]));
  }
  const std::size_t len = frame[2] | frame[3] << 8;
  if (len > frame.size()) {
    throw FrameError(FrameError::Kind::HeaderLongerThanFrame,
                     "radiotap header length " + std::to_string(len) +
                         " exceeds frame size " + std::to_string(frame.size()));
  }
  return len;
}

std::optional<ProbeRequest> parse_probe_request(std::span<const std::uint8_t> frame,
                                                Timestamp ts) {
  if (frame.empty()) {
    throw FrameError(FrameError::Kind::TruncatedFrame, "empty frame");
  }
  // Management type 0, subtype 4, any protocol version.
  if ((frame[0] & 0xfc) != 0x40) return std::nullopt;
  if (frame.size() < 24) {
    throw FrameError(FrameError::Kind::TruncatedFrame,
                     "probe request shorter than the 24-byte management header");
  }
  std::array<std::uint8_t, 6> addr2{};
  std::memcpy(addr2.data(), frame.data() + 10, 6);

  ProbeRequest out;
  out.mac = MacAddress(addr2);
  out.captured_at = ts;

  // Tagged parameters. Only element id 0 (SSID) is consumed; everything
  // else (supported rates, ...) is skipped.
  std::size_t pos = 24;
  while (pos < frame.size()) {
    if (frame.size() - pos < 2) {
      throw FrameError(FrameError::Kind::TruncatedFrame,
                       "tagged element header overruns frame");
    }
    const std::uint8_t id = frame[pos];
    const std::size_t len = frame[pos + 1];
    if (frame.size() - pos - 2 < len) {
      throw FrameError(FrameError::Kind::TruncatedFrame,
                       "tagged element body overruns frame");
    }
    if (id == 0) {
      if (len == 0) break;  // wildcard: undirected request
      if (len > Ssid::kMaxLen) {
        throw FrameError(FrameError::Kind::OversizedSsid,
                         "SSID element of " + std::to_string(len) + " bytes");
      }
      out.ssid = Ssid::from_bytes(std::string_view(
          reinterpret_cast<const char*>(frame.data() + pos + 2), len));
      break;
    }
    pos += 2 + len;
  }
  return out;
}

ExtractResult extract_probes(const CaptureFile& capture) {
  ExtractResult result;
  for (const auto& rec : capture.records) {
    std::span<const std::uint8_t> payload(rec.frame);
    try {
      if (capture.link_type == LinkType::Radiotap) {
        payload = payload.subspan(radiotap_payload_offset(payload));
      }
      if (auto probe = parse_probe_request(payload, rec.ts)) {
        result.probes.push_back(std::move(*probe));
      }
    } catch (const FrameError&) {
      ++result.malformed_records;
    }
  }
  return result;
}

}  // namespace probekit
