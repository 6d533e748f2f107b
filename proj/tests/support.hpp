#pragma once

// Test-only builders: 802.11 probe/beacon frames and classic pcap files,
// so golden fixtures stay self-contained.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probekit/frame.hpp"
#include "probekit/mac.hpp"
#include "probekit/oui.hpp"
#include "probekit/store.hpp"
#include "probekit/time.hpp"

namespace testsupport {

using probekit::MacAddress;
using probekit::Timestamp;

inline MacAddress mac(const std::string& text) {
  return *MacAddress::parse(text);
}

// 24-byte management header (fc, duration, addr1..addr3, seq) followed by
// tagged parameters. An absent ssid emits a zero-length SSID element.
inline std::vector<std::uint8_t> probe_frame(const MacAddress& sender,
                                             const std::optional<std::string>& ssid,
                                             bool with_rates = false) {
  std::vector<std::uint8_t> f;
  f.push_back(0x40);  // management, subtype 4
  f.push_back(0x00);
  f.push_back(0x00);  // duration
  f.push_back(0x00);
  for (int i = 0; i < 6; ++i) f.push_back(0xff);           // addr1: broadcast
  for (auto b : sender.octets()) f.push_back(b);           // addr2: transmitter
  for (int i = 0; i < 6; ++i) f.push_back(0xff);           // addr3
  f.push_back(0x00);  // sequence control
  f.push_back(0x00);
  f.push_back(0x00);  // SSID element
  f.push_back(static_cast<std::uint8_t>(ssid ? ssid->size() : 0));
  if (ssid) f.insert(f.end(), ssid->begin(), ssid->end());
  if (with_rates) {
    const std::uint8_t rates[] = {0x01, 0x04, 0x82, 0x84, 0x8b, 0x96};
    f.insert(f.end(), std::begin(rates), std::end(rates));
  }
  return f;
}

inline std::vector<std::uint8_t> beacon_frame(const MacAddress& sender) {
  auto f = probe_frame(sender, std::nullopt);
  f[0] = 0x80;  // management, subtype 8
  return f;
}

inline std::vector<std::uint8_t> radiotap_wrap(const std::vector<std::uint8_t>& frame,
                                               std::uint16_t header_len = 8) {
  std::vector<std::uint8_t> out;
  out.push_back(0x00);  // version
  out.push_back(0x00);  // pad
  out.push_back(static_cast<std::uint8_t>(header_len & 0xff));
  out.push_back(static_cast<std::uint8_t>(header_len >> 8));
  out.resize(header_len, 0x00);  // present flags + padding
  out.insert(out.end(), frame.begin(), frame.end());
  return out;
}

// The worked two-detection example: one Apple device probing for
// "UCD Wireless" and then broadcasting, 38 seconds apart, on campus.
inline probekit::ScanBatch example_batch() {
  probekit::ScanBatch batch;
  batch.device_id = "dev-1";
  batch.scan_start = 1480879434;  // 2016-12-04 19:23:54
  batch.scan_len_s = 45;
  const probekit::GpsCoord campus{53.3461, -6.3032};
  batch.sightings.push_back(
      {mac("80:7a:bf:3b:bd:d9"), "UCD Wireless", 1480879434, campus});
  batch.sightings.push_back(
      {mac("80:7a:bf:3b:bd:d9"), std::string(probekit::kBroadcastLabel),
       1480879472, campus});
  return batch;
}

inline probekit::OuiTable example_oui() {
  return probekit::load_oui("80:7a:bf\tApple\n").table;
}

struct PcapRecord {
  Timestamp ts;
  std::vector<std::uint8_t> frame;
};

inline std::vector<std::uint8_t> pcap_bytes(std::uint32_t link_type,
                                            const std::vector<PcapRecord>& records,
                                            bool big_endian = false) {
  std::vector<std::uint8_t> out;
  auto put_u16 = [&](std::uint16_t v) {
    if (big_endian) {
      out.push_back(static_cast<std::uint8_t>(v >> 8));
      out.push_back(static_cast<std::uint8_t>(v & 0xff));
    } else {
      out.push_back(static_cast<std::uint8_t>(v & 0xff));
      out.push_back(static_cast<std::uint8_t>(v >> 8));
    }
  };
  auto put_u32 = [&](std::uint32_t v) {
    if (big_endian) {
      out.push_back(static_cast<std::uint8_t>(v >> 24));
      out.push_back(static_cast<std::uint8_t>(v >> 16 & 0xff));
      out.push_back(static_cast<std::uint8_t>(v >> 8 & 0xff));
      out.push_back(static_cast<std::uint8_t>(v & 0xff));
    } else {
      out.push_back(static_cast<std::uint8_t>(v & 0xff));
      out.push_back(static_cast<std::uint8_t>(v >> 8 & 0xff));
      out.push_back(static_cast<std::uint8_t>(v >> 16 & 0xff));
      out.push_back(static_cast<std::uint8_t>(v >> 24));
    }
  };
  put_u32(0xa1b2c3d4);  // magic, in the file's own byte order
  put_u16(2);           // version 2.4
  put_u16(4);
  put_u32(0);        // thiszone
  put_u32(0);        // sigfigs
  put_u32(65535);    // snaplen
  put_u32(link_type);
  for (const auto& rec : records) {
    put_u32(static_cast<std::uint32_t>(rec.ts.sec));
    put_u32(rec.ts.usec);
    put_u32(static_cast<std::uint32_t>(rec.frame.size()));
    put_u32(static_cast<std::uint32_t>(rec.frame.size()));
    out.insert(out.end(), rec.frame.begin(), rec.frame.end());
  }
  return out;
}

}  // namespace testsupport
