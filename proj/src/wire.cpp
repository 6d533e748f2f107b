#include "probekit/wire.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "json_codec.hpp"

namespace probekit {

std::string encode_batch(const ScanBatch& batch, const OuiTable& oui) {
  // Group by MAC; keys come out in canonical text order.
  std::map<MacAddress, std::vector<const Sighting*>> grouped;
  for (const auto& s : batch.sightings) {
    grouped[s.mac].push_back(&s);
  }
  nlohmann::json doc = nlohmann::json::object();
  for (auto& [mac, list] : grouped) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Sighting* a, const Sighting* b) {
                       return a->seen_at < b->seen_at;
                     });
    nlohmann::json detections = nlohmann::json::array();
    for (const auto* s : list) {
      detections.push_back(detail::detection_to_json(s->seen_at, s->ssid_label, s->gps));
    }
    doc[mac.to_string()] = {
        {"detections", std::move(detections)},
        {"times_seen", list.size()},
        {"manufacturer", oui.lookup(mac).value_or("Unknown")},
    };
  }
  // SSIDs are raw bytes; anything that is not valid UTF-8 gets replaced
  // rather than aborting the upload.
  return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ScanBatch decode_batch(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw WireError(WireError::Kind::MalformedDocument,
                    "bad JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw WireError(WireError::Kind::MalformedDocument,
                    "upload document must be an object");
  }

  ScanBatch batch;
  for (const auto& [key, entry] : doc.items()) {
    const auto mac = MacAddress::parse(key);
    if (!mac) {
      throw WireError(WireError::Kind::BadMacText, "bad mac \"" + key + "\"");
    }
    if (!entry.is_object() || !entry.contains("detections") ||
        !entry["detections"].is_array()) {
      throw WireError(WireError::Kind::MalformedDocument,
                      "entry for " + key + " lacks a detections list");
    }
    const auto& detections = entry["detections"];
    if (entry.contains("times_seen") &&
        (!entry["times_seen"].is_number_unsigned() ||
         entry["times_seen"].get<std::uint64_t>() != detections.size())) {
      throw WireError(WireError::Kind::MalformedDocument,
                      "times_seen disagrees with detections for " + key);
    }
    for (const auto& det : detections) {
      Sighting s;
      s.mac = *mac;
      detail::detection_from_json(det, s.seen_at, s.ssid_label, s.gps);
      batch.sightings.push_back(std::move(s));
    }
  }

  // The wire format carries no scan window; reconstruct the tightest one.
  if (!batch.sightings.empty()) {
    UnixTime lo = batch.sightings.front().seen_at;
    UnixTime hi = lo;
    for (const auto& s : batch.sightings) {
      lo = std::min(lo, s.seen_at);
      hi = std::max(hi, s.seen_at);
    }
    batch.scan_start = lo;
    batch.scan_len_s = static_cast<std::uint32_t>(std::max<UnixTime>(hi - lo, 1));
  }
  return batch;
}

std::string encode_summary(const IngestSummary& summary) {
  return nlohmann::json{{"new_macs", summary.new_macs},
                        {"new_ssids", summary.new_ssids},
                        {"sightings_added", summary.sightings_added}}
      .dump();
}

IngestSummary decode_summary(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    return IngestSummary{doc.at("new_macs").get<std::uint64_t>(),
                         doc.at("new_ssids").get<std::uint64_t>(),
                         doc.at("sightings_added").get<std::uint64_t>()};
  } catch (const std::exception& e) {
    throw WireError(WireError::Kind::MalformedDocument,
                    std::string("bad summary: ") + e.what());
  }
}

}  // namespace probekit
