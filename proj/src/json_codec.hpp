#pragma once

// Shared shape of one detection triple: [timestamp, ssid label, [lat,lon]|null].
// Used by both the upload wire format and the store file.

#include <json.hpp>

#include "probekit/store.hpp"
#include "probekit/time.hpp"
#include "probekit/wire.hpp"

namespace probekit::detail {

inline nlohmann::json detection_to_json(UnixTime seen_at, const std::string& label,
                                        const std::optional<GpsCoord>& gps) {
  nlohmann::json coords;
  if (gps) {
    coords = nlohmann::json::array({gps->lat, gps->lon});
  }  // else null
  return nlohmann::json::array({format_utc(seen_at), label, coords});
}

inline void detection_from_json(const nlohmann::json& j, UnixTime& seen_at,
                                std::string& label, std::optional<GpsCoord>& gps) {
  if (!j.is_array() || j.size() != 3) {
    throw WireError(WireError::Kind::MalformedDocument,
                    "detection must be a [time, ssid, coords] triple");
  }
  if (!j[0].is_string()) {
    throw WireError(WireError::Kind::BadTimestamp, "timestamp must be a string");
  }
  const auto t = parse_utc(j[0].get<std::string>());
  if (!t) {
    throw WireError(WireError::Kind::BadTimestamp,
                    "bad timestamp \"" + j[0].get<std::string>() + "\"");
  }
  seen_at = *t;
  if (!j[1].is_string()) {
    throw WireError(WireError::Kind::MalformedDocument, "ssid label must be a string");
  }
  label = j[1].get<std::string>();
  if (label.empty()) {
    throw WireError(WireError::Kind::MalformedDocument, "empty ssid label");
  }
  gps.reset();
  if (!j[2].is_null()) {
    if (!j[2].is_array() || j[2].size() != 2 || !j[2][0].is_number() ||
        !j[2][1].is_number()) {
      throw WireError(WireError::Kind::MalformedDocument,
                      "coordinates must be [lat, lon] or null");
    }
    GpsCoord coord{j[2][0].get<double>(), j[2][1].get<double>()};
    if (!gps_in_range(coord)) {
      throw WireError(WireError::Kind::MalformedDocument, "coordinates out of range");
    }
    gps = coord;
  }
}

}  // namespace probekit::detail
