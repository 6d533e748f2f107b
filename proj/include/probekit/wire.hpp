#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "probekit/oui.hpp"
#include "probekit/store.hpp"

namespace probekit {

class WireError : public std::runtime_error {
 public:
  enum class Kind { MalformedDocument, BadMacText, BadTimestamp };
  WireError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Upload document: one object keyed by canonical MAC text, each entry
// holding `detections` (a list of [timestamp, ssid label, [lat,lon]|null]
// triples, time-ordered), `times_seen`, and an advisory `manufacturer`.
std::string encode_batch(const ScanBatch& batch, const OuiTable& oui);

// Inverse of encode_batch up to manufacturer (the server recomputes it).
// device_id is left empty; scan_start/scan_len_s are derived from the
// detection timestamps.
ScanBatch decode_batch(std::string_view text);

std::string encode_summary(const IngestSummary& summary);
IngestSummary decode_summary(std::string_view text);

}  // namespace probekit
