#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "probekit/frame.hpp"
#include "probekit/mac.hpp"
#include "probekit/oui.hpp"
#include "probekit/time.hpp"

namespace probekit {

// Label recorded for undirected probes.
inline constexpr std::string_view kBroadcastLabel = "Broadcast";

struct GpsCoord {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  bool operator==(const GpsCoord&) const = default;
};

bool gps_in_range(const GpsCoord& gps);

// One deduplicated (mac, ssid, time, location) observation.
struct Sighting {
  MacAddress mac;
  std::string ssid_label;  // kBroadcastLabel or the SSID text
  UnixTime seen_at = 0;
  std::optional<GpsCoord> gps;
  bool operator==(const Sighting&) const = default;
};

// One sniffing device's scan output, the unit of upload.
struct ScanBatch {
  std::string device_id;
  UnixTime scan_start = 0;
  std::uint32_t scan_len_s = 45;
  std::vector<Sighting> sightings;
};

struct MacRecord {
  MacAddress address;
  std::string manufacturer = "Unknown";
  std::uint64_t times_seen = 0;
  bool locally_administered = false;
  std::set<std::string> known_ssids;  // directed SSIDs only
  bool operator==(const MacRecord&) const = default;
};

// Owner rows are curated by hand and never touched by ingestion.
struct OwnerRecord {
  std::string name;
  std::string contact;
  std::set<MacAddress> linked_macs;
  bool operator==(const OwnerRecord&) const = default;
};

struct IngestSummary {
  std::uint64_t new_macs = 0;
  std::uint64_t new_ssids = 0;
  std::uint64_t sightings_added = 0;
  bool operator==(const IngestSummary&) const = default;
};

struct StoreStats {
  std::uint64_t total_sightings = 0;
  std::uint64_t unique_macs = 0;
  std::uint64_t manufacturer_count = 0;  // distinct resolved names, "Unknown" excluded
  std::uint64_t unique_ssids = 0;
  bool operator==(const StoreStats&) const = default;
};

struct MacDetail {
  MacRecord record;
  std::vector<Sighting> sightings;  // time-ordered
  std::vector<std::pair<std::string, GpsCoord>> ssid_locations;
};

class StoreError : public std::runtime_error {
 public:
  enum class Kind { StorageFailure, BadStoreFile, MalformedLine, BadBatch };
  StoreError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Collapses one scan window's probe burst to at most one sighting per
// (mac, ssid label) pair, keeping the earliest detection of each pair.
// Output is ordered by timestamp.
std::vector<Sighting> dedup_scan(const std::vector<ProbeRequest>& probes,
                                 std::optional<GpsCoord> gps);

// Single-file sighting store. Persistence is a versioned JSON document
// written via temp-file + atomic rename; a batch either commits fully or
// leaves the store untouched. Single writer, readers see committed state.
class Store {
 public:
  Store() = default;  // in-memory, no persistence

  // Loads the file when it exists (rejecting incompatible files loudly),
  // otherwise starts empty bound to that path.
  static Store open(const std::filesystem::path& path);

  IngestSummary upsert_batch(const ScanBatch& batch, const OuiTable& oui);
  StoreStats stats() const;
  std::optional<MacDetail> query_mac(const MacAddress& mac) const;

  // CSV `ssid,lat,lon`; replaces the whole table. Returns rows loaded.
  std::size_t load_ssid_locations(std::string_view csv);

  // Manual curation path; ingestion never writes owners.
  void add_owner(OwnerRecord owner);
  const std::vector<OwnerRecord>& owners() const { return owners_; }
  // Canonical serialization of the owner table, for change detection.
  std::string owners_fingerprint() const;

  const std::map<MacAddress, MacRecord>& macs() const { return macs_; }
  std::vector<Sighting> all_sightings() const;
  const std::map<std::string, GpsCoord>& ssid_locations() const {
    return ssid_locations_;
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  void persist() const;
  std::string serialize() const;
  static Store deserialize(std::string_view text, std::filesystem::path path);

  std::map<MacAddress, MacRecord> macs_;
  std::map<MacAddress, std::vector<Sighting>> sightings_;
  std::map<std::string, GpsCoord> ssid_locations_;
  std::vector<OwnerRecord> owners_;
  std::filesystem::path path_;  // empty = in-memory
};

}  // namespace probekit
