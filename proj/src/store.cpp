#include "probekit/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "json_codec.hpp"

namespace probekit {

namespace {

constexpr std::string_view kStoreFormat = "probekit-store";
constexpr int kStoreVersion = 1;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw StoreError(StoreError::Kind::StorageFailure,
                     "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

bool gps_in_range(const GpsCoord& gps) {
  return gps.lat >= -90.0 && gps.lat <= 90.0 && gps.lon >= -180.0 &&
         gps.lon <= 180.0;
}

std::vector<Sighting> dedup_scan(const std::vector<ProbeRequest>& probes,
                                 std::optional<GpsCoord> gps) {
  // One sighting per (mac, ssid label), keeping the earliest detection.
  std::map<std::pair<MacAddress, std::string>, Timestamp> earliest;
  for (const auto& probe : probes) {
    std::string label = probe.ssid ? probe.ssid->bytes() : std::string(kBroadcastLabel);
    const auto key = std::make_pair(probe.mac, std::move(label));
    const auto it = earliest.find(key);
    if (it == earliest.end() || probe.captured_at < it->second) {
      earliest[key] = probe.captured_at;
    }
  }
  std::vector<Sighting> out;
  out.reserve(earliest.size());
  for (const auto& [key, ts] : earliest) {
    out.push_back(Sighting{key.first, key.second, ts.whole_seconds(), gps});
  }
  std::stable_sort(out.begin(), out.end(), [](const Sighting& a, const Sighting& b) {
    return a.seen_at < b.seen_at;
  });
  return out;
}

Store Store::open(const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) {
    return deserialize(read_file(path), path);
  }
  Store store;
  store.path_ = path;
  return store;
}

IngestSummary Store::upsert_batch(const ScanBatch& batch, const OuiTable& oui) {
  if (batch.scan_len_s == 0) {
    throw StoreError(StoreError::Kind::BadBatch, "scan_len_s must be positive");
  }
  for (const auto& s : batch.sightings) {
    if (s.seen_at < batch.scan_start ||
        s.seen_at > batch.scan_start + static_cast<UnixTime>(batch.scan_len_s)) {
      throw StoreError(StoreError::Kind::BadBatch,
                       "sighting outside the scan window");
    }
    if (s.ssid_label.empty()) {
      throw StoreError(StoreError::Kind::BadBatch, "empty ssid label");
    }
    if (s.gps && !gps_in_range(*s.gps)) {
      throw StoreError(StoreError::Kind::BadBatch, "gps out of range");
    }
  }

  // Stage on a copy; commit only after a successful persist, so a failed
  // batch leaves the store unchanged.
  Store staged = *this;
  IngestSummary summary;

  std::set<std::string> known_ssids;
  for (const auto& [addr, rec] : staged.macs_) {
    known_ssids.insert(rec.known_ssids.begin(), rec.known_ssids.end());
  }

  for (const auto& s : batch.sightings) {
    auto [it, created] = staged.macs_.try_emplace(s.mac);
    MacRecord& rec = it->second;
    if (created) {
      rec.address = s.mac;
      rec.manufacturer = oui.lookup(s.mac).value_or("Unknown");
      rec.locally_administered = s.mac.is_locally_administered();
      ++summary.new_macs;
    }
    rec.times_seen += 1;
    if (s.ssid_label != kBroadcastLabel) {
      rec.known_ssids.insert(s.ssid_label);
      if (known_ssids.insert(s.ssid_label).second) ++summary.new_ssids;
    }
    staged.sightings_[s.mac].push_back(s);
    ++summary.sightings_added;
  }

  staged.persist();
  *this = std::move(staged);
  return summary;
}

StoreStats Store::stats() const {
  StoreStats out;
  out.unique_macs = macs_.size();
  std::set<std::string> manufacturers;
  std::set<std::string> ssids;
  for (const auto& [addr, rec] : macs_) {
    if (rec.manufacturer != "Unknown") manufacturers.insert(rec.manufacturer);
    ssids.insert(rec.known_ssids.begin(), rec.known_ssids.end());
  }
  for (const auto& [addr, list] : sightings_) {
    out.total_sightings += list.size();
  }
  out.manufacturer_count = manufacturers.size();
  out.unique_ssids = ssids.size();
  return out;
}

std::optional<MacDetail> Store::query_mac(const MacAddress& mac) const {
  const auto it = macs_.find(mac);
  if (it == macs_.end()) return std::nullopt;
  MacDetail detail;
  detail.record = it->second;
  if (const auto sit = sightings_.find(mac); sit != sightings_.end()) {
    detail.sightings = sit->second;
    std::stable_sort(detail.sightings.begin(), detail.sightings.end(),
                     [](const Sighting& a, const Sighting& b) {
                       return a.seen_at < b.seen_at;
                     });
  }
  for (const auto& ssid : it->second.known_ssids) {
    if (const auto lit = ssid_locations_.find(ssid); lit != ssid_locations_.end()) {
      detail.ssid_locations.emplace_back(ssid, lit->second);
    }
  }
  return detail;
}

std::size_t Store::load_ssid_locations(std::string_view csv) {
  std::map<std::string, GpsCoord> table;
  std::size_t line_no = 0;
  std::string_view rest = csv;
  while (!rest.empty()) {
    const auto eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    rest = (eol == std::string_view::npos) ? std::string_view{} : rest.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    // ssid,lat,lon — split from the right so SSIDs may contain commas.
    const auto c2 = line.rfind(',');
    const auto c1 = (c2 == std::string_view::npos) ? c2 : line.rfind(',', c2 - 1);
    if (c1 == std::string_view::npos || c1 == 0) {
      throw StoreError(StoreError::Kind::MalformedLine,
                       "line " + std::to_string(line_no) + ": want ssid,lat,lon");
    }
    const std::string ssid(line.substr(0, c1));
    GpsCoord coord{};
    try {
      coord.lat = std::stod(std::string(line.substr(c1 + 1, c2 - c1 - 1)));
      coord.lon = std::stod(std::string(line.substr(c2 + 1)));
    } catch (const std::exception&) {
      throw StoreError(StoreError::Kind::MalformedLine,
                       "line " + std::to_string(line_no) + ": bad coordinates");
    }
    if (!gps_in_range(coord)) {
      throw StoreError(StoreError::Kind::MalformedLine,
                       "line " + std::to_string(line_no) + ": coordinates out of range");
    }
    table[ssid] = coord;
  }

  Store staged = *this;
  staged.ssid_locations_ = std::move(table);
  staged.persist();
  const std::size_t count = staged.ssid_locations_.size();
  *this = std::move(staged);
  return count;
}

void Store::add_owner(OwnerRecord owner) {
  Store staged = *this;
  staged.owners_.push_back(std::move(owner));
  staged.persist();
  *this = std::move(staged);
}

std::string Store::owners_fingerprint() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& owner : owners_) {
    nlohmann::json macs = nlohmann::json::array();
    for (const auto& mac : owner.linked_macs) macs.push_back(mac.to_string());
    arr.push_back({{"name", owner.name},
                   {"contact", owner.contact},
                   {"linked_macs", std::move(macs)}});
  }
  return arr.dump();
}

std::vector<Sighting> Store::all_sightings() const {
  std::vector<Sighting> out;
  for (const auto& [addr, list] : sightings_) {
    out.insert(out.end(), list.begin(), list.end());
  }
  return out;
}

std::string Store::serialize() const {
  nlohmann::json doc;
  doc["format"] = kStoreFormat;
  doc["version"] = kStoreVersion;

  nlohmann::json macs = nlohmann::json::object();
  for (const auto& [addr, rec] : macs_) {
    macs[addr.to_string()] = {
        {"manufacturer", rec.manufacturer},
        {"times_seen", rec.times_seen},
        {"locally_administered", rec.locally_administered},
        {"known_ssids", rec.known_ssids},
    };
  }
  doc["macs"] = std::move(macs);

  nlohmann::json sightings = nlohmann::json::object();
  for (const auto& [addr, list] : sightings_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : list) {
      arr.push_back(detail::detection_to_json(s.seen_at, s.ssid_label, s.gps));
    }
    sightings[addr.to_string()] = std::move(arr);
  }
  doc["sightings"] = std::move(sightings);

  nlohmann::json locations = nlohmann::json::object();
  for (const auto& [ssid, coord] : ssid_locations_) {
    locations[ssid] = nlohmann::json::array({coord.lat, coord.lon});
  }
  doc["ssid_locations"] = std::move(locations);

  doc["owners"] = nlohmann::json::parse(owners_fingerprint());
  return doc.dump(2);
}

Store Store::deserialize(std::string_view text, std::filesystem::path path) {
  Store store;
  store.path_ = std::move(path);
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != kStoreFormat) {
      throw StoreError(StoreError::Kind::BadStoreFile,
                       "not a probekit store file");
    }
    if (doc.value("version", -1) != kStoreVersion) {
      throw StoreError(StoreError::Kind::BadStoreFile,
                       "unsupported store version");
    }
    for (const auto& [key, val] : doc.at("macs").items()) {
      const auto mac = MacAddress::parse(key);
      if (!mac) {
        throw StoreError(StoreError::Kind::BadStoreFile, "bad mac key " + key);
      }
      MacRecord rec;
      rec.address = *mac;
      rec.manufacturer = val.at("manufacturer").get<std::string>();
      rec.times_seen = val.at("times_seen").get<std::uint64_t>();
      rec.locally_administered = val.at("locally_administered").get<bool>();
      for (const auto& ssid : val.at("known_ssids")) {
        rec.known_ssids.insert(ssid.get<std::string>());
      }
      store.macs_[*mac] = std::move(rec);
    }
    for (const auto& [key, val] : doc.at("sightings").items()) {
      const auto mac = MacAddress::parse(key);
      if (!mac) {
        throw StoreError(StoreError::Kind::BadStoreFile, "bad mac key " + key);
      }
      auto& list = store.sightings_[*mac];
      for (const auto& det : val) {
        Sighting s;
        s.mac = *mac;
        detail::detection_from_json(det, s.seen_at, s.ssid_label, s.gps);
        list.push_back(std::move(s));
      }
    }
    for (const auto& [ssid, val] : doc.at("ssid_locations").items()) {
      store.ssid_locations_[ssid] = GpsCoord{val.at(0).get<double>(),
                                             val.at(1).get<double>()};
    }
    for (const auto& item : doc.at("owners")) {
      OwnerRecord owner;
      owner.name = item.at("name").get<std::string>();
      owner.contact = item.at("contact").get<std::string>();
      for (const auto& mac_text : item.at("linked_macs")) {
        const auto mac = MacAddress::parse(mac_text.get<std::string>());
        if (!mac) {
          throw StoreError(StoreError::Kind::BadStoreFile, "bad owner mac");
        }
        owner.linked_macs.insert(*mac);
      }
      store.owners_.push_back(std::move(owner));
    }
  } catch (const StoreError&) {
    throw;
  } catch (const std::exception& e) {
    throw StoreError(StoreError::Kind::BadStoreFile,
                     std::string("corrupt store file: ") + e.what());
  }
  return store;
}

void Store::persist() const {
  if (path_.empty()) return;
  const auto tmp = std::filesystem::path(path_.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw StoreError(StoreError::Kind::StorageFailure,
                       "cannot write " + tmp.string());
    }
    out << serialize();
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw StoreError(StoreError::Kind::StorageFailure,
                       "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw StoreError(StoreError::Kind::StorageFailure,
                     "atomic replace failed for " + path_.string());
  }
}

}  // namespace probekit
