#include "probekit/server.hpp"

#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "json_codec.hpp"
#include "probekit/wire.hpp"

namespace probekit {

struct Service::Impl {
  Impl(Store& s, OuiTable o) : store(s), oui(std::move(o)) {}

  Store& store;
  OuiTable oui;
  httplib::Server server;
  std::thread worker;
  std::mutex store_mutex;  // single writer; readers see committed batches
  int port = 0;
};

namespace {

nlohmann::json stats_json(const StoreStats& stats) {
  return {{"total_sightings", stats.total_sightings},
          {"unique_macs", stats.unique_macs},
          {"manufacturer_count", stats.manufacturer_count},
          {"unique_ssids", stats.unique_ssids}};
}

nlohmann::json detail_json(const MacDetail& detail) {
  nlohmann::json sightings = nlohmann::json::array();
  for (const auto& s : detail.sightings) {
    sightings.push_back(detail::detection_to_json(s.seen_at, s.ssid_label, s.gps));
  }
  nlohmann::json locations = nlohmann::json::array();
  for (const auto& [ssid, coord] : detail.ssid_locations) {
    locations.push_back({{"ssid", ssid}, {"lat", coord.lat}, {"lon", coord.lon}});
  }
  return {{"address", detail.record.address.to_string()},
          {"manufacturer", detail.record.manufacturer},
          {"times_seen", detail.record.times_seen},
          {"locally_administered", detail.record.locally_administered},
          {"known_ssids", detail.record.known_ssids},
          {"sightings", std::move(sightings)},
          {"ssid_locations", std::move(locations)}};
}

}  // namespace

Service::Service(Store& store, OuiTable oui, const ServeConfig& config)
    : impl_(std::make_unique<Impl>(store, std::move(oui))) {
  auto* impl = impl_.get();

  impl->server.Post("/upload", [impl](const httplib::Request& req,
                                      httplib::Response& res) {
    try {
      ScanBatch batch = decode_batch(req.body);
      batch.device_id = req.has_header("X-Device-Id")
                            ? req.get_header_value("X-Device-Id")
                            : "unknown";
      IngestSummary summary;
      {
        std::lock_guard lock(impl->store_mutex);
        summary = impl->store.upsert_batch(batch, impl->oui);
      }
      res.status = 200;
      res.set_content(encode_summary(summary), "application/json");
    } catch (const WireError& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(e.what(), "text/plain");
    }
  });

  impl->server.Get("/stats", [impl](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(impl->store_mutex);
    res.set_content(stats_json(impl->store.stats()).dump(), "application/json");
  });

  impl->server.Get(R"(/mac/(.+))", [impl](const httplib::Request& req,
                                                     httplib::Response& res) {
    const auto mac = MacAddress::parse(req.matches[1].str());
    if (!mac) {
      res.status = 400;
      res.set_content("bad mac address", "text/plain");
      return;
    }
    std::lock_guard lock(impl->store_mutex);
    const auto detail = impl->store.query_mac(*mac);
    if (!detail) {
      res.status = 404;
      res.set_content("unknown mac address", "text/plain");
      return;
    }
    res.set_content(detail_json(*detail).dump(), "application/json");
  });

  if (config.port == 0) {
    impl->port = impl->server.bind_to_any_port(config.host);
    if (impl->port <= 0) {
      throw ServeError(ServeError::Kind::BindFailure,
                       "cannot bind to " + config.host);
    }
  } else {
    if (!impl->server.bind_to_port(config.host, config.port)) {
      throw ServeError(ServeError::Kind::BindFailure,
                       "cannot bind to " + config.host + ":" +
                           std::to_string(config.port));
    }
    impl->port = config.port;
  }
  impl->worker = std::thread([impl] { impl->server.listen_after_bind(); });
  impl->server.wait_until_ready();
}

Service::~Service() { stop(); }

int Service::port() const { return impl_->port; }

void Service::stop() {
  if (impl_ && impl_->worker.joinable()) {
    impl_->server.stop();
    impl_->worker.join();
  }
}

}  // namespace probekit
