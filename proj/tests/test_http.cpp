#include <doctest.h>

#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "probekit/client.hpp"
#include "probekit/server.hpp"
#include "probekit/wire.hpp"
#include "support.hpp"

using namespace probekit;
using namespace testsupport;

namespace {

struct TestServer {
  Store store;
  Service service;
  explicit TestServer(OuiTable oui = example_oui())
      : service(store, std::move(oui), ServeConfig{"127.0.0.1", 0}) {}
  std::string endpoint() const {
    return "127.0.0.1:" + std::to_string(service.port());
  }
};

}  // namespace

TEST_CASE("POST /upload: empty document") {
  TestServer server;
  httplib::Client cli("127.0.0.1", server.service.port());
  const auto res = cli.Post("/upload", "{}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(decode_summary(res->body) == IngestSummary{0, 0, 0});
}

TEST_CASE("POST /upload: the example document lands in the store") {
  TestServer server;
  httplib::Client cli("127.0.0.1", server.service.port());
  const std::string body = encode_batch(example_batch(), OuiTable{});
  httplib::Headers headers{{"X-Device-Id", "laptop-3"}};
  const auto res = cli.Post("/upload", headers, body, "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(decode_summary(res->body) == IngestSummary{1, 1, 2});

  // manufacturer is recomputed server-side from the server's registry
  const auto detail = server.store.query_mac(mac("80:7a:bf:3b:bd:d9"));
  REQUIRE(detail.has_value());
  CHECK(detail->record.manufacturer == "Apple");
}

TEST_CASE("POST /upload: malformed body is a 400 and changes nothing") {
  TestServer server;
  httplib::Client cli("127.0.0.1", server.service.port());
  const auto res = cli.Post("/upload", "not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(server.store.stats() == StoreStats{0, 0, 0, 0});
}

TEST_CASE("GET /stats") {
  TestServer server;
  httplib::Client cli("127.0.0.1", server.service.port());
  cli.Post("/upload", encode_batch(example_batch(), OuiTable{}), "application/json");
  const auto res = cli.Get("/stats");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto doc = nlohmann::json::parse(res->body);
  CHECK(doc["total_sightings"] == 2);
  CHECK(doc["unique_macs"] == 1);
  CHECK(doc["manufacturer_count"] == 1);
  CHECK(doc["unique_ssids"] == 1);
}

TEST_CASE("GET /mac/{address}") {
  TestServer server;
  httplib::Client cli("127.0.0.1", server.service.port());
  cli.Post("/upload", encode_batch(example_batch(), OuiTable{}), "application/json");

  const auto found = cli.Get("/mac/80:7a:bf:3b:bd:d9");
  REQUIRE(found);
  CHECK(found->status == 200);
  const auto doc = nlohmann::json::parse(found->body);
  CHECK(doc["address"] == "80:7a:bf:3b:bd:d9");
  CHECK(doc["times_seen"] == 2);
  CHECK(doc["known_ssids"] == nlohmann::json::array({"UCD Wireless"}));

  const auto missing = cli.Get("/mac/00:11:22:33:44:55");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  const auto bad = cli.Get("/mac/zz:zz");
  REQUIRE(bad);
  CHECK(bad->status == 400);
}

TEST_CASE("upload client: round trip against a live server") {
  TestServer server;
  ScanBatch batch = example_batch();
  const auto summary = upload(server.endpoint(), batch, OuiTable{});
  CHECK(summary == IngestSummary{1, 1, 2});
  CHECK(server.store.stats() == StoreStats{2, 1, 1, 1});
}

TEST_CASE("upload client: empty batch") {
  TestServer server;
  CHECK(upload(server.endpoint(), ScanBatch{}, OuiTable{}) == IngestSummary{0, 0, 0});
}

TEST_CASE("upload client: unreachable endpoint") {
  try {
    upload("127.0.0.1:1", ScanBatch{}, OuiTable{});  // nothing listens on port 1
    FAIL("expected UploadError");
  } catch (const UploadError& e) {
    CHECK(e.kind() == UploadError::Kind::EndpointUnreachable);
  }
}

TEST_CASE("upload client: a failing store surfaces as ServerRejected(500)") {
  Store broken = Store::open("/nonexistent-probekit-dir/server-store.json");
  Service service(broken, OuiTable{}, ServeConfig{"127.0.0.1", 0});
  try {
    upload("127.0.0.1:" + std::to_string(service.port()), example_batch(), OuiTable{});
    FAIL("expected UploadError");
  } catch (const UploadError& e) {
    CHECK(e.kind() == UploadError::Kind::ServerRejected);
    CHECK(e.status() == 500);
  }
  // the failed batch left nothing behind
  CHECK(broken.stats() == StoreStats{0, 0, 0, 0});
}

TEST_CASE("concurrent uploads from distinct devices all commit atomically") {
  TestServer server;
  constexpr int kDevices = 8;
  constexpr int kBatchesPerDevice = 5;
  std::vector<std::thread> workers;
  for (int d = 0; d < kDevices; ++d) {
    workers.emplace_back([&, d] {
      for (int b = 0; b < kBatchesPerDevice; ++b) {
        ScanBatch batch;
        batch.device_id = "device-" + std::to_string(d);
        batch.scan_start = 1480879434 + (d * kBatchesPerDevice + b) * 900;
        batch.scan_len_s = 45;
        std::array<std::uint8_t, 6> octets{0x80, 0x7a, 0xbf, 0,
                                           static_cast<std::uint8_t>(d),
                                           static_cast<std::uint8_t>(b)};
        batch.sightings.push_back({MacAddress(octets), "Broadcast",
                                   batch.scan_start + 1, {}});
        batch.sightings.push_back({MacAddress(octets), "net-" + std::to_string(d),
                                   batch.scan_start + 2, {}});
        upload(server.endpoint(), batch, OuiTable{});
      }
    });
  }
  for (auto& w : workers) w.join();
  const auto stats = server.store.stats();
  CHECK(stats.total_sightings == kDevices * kBatchesPerDevice * 2);
  CHECK(stats.unique_macs == kDevices * kBatchesPerDevice);
  CHECK(stats.unique_ssids == kDevices);
}

TEST_CASE("server stats equal local application of the same batches") {
  // commutativity over devices: the server result matches a local fold
  TestServer server;
  Store local;
  const auto oui = example_oui();
  std::vector<ScanBatch> batches;
  for (int i = 0; i < 6; ++i) {
    ScanBatch batch;
    batch.scan_start = 2000 + i * 100;
    batch.scan_len_s = 45;
    std::array<std::uint8_t, 6> octets{0x80, 0x7a, 0xbf, 1, 2,
                                       static_cast<std::uint8_t>(i % 3)};
    batch.sightings.push_back({MacAddress(octets), "Broadcast",
                               batch.scan_start + 5, {}});
    batches.push_back(batch);
  }
  for (const auto& b : batches) upload(server.endpoint(), b, OuiTable{});
  // apply locally in reverse order
  for (auto it = batches.rbegin(); it != batches.rend(); ++it) {
    local.upsert_batch(*it, oui);
  }
  CHECK(server.store.stats() == local.stats());
}

TEST_CASE("bind failure") {
  Store store;
  CHECK_THROWS_AS(Service(store, OuiTable{}, ServeConfig{"256.1.1.1", 80}), ServeError);
}
