#include "probekit/client.hpp"

#include <httplib.h>

#include "probekit/wire.hpp"

namespace probekit {

IngestSummary upload(const std::string& endpoint, const ScanBatch& batch,
                     const OuiTable& oui) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
    throw UploadError(UploadError::Kind::BadEndpoint,
                      "endpoint must be host:port, got \"" + endpoint + "\"");
  }
  const std::string host = endpoint.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(endpoint.substr(colon + 1));
  } catch (const std::exception&) {
    throw UploadError(UploadError::Kind::BadEndpoint,
                      "bad port in \"" + endpoint + "\"");
  }

  const std::string body = encode_batch(batch, oui);
  httplib::Headers headers{
      {"X-Device-Id", batch.device_id.empty() ? "unknown" : batch.device_id}};

  httplib::Client cli(host, port);
  cli.set_connection_timeout(5);
  cli.set_read_timeout(30);

  auto res = cli.Post("/upload", headers, body, "application/json");
  if (!res) {
    // one retry on transient failure
    res = cli.Post("/upload", headers, body, "application/json");
  }
  if (!res) {
    throw UploadError(UploadError::Kind::EndpointUnreachable,
                      "cannot reach " + endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw UploadError(UploadError::Kind::ServerRejected,
                      "server returned " + std::to_string(res->status) + ": " + res->body,
                      res->status, res->body);
  }
  return decode_summary(res->body);
}

}  // namespace probekit
