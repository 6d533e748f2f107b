#pragma once

#include <stdexcept>
#include <string>

#include "probekit/oui.hpp"
#include "probekit/store.hpp"

namespace probekit {

class UploadError : public std::runtime_error {
 public:
  enum class Kind { EndpointUnreachable, ServerRejected, BadEndpoint };
  UploadError(Kind kind, const std::string& msg, int status = 0,
              std::string body = {})
      : std::runtime_error(msg), kind_(kind), status_(status), body_(std::move(body)) {}
  Kind kind() const { return kind_; }
  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  Kind kind_;
  int status_;
  std::string body_;
};

// Encodes the batch and POSTs it to `host:port`/upload with the device id
// in X-Device-Id. Retries once on transient connection failure. The oui
// table only feeds the advisory manufacturer field.
IngestSummary upload(const std::string& endpoint, const ScanBatch& batch,
                     const OuiTable& oui);

}  // namespace probekit
