#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "probekit/oui.hpp"
#include "probekit/store.hpp"

namespace probekit {

class ServeError : public std::runtime_error {
 public:
  enum class Kind { BindFailure };
  ServeError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 = pick a free port
};

// Ingestion endpoint:
//   POST /upload        body: upload document, header X-Device-Id
//   GET  /stats
//   GET  /mac/{address}
// Uploads are serialized through the store's single-writer contract, so
// concurrent batches from distinct devices each commit atomically.
class Service {
 public:
  Service(Store& store, OuiTable oui, const ServeConfig& config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  int port() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace probekit
