#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nuclib/dataset_key.hpp"

namespace nuclib {

struct HttpRequest {
  std::vector<std::pair<std::string, std::string>> query;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// One GET against a base URL. Transport failures (connection refused,
// timeout, non-2xx status) throw Error(network_error).
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& base_url, const HttpRequest& request,
                           std::chrono::milliseconds timeout) = 0;
};

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse get(const std::string& base_url, const HttpRequest& request,
                   std::chrono::milliseconds timeout) override;
};

// Maps dataset keys onto a concrete web API and decides whether a response
// carries data. Swapping databases means swapping adapters.
class RemoteAdapter {
 public:
  virtual ~RemoteAdapter() = default;
  virtual std::string source_id() const = 0;
  virtual HttpRequest request_for(const DatasetKey& key) const = 0;
  // False for an authoritative "no such dataset" reply.
  virtual bool has_data(std::string_view body) const = 0;
};

// IAEA Live Chart of Nuclides style CSV endpoint:
//   ?fields=decay_rads&nuclides=225ac&rad_types=a
//   ?fields=levels&nuclides=99tc
//   ?fields=gammas&nuclides=99tc
class LiveChartAdapter final : public RemoteAdapter {
 public:
  std::string source_id() const override { return "iaea-livechart"; }
  HttpRequest request_for(const DatasetKey& key) const override;
  // A reply without at least one data row below the header means "absent".
  bool has_data(std::string_view body) const override;
};

inline constexpr std::string_view kDefaultBaseUrl = "https://nds.iaea.org/relnsd/v1/data";

}  // namespace nuclib
