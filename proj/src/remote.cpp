#include "nuclib/remote.hpp"

#include <httplib.h>

#include "nuclib/error.hpp"
#include "nuclib/text.hpp"

namespace nuclib {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // begins with '/'
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::network_error, "bad base URL '" + url + "'");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse HttplibTransport::get(const std::string& base_url, const HttpRequest& request,
                                   std::chrono::milliseconds timeout) {
  auto [origin, path] = split_url(base_url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (origin.rfind("https://", 0) == 0)
    throw Error(Errc::network_error, "built without TLS support; cannot reach " + origin);
#endif
  httplib::Client client(origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_follow_location(true);

  httplib::Params params;
  for (const auto& [k, v] : request.query) params.emplace(k, v);
  httplib::Headers headers{{"User-Agent", "nuclib/0.1"}, {"Accept", "text/csv"}};

  auto res = client.Get(path, params, headers);
  if (!res) throw Error(Errc::network_error, origin + path + ": " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw Error(Errc::network_error, origin + path + ": HTTP " + std::to_string(res->status));
  return {res->status, res->body};
}

HttpRequest LiveChartAdapter::request_for(const DatasetKey& key) const {
  HttpRequest req;
  const std::string nuclide = format_nuclide_id(key.nuclide());
  switch (key.kind().category()) {
    case DatasetCategory::decay_rads:
      req.query = {{"fields", "decay_rads"},
                   {"nuclides", nuclide},
                   {"rad_types", std::string(radiation_code(key.kind().radiation()))}};
      break;
    case DatasetCategory::levels:
      req.query = {{"fields", "levels"}, {"nuclides", nuclide}};
      break;
    case DatasetCategory::transitions:
      req.query = {{"fields", "gammas"}, {"nuclides", nuclide}};
      break;
  }
  return req;
}

bool LiveChartAdapter::has_data(std::string_view body) const {
  int non_blank = 0;
  for (auto line : text::split_lines(body))
    if (!text::trim(line).empty() && ++non_blank >= 2) return true;
  return false;
}

}  // namespace nuclib
