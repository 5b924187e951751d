#include "mock_server.hpp"

#include <httplib.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nuclib::testing {

namespace {

constexpr const char* kPath = "/relnsd/v1/data";

std::string key_for(const httplib::Request& req) {
  const std::string fields = req.get_param_value("fields");
  const std::string nuclide = req.get_param_value("nuclides");
  if (fields == "decay_rads") return nuclide + ":dr-" + req.get_param_value("rad_types");
  if (fields == "levels") return nuclide + ":lv";
  if (fields == "gammas") return nuclide + ":tr";
  return {};
}

}  // namespace

MockServer::MockServer(std::filesystem::path dir, std::chrono::milliseconds latency)
    : dir_(std::move(dir)), server_(std::make_unique<httplib::Server>()), latency_ms_(latency.count()) {
  server_->Get(kPath, [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    const std::string key = key_for(req);
    {
      std::lock_guard lock(mutex_);
      ++per_key_[key];
    }
    if (const auto ms = latency_ms_.load(); ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    if (const int status = failure_status_.load(); status != 0) {
      res.status = status;
      return;
    }
    if (key.empty()) {
      res.status = 400;
      return;
    }
    std::string stem = key;
    stem[stem.find(':')] = '_';
    std::ifstream in(dir_ / (stem + ".csv"), std::ios::binary);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      res.set_content(buf.str(), "text/csv");
    } else {
      res.set_content("energy,unc_en,intensity\n", "text/csv");
    }
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock server cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockServer::~MockServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + kPath; }

std::size_t MockServer::requests_for(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = per_key_.find(key);
  return it == per_key_.end() ? 0 : it->second;
}

}  // namespace nuclib::testing
