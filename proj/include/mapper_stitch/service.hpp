/**
 * Read-only HTTP service over a data directory. Handlers are plain functions
 * of the request body so they can be exercised without a socket.
 */
#ifndef MAPPER_STITCH_SERVICE_HPP
#define MAPPER_STITCH_SERVICE_HPP

#include <filesystem>
#include <functional>
#include <list>
#include <mutex>
#include <string>
#include <unordered_map>

#include <httplib.h>

#include "mapper_stitch/serialize.hpp"

namespace mapper_stitch {

struct Response {
  int status = 200;
  std::string body;
};

inline Response error_response(int status, const std::string& error, const std::string& reason) {
  return {status, json{{"error", error}, {"reason", reason}}.dump() + "\n"};
}

class MatrixService {
 public:
  explicit MatrixService(std::filesystem::path data_dir, std::size_t cache_capacity = 32)
      : data_dir_(std::move(data_dir)), capacity_(cache_capacity) {}

  const std::filesystem::path& data_dir() const { return data_dir_; }

  Response health() const { return {200, json{{"status", "ok"}, {"version", schema_version}}.dump() + "\n"}; }

  /// CSV files in the data directory plus the built-in shapes.
  Response datasets() const {
    json list = json::array();
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir_, ec))
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        auto table = read_csv_table(f.string());
        list.push_back({{"name", f.stem().string()},
                        {"kind", "csv"},
                        {"rows", table.rows.size()},
                        {"variables", table.header}});
      } catch (const DataError&) {
        // Unreadable files are not offered.
      }
    }
    for (auto shape : {Shape::circle, Shape::two_circles, Shape::cylinder, Shape::half_cylinder, Shape::sphere}) {
      auto sample = generate_shape(shape, 10, 0.0, 0);
      std::vector<std::string> vars = sample.coordinate_names();
      vars.push_back("linf");
      list.push_back({{"name", shape_name(shape)}, {"kind", "shape"}, {"variables", vars}});
    }
    return {200, json{{"datasets", std::move(list)}}.dump() + "\n"};
  }

  Response matrix(const std::string& body) {
    MatrixSpec spec;
    try {
      spec = spec_from_string(body);
    } catch (const SpecError& e) {
      return error_response(400, "invalid spec", e.what());
    }
    const std::string key = to_json(spec).dump();
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return {200, it->second};
    }
    std::string out;
    try {
      out = dump_result(compute_matrix(spec, data_dir_, false));
    } catch (const DatasetNotFound& e) {
      return error_response(404, "unknown dataset", e.what());
    } catch (const SpecError& e) {
      return error_response(400, "invalid spec", e.what());
    } catch (const DataError& e) {
      return error_response(400, "invalid dataset", e.what());
    }
    std::lock_guard lock(mutex_);
    if (!cache_.count(key)) {
      order_.push_back(key);
      cache_.emplace(key, out);
      if (order_.size() > capacity_) {
        cache_.erase(order_.front());
        order_.pop_front();
      }
    }
    return {200, out};
  }

 private:
  std::filesystem::path data_dir_;
  std::size_t capacity_;
  std::mutex mutex_;
  std::unordered_map<std::string, std::string> cache_;
  std::list<std::string> order_;
};

inline void install_routes(httplib::Server& server, MatrixService& service) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get("/api/health", [&, reply](const httplib::Request&, httplib::Response& res) { reply(res, service.health()); });
  server.Get("/api/datasets",
             [&, reply](const httplib::Request&, httplib::Response& res) { reply(res, service.datasets()); });
  server.Post("/api/matrix", [&, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.matrix(req.body));
  });
}

/// Blocks until the server stops. `static_dir`, when non-empty, is mounted at "/".
inline bool serve(const std::string& bind, int port, const std::filesystem::path& data_dir,
                  const std::filesystem::path& static_dir = {},
                  const std::function<void(httplib::Server&)>& on_ready = {}) {
  MatrixService service(data_dir);
  httplib::Server server;
  install_routes(server, service);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir.string())) return false;
  if (!server.bind_to_port(bind, port)) return false;
  if (on_ready) on_ready(server);
  return server.listen_after_bind();
}

}  // namespace mapper_stitch

#endif
