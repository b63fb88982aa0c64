#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <httplib.h>

#include "pidlint/service.hpp"

namespace pidlint {

// Routes the review API onto an httplib server. When `ui_dir` exists its
// contents are served at `/`.
inline void bind_routes(httplib::Server& server, ReviewService& service,
                        const std::optional<std::filesystem::path>& ui_dir = std::nullopt) {
  server.set_default_headers({
      {"Access-Control-Allow-Origin", "*"},
      {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
      {"Access-Control-Allow-Headers", "Content-Type"},
  });
  auto send = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body, api.content_type.c_str());
  };

  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Get("/api/rules", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.list_rules());
  });
  server.Post("/api/sessions", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_session(req.body));
  });
  server.Get(R"(/api/sessions/([^/]+))",
             [&service, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.get_session(req.matches[1]));
             });
  server.Get(R"(/api/sessions/([^/]+)/proposals)",
             [&service, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.get_proposals(req.matches[1]));
             });
  server.Post(R"(/api/sessions/([^/]+)/proposals/([^/]+)/(accept|reject))",
              [&service, send](const httplib::Request& req, httplib::Response& res) {
                send(res, service.decide(req.matches[1], req.matches[2], req.matches[3].str()));
              });
  server.Get(R"(/api/sessions/([^/]+)/export)",
             [&service, send](const httplib::Request& req, httplib::Response& res) {
               std::string format = req.has_param("format") ? req.get_param_value("format") : "pidg";
               send(res, service.export_session(req.matches[1], format));
             });

  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    server.set_mount_point("/", ui_dir->string());
  }
}

}  // namespace pidlint
