// Copyright 2026 The wordvec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <optional>
#include <string>

#include "httplib.h"
#include "wordvec/service.hpp"

namespace wordvec::service {

namespace detail {

inline void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

// Empty bodies parse as {}.
inline std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  if (req.body.empty()) return json::object();
  try {
    auto body = json::parse(req.body);
    if (body.is_object()) return body;
    send(res, error_response(400, "body must be a JSON object"));
  } catch (const json::exception& e) {
    send(res, error_response(400, std::string("invalid JSON body: ") + e.what()));
  }
  return std::nullopt;
}

inline std::optional<std::uint64_t> parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Registers the session API on `server`:
///
///   POST   /sessions
///   POST   /sessions/{id}/step        {"n": int}
///   POST   /sessions/{id}/activate    {"ids": [int]}
///   GET    /sessions/{id}/state?version=
///   GET    /sessions/{id}/pca?basis=both|input
///   POST   /sessions/{id}/eta         {"eta": real}
///   GET    /sessions/{id}/neighbors?word=&k=
///   DELETE /sessions/{id}
inline void mount(httplib::Server& server, SessionService& svc) {
  using detail::send;
  using Req = httplib::Request;
  using Res = httplib::Response;

  server.Post("/sessions", [&svc](const Req& req, Res& res) {
    if (auto body = detail::parse_body(req, res)) send(res, svc.create(*body));
  });
  server.Post(R"(/sessions/([^/]+)/step)", [&svc](const Req& req, Res& res) {
    if (auto body = detail::parse_body(req, res)) send(res, svc.step(req.matches[1], *body));
  });
  server.Post(R"(/sessions/([^/]+)/activate)", [&svc](const Req& req, Res& res) {
    if (auto body = detail::parse_body(req, res)) send(res, svc.activate(req.matches[1], *body));
  });
  server.Post(R"(/sessions/([^/]+)/eta)", [&svc](const Req& req, Res& res) {
    if (auto body = detail::parse_body(req, res))
      send(res, svc.set_learning_rate(req.matches[1], *body));
  });
  server.Get(R"(/sessions/([^/]+)/state)", [&svc](const Req& req, Res& res) {
    std::optional<std::uint64_t> version;
    if (req.has_param("version")) {
      version = detail::parse_u64(req.get_param_value("version"));
      if (!version) return send(res, error_response(400, "version must be a non-negative integer"));
    }
    send(res, svc.state(req.matches[1], version));
  });
  server.Get(R"(/sessions/([^/]+)/pca)", [&svc](const Req& req, Res& res) {
    PcaBasis basis = PcaBasis::both;
    if (req.has_param("basis")) {
      const auto b = req.get_param_value("basis");
      if (b == "input")
        basis = PcaBasis::input;
      else if (b != "both")
        return send(res, error_response(400, "basis must be 'both' or 'input'"));
    }
    send(res, svc.pca(req.matches[1], basis));
  });
  server.Get(R"(/sessions/([^/]+)/neighbors)", [&svc](const Req& req, Res& res) {
    if (!req.has_param("word")) return send(res, error_response(400, "missing 'word' parameter"));
    std::uint64_t k = 10;
    if (req.has_param("k")) {
      const auto parsed = detail::parse_u64(req.get_param_value("k"));
      if (!parsed) return send(res, error_response(400, "k must be a non-negative integer"));
      k = *parsed;
    }
    send(res, svc.neighbors(req.matches[1], req.get_param_value("word"), k));
  });
  server.Delete(R"(/sessions/([^/]+))", [&svc](const Req& req, Res& res) {
    send(res, svc.remove(req.matches[1]));
  });
}

}  // namespace wordvec::service
