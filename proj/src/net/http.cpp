// Copyright 2026 The ehrshare Authors
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

#include "ehrshare/net/http.hpp"

#include "ehrshare/common/bytes.hpp"

namespace ehrshare::net {

using nlohmann::json;

int http_status(Errc code) {
  switch (code) {
    case Errc::validation:
    case Errc::decode:
    case Errc::parameter:
    case Errc::capsule:
      return 400;
    case Errc::unauthorized:
    case Errc::token_malformed:
    case Errc::token_signature:
    case Errc::token_expired:
    case Errc::family_revoked:
      return 401;
    case Errc::forbidden:
      return 403;
    case Errc::not_found:
      return 404;
    case Errc::conflict:
    case Errc::state:
      return 409;
    case Errc::size:
      return 413;
    case Errc::business_rule:
      return 422;
    case Errc::threshold:
    case Errc::integrity:
    case Errc::verification:
      return 502;
    case Errc::unavailable:
      return 503;
    case Errc::decryption:
    case Errc::entropy:
    case Errc::configuration:
    case Errc::internal:
      return 500;
  }
  return 500;
}

void write_json(httplib::Response& res, const json& body, int status) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void write_error(httplib::Response& res, const Error& e) {
  write_json(res, {{"error", errc_name(e.code())}, {"message", e.what()}}, http_status(e.code()));
}

void guarded(httplib::Response& res, const std::function<void()>& handler) {
  try {
    handler();
  } catch (const Error& e) {
    write_error(res, e);
  } catch (const json::exception& e) {
    write_error(res, Error(Errc::validation, e.what()));
  } catch (const std::exception& e) {
    write_error(res, Error(Errc::internal, e.what()));
  }
}

void throw_from(const httplib::Result& result) {
  if (!result) {
    throw Error(Errc::unavailable, "request failed: " + httplib::to_string(result.error()));
  }
  const json body = json::parse(result->body, nullptr, false);
  if (body.is_object() && body.contains("error") && body["error"].is_string()) {
    const auto code = errc_from_name(body["error"].get<std::string>());
    if (code) throw Error(*code, body.value("message", ""));
  }
  throw Error(result->status >= 500 ? Errc::unavailable : Errc::internal,
              "HTTP " + std::to_string(result->status));
}

const httplib::Response& expect_ok(const httplib::Result& result) {
  if (!result || result->status < 200 || result->status >= 300) throw_from(result);
  return *result;
}

json parse_json_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::validation, "request body must be a JSON object");
  }
  return j;
}

std::string bearer_token(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0) {
    throw Error(Errc::unauthorized, "missing bearer token");
  }
  return header.substr(kPrefix.size());
}

auth::Claims authenticate(const httplib::Request& req, const auth::TokenVerifier& verifier) {
  return verifier.verify_access_token(bearer_token(req));
}

httplib::Client make_client(const std::string& base_url) {
  httplib::Client client(base_url);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(120, 0);
  client.set_write_timeout(120, 0);
  return client;
}

BackgroundServer::BackgroundServer(std::unique_ptr<httplib::Server> server,
                                   const std::string& host,
                                   int port)
    : server_(std::move(server)), host_(host) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host_);
  } else {
    port_ = server_->bind_to_port(host_, port) ? port : -1;
  }
  if (port_ <= 0) throw Error(Errc::unavailable, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

BackgroundServer::~BackgroundServer() { stop(); }

void BackgroundServer::stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
}

std::string BackgroundServer::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

}  // namespace ehrshare::net
