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

#pragma once

#include <functional>
#include <string>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "ehrshare/auth/user_directory.hpp"
#include "ehrshare/common/error.hpp"

namespace ehrshare::net {

int http_status(Errc code);

// Writes {"error": <code name>, "message": ...} with the mapped status.
void write_error(httplib::Response& res, const Error& e);
void write_json(httplib::Response& res, const nlohmann::json& body, int status = 200);

// Runs `handler`, turning any exception into an error response.
void guarded(httplib::Response& res, const std::function<void()>& handler);

// Rebuilds the server's Error from a failed response; a transport failure
// becomes Errc::unavailable.
[[noreturn]] void throw_from(const httplib::Result& result);
// Returns the result when its status is 2xx, throws otherwise.
const httplib::Response& expect_ok(const httplib::Result& result);

nlohmann::json parse_json_body(const std::string& body);
std::string bearer_token(const httplib::Request& req);  // Errc::unauthorized if absent

// Claims of the bearer token, or throws.
auth::Claims authenticate(const httplib::Request& req, const auth::TokenVerifier& verifier);

// "http://host:port" -> client with sane timeouts.
httplib::Client make_client(const std::string& base_url);

// Binds to `port` (0 picks a free one) and serves on a background thread.
class BackgroundServer {
 public:
  explicit BackgroundServer(std::unique_ptr<httplib::Server> server,
                            const std::string& host = "127.0.0.1",
                            int port = 0);
  ~BackgroundServer();
  BackgroundServer(const BackgroundServer&) = delete;
  BackgroundServer& operator=(const BackgroundServer&) = delete;

  int port() const { return port_; }
  std::string url() const;
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::string host_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace ehrshare::net
