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

#include <httplib.h>

#include "ehrshare/auth/user_directory.hpp"
#include "ehrshare/proxy/proxy_service.hpp"

namespace ehrshare::net {

// POST /kfrags, POST /reencapsulate, DELETE /kfrags/{share_id}. Every call
// needs a bearer token carrying the service role.
void mount_proxy_routes(httplib::Server& server,
                        proxy::ProxyService& service,
                        const auth::TokenVerifier& verifier);

class HttpProxyClient final : public proxy::ProxyClient {
 public:
  HttpProxyClient(std::string base_url, std::function<std::string()> token);

  void store_kfrags(const proxy::KfragBundle& bundle) override;
  std::vector<Bytes> reencapsulate(const std::string& share_id, ByteView capsule) override;
  void delete_kfrags(const std::string& share_id) override;

 private:
  httplib::Headers headers() const;

  std::string base_url_;
  std::function<std::string()> token_;
};

}  // namespace ehrshare::net
