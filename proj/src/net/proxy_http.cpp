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

#include "ehrshare/net/proxy_http.hpp"

#include "ehrshare/net/http.hpp"

namespace ehrshare::net {
namespace {

using nlohmann::json;

void require_service(const httplib::Request& req, const auth::TokenVerifier& verifier) {
  if (!authenticate(req, verifier).has_role(auth::roles::kService)) {
    throw Error(Errc::forbidden, "service token required");
  }
}

Bytes b64_field(const json& body, const char* name) {
  return base64_decode(body.at(name).get<std::string>());
}

}  // namespace

void mount_proxy_routes(httplib::Server& server,
                        proxy::ProxyService& service,
                        const auth::TokenVerifier& verifier) {
  server.Post("/kfrags", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      require_service(req, verifier);
      const json body = parse_json_body(req.body);
      proxy::KfragBundle bundle{body.at("share_id").get<std::string>(), {},
                                body.at("threshold").get<std::size_t>(),
                                body.at("shares").get<std::size_t>()};
      for (const auto& k : body.at("kfrags")) {
        bundle.kfrags.push_back(base64_decode(k.get<std::string>()));
      }
      service.store_kfrags(bundle);
      write_json(res, {{"ok", true}}, 201);
    });
  });

  server.Post("/reencapsulate", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      require_service(req, verifier);
      const json body = parse_json_body(req.body);
      const auto cfrags =
          service.reencapsulate(body.at("share_id").get<std::string>(), b64_field(body, "capsule"));
      json out = json::array();
      for (const auto& c : cfrags) out.push_back(base64_encode(c));
      write_json(res, {{"cfrags", out}});
    });
  });

  server.Delete(R"(/kfrags/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      require_service(req, verifier);
      service.delete_kfrags(req.matches[1]);
      write_json(res, {{"ok", true}});
    });
  });
}

HttpProxyClient::HttpProxyClient(std::string base_url, std::function<std::string()> token)
    : base_url_(std::move(base_url)), token_(std::move(token)) {}

httplib::Headers HttpProxyClient::headers() const {
  return {{"Authorization", "Bearer " + token_()}};
}

void HttpProxyClient::store_kfrags(const proxy::KfragBundle& bundle) {
  json kfrags = json::array();
  for (const auto& k : bundle.kfrags) kfrags.push_back(base64_encode(k));
  const json body = {{"share_id", bundle.share_id},
                     {"kfrags", kfrags},
                     {"threshold", bundle.threshold},
                     {"shares", bundle.shares}};
  auto cli = make_client(base_url_);
  expect_ok(cli.Post("/kfrags", headers(), body.dump(), "application/json"));
}

std::vector<Bytes> HttpProxyClient::reencapsulate(const std::string& share_id, ByteView capsule) {
  const json body = {{"share_id", share_id}, {"capsule", base64_encode(capsule)}};
  auto cli = make_client(base_url_);
  const json got =
      json::parse(expect_ok(cli.Post("/reencapsulate", headers(), body.dump(), "application/json")).body);
  std::vector<Bytes> out;
  for (const auto& c : got.at("cfrags")) out.push_back(base64_decode(c.get<std::string>()));
  return out;
}

void HttpProxyClient::delete_kfrags(const std::string& share_id) {
  auto cli = make_client(base_url_);
  expect_ok(cli.Delete("/kfrags/" + share_id, headers()));
}

}  // namespace ehrshare::net
