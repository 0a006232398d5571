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

#include "ehrshare/net/stack.hpp"

#include <filesystem>

#include "ehrshare/common/ids.hpp"
#include "ehrshare/net/resource_http.hpp"

namespace ehrshare::net {
namespace {

std::unique_ptr<storage::DocumentStore> document_store(const NodeOptions& o, const std::string& name) {
  if (o.data_dir.empty()) return std::make_unique<storage::MemoryDocumentStore>();
  std::filesystem::create_directories(o.data_dir);
  return std::make_unique<storage::SqliteDocumentStore>(
      (std::filesystem::path(o.data_dir) / (name + ".db")).string());
}

std::unique_ptr<storage::TtlStore> ttl_store(const NodeOptions& o, const std::string& name) {
  if (o.data_dir.empty()) return std::make_unique<storage::MemoryTtlStore>(system_clock());
  std::filesystem::create_directories(o.data_dir);
  return std::make_unique<storage::SqliteTtlStore>(
      (std::filesystem::path(o.data_dir) / (name + ".db")).string(), system_clock());
}

std::unique_ptr<httplib::Server> new_server(std::size_t max_payload) {
  auto server = std::make_unique<httplib::Server>();
  server->set_payload_max_length(max_payload);
  server->set_read_timeout(120, 0);
  server->set_write_timeout(120, 0);
  return server;
}

}  // namespace

AuthNode::AuthNode(NodeOptions options, auth::AuthConfig config)
    : users_(document_store(options, "users")), families_(ttl_store(options, "families")) {
  service_ = std::make_unique<auth::AuthService>(*users_, *families_, std::move(config));
  auto server = new_server(1 << 20);
  mount_auth_routes(*server, *service_);
  server_ = std::make_unique<BackgroundServer>(std::move(server), options.host, options.port);
}

ProxyNode::ProxyNode(NodeOptions options, std::string auth_url)
    : vault_(document_store(options, "vault")),
      verifier_(std::make_unique<HttpAuthClient>(std::move(auth_url))),
      service_(std::make_unique<proxy::ProxyService>(*vault_)) {
  auto server = new_server(4 << 20);
  mount_proxy_routes(*server, *service_, *verifier_);
  server_ = std::make_unique<BackgroundServer>(std::move(server), options.host, options.port);
}

ResourceNode::ResourceNode(NodeOptions options,
                           std::string auth_url,
                           std::string proxy_url,
                           ServiceCredentials credentials,
                           resource::ResourceConfig config)
    : records_(document_store(options, "records")),
      auth_(std::make_unique<HttpAuthClient>(std::move(auth_url), credentials.client_id,
                                             credentials.client_secret)) {
  proxy_ = std::make_unique<HttpProxyClient>(std::move(proxy_url),
                                             [auth = auth_.get()] { return auth->service_token(); });
  service_ = std::make_unique<resource::ResourceService>(*records_, *auth_, *proxy_, config);
  sweeper_ = std::make_unique<resource::Sweeper>(
      *service_, std::chrono::duration_cast<std::chrono::milliseconds>(config.sweep_interval));
  // Multipart framing on top of the file itself.
  auto server = new_server(config.max_upload_bytes + (1 << 20));
  mount_resource_routes(*server, *service_, *auth_);
  server_ = std::make_unique<BackgroundServer>(std::move(server), options.host, options.port);
}

LocalStack::LocalStack(StackOptions o) {
  if (o.auth.jwt_key.empty()) {
    o.auth.jwt_key.resize(32);
    fill_random(o.auth.jwt_key);
  }
  ServiceCredentials creds{"resource-service", new_uuid()};
  o.auth.service_clients[creds.client_id] = creds.client_secret;
  const auto sub = [&](const char* name) {
    return o.data_dir.empty() ? std::string() : (std::filesystem::path(o.data_dir) / name).string();
  };
  auth_ = std::make_unique<AuthNode>(NodeOptions{o.host, o.auth_port, sub("auth")}, o.auth);
  proxy_ = std::make_unique<ProxyNode>(NodeOptions{o.host, o.proxy_port, sub("proxy")}, auth_->url());
  resource_ = std::make_unique<ResourceNode>(NodeOptions{o.host, o.resource_port, sub("resource")},
                                             auth_->url(), proxy_->url(), creds, o.resource);
}

}  // namespace ehrshare::net
