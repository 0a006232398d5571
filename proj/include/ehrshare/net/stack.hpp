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

#include <memory>
#include <optional>
#include <string>

#include "ehrshare/auth/auth_service.hpp"
#include "ehrshare/net/auth_http.hpp"
#include "ehrshare/net/http.hpp"
#include "ehrshare/net/proxy_http.hpp"
#include "ehrshare/proxy/proxy_service.hpp"
#include "ehrshare/resource/resource_service.hpp"
#include "ehrshare/resource/sweeper.hpp"
#include "ehrshare/storage/document_store.hpp"
#include "ehrshare/storage/ttl_store.hpp"

namespace ehrshare::net {

// Memory stores when data_dir is empty, SQLite files under it otherwise.
struct NodeOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string data_dir;
};

struct ServiceCredentials {
  std::string client_id = "resource-service";
  std::string client_secret;
};

class AuthNode {
 public:
  AuthNode(NodeOptions options, auth::AuthConfig config);
  std::string url() const { return server_->url(); }
  auth::AuthService& service() { return *service_; }

 private:
  std::unique_ptr<storage::DocumentStore> users_;
  std::unique_ptr<storage::TtlStore> families_;
  std::unique_ptr<auth::AuthService> service_;
  std::unique_ptr<BackgroundServer> server_;
};

class ProxyNode {
 public:
  ProxyNode(NodeOptions options, std::string auth_url);
  std::string url() const { return server_->url(); }

 private:
  std::unique_ptr<storage::DocumentStore> vault_;
  std::unique_ptr<HttpAuthClient> verifier_;
  std::unique_ptr<proxy::ProxyService> service_;
  std::unique_ptr<BackgroundServer> server_;
};

class ResourceNode {
 public:
  ResourceNode(NodeOptions options,
               std::string auth_url,
               std::string proxy_url,
               ServiceCredentials credentials,
               resource::ResourceConfig config = {});
  std::string url() const { return server_->url(); }
  resource::ResourceService& service() { return *service_; }

 private:
  std::unique_ptr<storage::DocumentStore> records_;
  std::unique_ptr<HttpAuthClient> auth_;
  std::unique_ptr<HttpProxyClient> proxy_;
  std::unique_ptr<resource::ResourceService> service_;
  std::unique_ptr<resource::Sweeper> sweeper_;
  std::unique_ptr<BackgroundServer> server_;
};

struct StackOptions {
  std::string host = "127.0.0.1";
  int auth_port = 0;
  int proxy_port = 0;
  int resource_port = 0;
  std::string data_dir;
  auth::AuthConfig auth;  // a random JWT key is filled in if empty
  resource::ResourceConfig resource;
};

// All three services over loopback HTTP in one process.
class LocalStack {
 public:
  explicit LocalStack(StackOptions options = {});

  std::string auth_url() const { return auth_->url(); }
  std::string proxy_url() const { return proxy_->url(); }
  std::string resource_url() const { return resource_->url(); }

 private:
  std::unique_ptr<AuthNode> auth_;
  std::unique_ptr<ProxyNode> proxy_;
  std::unique_ptr<ResourceNode> resource_;
};

}  // namespace ehrshare::net
