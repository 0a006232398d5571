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

// ehrshare-server: runs the auth, proxy and resource services, together or
// one per process.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/common/error.hpp"
#include "ehrshare/net/stack.hpp"

namespace {

using namespace ehrshare;

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

std::string required_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) throw Error(Errc::configuration, std::string(name) + " must be set");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ehrshare services"};
  std::string role = "all", host = "127.0.0.1", data_dir, auth_url, proxy_url;
  int auth_port = 8081, proxy_port = 8082, resource_port = 8080;
  app.add_option("--role", role, "all|auth|proxy|resource")
      ->check(CLI::IsMember({"all", "auth", "proxy", "resource"}))
      ->capture_default_str();
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--auth-port", auth_port)->capture_default_str();
  app.add_option("--proxy-port", proxy_port)->capture_default_str();
  app.add_option("--resource-port", resource_port)->capture_default_str();
  app.add_option("--data-dir", data_dir, "SQLite files go here; in-memory stores if omitted");
  app.add_option("--auth-url", auth_url, "auth service URL (proxy/resource roles)");
  app.add_option("--proxy-url", proxy_url, "proxy service URL (resource role)");
  app.footer(
      "Environment: EHRSHARE_JWT_KEY (base64, >= 32 bytes; auth role, random if unset with --role all)\n"
      "             EHRSHARE_SERVICE_SECRET (resource service client secret; auth and resource roles)");
  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    auth::AuthConfig auth_config;
    if (const char* key = std::getenv("EHRSHARE_JWT_KEY")) auth_config.jwt_key = base64_decode(key);

    std::unique_ptr<net::LocalStack> stack;
    std::unique_ptr<net::AuthNode> auth_node;
    std::unique_ptr<net::ProxyNode> proxy_node;
    std::unique_ptr<net::ResourceNode> resource_node;

    if (role == "all") {
      net::StackOptions o;
      o.host = host;
      o.auth_port = auth_port;
      o.proxy_port = proxy_port;
      o.resource_port = resource_port;
      o.data_dir = data_dir;
      o.auth = auth_config;
      stack = std::make_unique<net::LocalStack>(o);
      std::cout << "auth     " << stack->auth_url() << "\nproxy    " << stack->proxy_url()
                << "\nresource " << stack->resource_url() << std::endl;
    } else if (role == "auth") {
      if (auth_config.jwt_key.empty()) throw Error(Errc::configuration, "EHRSHARE_JWT_KEY must be set");
      auth_config.service_clients["resource-service"] = required_env("EHRSHARE_SERVICE_SECRET");
      auth_node = std::make_unique<net::AuthNode>(net::NodeOptions{host, auth_port, data_dir}, auth_config);
      std::cout << "auth " << auth_node->url() << std::endl;
    } else if (role == "proxy") {
      if (auth_url.empty()) throw Error(Errc::configuration, "--auth-url is required");
      proxy_node = std::make_unique<net::ProxyNode>(net::NodeOptions{host, proxy_port, data_dir}, auth_url);
      std::cout << "proxy " << proxy_node->url() << std::endl;
    } else {
      if (auth_url.empty() || proxy_url.empty()) {
        throw Error(Errc::configuration, "--auth-url and --proxy-url are required");
      }
      resource_node = std::make_unique<net::ResourceNode>(
          net::NodeOptions{host, resource_port, data_dir}, auth_url, proxy_url,
          net::ServiceCredentials{"resource-service", required_env("EHRSHARE_SERVICE_SECRET")});
      std::cout << "resource " << resource_node->url() << std::endl;
    }

    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return 2;
  }
}
