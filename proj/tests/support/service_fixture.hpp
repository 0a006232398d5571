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

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "ehrshare/auth/auth_service.hpp"
#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/keys.hpp"
#include "ehrshare/proxy/proxy_service.hpp"
#include "ehrshare/resource/resource_service.hpp"
#include "ehrshare/storage/document_store.hpp"
#include "ehrshare/storage/ttl_store.hpp"

namespace ehrshare::testing {

// Wraps a proxy: counts calls, keeps a copy of everything it was sent or
// returned, and can be told to fail or to tamper with cfrags.
class InstrumentedProxy final : public proxy::ProxyClient {
 public:
  explicit InstrumentedProxy(proxy::ProxyClient& inner) : inner_(inner) {}

  void store_kfrags(const proxy::KfragBundle& bundle) override {
    check_failure();
    {
      std::lock_guard lock(mu_);
      stored_.push_back(bundle);
    }
    inner_.store_kfrags(bundle);
  }

  std::vector<Bytes> reencapsulate(const std::string& share_id, ByteView capsule) override {
    ++reencapsulate_calls;
    check_failure();
    auto out = inner_.reencapsulate(share_id, capsule);
    ++reencapsulate_successes;
    if (tamper) tamper(out);
    std::lock_guard lock(mu_);
    capsules_.emplace_back(capsule.begin(), capsule.end());
    for (const auto& c : out) cfrags_.push_back(c);
    return out;
  }

  void delete_kfrags(const std::string& share_id) override {
    check_failure();
    inner_.delete_kfrags(share_id);
  }

  std::vector<proxy::KfragBundle> stored() const {
    std::lock_guard lock(mu_);
    return stored_;
  }
  std::vector<Bytes> capsules() const {
    std::lock_guard lock(mu_);
    return capsules_;
  }
  std::vector<Bytes> cfrags() const {
    std::lock_guard lock(mu_);
    return cfrags_;
  }

  std::atomic<int> reencapsulate_calls{0};
  std::atomic<int> reencapsulate_successes{0};
  std::atomic<bool> fail{false};
  std::function<void(std::vector<Bytes>&)> tamper;

 private:
  void check_failure() const {
    if (fail) throw Error(Errc::unavailable, "proxy unreachable");
  }

  proxy::ProxyClient& inner_;
  mutable std::mutex mu_;
  std::vector<proxy::KfragBundle> stored_;
  std::vector<Bytes> capsules_;
  std::vector<Bytes> cfrags_;
};

struct TestUser {
  auth::UserProfile profile;
  pre::KeyPair keys;
  pre::SigningKeyPair signing;

  const std::string& id() const { return profile.user_id; }
  resource::RequestKeys request_keys() const {
    const auto sk = keys.secret.to_bytes();
    const auto sig = signing.signing.to_bytes();
    return {Bytes(sk.begin(), sk.end()), Bytes(sig.begin(), sig.end())};
  }
  Bytes secret() const { return request_keys().secret_key; }
};

inline auth::AuthConfig fast_auth_config() {
  auth::AuthConfig c;
  c.jwt_key = Bytes(32, 0x42);
  c.password.log2_n = 10;
  c.service_clients = {{"resource-service", "resource-secret-0123"}};
  return c;
}

// In-process services over memory stores.
class ServiceFixture {
 public:
  explicit ServiceFixture(resource::ResourceConfig config = {})
      : families(clock),
        auth(users_store, families, fast_auth_config(), clock),
        proxy_service(vault, clock),
        proxy(proxy_service),
        resources(records, auth, proxy, config, clock) {}

  TestUser add_user(const std::string& email, std::vector<std::string> roles) {
    auto keys = pre::generate_keypair();
    auto signing = pre::generate_signing_keypair();
    const auto pk = keys.public_key.to_bytes();
    const auto vk = signing.verifying.to_bytes();
    auto profile = auth.register_user({email, email, "password-0123", Bytes(pk.begin(), pk.end()),
                                       Bytes(vk.begin(), vk.end()), std::move(roles)});
    return {std::move(profile), std::move(keys), std::move(signing)};
  }

  resource::EhrMetadata upload(const TestUser& owner, const Bytes& file,
                               resource::MediaType type = resource::MediaType::pdf) {
    return resources.upload_ehr(owner.id(), file, "record.pdf", type, owner.request_keys());
  }

  resource::ShareRequest grant(const TestUser& owner, const TestUser& delegatee,
                               const std::string& resource_id,
                               std::optional<Timestamp> expiry = std::nullopt,
                               std::size_t threshold = 1, std::size_t shares = 1) {
    const auto s = resources.request_share(delegatee.id(), resource_id);
    return resources.answer_share(owner.id(), s.share_id,
                                  {resource::Decision::accept, owner.request_keys(), expiry,
                                   threshold, shares});
  }

  ManualClock clock;
  storage::MemoryDocumentStore users_store;
  storage::MemoryTtlStore families;
  storage::MemoryDocumentStore vault;
  storage::MemoryDocumentStore records;
  auth::AuthService auth;
  proxy::ProxyService proxy_service;
  InstrumentedProxy proxy;
  resource::ResourceService resources;
};

inline Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

inline Bytes random_bytes(std::size_t n, std::uint32_t seed) {
  Bytes out(n);
  std::uint64_t x = 0x9e3779b97f4a7c15ull ^ seed;
  for (auto& b : out) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    b = static_cast<std::uint8_t>(x);
  }
  return out;
}

}  // namespace ehrshare::testing
