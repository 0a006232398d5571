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

#include "ehrshare/bench/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>

#include "ehrshare/common/error.hpp"
#include "ehrshare/common/ids.hpp"
#include "ehrshare/net/auth_http.hpp"
#include "ehrshare/net/resource_http.hpp"
#include "ehrshare/pre/keys.hpp"

namespace ehrshare::bench {
namespace {

using Ms = std::chrono::duration<double, std::milli>;
using resource::MediaType;

std::array<std::uint8_t, 32> sha256(std::string_view data) {
  std::array<std::uint8_t, 32> out{};
  EVP_Digest(data.data(), data.size(), out.data(), nullptr, EVP_sha256(), nullptr);
  return out;
}

FixtureAccount register_account(const net::HttpAuthClient& auth, const std::string& role) {
  const auto kp = pre::generate_keypair();
  const auto sk = pre::generate_signing_keypair();
  FixtureAccount a;
  a.email = "bench-" + role + "-" + new_uuid() + "@bench.invalid";
  a.password = new_uuid();
  const auto secret = kp.secret.to_bytes();
  const auto signing = sk.signing.to_bytes();
  a.secret_key.assign(secret.begin(), secret.end());
  a.signing_key.assign(signing.begin(), signing.end());
  auth.register_user({{"name", "bench " + role},
                      {"email", a.email},
                      {"password", a.password},
                      {"public_key", base64_encode(kp.public_key.to_bytes())},
                      {"verifying_key", base64_encode(sk.verifying.to_bytes())},
                      {"roles", {role}}});
  return a;
}

std::optional<std::string> env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::optional<FixtureAccount> account_from_env(const std::string& prefix) {
  const auto email = env(prefix + "_EMAIL");
  const auto password = env(prefix + "_PASSWORD");
  const auto secret = env(prefix + "_SECRET_KEY");
  const auto signing = env(prefix + "_SIGNING_KEY");
  if (!email || !password || !secret || !signing) return std::nullopt;
  return FixtureAccount{*email, *password, base64_decode(*secret), base64_decode(*signing)};
}

}  // namespace

std::string fixture_file(std::size_t size, std::uint64_t seed) {
  // SHA-256 in counter mode; content only has to be incompressible and
  // reproducible.
  std::string out;
  out.reserve(size + 32);
  std::array<std::uint8_t, 16> block{};
  for (int i = 0; i < 8; ++i) block[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  for (std::uint64_t counter = 0; out.size() < size; ++counter) {
    for (int i = 0; i < 8; ++i) block[8 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
    const auto h = sha256(std::string_view(reinterpret_cast<const char*>(block.data()), block.size()));
    out.append(reinterpret_cast<const char*>(h.data()), h.size());
  }
  out.resize(size);
  return out;
}

BenchRunner::BenchRunner(BenchTarget target, FixtureAccount owner, FixtureAccount delegatee,
                         BenchOptions options)
    : target_(std::move(target)),
      owner_(std::move(owner)),
      delegatee_(std::move(delegatee)),
      options_(std::move(options)) {
  if (options_.runs < 2) throw Error(Errc::validation, "runs must be at least 2");
  if (options_.warmup < 0) throw Error(Errc::validation, "warmup must be >= 0");
}

std::pair<FixtureAccount, FixtureAccount> BenchRunner::seed_accounts(const std::string& auth_url) {
  const net::HttpAuthClient auth(auth_url);
  try {
    register_account(auth, "trusted_entity");
  } catch (const Error& e) {
    if (e.code() != Errc::conflict) throw;  // one already exists
  }
  return {register_account(auth, "patient"), register_account(auth, "practitioner")};
}

std::optional<std::pair<FixtureAccount, FixtureAccount>> BenchRunner::accounts_from_env() {
  auto owner = account_from_env("EHRSHARE_BENCH_OWNER");
  auto delegatee = account_from_env("EHRSHARE_BENCH_DELEGATEE");
  if (!owner || !delegatee) return std::nullopt;
  return std::make_pair(std::move(*owner), std::move(*delegatee));
}

struct BenchRunner::Session {
  net::HttpResourceClient api;
  net::Session owner;
  net::Session delegatee;
  resource::RequestKeys owner_keys;
};

struct BenchRunner::Fixture {
  std::string resource_id;
  std::array<std::uint8_t, 32> hash{};
};

BenchRunner::Session BenchRunner::open_session() const {
  const net::HttpAuthClient auth(target_.auth_url);
  auto owner = auth.login(owner_.email, owner_.password);
  auto delegatee = auth.login(delegatee_.email, delegatee_.password);
  return Session{net::HttpResourceClient(target_.resource_url), std::move(owner), std::move(delegatee),
                 resource::RequestKeys{owner_.secret_key, owner_.signing_key}};
}

BenchRunner::Fixture BenchRunner::prepare(const Session& s, Scenario scenario, std::size_t size) const {
  const auto file = fixture_file(size, options_.seed);
  Fixture f;
  f.hash = sha256(file);
  f.resource_id =
      s.api.upload(s.owner.access_token, "fixture.pdf", MediaType::pdf, file, s.owner_keys).resource_id;
  if (scenario == Scenario::retrieve_pre) {
    const auto share = s.api.request_share(s.delegatee.access_token, f.resource_id);
    s.api.answer_share(s.owner.access_token, share.share_id,
                       {resource::Decision::accept, s.owner_keys, std::nullopt, 1, 1});
  }
  return f;
}

double BenchRunner::once(const Session& s, Scenario scenario, std::size_t size, const Fixture* fixture,
                         int i) const {
  switch (scenario) {
    case Scenario::upload: {
      // A new file per run.
      const auto file = fixture_file(size, options_.seed * 1000003 + static_cast<std::uint64_t>(i));
      const auto t0 = std::chrono::steady_clock::now();
      s.api.upload(s.owner.access_token, "upload.pdf", MediaType::pdf, file, s.owner_keys);
      return Ms(std::chrono::steady_clock::now() - t0).count();
    }
    case Scenario::accept_share: {
      // Fresh pending share per run: a new record, then a request.
      const auto rec = s.api.upload(s.owner.access_token, "tiny.pdf", MediaType::pdf, "%PDF-", s.owner_keys);
      const auto share = s.api.request_share(s.delegatee.access_token, rec.resource_id);
      const auto t0 = std::chrono::steady_clock::now();
      s.api.answer_share(s.owner.access_token, share.share_id,
                         {resource::Decision::accept, s.owner_keys, std::nullopt, 1, 1});
      return Ms(std::chrono::steady_clock::now() - t0).count();
    }
    case Scenario::retrieve_owner:
    case Scenario::retrieve_pre: {
      const bool as_owner = scenario == Scenario::retrieve_owner;
      const auto& token = as_owner ? s.owner.access_token : s.delegatee.access_token;
      const auto& key = as_owner ? owner_.secret_key : delegatee_.secret_key;
      const auto t0 = std::chrono::steady_clock::now();
      const auto res = s.api.retrieve_raw(token, fixture->resource_id, key);
      const double ms = Ms(std::chrono::steady_clock::now() - t0).count();
      if (sha256(res->body) != fixture->hash) {
        throw Error(Errc::integrity, "retrieved bytes differ from the uploaded fixture");
      }
      return ms;
    }
  }
  throw Error(Errc::internal, "unknown scenario");
}

ScenarioResult BenchRunner::measure(const Session& s, Scenario scenario, std::optional<std::size_t> size,
                                    const Fixture* fixture) const {
  ScenarioResult result;
  result.scenario = scenario;
  result.size_bytes = size;
  std::vector<double> samples;
  try {
    const int total = options_.warmup + options_.runs;
    for (int i = 0; i < total; ++i) {
      const double ms = once(s, scenario, size.value_or(0), fixture, i);
      if (i < options_.warmup) continue;
      samples.push_back(ms);
      if (options_.progress) options_.progress(scenario, i - options_.warmup, ms);
    }
  } catch (const std::exception& e) {
    result.complete = false;
    result.error = e.what();
  }
  if (!samples.empty()) result.stats = Stats::from(std::move(samples));
  return result;
}

ScenarioResult BenchRunner::run(Scenario scenario, std::optional<std::size_t> size_bytes) {
  if (scenario == Scenario::accept_share) size_bytes.reset();
  if (scenario != Scenario::accept_share && !size_bytes) {
    throw Error(Errc::validation, std::string(scenario_name(scenario)) + " needs a file size");
  }
  try {
    const auto s = open_session();
    std::optional<Fixture> fixture;
    if (scenario == Scenario::retrieve_owner || scenario == Scenario::retrieve_pre) {
      fixture = prepare(s, scenario, *size_bytes);
    }
    return measure(s, scenario, size_bytes, fixture ? &*fixture : nullptr);
  } catch (const std::exception& e) {
    return ScenarioResult{scenario, size_bytes, {}, false, e.what()};
  }
}

std::vector<ScenarioResult> BenchRunner::run_retrievals(const std::vector<std::size_t>& sizes) {
  std::vector<ScenarioResult> out;
  try {
    const auto s = open_session();
    std::vector<std::pair<Fixture, Fixture>> fixtures;
    for (const auto size : sizes) {
      fixtures.emplace_back(prepare(s, Scenario::retrieve_owner, size), prepare(s, Scenario::retrieve_pre, size));
    }
    // All setup happens first so the timed scenarios run back to back, and
    // the order o1 p1 p10 o10 keeps each size's pair close together in time.
    std::vector<std::pair<Scenario, std::size_t>> order;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto a = i % 2 == 0 ? Scenario::retrieve_owner : Scenario::retrieve_pre;
      const auto b = i % 2 == 0 ? Scenario::retrieve_pre : Scenario::retrieve_owner;
      order.emplace_back(a, i);
      order.emplace_back(b, i);
    }
    for (const auto& [scenario, i] : order) {
      const auto& f = scenario == Scenario::retrieve_owner ? fixtures[i].first : fixtures[i].second;
      out.push_back(measure(s, scenario, sizes[i], &f));
    }
  } catch (const std::exception& e) {
    for (const auto size : sizes) {
      for (const auto scenario : {Scenario::retrieve_owner, Scenario::retrieve_pre}) {
        const bool have = std::any_of(out.begin(), out.end(), [&](const auto& r) {
          return r.scenario == scenario && r.size_bytes == size;
        });
        if (!have) out.push_back(ScenarioResult{scenario, size, {}, false, e.what()});
      }
    }
  }
  return out;
}

}  // namespace ehrshare::bench
