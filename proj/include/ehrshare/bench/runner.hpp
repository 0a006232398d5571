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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ehrshare/bench/report.hpp"
#include "ehrshare/common/bytes.hpp"

namespace ehrshare::bench {

// Exactly `size` pseudo-random bytes; identical for identical (size, seed).
std::string fixture_file(std::size_t size, std::uint64_t seed);

struct FixtureAccount {
  std::string email;
  std::string password;
  Bytes secret_key;   // PRE secret, held client-side
  Bytes signing_key;
};

struct BenchTarget {
  std::string auth_url;
  std::string resource_url;
};

struct BenchOptions {
  int runs = 20;
  int warmup = 3;
  std::uint64_t seed = 1;
  // Called after every timed run with (scenario, run index, ms).
  std::function<void(Scenario, int, double)> progress;
};

// Logs in fixture accounts and runs scenarios against live services.
// Requests are sequential; only the scenario's own request is timed.
class BenchRunner {
 public:
  BenchRunner(BenchTarget target, FixtureAccount owner, FixtureAccount delegatee, BenchOptions options);

  // Registers the two accounts with fresh keys (plus a trusted entity if
  // the deployment has none).
  static std::pair<FixtureAccount, FixtureAccount> seed_accounts(const std::string& auth_url);
  // Reads EHRSHARE_BENCH_{OWNER,DELEGATEE}_{EMAIL,PASSWORD,SECRET_KEY,SIGNING_KEY}
  // (keys base64). Returns nothing unless all eight are set.
  static std::optional<std::pair<FixtureAccount, FixtureAccount>> accounts_from_env();

  // Never throws for a failed request; the result is marked incomplete.
  ScenarioResult run(Scenario scenario, std::optional<std::size_t> size_bytes);
  // retrieve_owner and retrieve_pre for every size, with all uploads and
  // grants done before the first timed request.
  std::vector<ScenarioResult> run_retrievals(const std::vector<std::size_t>& sizes);

 private:
  struct Session;
  struct Fixture;
  Session open_session() const;
  Fixture prepare(const Session& s, Scenario scenario, std::size_t size) const;
  double once(const Session& s, Scenario scenario, std::size_t size, const Fixture* fixture, int i) const;
  ScenarioResult measure(const Session& s, Scenario scenario, std::optional<std::size_t> size,
                         const Fixture* fixture) const;

  BenchTarget target_;
  FixtureAccount owner_;
  FixtureAccount delegatee_;
  BenchOptions options_;
};

}  // namespace ehrshare::bench
