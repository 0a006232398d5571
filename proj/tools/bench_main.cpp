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

// ehrshare-bench: timed upload / accept / retrieval runs against a live or
// in-process deployment.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "ehrshare/bench/report.hpp"
#include "ehrshare/bench/runner.hpp"
#include "ehrshare/common/error.hpp"
#include "ehrshare/net/stack.hpp"

namespace {

using namespace ehrshare;
using bench::Scenario;

std::vector<Scenario> scenarios_for(const std::string& name) {
  if (name == "all") {
    return {Scenario::upload, Scenario::accept_share, Scenario::retrieve_owner, Scenario::retrieve_pre};
  }
  if (name == "pre_overhead") return {Scenario::retrieve_owner, Scenario::retrieve_pre};
  return {bench::parse_scenario(name)};
}

std::vector<std::size_t> sizes_for(const std::string& name) {
  if (name == "all") return {bench::kOneMiB, bench::kTenMiB};
  return {bench::parse_size(name)};
}

int run(const std::string& scenario, const std::string& size, int runs, int warmup,
        std::uint64_t seed, std::string base_url, std::string auth_url, bool local,
        const std::string& out, const std::string& format, bool quiet) {
  const auto fmt = bench::parse_format(format);
  std::unique_ptr<net::LocalStack> stack;
  if (local) {
    stack = std::make_unique<net::LocalStack>();
    base_url = stack->resource_url();
    auth_url = stack->auth_url();
  }
  if (base_url.empty()) throw Error(Errc::validation, "--base-url or --local is required");
  if (auth_url.empty()) auth_url = base_url;

  auto accounts = bench::BenchRunner::accounts_from_env();
  if (!accounts) accounts = bench::BenchRunner::seed_accounts(auth_url);

  bench::BenchOptions options{runs, warmup, seed, {}};
  if (!quiet) {
    options.progress = [](Scenario s, int i, double ms) {
      std::cerr << bench::scenario_name(s) << " run " << i + 1 << ": " << ms << " ms\n";
    };
  }
  bench::BenchRunner runner({auth_url, base_url}, accounts->first, accounts->second, options);

  bench::BenchReport report;
  const auto sizes = sizes_for(size);
  const bool paired = scenario == "pre_overhead" || scenario == "all";
  for (const auto s : scenarios_for(scenario)) {
    if (paired && (s == Scenario::retrieve_owner || s == Scenario::retrieve_pre)) continue;
    if (s == Scenario::accept_share) {
      report.results.push_back(runner.run(s, std::nullopt));
    } else {
      for (const auto bytes : sizes) report.results.push_back(runner.run(s, bytes));
    }
    if (report.partial()) break;
  }
  if (paired && !report.partial()) {
    for (auto& r : runner.run_retrievals(sizes)) report.results.push_back(std::move(r));
  }

  const auto text = bench::render(report, fmt);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out) << text;
    std::cout << bench::render(report, bench::Format::table);
  }
  return report.partial() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ehrshare benchmark harness"};
  app.require_subcommand(1);

  std::string scenario = "all", size = "all", base_url, auth_url, out, format = "table";
  int runs = 20, warmup = 3;
  std::uint64_t seed = 1;
  bool local = false, quiet = false;
  auto* run_cmd = app.add_subcommand("run", "run one or more scenarios");
  run_cmd->add_option("--scenario", scenario, "upload|accept_share|retrieve_owner|retrieve_pre|pre_overhead|all")
      ->capture_default_str();
  run_cmd->add_option("--size", size, "1m|10m|all")->capture_default_str();
  run_cmd->add_option("--runs", runs, "timed runs per scenario")->check(CLI::Range(2, 100000))->capture_default_str();
  run_cmd->add_option("--warmup", warmup, "untimed runs first")->check(CLI::NonNegativeNumber)->capture_default_str();
  run_cmd->add_option("--seed", seed, "fixture file seed")->capture_default_str();
  run_cmd->add_option("--base-url", base_url, "resource service, e.g. http://127.0.0.1:8443");
  run_cmd->add_option("--auth-url", auth_url, "auth service (defaults to --base-url)");
  run_cmd->add_flag("--local", local, "start all services in-process on loopback");
  run_cmd->add_option("--out", out, "write the report here");
  run_cmd->add_option("--format", format, "table|json|csv")->capture_default_str();
  run_cmd->add_flag("--quiet", quiet, "no per-run progress on stderr");

  std::string in;
  auto* report_cmd = app.add_subcommand("report", "render a saved JSON report");
  report_cmd->add_option("--in", in, "report.json")->required();
  report_cmd->add_option("--format", format, "table|json|csv")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) {
      return run(scenario, size, runs, warmup, seed, base_url, auth_url, local, out, format, quiet);
    }
    std::ifstream f(in);
    if (!f) throw Error(Errc::not_found, "cannot open " + in);
    const auto report = bench::BenchReport::from_json(nlohmann::json::parse(f));
    std::cout << bench::render(report, bench::parse_format(format));
    return 0;
  } catch (const ehrshare::Error& e) {
    std::cerr << "error (" << ehrshare::errc_name(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
