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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "ehrshare/bench/report.hpp"
#include "ehrshare/bench/runner.hpp"
#include "ehrshare/common/error.hpp"
#include "ehrshare/net/stack.hpp"
#include "service_fixture.hpp"

namespace ehrshare::bench {
namespace {

using testing::code_of;

std::vector<double> noisy_samples(std::size_t n, std::uint32_t seed) {
  const auto raw = testing::random_bytes(n * 2, seed);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(100.0 + raw[2 * i] + raw[2 * i + 1] / 256.0);
  return out;
}

TEST(Stats, MatchesTwoPassRecomputation) {
  for (std::uint32_t seed = 1; seed <= 20; ++seed) {
    const auto xs = noisy_samples(2 + seed, seed);
    const auto s = Stats::from(xs);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    EXPECT_NEAR(s.mean, mean, 1e-9 * mean);
    EXPECT_NEAR(s.stddev, sd, 1e-9 * std::max(sd, 1.0));
    EXPECT_EQ(s.min, *std::min_element(xs.begin(), xs.end()));
    EXPECT_EQ(s.max, *std::max_element(xs.begin(), xs.end()));
    EXPECT_EQ(s.samples, xs);
  }
}

TEST(Stats, ConstantSamplesHaveZeroSpread) {
  const auto s = Stats::from({5.0, 5.0, 5.0});
  EXPECT_EQ(s.mean, 5.0);
  EXPECT_EQ(s.stddev, 0.0);
}

BenchReport sample_report() {
  BenchReport r;
  r.results.push_back({Scenario::upload, kOneMiB, Stats::from({10, 12, 14}), true, ""});
  r.results.push_back({Scenario::accept_share, std::nullopt, Stats::from({3, 4}), true, ""});
  r.results.push_back({Scenario::retrieve_owner, kOneMiB, Stats::from({2, 4}), true, ""});
  r.results.push_back({Scenario::retrieve_pre, kOneMiB, Stats::from({12, 14}), true, ""});
  r.results.push_back({Scenario::retrieve_owner, kTenMiB, Stats::from({20, 22}), true, ""});
  r.results.push_back({Scenario::retrieve_pre, kTenMiB, Stats::from({31}), false, "proxy unreachable"});
  return r;
}

TEST(Report, PreOverheadSkipsAbortedScenarios) {
  auto r = sample_report();
  auto o = r.pre_overhead();
  ASSERT_EQ(o.size(), 1u);
  EXPECT_DOUBLE_EQ(o.at(kOneMiB), 10.0);
  r.results.back() = {Scenario::retrieve_pre, kTenMiB, Stats::from({30, 34}), true, ""};
  o = r.pre_overhead();
  ASSERT_EQ(o.size(), 2u);
  EXPECT_DOUBLE_EQ(o.at(kTenMiB), 11.0);
}

TEST(Report, PartialWhenAnyScenarioAborted) {
  auto r = sample_report();
  EXPECT_TRUE(r.partial());
  r.results.pop_back();
  EXPECT_FALSE(r.partial());
}

TEST(Report, JsonRoundTrip) {
  const auto r = sample_report();
  const auto back = BenchReport::from_json(nlohmann::json::parse(r.to_json().dump()));
  EXPECT_EQ(back, r);
  EXPECT_TRUE(r.to_json().at("partial").get<bool>());
}

TEST(Report, TableCarriesReferenceColumn) {
  const auto text = render(sample_report(), Format::table);
  for (const auto* figure : {"1154", "869", "903", "1245", "2529", "2877", "342"}) {
    EXPECT_NE(text.find(figure), std::string::npos) << figure;
  }
  EXPECT_NE(text.find("PARTIAL: proxy unreachable"), std::string::npos);
}

TEST(Report, CsvHasOneRowPerResult) {
  const auto text = render(sample_report(), Format::csv);
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  ASSERT_EQ(lines.size(), 1 + sample_report().results.size());
  const auto columns = std::count(lines[0].begin(), lines[0].end(), ',');
  for (const auto& l : lines) EXPECT_EQ(std::count(l.begin(), l.end(), ','), columns) << l;
}

TEST(Report, EmptyReportIsRejected) {
  for (const auto f : {Format::table, Format::json, Format::csv}) {
    EXPECT_EQ(code_of([&] { render(BenchReport{}, f); }), Errc::validation);
  }
}

TEST(Report, PaperFigures) {
  EXPECT_EQ(paper_figure(Scenario::upload, kOneMiB)->mean_ms, 1154);
  EXPECT_EQ(paper_figure(Scenario::upload, kTenMiB)->mean_ms, 3870);
  EXPECT_EQ(paper_figure(Scenario::accept_share, std::nullopt)->stddev_ms, 188);
  EXPECT_EQ(paper_figure(Scenario::retrieve_pre, kTenMiB)->mean_ms, 2877);
  // The published overheads are the differences of the published means.
  for (const auto size : {kOneMiB, kTenMiB}) {
    EXPECT_EQ(*paper_pre_overhead(size), paper_figure(Scenario::retrieve_pre, size)->mean_ms -
                                             paper_figure(Scenario::retrieve_owner, size)->mean_ms);
  }
}

TEST(Parsing, NamesAndSizes) {
  for (const auto s : {Scenario::upload, Scenario::accept_share, Scenario::retrieve_owner,
                       Scenario::retrieve_pre}) {
    EXPECT_EQ(parse_scenario(scenario_name(s)), s);
  }
  EXPECT_EQ(parse_size("1m"), kOneMiB);
  EXPECT_EQ(parse_size("10m"), kTenMiB);
  EXPECT_EQ(size_label(kTenMiB), "10m");
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_EQ(code_of([] { parse_scenario("download"); }), Errc::validation);
  EXPECT_EQ(code_of([] { parse_size("5m"); }), Errc::validation);
  EXPECT_EQ(code_of([] { parse_format("xml"); }), Errc::validation);
}

TEST(Fixture, ExactSizesAndDeterminism) {
  EXPECT_EQ(fixture_file(kOneMiB, 1).size(), 1048576u);
  EXPECT_EQ(fixture_file(kTenMiB, 1).size(), 10485760u);
  EXPECT_EQ(fixture_file(1000, 7), fixture_file(1000, 7));
  EXPECT_NE(fixture_file(1000, 7), fixture_file(1000, 8));
  EXPECT_EQ(fixture_file(33, 7), fixture_file(1000, 7).substr(0, 33));
}

TEST(Runner, RejectsTooFewRuns) {
  EXPECT_EQ(code_of([] { BenchRunner({"http://127.0.0.1:1", "http://127.0.0.1:1"}, {}, {}, {1, 0, 1, {}}); }),
            Errc::validation);
}

TEST(Runner, UnreachableTargetGivesPartialResult) {
  BenchRunner runner({"http://127.0.0.1:1", "http://127.0.0.1:1"}, {}, {}, {2, 0, 1, {}});
  const auto r = runner.run(Scenario::retrieve_owner, kOneMiB);
  EXPECT_FALSE(r.complete);
  EXPECT_FALSE(r.error.empty());
  const auto both = runner.run_retrievals({kOneMiB});
  ASSERT_EQ(both.size(), 2u);
  for (const auto& x : both) EXPECT_FALSE(x.complete);
}

TEST(Runner, SmallRunAgainstLocalStack) {
  net::StackOptions o;
  o.auth.password.log2_n = 10;
  net::LocalStack stack(o);
  const auto [owner, delegatee] = BenchRunner::seed_accounts(stack.auth_url());
  int progress = 0;
  BenchRunner runner({stack.auth_url(), stack.resource_url()}, owner, delegatee,
                     {3, 1, 9, [&](Scenario, int, double) { ++progress; }});

  const auto accept = runner.run(Scenario::accept_share, std::nullopt);
  EXPECT_TRUE(accept.complete) << accept.error;
  EXPECT_FALSE(accept.size_bytes);
  EXPECT_EQ(accept.stats.samples.size(), 3u);

  BenchReport report;
  report.results = runner.run_retrievals({kOneMiB});
  ASSERT_EQ(report.results.size(), 2u);
  for (const auto& r : report.results) {
    EXPECT_TRUE(r.complete) << r.error;
    EXPECT_EQ(r.stats.samples.size(), 3u);
    EXPECT_GT(r.stats.min, 0);
  }
  EXPECT_GT(report.pre_overhead().at(kOneMiB), 0);
  EXPECT_EQ(progress, 9);
}

}  // namespace
}  // namespace ehrshare::bench
