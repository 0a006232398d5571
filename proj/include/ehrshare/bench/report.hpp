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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ehrshare::bench {

enum class Scenario { upload, accept_share, retrieve_owner, retrieve_pre };

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view text);  // Errc::validation if unknown

inline constexpr std::size_t kOneMiB = std::size_t{1} << 20;
inline constexpr std::size_t kTenMiB = std::size_t{10} << 20;

std::size_t parse_size(std::string_view text);  // "1m" | "10m"
std::string size_label(std::size_t bytes);

// Sample statistics in milliseconds; stddev is the n-1 estimator.
struct Stats {
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double max = 0;
  std::vector<double> samples;

  static Stats from(std::vector<double> samples);
  friend bool operator==(const Stats&, const Stats&) = default;
};

struct ScenarioResult {
  Scenario scenario = Scenario::upload;
  std::optional<std::size_t> size_bytes;  // absent for accept_share
  Stats stats;
  bool complete = true;  // false: aborted, samples are the runs that finished
  std::string error;

  friend bool operator==(const ScenarioResult&, const ScenarioResult&) = default;
};

// Published means (and the one published stddev) from the original
// deployment, for the reference column only.
struct PaperFigure {
  double mean_ms;
  std::optional<double> stddev_ms;
};
std::optional<PaperFigure> paper_figure(Scenario s, std::optional<std::size_t> size_bytes);
std::optional<double> paper_pre_overhead(std::size_t size_bytes);

struct BenchReport {
  std::vector<ScenarioResult> results;

  const ScenarioResult* find(Scenario s, std::optional<std::size_t> size) const;
  // mean(retrieve_pre) - mean(retrieve_owner) per size with both present.
  std::map<std::size_t, double> pre_overhead() const;
  bool partial() const;

  nlohmann::json to_json() const;
  static BenchReport from_json(const nlohmann::json& j);

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

enum class Format { table, json, csv };
Format parse_format(std::string_view text);

// Errc::validation for a report with no results.
std::string render(const BenchReport& report, Format format);

}  // namespace ehrshare::bench
