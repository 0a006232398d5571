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

#include "ehrshare/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ehrshare/common/error.hpp"

namespace ehrshare::bench {

using nlohmann::json;

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::upload: return "upload";
    case Scenario::accept_share: return "accept_share";
    case Scenario::retrieve_owner: return "retrieve_owner";
    case Scenario::retrieve_pre: return "retrieve_pre";
  }
  return "upload";
}

Scenario parse_scenario(std::string_view text) {
  for (auto s : {Scenario::upload, Scenario::accept_share, Scenario::retrieve_owner,
                 Scenario::retrieve_pre}) {
    if (scenario_name(s) == text) return s;
  }
  throw Error(Errc::validation, "unknown scenario: " + std::string(text));
}

std::size_t parse_size(std::string_view text) {
  if (text == "1m") return kOneMiB;
  if (text == "10m") return kTenMiB;
  throw Error(Errc::validation, "size must be 1m or 10m, got " + std::string(text));
}

std::string size_label(std::size_t bytes) {
  if (bytes == kOneMiB) return "1m";
  if (bytes == kTenMiB) return "10m";
  return std::to_string(bytes) + "B";
}

Stats Stats::from(std::vector<double> samples) {
  if (samples.empty()) throw Error(Errc::validation, "no samples");
  Stats s;
  const double n = static_cast<double>(samples.size());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() > 1) {
    double ss = 0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (n - 1));
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  s.min = *lo;
  s.max = *hi;
  s.samples = std::move(samples);
  return s;
}

std::optional<PaperFigure> paper_figure(Scenario s, std::optional<std::size_t> size) {
  switch (s) {
    case Scenario::accept_share:
      return PaperFigure{869, 188};
    case Scenario::upload:
      if (size == kOneMiB) return PaperFigure{1154, std::nullopt};
      if (size == kTenMiB) return PaperFigure{3870, std::nullopt};
      break;
    case Scenario::retrieve_owner:
      if (size == kOneMiB) return PaperFigure{903, std::nullopt};
      if (size == kTenMiB) return PaperFigure{2529, std::nullopt};
      break;
    case Scenario::retrieve_pre:
      if (size == kOneMiB) return PaperFigure{1245, std::nullopt};
      if (size == kTenMiB) return PaperFigure{2877, std::nullopt};
      break;
  }
  return std::nullopt;
}

std::optional<double> paper_pre_overhead(std::size_t size) {
  if (size == kOneMiB) return 342;
  if (size == kTenMiB) return 348;
  return std::nullopt;
}

const ScenarioResult* BenchReport::find(Scenario s, std::optional<std::size_t> size) const {
  for (const auto& r : results) {
    if (r.scenario == s && r.size_bytes == size) return &r;
  }
  return nullptr;
}

std::map<std::size_t, double> BenchReport::pre_overhead() const {
  std::map<std::size_t, double> out;
  for (const auto& r : results) {
    if (r.scenario != Scenario::retrieve_pre || !r.size_bytes || !r.complete) continue;
    const auto* owner = find(Scenario::retrieve_owner, r.size_bytes);
    if (owner && owner->complete) out[*r.size_bytes] = r.stats.mean - owner->stats.mean;
  }
  return out;
}

bool BenchReport::partial() const {
  return std::any_of(results.begin(), results.end(), [](const auto& r) { return !r.complete; });
}

json BenchReport::to_json() const {
  json rs = json::array();
  for (const auto& r : results) {
    json j = {{"scenario", scenario_name(r.scenario)},
              {"size_bytes", r.size_bytes ? json(*r.size_bytes) : json(nullptr)},
              {"runs", r.stats.samples.size()},
              {"mean_ms", r.stats.mean},
              {"stddev_ms", r.stats.stddev},
              {"min_ms", r.stats.min},
              {"max_ms", r.stats.max},
              {"samples_ms", r.stats.samples},
              {"complete", r.complete}};
    if (!r.error.empty()) j["error"] = r.error;
    rs.push_back(std::move(j));
  }
  json overhead = json::object();
  for (const auto& [size, ms] : pre_overhead()) overhead[size_label(size)] = ms;
  return {{"results", rs}, {"pre_overhead_ms", overhead}, {"partial", partial()}};
}

BenchReport BenchReport::from_json(const json& j) {
  BenchReport report;
  for (const auto& r : j.at("results")) {
    ScenarioResult out;
    out.scenario = parse_scenario(r.at("scenario").get<std::string>());
    if (!r.at("size_bytes").is_null()) out.size_bytes = r.at("size_bytes").get<std::size_t>();
    out.stats.mean = r.at("mean_ms").get<double>();
    out.stats.stddev = r.at("stddev_ms").get<double>();
    out.stats.min = r.at("min_ms").get<double>();
    out.stats.max = r.at("max_ms").get<double>();
    out.stats.samples = r.at("samples_ms").get<std::vector<double>>();
    out.complete = r.at("complete").get<bool>();
    out.error = r.value("error", "");
    report.results.push_back(std::move(out));
  }
  return report;
}

Format parse_format(std::string_view text) {
  if (text == "table") return Format::table;
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  throw Error(Errc::validation, "format must be table, json or csv");
}

namespace {

std::string fixed(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string render_table(const BenchReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-15s %-5s %5s %10s %10s %10s %10s %12s  %s\n", "scenario",
                "size", "runs", "mean_ms", "stddev_ms", "min_ms", "max_ms", "paper_ms", "status");
  out << line;
  for (const auto& r : report.results) {
    const auto paper = paper_figure(r.scenario, r.size_bytes);
    std::string paper_col = "-";
    if (paper) {
      paper_col = fixed(paper->mean_ms, 0);
      if (paper->stddev_ms) paper_col += " (sd " + fixed(*paper->stddev_ms, 0) + ")";
    }
    std::snprintf(line, sizeof line, "%-15s %-5s %5zu %10s %10s %10s %10s %12s  %s\n",
                  std::string(scenario_name(r.scenario)).c_str(),
                  r.size_bytes ? size_label(*r.size_bytes).c_str() : "-", r.stats.samples.size(),
                  fixed(r.stats.mean).c_str(), fixed(r.stats.stddev).c_str(),
                  fixed(r.stats.min).c_str(), fixed(r.stats.max).c_str(), paper_col.c_str(),
                  r.complete ? "ok" : ("PARTIAL: " + r.error).c_str());
    out << line;
  }
  for (const auto& [size, ms] : report.pre_overhead()) {
    const auto paper = paper_pre_overhead(size);
    out << "pre_overhead " << size_label(size) << ": " << fixed(ms) << " ms";
    if (paper) out << " (paper " << fixed(*paper, 0) << " ms)";
    out << "\n";
  }
  return out.str();
}

std::string render_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "scenario,size_bytes,runs,mean_ms,stddev_ms,min_ms,max_ms,paper_mean_ms,complete\n";
  for (const auto& r : report.results) {
    const auto paper = paper_figure(r.scenario, r.size_bytes);
    out << scenario_name(r.scenario) << ',' << (r.size_bytes ? std::to_string(*r.size_bytes) : "")
        << ',' << r.stats.samples.size() << ',' << fixed(r.stats.mean, 3) << ','
        << fixed(r.stats.stddev, 3) << ',' << fixed(r.stats.min, 3) << ',' << fixed(r.stats.max, 3)
        << ',' << (paper ? fixed(paper->mean_ms, 0) : "") << ',' << (r.complete ? "true" : "false")
        << "\n";
  }
  return out.str();
}

}  // namespace

std::string render(const BenchReport& report, Format format) {
  if (report.results.empty()) throw Error(Errc::validation, "empty report");
  switch (format) {
    case Format::table: return render_table(report);
    case Format::json: return report.to_json().dump(2) + "\n";
    case Format::csv: return render_csv(report);
  }
  return {};
}

}  // namespace ehrshare::bench
