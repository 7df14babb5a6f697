// Copyright 2026 The CC-STOI Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harness/scatter.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "common/config.h"
#include "common/error.h"

namespace ccstoi {

std::optional<double> PearsonR(const std::vector<double>& x,
                               const std::vector<double>& y) {
  Require(x.size() == y.size(), ErrorCode::kShape,
          "Pearson r needs equal-length inputs");
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::optional<double> PointsR(const std::vector<ScatterPoint>& points) {
  std::vector<double> x, y;
  for (const ScatterPoint& p : points) {
    x.push_back(p.cc_stoi);
    y.push_back(p.modified_stoi);
  }
  return PearsonR(x, y);
}

}  // namespace

ScatterData ScatterFromReport(const MetricReport& report) {
  ScatterData data;
  data.config_hash = report.config_hash;
  for (const UtteranceScore& row : report.rows) {
    data.points.push_back({row.cc_stoi, row.modified_stoi, row.id, row.condition});
  }
  data.pearson_r = PointsR(data.points);
  return data;
}

ScatterData Scatter(const Manifest& manifest, const EvalOptions& options) {
  EvalOptions opts = options;
  opts.pesq_cmd.clear();
  const MetricReport report = Evaluate(manifest, opts);
  Require(report.rows.size() >= 2, ErrorCode::kInvalidArgument,
          "a scatter needs at least two points");
  return ScatterFromReport(report);
}

std::string FormatScatter(const ScatterData& data) {
  std::set<std::string> conds;
  for (const ScatterPoint& p : data.points) conds.insert(ConditionName(p.condition));
  std::vector<std::string> names(conds.begin(), conds.end());
  std::ostringstream out;
  out << "# ccstoi scatter\n";
  out << "# conditions";
  for (const std::string& c : names) out << " " << c;
  out << "\n# points " << data.points.size() << "\n";
  out << "# pearson_r "
      << (data.pearson_r ? FormatDouble(*data.pearson_r) : std::string("undefined"))
      << "\n";
  if (!data.config_hash.empty()) out << "# checkpoint " << data.config_hash << "\n";
  out << "cc_stoi modified_stoi\n";
  for (const ScatterPoint& p : data.points) {
    out << FormatDouble(p.cc_stoi) << " " << FormatDouble(p.modified_stoi) << "\n";
  }
  return out.str();
}

ScatterData ParseScatter(const std::string& text) {
  ScatterData data;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  bool r_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key, value;
      ls >> key >> value;
      if (key == "pearson_r") {
        r_seen = true;
        if (value != "undefined") data.pearson_r = std::stod(value);
      } else if (key == "checkpoint") {
        data.config_hash = value;
      }
      continue;
    }
    if (!header_seen) {
      Require(line == "cc_stoi modified_stoi", ErrorCode::kFormat,
              "scatter file lacks its column header");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    ScatterPoint p;
    Require(static_cast<bool>(ls >> p.cc_stoi >> p.modified_stoi),
            ErrorCode::kFormat, "malformed scatter row '" + line + "'");
    data.points.push_back(p);
  }
  Require(header_seen && r_seen, ErrorCode::kFormat, "incomplete scatter file");
  return data;
}

}  // namespace ccstoi
