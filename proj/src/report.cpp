// Copyright 2026 The snncl Authors
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

#include "snncl/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "snncl/error.hpp"
#include "snncl/util.hpp"

namespace snncl {

namespace {

const char* kHeader =
    "epoch,old_top1,new_top1,combined_top1,wall_latency,synop_count,"
    "energy_proxy,latent_bytes";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << kHeader << "\n";
  for (const EpochRow& r : report.rows) {
    out << r.epoch << ',' << fmt_double(r.old_top1) << ','
        << fmt_double(r.new_top1) << ',' << fmt_double(r.combined_top1) << ','
        << fmt_double(r.wall_latency) << ',' << r.synop_count << ','
        << fmt_double(r.energy_proxy) << ',' << r.latent_bytes << "\n";
  }
  return out.str();
}

ExperimentReport report_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw DataError("report CSV: unexpected header");
  ExperimentReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 8) throw DataError("report CSV: bad field count");
    EpochRow r;
    r.epoch = std::atoi(f[0].c_str());
    r.old_top1 = std::strtod(f[1].c_str(), nullptr);
    r.new_top1 = std::strtod(f[2].c_str(), nullptr);
    r.combined_top1 = std::strtod(f[3].c_str(), nullptr);
    r.wall_latency = std::strtod(f[4].c_str(), nullptr);
    r.synop_count = std::atoll(f[5].c_str());
    r.energy_proxy = std::strtod(f[6].c_str(), nullptr);
    r.latent_bytes = std::atol(f[7].c_str());
    report.rows.push_back(r);
  }
  return report;
}

void save_report(const ExperimentReport& report, const std::string& path) {
  const std::string csv = report_to_csv(report);
  write_file_bytes(path, std::vector<uint8_t>(csv.begin(), csv.end()));
}

ExperimentReport load_report(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  return report_from_csv(std::string(bytes.begin(), bytes.end()));
}

}  // namespace snncl
