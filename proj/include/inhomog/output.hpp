// Copyright 2026 The inhomog Authors
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

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inhomog/real_ball.hpp"
#include "inhomog/version.hpp"

namespace inhomog {

using Json = nlohmann::ordered_json;

// Every emitted artifact starts with enough metadata to reproduce it
// bit-for-bit: tool version, schema version, the exact input expressions,
// precision policy and seed.  No timestamps, so equal runs are equal files.
struct RunMetadata {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  long prec_start = 128;
  long prec_max = 8192;

  Json to_json() const {
    Json j;
    j["tool"] = "inhomog";
    j["version"] = kVersion;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["prec_start"] = prec_start;
    j["prec_max"] = prec_max;
    Json p = Json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    return j;
  }

  void write_csv_header(std::ostream& os) const {
    os << "# tool=inhomog version=" << kVersion << " schema=" << kSchemaVersion << "\n";
    os << "# command=" << command << " seed=" << seed << " prec_start=" << prec_start
       << " prec_max=" << prec_max << "\n";
    for (const auto& [k, v] : params) os << "# " << k << "=" << v << "\n";
  }
};

// Deterministic decimal rendering of doubles (shortest round-trip is not
// needed; fixed significant digits keep files byte-stable).
inline std::string fmt_double(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline std::string fmt_ball(const RealBall& b, int digits = 20) { return b.to_string(digits); }

inline std::string fmt_ball_center(const RealBall& b, int digits = 20) {
  char* cs = nullptr;
  mpfr_asprintf(&cs, "%.*Rg", digits, b.center());
  std::string out = cs ? cs : "";
  if (cs) mpfr_free_str(cs);
  return out;
}

inline std::string fmt_ball_radius(const RealBall& b) {
  char* cs = nullptr;
  mpfr_asprintf(&cs, "%.3Rg", b.radius());
  std::string out = cs ? cs : "";
  if (cs) mpfr_free_str(cs);
  return out;
}

// Minimal CSV table: header row then rows of preformatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os, const RunMetadata& meta) const {
    meta.write_csv_header(os);
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
  }
};

}  // namespace inhomog
