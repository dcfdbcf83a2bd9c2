// Copyright 2026 The Gridflow Authors
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

// Run reports (CSV / JSON) and the benchmark memory model.

#ifndef GRIDFLOW_REPORT_HPP_
#define GRIDFLOW_REPORT_HPP_

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gridflow/error.hpp"
#include "gridflow/structured_graph.hpp"

namespace gridflow {

struct RunReport {
  std::string instance;
  VolumeDims dims;
  std::string backend;
  std::uint32_t segments = 1;
  std::string tiles = "1x1";
  double gr_factor = 0.0;
  double wall_seconds = 0.0;
  FlowValue flow = 0;
  FlowValue cut = 0;
  std::uint64_t peak_rss_bytes = 0;
  std::uint64_t edge_storage_bytes = 0;
};

inline const char* report_csv_header() {
  return "instance,rows,columns,slices,edge_interval,backend,segments,tiles,"
         "gr_factor,wall_seconds,flow,cut,peak_rss_bytes,edge_storage_bytes";
}

inline std::string to_csv_row(const RunReport& r) {
  std::ostringstream out;
  out << r.instance << ',' << r.dims.rows << ',' << r.dims.columns << ','
      << r.dims.slices << ',' << r.dims.edge_interval << ',' << r.backend << ','
      << r.segments << ',' << r.tiles << ',' << r.gr_factor << ','
      << std::fixed << std::setprecision(6) << r.wall_seconds << ',' << r.flow
      << ',' << r.cut << ',' << r.peak_rss_bytes << ',' << r.edge_storage_bytes;
  return out.str();
}

inline nlohmann::json to_json(const RunReport& r) {
  return {
      {"instance", r.instance},
      {"rows", r.dims.rows},
      {"columns", r.dims.columns},
      {"slices", r.dims.slices},
      {"edge_interval", r.dims.edge_interval},
      {"backend", r.backend},
      {"segments", r.segments},
      {"tiles", r.tiles},
      {"gr_factor", r.gr_factor},
      {"wall_seconds", r.wall_seconds},
      {"flow", r.flow},
      {"cut", r.cut},
      {"peak_rss_bytes", r.peak_rss_bytes},
      {"edge_storage_bytes", r.edge_storage_bytes},
  };
}

// High-water resident set size from /proc; 0 where unavailable.
inline std::uint64_t peak_rss_bytes() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream fields(line.substr(6));
      std::uint64_t kb = 0;
      fields >> kb;
      return kb * 1024;
    }
  }
  return 0;
}

// Edge memory of the structured layout against an explicit adjacency
// baseline of 32 bytes per half-edge plus 128 bytes per vertex. The baseline
// is computed, never allocated.
struct MemoryModel {
  std::uint64_t structured_edge_bytes = 0;
  std::uint64_t offset_cache_entries = 0;
  std::uint64_t explicit_edge_bytes = 0;
  std::uint64_t explicit_total_bytes = 0;
};

inline MemoryModel memory_model(const VolumeDims& d) {
  MemoryModel m;
  const std::uint64_t n = d.vertex_count();
  const std::uint64_t epn = d.edges_per_node();
  m.structured_edge_bytes = n * epn * sizeof(Capacity);
  m.offset_cache_entries = std::uint64_t{d.rows} * d.slices * epn;
  m.explicit_edge_bytes = n * epn * 32;
  m.explicit_total_bytes = m.explicit_edge_bytes + n * 128;
  return m;
}

inline const char* bench_csv_header() {
  return "instance,rows,columns,slices,edge_interval,backend,segments,tiles,"
         "gr_factor,repetition,wall_seconds,flow,cut,peak_rss_bytes,"
         "edge_storage_bytes,structured_edge_bytes,explicit_edge_bytes,"
         "explicit_total_bytes";
}

inline std::string to_bench_row(const RunReport& r, std::uint32_t repetition) {
  const MemoryModel m = memory_model(r.dims);
  std::ostringstream out;
  out << r.instance << ',' << r.dims.rows << ',' << r.dims.columns << ','
      << r.dims.slices << ',' << r.dims.edge_interval << ',' << r.backend << ','
      << r.segments << ',' << r.tiles << ',' << r.gr_factor << ',' << repetition
      << ',' << std::fixed << std::setprecision(6) << r.wall_seconds << ','
      << r.flow << ',' << r.cut << ',' << r.peak_rss_bytes << ','
      << r.edge_storage_bytes << ',' << m.structured_edge_bytes << ','
      << m.explicit_edge_bytes << ',' << m.explicit_total_bytes;
  return out.str();
}

}  // namespace gridflow

#endif  // GRIDFLOW_REPORT_HPP_
