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

// gridflow: solve, gen, verify, bench.
//
// Exit codes: 0 ok, 1 usage or other error, 2 verification failure,
// 3 I/O or parse error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "gridflow/gridflow.hpp"
#include "gridflow/report.hpp"

namespace {

using namespace gridflow;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

// Oracle runs are skipped above this many grid vertices.
constexpr std::uint64_t kOracleLimit = 200000;

struct Tiles {
  std::uint32_t columns = 1;
  std::uint32_t slices = 1;
};

std::vector<std::uint32_t> split_numbers(const std::string& text, char sep,
                                         const char* what) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) {
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
      x = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || x > 0xFFFFFFFFull) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("bad ") + what + " '" + text + "'");
    }
    out.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

VolumeDims parse_dims(const std::string& text, std::uint32_t edge_interval) {
  const auto v = split_numbers(text, 'x', "dims (want RxCxS)");
  if (v.size() != 3) throw Error(ErrorCode::kInvalidArgument, "dims must be RxCxS");
  VolumeDims d;
  d.rows = v[0];
  d.columns = v[1];
  d.slices = v[2];
  d.edge_interval = edge_interval;
  validate_dims(d);
  return d;
}

Tiles parse_tiles(const std::string& text) {
  const auto v = split_numbers(text, 'x', "tiles (want CxS)");
  if (v.size() != 2) throw Error(ErrorCode::kInvalidArgument, "tiles must be CxS");
  return {v[0], v[1]};
}

std::string tiles_name(const Tiles& t) {
  return std::to_string(t.columns) + "x" + std::to_string(t.slices);
}

// GRIDFLOW_THREADS caps execution contexts (0 or unset: no cap).
std::uint32_t thread_cap() {
  const char* env = std::getenv("GRIDFLOW_THREADS");
  if (!env || !*env) return 0;
  const auto v = split_numbers(env, ',', "GRIDFLOW_THREADS");
  return v.empty() ? 0 : v[0];
}

using Instance = std::variant<CapacityStore, SurfaceWeights, ExplicitGraph>;

Instance load_instance(const std::string& path) {
  const auto bytes = read_file(path);
  switch (detect_format(bytes)) {
    case FileFormat::kPogf: return decode_pogf(bytes);
    case FileFormat::kPogw: return decode_pogw(bytes);
    case FileFormat::kPogwText: return decode_pogw_text(bytes);
    case FileFormat::kDimacs: return decode_dimacs(bytes);
  }
  throw Error(ErrorCode::kParseError, "unrecognized format");
}

std::string base_name(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

struct SolveFlags {
  std::string backend = "pr-serial";
  std::uint32_t segments = 1;
  std::string tiles = "1x1";
  double gr_factor = 0.0;
  std::int64_t scale = 1;
};

SolveOptions make_options(const SolveFlags& f) {
  SolveOptions o;
  o.backend = parse_backend(f.backend);
  o.segments = f.segments;
  const Tiles t = parse_tiles(f.tiles);
  o.tile_columns = t.columns;
  o.tile_slices = t.slices;
  o.global_relabel_factor = f.gr_factor;
  o.max_threads = thread_cap();
  if (o.backend == Backend::kPrParallel && o.max_threads != 0 &&
      o.segments > o.max_threads) {
    std::cerr << "note: GRIDFLOW_THREADS caps segments at " << o.max_threads << "\n";
    o.segments = o.max_threads;
  }
  return o;
}

void add_solve_flags(CLI::App* app, SolveFlags& f) {
  app->add_option("--backend", f.backend,
                  "pr-serial, pr-parallel, bk-serial, bk-parallel or oracle")
      ->capture_default_str();
  app->add_option("--segments", f.segments, "pr-parallel column segments")
      ->capture_default_str();
  app->add_option("--tiles", f.tiles, "bk-parallel tiling CxS")->capture_default_str();
  app->add_option("--gr-factor", f.gr_factor,
                  "global relabel every gr-factor * n discharges (0 = default)");
  app->add_option("--scale", f.scale, "integer multiplier for surface weights")
      ->capture_default_str();
}

// Explicit (DIMACS) graphs only go through the oracle.
SolveOutcome solve_explicit(const ExplicitGraph& g, Backend backend) {
  if (backend != Backend::kOracle) {
    throw Error(ErrorCode::kInvalidArgument,
                "DIMACS graphs have no grid layout; use --backend oracle");
  }
  const OracleResult r = oracle_maxflow(g);
  SolveOutcome out;
  out.flow = r.flow;
  out.cut.cut_capacity = r.cut_capacity;
  return out;
}

void emit(const RunReport& r, const std::string& format, bool header) {
  if (format == "json") {
    std::cout << to_json(r).dump(2) << "\n";
    return;
  }
  if (header) std::cout << report_csv_header() << "\n";
  std::cout << to_csv_row(r) << "\n";
}

int run_solve(const std::string& path, const SolveFlags& flags,
              const std::string& format, bool verify_with_oracle,
              bool no_header) {
  const SolveOptions options = make_options(flags);
  const Instance instance = load_instance(path);
  RunReport report;
  report.instance = base_name(path);
  report.backend = std::string(backend_name(options.backend));
  report.segments = options.backend == Backend::kPrParallel ? options.segments : 1;
  report.tiles = tiles_name({options.tile_columns, options.tile_slices});
  report.gr_factor = flags.gr_factor;

  Verification v;
  std::optional<SurfaceGraph> surface;
  const CapacityStore* store = nullptr;
  if (const auto* s = std::get_if<CapacityStore>(&instance)) {
    store = s;
  } else if (const auto* w = std::get_if<SurfaceWeights>(&instance)) {
    surface = build_st_graph(*w, flags.scale);
    store = &surface->store;
  }

  const auto start = std::chrono::steady_clock::now();
  SolveOutcome outcome;
  if (store) {
    report.dims = store->dims();
    report.edge_storage_bytes = store->edge_storage_bytes();
    outcome = solve_instance(*store, options);
  } else {
    const auto& g = std::get<ExplicitGraph>(instance);
    report.dims = VolumeDims{g.node_count, 1, 1, 0};
    outcome = solve_explicit(g, options.backend);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.flow = outcome.flow;
  report.cut = outcome.cut.cut_capacity;
  report.peak_rss_bytes = peak_rss_bytes();

  std::optional<FlowValue> expected;
  if (verify_with_oracle) {
    if (store) {
      expected = oracle_maxflow(to_explicit_graph(*store)).flow;
    } else {
      expected = oracle_maxflow(std::get<ExplicitGraph>(instance)).flow;
    }
  }
  if (store) {
    verify_outcome(*store, outcome, expected, report.backend, v);
  } else {
    v.record(report.backend, "cut=flow", report.cut == report.flow);
    if (expected) v.record(report.backend, "value", *expected == report.flow);
  }
  if (surface) {
    verify_surface(std::get<SurfaceWeights>(instance), *surface, outcome,
                   std::nullopt, report.backend, v);
  }

  emit(report, format, !no_header);
  for (const auto& f : v.findings) {
    if (!f.ok) {
      std::cerr << "FAIL " << f.subject << " " << f.invariant << ": " << f.detail << "\n";
    }
  }
  return v.ok() ? kExitOk : kExitVerify;
}

struct GenFlags {
  std::string dims = "2x2x1";
  std::uint32_t edge_interval = 1;
  std::uint64_t seed = 1;
  std::uint32_t max_capacity = 20;
  std::string kind = "flow";
  bool text = false;
  std::string output;
};

int run_gen(const GenFlags& f) {
  const VolumeDims d = parse_dims(f.dims, f.edge_interval);
  if (f.kind == "flow") {
    InstanceOptions o;
    o.dims = d;
    o.seed = f.seed;
    o.max_capacity = f.max_capacity;
    write_file(f.output, encode_pogf(generate_instance(o)));
  } else if (f.kind == "weights") {
    WeightOptions o;
    o.dims = d;
    o.seed = f.seed;
    const SurfaceWeights w = generate_weights(o);
    if (f.text) {
      const std::string t = encode_pogw_text(w);
      write_file(f.output, std::vector<std::uint8_t>(t.begin(), t.end()));
    } else {
      write_file(f.output, encode_pogw(w));
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--kind must be flow or weights");
  }
  return kExitOk;
}

struct VerifyFlags {
  std::string backends = "pr-serial,pr-parallel,bk-serial,bk-parallel";
  std::string segments = "1,2,4,8";
  std::string tiles = "1x1,2x1,2x2";
  double gr_factor = 0.0;
  std::int64_t scale = 1;
  bool corrupt = false;
  bool quiet = false;
};

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int run_verify(const std::string& path, const VerifyFlags& f) {
  const Instance instance = load_instance(path);
  if (std::holds_alternative<ExplicitGraph>(instance)) {
    throw Error(ErrorCode::kInvalidArgument,
                "verify needs a grid instance (POGF or POGW)");
  }
  std::optional<SurfaceGraph> surface;
  const SurfaceWeights* weights = std::get_if<SurfaceWeights>(&instance);
  if (weights) surface = build_st_graph(*weights, f.scale);
  const CapacityStore& store =
      surface ? surface->store : std::get<CapacityStore>(instance);
  const VolumeDims& d = store.dims();
  const std::uint32_t cap = thread_cap();

  std::optional<FlowValue> reference;
  if (store.vertex_count() <= kOracleLimit) {
    reference = oracle_maxflow(to_explicit_graph(store)).flow;
    std::cout << "oracle value " << *reference << "\n";
  } else {
    std::cout << "oracle skipped (" << store.vertex_count() << " vertices)\n";
  }
  std::optional<FlowValue> best_objective;
  if (weights) {
    double combos = 1;
    for (std::uint64_t i = 0; i < std::uint64_t{d.columns} * d.slices; ++i) {
      combos *= d.rows;
    }
    if (combos <= 1e6) best_objective = brute_force_surface(*weights);
  }

  Verification v;
  auto check = [&](SolveOptions o, const std::string& subject) {
    o.global_relabel_factor = f.gr_factor;
    o.max_threads = cap;
    SolveOutcome out;
    try {
      out = solve_instance(store, o);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFlowNotMaximal) throw;
      v.record(subject, "maximality", false, e.what());
      return;
    }
    if (f.corrupt && out.residual) corrupt_residual(*out.residual);
    if (!reference) reference = out.flow;
    verify_outcome(store, out, reference, subject, v);
    if (weights) verify_surface(*weights, *surface, out, best_objective, subject, v);
  };
  for (const std::string& name : split_words(f.backends)) {
    SolveOptions o;
    o.backend = parse_backend(name);
    if (o.backend == Backend::kPrParallel) {
      for (std::uint32_t s : split_numbers(f.segments, ',', "segments")) {
        s = std::min(s, d.columns);
        if (cap) s = std::min(s, cap);
        o.segments = std::max(s, 1u);
        check(o, name + "/" + std::to_string(o.segments));
      }
    } else if (o.backend == Backend::kBkParallel) {
      for (const std::string& t : split_words(f.tiles)) {
        Tiles tiles = parse_tiles(t);
        tiles.columns = std::clamp(tiles.columns, 1u, d.columns);
        tiles.slices = std::clamp(tiles.slices, 1u, d.slices);
        o.tile_columns = tiles.columns;
        o.tile_slices = tiles.slices;
        check(o, name + "/" + tiles_name(tiles));
      }
    } else {
      check(o, name);
    }
  }

  for (const auto& finding : v.findings) {
    if (finding.ok && f.quiet) continue;
    std::cout << (finding.ok ? "ok   " : "FAIL ") << finding.subject << " "
              << finding.invariant;
    if (!finding.ok) std::cout << ": " << finding.detail;
    std::cout << "\n";
  }
  std::cout << (v.ok() ? "verify: pass" : "verify: FAIL") << "\n";
  return v.ok() ? kExitOk : kExitVerify;
}

struct BenchFlags {
  std::string input;
  std::string dims = "16x256x256";
  std::uint32_t edge_interval = 2;
  std::uint64_t seed = 1;
  std::string backend = "pr-parallel";
  std::string segments = "1,2,4,8";
  std::string tiles = "1x1";
  double gr_factor = 0.0;
  std::uint32_t repetitions = 1;
  std::string output;
};

int run_bench(const BenchFlags& f) {
  CapacityStore store = [&] {
    if (!f.input.empty()) {
      Instance inst = load_instance(f.input);
      if (auto* s = std::get_if<CapacityStore>(&inst)) return std::move(*s);
      if (auto* w = std::get_if<SurfaceWeights>(&inst)) {
        return std::move(build_st_graph(*w).store);
      }
      throw Error(ErrorCode::kInvalidArgument, "bench needs a grid instance");
    }
    InstanceOptions o;
    o.dims = parse_dims(f.dims, f.edge_interval);
    o.seed = f.seed;
    return generate_instance(o);
  }();
  const std::string name =
      f.input.empty() ? "gen-seed" + std::to_string(f.seed) : base_name(f.input);
  const Backend backend = parse_backend(f.backend);
  const std::uint32_t cap = thread_cap();

  std::ostringstream csv;
  csv << bench_csv_header() << "\n";
  int status = kExitOk;
  const std::vector<std::string> sweep =
      backend == Backend::kBkParallel ? split_words(f.tiles)
      : backend == Backend::kPrParallel ? split_words(f.segments)
                                        : std::vector<std::string>{"1"};
  for (const std::string& point : sweep) {
    SolveOptions o;
    o.backend = backend;
    o.global_relabel_factor = f.gr_factor;
    o.max_threads = cap;
    RunReport r;
    r.instance = name;
    r.dims = store.dims();
    r.backend = std::string(backend_name(backend));
    r.gr_factor = f.gr_factor;
    r.edge_storage_bytes = store.edge_storage_bytes();
    if (backend == Backend::kPrParallel) {
      o.segments = split_numbers(point, ',', "segments").at(0);
      if (cap) o.segments = std::min(o.segments, cap);
      r.segments = o.segments;
    } else if (backend == Backend::kBkParallel) {
      const Tiles t = parse_tiles(point);
      o.tile_columns = t.columns;
      o.tile_slices = t.slices;
      r.tiles = tiles_name(t);
    }
    for (std::uint32_t rep = 0; rep < f.repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      const SolveOutcome out = solve_instance(store, o);
      r.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      r.flow = out.flow;
      r.cut = out.cut.cut_capacity;
      r.peak_rss_bytes = peak_rss_bytes();
      if (r.flow != r.cut) status = kExitVerify;
      const std::string row = to_bench_row(r, rep);
      csv << row << "\n";
      std::cerr << row << "\n";
    }
  }
  if (f.output.empty()) {
    std::cout << csv.str();
  } else {
    const std::string text = csv.str();
    write_file(f.output, std::vector<std::uint8_t>(text.begin(), text.end()));
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridflow: maxflow/mincut on multi-column proper-order grids"};
  app.require_subcommand(1);

  std::string solve_path;
  SolveFlags solve_flags;
  std::string report_format = "csv";
  bool verify_with_oracle = false;
  bool no_header = false;
  auto* solve = app.add_subcommand("solve", "solve one instance and print a report");
  solve->add_option("input", solve_path, "POGF, POGW (binary or text) or DIMACS file")
      ->required();
  add_solve_flags(solve, solve_flags);
  solve->add_option("--report", report_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  solve->add_flag("--verify-with-oracle", verify_with_oracle,
                  "compare the value against Edmonds-Karp");
  solve->add_flag("--no-header", no_header, "omit the CSV header row");

  GenFlags gen_flags;
  auto* gen = app.add_subcommand("gen", "write a seeded random instance");
  gen->add_option("--dims", gen_flags.dims, "RxCxS")->capture_default_str();
  gen->add_option("--edge-interval", gen_flags.edge_interval, "K")->capture_default_str();
  gen->add_option("--seed", gen_flags.seed)->capture_default_str();
  gen->add_option("--max-capacity", gen_flags.max_capacity)->capture_default_str();
  gen->add_option("--kind", gen_flags.kind, "flow (POGF) or weights (POGW)")
      ->check(CLI::IsMember({"flow", "weights"}))
      ->capture_default_str();
  gen->add_flag("--text", gen_flags.text, "write weights as text");
  gen->add_option("-o,--output", gen_flags.output)->required();

  std::string verify_path;
  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "cross-check backends and invariants");
  verify->add_option("input", verify_path)->required();
  verify->add_option("--backends", verify_flags.backends)->capture_default_str();
  verify->add_option("--segments", verify_flags.segments)->capture_default_str();
  verify->add_option("--tiles", verify_flags.tiles)->capture_default_str();
  verify->add_option("--gr-factor", verify_flags.gr_factor);
  verify->add_option("--scale", verify_flags.scale)->capture_default_str();
  verify->add_flag("--corrupt", verify_flags.corrupt,
                   "tamper with each residual before checking (negative test)");
  verify->add_flag("--quiet", verify_flags.quiet, "print failures only");

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "time a backend across segment counts");
  bench->add_option("input", bench_flags.input, "instance (default: generate)");
  bench->add_option("--dims", bench_flags.dims, "RxCxS when generating")
      ->capture_default_str();
  bench->add_option("--edge-interval", bench_flags.edge_interval)->capture_default_str();
  bench->add_option("--seed", bench_flags.seed)->capture_default_str();
  bench->add_option("--backend", bench_flags.backend)->capture_default_str();
  bench->add_option("--segments", bench_flags.segments, "comma list")
      ->capture_default_str();
  bench->add_option("--tiles", bench_flags.tiles, "comma list of CxS")
      ->capture_default_str();
  bench->add_option("--gr-factor", bench_flags.gr_factor);
  bench->add_option("--repetitions", bench_flags.repetitions)->capture_default_str();
  bench->add_option("-o,--output", bench_flags.output, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      return run_solve(solve_path, solve_flags, report_format, verify_with_oracle,
                       no_header);
    }
    if (*gen) return run_gen(gen_flags);
    if (*verify) return run_verify(verify_path, verify_flags);
    if (*bench) return run_bench(bench_flags);
  } catch (const Error& e) {
    std::cerr << "gridflow: " << e.what() << "\n";
    if (e.code() == ErrorCode::kIoError || e.code() == ErrorCode::kParseError) {
      return kExitIo;
    }
    if (e.code() == ErrorCode::kFlowNotMaximal) return kExitVerify;
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "gridflow: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
