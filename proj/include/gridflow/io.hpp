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

// File formats.
//
// POGF (structured capacities), little-endian:
//   bytes 0-3   "POGF"
//   u32         format version (1)
//   u32 x 4     R, C, S, K
//   u32 x n*(8K+8)  residual capacities, vertex-major, slot-minor
//
// POGW (net-surface weights), little-endian:
//   bytes 0-3   "POGW"
//   u32         format version (1)
//   u32 x 4     R, C, S, K
//   i32 x n     vertex weights in vertex-index order
//   i32 x 2K+1  pair cost f(-K) .. f(K)
//
// POGW text:
//   dims R C S K
//   cost f(-K) ... f(K)
//   weights w_0 ... w_{n-1}
// '#' starts a comment; tokens may wrap across lines.
//
// DIMACS max-flow: "p max N M", "n ID s|t", "a U V CAP", "c ..." comments.
//
// Parse errors carry the byte offset of the offending input.

#ifndef GRIDFLOW_IO_HPP_
#define GRIDFLOW_IO_HPP_

#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridflow/error.hpp"
#include "gridflow/oracle.hpp"
#include "gridflow/structured_graph.hpp"
#include "gridflow/surface.hpp"

namespace gridflow {

inline constexpr std::uint32_t kFormatVersion = 1;

enum class FileFormat { kPogf, kPogw, kPogwText, kDimacs };

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed: " + path);
  return bytes;
}

inline void write_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

inline std::string parse_error_at(std::size_t offset, const std::string& what) {
  return "byte " + std::to_string(offset) + ": " + what;
}

// Sniffs the magic bytes; anything else is treated as text, with DIMACS
// recognized by a "p max" problem line.
inline FileFormat detect_format(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 4) {
    if (std::memcmp(bytes.data(), "POGF", 4) == 0) return FileFormat::kPogf;
    if (std::memcmp(bytes.data(), "POGW", 4) == 0) return FileFormat::kPogw;
  }
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()),
                              bytes.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      line = line.substr(first);
      if (line.starts_with("dims")) return FileFormat::kPogwText;
      if (line.starts_with("p ")) return FileFormat::kDimacs;
    }
    pos = end + 1;
  }
  throw Error(ErrorCode::kParseError, parse_error_at(0, "unrecognized format"));
}

namespace detail {

class ByteWriter {
 public:
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void u32(std::uint32_t x) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  void i32(std::int32_t x) { u32(static_cast<std::uint32_t>(x)); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void expect_magic(std::string_view magic) {
    need(magic.size(), "magic");
    if (std::memcmp(bytes_.data() + pos_, magic.data(), magic.size()) != 0) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(pos_, "bad magic, expected " + std::string(magic)));
    }
    pos_ += magic.size();
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return x;
  }
  std::int32_t i32(const char* what) { return static_cast<std::int32_t>(u32(what)); }
  void expect_end() {
    if (pos_ != bytes_.size()) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(pos_, std::to_string(remaining()) +
                                           " trailing bytes"));
    }
  }

 private:
  void need(std::size_t count, const char* what) {
    if (remaining() < count) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(pos_, std::string("truncated while reading ") + what));
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

inline void write_header(ByteWriter& w, std::string_view magic, const VolumeDims& d) {
  w.raw(magic);
  w.u32(kFormatVersion);
  w.u32(d.rows);
  w.u32(d.columns);
  w.u32(d.slices);
  w.u32(d.edge_interval);
}

inline VolumeDims read_header(ByteReader& r, std::string_view magic) {
  r.expect_magic(magic);
  const std::size_t at = r.offset();
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(at, "unsupported version " + std::to_string(version)));
  }
  VolumeDims d;
  const std::size_t dims_at = r.offset();
  d.rows = r.u32("rows");
  d.columns = r.u32("columns");
  d.slices = r.u32("slices");
  d.edge_interval = r.u32("edge interval");
  try {
    validate_dims(d);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, parse_error_at(dims_at, e.what()));
  }
  return d;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_pogf(const CapacityStore& store) {
  detail::ByteWriter w;
  detail::write_header(w, "POGF", store.dims());
  for (Capacity c : store.residuals()) w.u32(c);
  return w.take();
}

// Decodes and validates (zero boundary slots, pair sums within 32 bits).
inline CapacityStore decode_pogf(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader r(bytes);
  const VolumeDims d = detail::read_header(r, "POGF");
  const std::uint64_t count = d.vertex_count() * d.edges_per_node();
  if (r.remaining() / 4 < count) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(r.offset(), "capacity block shorter than n*(8K+8)"));
  }
  CapacityStore store(d);
  auto res = store.residuals();
  for (std::uint64_t i = 0; i < count; ++i) res[i] = r.u32("capacity");
  r.expect_end();
  store.validate();
  return store;
}

inline std::vector<std::uint8_t> encode_pogw(const SurfaceWeights& weights) {
  detail::ByteWriter w;
  detail::write_header(w, "POGW", weights.dims);
  for (std::int32_t x : weights.vertex_weight) w.i32(x);
  for (std::int32_t x : weights.edge_cost) w.i32(x);
  return w.take();
}

inline SurfaceWeights decode_pogw(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader r(bytes);
  SurfaceWeights weights(detail::read_header(r, "POGW"));
  if (r.remaining() / 4 < weights.vertex_weight.size()) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(r.offset(), "weight block shorter than n"));
  }
  for (auto& x : weights.vertex_weight) x = r.i32("weight");
  for (auto& x : weights.edge_cost) x = r.i32("cost");
  r.expect_end();
  return weights;
}

namespace detail {

// Whitespace tokenizer that remembers the byte offset of each token.
class TextTokens {
 public:
  explicit TextTokens(std::string_view text) : text_(text) {}

  std::size_t offset() const { return pos_; }

  // Next token on the current line, or nullopt at end of line / input.
  std::optional<std::string_view> next_in_line() {
    skip_blanks();
    if (pos_ >= text_.size() || text_[pos_] == '\n') return std::nullopt;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '#') {
      ++pos_;
    }
    token_at_ = start;
    return text_.substr(start, pos_ - start);
  }
  // Next token anywhere.
  std::optional<std::string_view> next() {
    for (;;) {
      if (auto t = next_in_line()) return t;
      if (pos_ >= text_.size()) return std::nullopt;
      ++pos_;  // newline
    }
  }
  bool at_end() {
    for (;;) {
      skip_blanks();
      if (pos_ >= text_.size()) return true;
      if (text_[pos_] != '\n') return false;
      ++pos_;
    }
  }
  std::size_t token_offset() const { return token_at_; }

  template <typename T>
  T number(const char* what, bool same_line = false) {
    const auto t = same_line ? next_in_line() : next();
    if (!t) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(pos_, std::string("missing ") + what));
    }
    T value{};
    const auto [end, ec] = std::from_chars(t->data(), t->data() + t->size(), value);
    if (ec != std::errc() || end != t->data() + t->size()) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(token_at_, std::string("bad ") + what + " '" +
                                                std::string(*t) + "'"));
    }
    return value;
  }

 private:
  void skip_blanks() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t token_at_ = 0;
};

inline std::string_view as_text(const std::vector<std::uint8_t>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

}  // namespace detail

inline SurfaceWeights decode_pogw_text(const std::vector<std::uint8_t>& bytes) {
  detail::TextTokens tok(detail::as_text(bytes));
  auto keyword = [&](std::string_view want) {
    const auto t = tok.next();
    if (!t || *t != want) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(t ? tok.token_offset() : tok.offset(),
                                 "expected '" + std::string(want) + "'"));
    }
  };
  keyword("dims");
  const std::size_t dims_at = tok.offset();
  VolumeDims d;
  d.rows = tok.number<std::uint32_t>("rows");
  d.columns = tok.number<std::uint32_t>("columns");
  d.slices = tok.number<std::uint32_t>("slices");
  d.edge_interval = tok.number<std::uint32_t>("edge interval");
  try {
    validate_dims(d);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, parse_error_at(dims_at, e.what()));
  }
  SurfaceWeights w(d);
  keyword("cost");
  for (auto& x : w.edge_cost) x = tok.number<std::int32_t>("cost");
  keyword("weights");
  for (auto& x : w.vertex_weight) x = tok.number<std::int32_t>("weight");
  if (!tok.at_end()) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(tok.offset(), "unexpected trailing input"));
  }
  return w;
}

inline std::string encode_pogw_text(const SurfaceWeights& w) {
  std::ostringstream out;
  const VolumeDims& d = w.dims;
  out << "dims " << d.rows << ' ' << d.columns << ' ' << d.slices << ' '
      << d.edge_interval << "\ncost";
  for (std::int32_t x : w.edge_cost) out << ' ' << x;
  out << "\nweights\n";
  for (std::uint64_t i = 0; i < w.vertex_weight.size(); ++i) {
    out << w.vertex_weight[i] << ((i + 1) % d.rows == 0 ? '\n' : ' ');
  }
  return out.str();
}

// DIMACS node ids are 1-based; the explicit graph uses 0-based ids.
inline ExplicitGraph decode_dimacs(const std::vector<std::uint8_t>& bytes) {
  const std::string_view text = detail::as_text(bytes);
  detail::TextTokens tok(text);
  ExplicitGraph g;
  bool have_problem = false;
  std::optional<std::uint32_t> source;
  std::optional<std::uint32_t> sink;
  std::uint64_t declared_arcs = 0;
  auto node = [&](const char* what) {
    const auto id = tok.number<std::uint64_t>(what, true);
    if (!have_problem) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(tok.token_offset(), "line before 'p max'"));
    }
    if (id < 1 || id > g.node_count) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(tok.token_offset(), std::string(what) + " out of range"));
    }
    return static_cast<std::uint32_t>(id - 1);
  };
  while (!tok.at_end()) {
    const auto kind = tok.next_in_line();
    const std::size_t line_at = tok.token_offset();
    if (*kind == "c") {
      while (tok.next_in_line()) {
      }
      continue;
    }
    if (*kind == "p") {
      const auto type = tok.next_in_line();
      if (have_problem || !type || *type != "max") {
        throw Error(ErrorCode::kParseError,
                    parse_error_at(line_at, "expected a single 'p max N M' line"));
      }
      const auto nodes = tok.number<std::uint64_t>("node count", true);
      if (nodes > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::kParseError,
                    parse_error_at(tok.token_offset(), "node count too large"));
      }
      g.node_count = static_cast<std::uint32_t>(nodes);
      declared_arcs = tok.number<std::uint64_t>("arc count", true);
      have_problem = true;
    } else if (*kind == "n") {
      const std::uint32_t id = node("node id");
      const auto role = tok.next_in_line();
      if (role && *role == "s") {
        source = id;
      } else if (role && *role == "t") {
        sink = id;
      } else {
        throw Error(ErrorCode::kParseError,
                    parse_error_at(tok.token_offset(), "node role must be s or t"));
      }
    } else if (*kind == "a") {
      Arc a;
      a.tail = node("arc tail");
      a.head = node("arc head");
      const auto cap = tok.number<std::int64_t>("capacity", true);
      if (cap < 0) {
        throw Error(ErrorCode::kParseError,
                    parse_error_at(tok.token_offset(), "negative capacity"));
      }
      a.capacity = cap;
      g.arcs.push_back(a);
    } else {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(line_at, "unknown line type '" + std::string(*kind) + "'"));
    }
    if (tok.next_in_line()) {
      throw Error(ErrorCode::kParseError,
                  parse_error_at(tok.token_offset(), "unexpected token at end of line"));
    }
  }
  if (!have_problem || !source || !sink) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(text.size(), "missing problem line or terminals"));
  }
  if (g.arcs.size() != declared_arcs) {
    throw Error(ErrorCode::kParseError,
                parse_error_at(text.size(), "arc count differs from the problem line"));
  }
  g.source = *source;
  g.sink = *sink;
  return g;
}

inline std::string encode_dimacs(const ExplicitGraph& g) {
  std::ostringstream out;
  out << "p max " << g.node_count << ' ' << g.arcs.size() << '\n';
  out << "n " << g.source + 1 << " s\n";
  out << "n " << g.sink + 1 << " t\n";
  for (const Arc& a : g.arcs) {
    out << "a " << a.tail + 1 << ' ' << a.head + 1 << ' ' << a.capacity << '\n';
  }
  return out.str();
}

}  // namespace gridflow

#endif  // GRIDFLOW_IO_HPP_
