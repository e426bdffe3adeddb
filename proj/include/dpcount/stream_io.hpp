// Copyright 2026 The dpcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text formats: the line-oriented `.dstream` stream file and the 0/1
// marginals table.
//
//   dstream 1 <d> <T> <general|likes>
//   <item>:<+1|-1> <item>:<+1|-1> ...     (one line per step, may be empty)

#ifndef DPCOUNT_STREAM_IO_HPP_
#define DPCOUNT_STREAM_IO_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dpcount/errors.hpp"
#include "dpcount/stream.hpp"

namespace dpcount {

namespace internal {

inline std::uint64_t parse_unsigned(std::string_view token, const std::string& what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw InputError("cannot parse " + what + " from '" + std::string(token) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace internal

inline Stream read_dstream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty stream file");
  const auto header = internal::split_ws(line);
  if (header.size() != 5 || header[0] != "dstream" || header[1] != "1") {
    throw InputError("bad header, expected 'dstream 1 <d> <T> <general|likes>'");
  }
  const std::uint64_t d = internal::parse_unsigned(header[2], "d");
  const std::uint64_t length = internal::parse_unsigned(header[3], "T");
  Model model;
  if (header[4] == "general") {
    model = Model::kGeneral;
  } else if (header[4] == "likes") {
    model = Model::kLikes;
  } else {
    throw InputError("unknown model '" + std::string(header[4]) + "'");
  }
  if (d < 1) throw InputError("d must be >= 1");

  std::vector<std::vector<Update>> batches;
  while (std::getline(in, line)) {
    if (batches.size() == length) {
      throw InputError("more than T=" + std::to_string(length) + " data lines");
    }
    std::vector<Update>& batch = batches.emplace_back();
    for (std::string_view token : internal::split_ws(line)) {
      const std::size_t colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw InputError("bad update token '" + std::string(token) + "' on line " +
                         std::to_string(batches.size() + 1));
      }
      const std::uint64_t id = internal::parse_unsigned(token.substr(0, colon), "item id");
      const std::string_view sign = token.substr(colon + 1);
      std::int8_t delta;
      if (sign == "+1") {
        delta = 1;
      } else if (sign == "-1") {
        delta = -1;
      } else {
        throw InputError("bad delta in token '" + std::string(token) + "'");
      }
      if (id < 1 || id > d) {
        throw InputError("item id " + std::to_string(id) + " outside [1, " +
                         std::to_string(d) + "] on line " + std::to_string(batches.size() + 1));
      }
      batch.push_back(Update{ItemId{static_cast<std::uint32_t>(id)}, delta});
    }
  }
  return Stream(d, length, model, batches);
}

inline void write_dstream(std::ostream& out, const Stream& stream) {
  out << "dstream 1 " << stream.dimension() << ' ' << stream.length() << ' '
      << model_name(stream.model()) << '\n';
  for (std::size_t t = 1; t <= stream.length(); ++t) {
    bool first = true;
    for (const Update& u : stream.batch(t)) {
      if (!first) out << ' ';
      out << u.item.value << ':' << (u.delta > 0 ? "+1" : "-1");
      first = false;
    }
    out << '\n';
  }
}

inline Stream load_dstream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_dstream(in);
}

inline void save_dstream(const std::string& path, const Stream& stream) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_dstream(out, stream);
}

// n x m table of bits, row-major.
struct MarginalsTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;

  MarginalsTable() = default;
  MarginalsTable(std::size_t n, std::size_t m) : rows(n), cols(m), bits(n * m, 0) {}

  std::uint8_t at(std::size_t i, std::size_t j) const { return bits[i * cols + j]; }
  std::uint8_t& at(std::size_t i, std::size_t j) { return bits[i * cols + j]; }

  // Column means, the 1-way marginals.
  std::vector<double> column_means() const {
    std::vector<double> out(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      std::size_t ones = 0;
      for (std::size_t i = 0; i < rows; ++i) ones += at(i, j);
      out[j] = static_cast<double>(ones) / static_cast<double>(rows);
    }
    return out;
  }
};

inline MarginalsTable read_marginals(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty marginals file");
  const auto header = internal::split_ws(line);
  if (header.size() != 2) throw InputError("marginals header must be 'n m'");
  const std::uint64_t n = internal::parse_unsigned(header[0], "n");
  const std::uint64_t m = internal::parse_unsigned(header[1], "m");
  if (n < 1 || m < 1) throw InputError("marginals table needs n, m >= 1");
  MarginalsTable table(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw InputError("marginals table has fewer than n rows");
    const auto cells = internal::split_ws(line);
    if (cells.size() != m) {
      throw InputError("row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                       " entries, expected " + std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (cells[j] == "0") {
        table.at(i, j) = 0;
      } else if (cells[j] == "1") {
        table.at(i, j) = 1;
      } else {
        throw InputError("marginals entries must be 0 or 1");
      }
    }
  }
  return table;
}

inline void write_marginals(std::ostream& out, const MarginalsTable& table) {
  out << table.rows << ' ' << table.cols << '\n';
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      if (j > 0) out << ' ';
      out << static_cast<int>(table.at(i, j));
    }
    out << '\n';
  }
}

inline MarginalsTable load_marginals(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_marginals(in);
}

}  // namespace dpcount

#endif  // DPCOUNT_STREAM_IO_HPP_
