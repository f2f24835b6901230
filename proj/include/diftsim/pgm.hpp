// Copyright 2026 The diftsim Authors
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

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "diftsim/image.hpp"

namespace diftsim {

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Next header token, skipping whitespace and '#' comment lines.
inline std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw PgmError("truncated PGM header");
  return tok;
}

inline uint32_t pgm_number(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  uint64_t value = 0;
  if (tok.empty()) throw PgmError(std::string("missing ") + what);
  for (char c : tok) {
    if (c < '0' || c > '9') throw PgmError(std::string("malformed ") + what + " in PGM header");
    value = value * 10 + static_cast<uint64_t>(c - '0');
    if (value > 0xFFFFFFFFull) throw PgmError(std::string(what) + " out of range");
  }
  return static_cast<uint32_t>(value);
}

}  // namespace detail

/// Reads a binary PGM ("P5", maxval 255). The column count must be a
/// multiple of 4 so one word maps to four pixels.
inline Image read_pgm(std::istream& in) {
  const std::string magic = detail::pgm_token(in);
  if (magic != "P5") {
    if (magic == "P2") throw PgmError("ASCII PGM (P2) is not supported; use binary P5");
    throw PgmError("not a binary PGM file (expected magic P5)");
  }
  Image img;
  img.cols = detail::pgm_number(in, "width");
  img.rows = detail::pgm_number(in, "height");
  const uint32_t maxval = detail::pgm_number(in, "maxval");
  if (maxval != 255) throw PgmError("unsupported maxval (must be 255)");
  if (img.cols == 0 || img.rows == 0) throw PgmError("empty image");
  if (img.cols % 4 != 0) throw PgmError("image width must be a multiple of 4");
  // The maxval is followed by exactly one whitespace byte, then raster data.
  img.pixels.resize(size_t{img.rows} * img.cols);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<size_t>(in.gcount()) != img.pixels.size())
    throw PgmError("truncated PGM raster");
  return img;
}

inline void write_pgm(const Image& img, std::ostream& out) {
  out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

inline Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError("cannot open " + path);
  return read_pgm(in);
}

inline void save_pgm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PgmError("cannot create " + path);
  write_pgm(img, out);
  if (!out) throw PgmError("write failed: " + path);
}

}  // namespace diftsim
