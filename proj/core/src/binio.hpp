/* Copyright 2026 The RStar Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RSTAR_SRC_BINIO_HPP_
#define RSTAR_SRC_BINIO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rstar/error.hpp"

namespace rstar::detail {

inline void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& in, void* data, std::size_t n,
                       const std::string& what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError("truncated file while reading " + what);
  }
}

inline void write_u32le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  write_bytes(out, b, 4);
}

inline std::uint32_t read_u32le(std::istream& in, const std::string& what) {
  unsigned char b[4];
  read_bytes(in, b, 4, what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_u64le(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(out, b, 8);
}

inline std::uint64_t read_u64le(std::istream& in, const std::string& what) {
  unsigned char b[8];
  read_bytes(in, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

/// Doubles serialize as little-endian IEEE-754 bit patterns.
inline void write_doubles_le(std::ostream& out, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    write_bytes(out, data, n * sizeof(double));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, &data[i], 8);
      write_u64le(out, bits);
    }
  }
}

inline void read_doubles_le(std::istream& in, double* data, std::size_t n,
                            const std::string& what) {
  if constexpr (std::endian::native == std::endian::little) {
    read_bytes(in, data, n * sizeof(double), what);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bits = read_u64le(in, what);
      std::memcpy(&data[i], &bits, 8);
    }
  }
}

/// CRC32 (zlib polynomial) of a byte range.
std::uint32_t crc32_bytes(const void* data, std::size_t n,
                          std::uint32_t seed = 0);

}  // namespace rstar::detail

#endif  // RSTAR_SRC_BINIO_HPP_
