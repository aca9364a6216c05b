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
#include "binio.hpp"

#include <zlib.h>

namespace rstar::detail {

std::uint32_t crc32_bytes(const void* data, std::size_t n, std::uint32_t seed) {
  uLong crc = seed;
  const unsigned char* p = static_cast<const unsigned char*>(data);
  while (n > 0) {
    const std::size_t chunk = n > 0x40000000u ? 0x40000000u : n;
    crc = ::crc32(crc, p, static_cast<uInt>(chunk));
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace rstar::detail
