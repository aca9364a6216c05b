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
#include "rstar/runio.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "rstar/error.hpp"
#include "version_info.hpp"

namespace rstar {

std::string version_string() { return RSTAR_VERSION_STRING; }

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) throw IoError("short write to file: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rstar
