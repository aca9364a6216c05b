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
#ifndef RSTAR_RUNIO_HPP_
#define RSTAR_RUNIO_HPP_

#include <string>

namespace rstar {

/// git-describe-style build identifier.
std::string version_string();

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Writes content through a temp file and renames it into place.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace rstar

#endif  // RSTAR_RUNIO_HPP_
