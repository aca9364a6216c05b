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
#ifndef RSTAR_PROPOSALS_HPP_
#define RSTAR_PROPOSALS_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rstar/region.hpp"

namespace rstar {

/// Deterministic multi-scale grid generator standing in for a bottom-up
/// proposal algorithm. Identical (extent, config) always yields the identical
/// proposal set, so the rest of the pipeline stays reproducible.
struct ProposalConfig {
  std::vector<double> scales = {16.0, 24.0, 32.0, 48.0, 64.0};
  std::vector<double> aspect_ratios = {0.5, 1.0, 2.0};  // width / height
  double stride_fraction = 0.5;   // grid stride as a fraction of the box side
  std::uint64_t jitter_seed = 0;  // 0 disables grid jitter
};

void validate_proposal_config(const ProposalConfig& cfg);

/// Multi-scale grid of boxes clipped to the extent, deduplicated, in a
/// deterministic order. Throws std::invalid_argument if the config yields no
/// boxes.
ProposalSet generate_proposals(double image_width, double image_height,
                               const ProposalConfig& cfg,
                               const std::string& image_id = "");

/// Plain-text proposals, one region per line:
///   <image_id> <x1> <y1> <x2> <y2>
/// Regions are grouped by image id, preserving file order within each image.
struct ProposalFile {
  std::map<std::string, ProposalSet> by_image;
  std::vector<std::string> warnings;
};

/// Parses a proposals file. If `extent` is given, out-of-extent regions are
/// clipped and a warning recorded. Malformed lines raise FormatError naming
/// the (1-based) line number; an empty file raises FormatError.
ProposalFile load_proposals(const std::string& path,
                            std::optional<std::pair<double, double>> extent = {});

void save_proposals(std::ostream& out,
                    const std::map<std::string, ProposalSet>& by_image);
void save_proposals(const std::string& path,
                    const std::map<std::string, ProposalSet>& by_image);

}  // namespace rstar

#endif  // RSTAR_PROPOSALS_HPP_
