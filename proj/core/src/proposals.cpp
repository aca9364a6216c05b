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
#include "rstar/proposals.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rstar/error.hpp"
#include "rstar/rng.hpp"

namespace rstar {

void validate_proposal_config(const ProposalConfig& cfg) {
  if (cfg.scales.empty() || cfg.aspect_ratios.empty()) {
    throw std::invalid_argument("proposal config needs at least one scale and one aspect ratio");
  }
  for (double s : cfg.scales) {
    if (!(s > 0.0)) throw std::invalid_argument("proposal scales must be > 0");
  }
  for (double r : cfg.aspect_ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("proposal aspect ratios must be > 0");
  }
  if (!(cfg.stride_fraction > 0.0 && cfg.stride_fraction <= 1.0)) {
    throw std::invalid_argument("stride_fraction must be in (0, 1]");
  }
}

ProposalSet generate_proposals(double image_width, double image_height,
                               const ProposalConfig& cfg,
                               const std::string& image_id) {
  validate_proposal_config(cfg);
  if (!(image_width > 0.0 && image_height > 0.0)) {
    throw std::invalid_argument("generate_proposals: image extent must be positive");
  }

  ProposalSet out;
  out.image_id = image_id;
  out.image_width = image_width;
  out.image_height = image_height;

  Rng jitter(cfg.jitter_seed);
  std::set<std::array<double, 4>> seen;

  for (double scale : cfg.scales) {
    for (double ratio : cfg.aspect_ratios) {
      // Boxes of area scale^2 with width/height = ratio.
      const double w = scale * std::sqrt(ratio);
      const double h = scale / std::sqrt(ratio);
      const double sx = cfg.stride_fraction * w;
      const double sy = cfg.stride_fraction * h;
      for (double y0 = 0.0; y0 < image_height; y0 += sy) {
        for (double x0 = 0.0; x0 < image_width; x0 += sx) {
          double bx = x0;
          double by = y0;
          if (cfg.jitter_seed != 0) {
            bx += jitter.uniform(-sx / 4.0, sx / 4.0);
            by += jitter.uniform(-sy / 4.0, sy / 4.0);
          }
          Region r{bx, by, bx + w, by + h, RegionSource::kProposal};
          r.x1 = std::max(0.0, r.x1);
          r.y1 = std::max(0.0, r.y1);
          r.x2 = std::min(image_width, r.x2);
          r.y2 = std::min(image_height, r.y2);
          if (!r.valid()) continue;
          if (seen.insert({r.x1, r.y1, r.x2, r.y2}).second) {
            out.regions.push_back(r);
          }
        }
      }
    }
  }

  if (out.regions.empty()) {
    throw std::invalid_argument("proposal config yields zero boxes for a " +
                                std::to_string(image_width) + "x" +
                                std::to_string(image_height) + " image");
  }
  return out;
}

ProposalFile load_proposals(const std::string& path,
                            std::optional<std::pair<double, double>> extent) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open proposals file: " + path);

  ProposalFile result;
  std::map<std::string, std::set<std::array<double, 4>>> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string id;
    double x1, y1, x2, y2;
    if (!(ls >> id >> x1 >> y1 >> x2 >> y2)) {
      throw FormatError(path + ": malformed proposal at line " + std::to_string(line_no));
    }
    std::string rest;
    if (ls >> rest) {
      throw FormatError(path + ": trailing fields at line " + std::to_string(line_no));
    }
    Region r{x1, y1, x2, y2, RegionSource::kProposal};
    if (!r.valid()) {
      throw FormatError(path + ": degenerate region (x2 <= x1 or y2 <= y1) at line " +
                        std::to_string(line_no));
    }
    if (extent) {
      const Region clipped = clip_region(r, extent->first, extent->second);
      if (!clipped.same_coords(r)) {
        result.warnings.push_back(path + ": region at line " + std::to_string(line_no) +
                                  " clipped to image extent");
      }
      r = clipped;
    }
    ProposalSet& set = result.by_image[id];
    if (set.regions.empty()) {
      set.image_id = id;
      if (extent) {
        set.image_width = extent->first;
        set.image_height = extent->second;
      }
    }
    if (!extent) {
      set.image_width = std::max(set.image_width, r.x2);
      set.image_height = std::max(set.image_height, r.y2);
    }
    if (!seen[id].insert({r.x1, r.y1, r.x2, r.y2}).second) {
      result.warnings.push_back(path + ": duplicate region at line " +
                                std::to_string(line_no) + " dropped");
      continue;
    }
    set.regions.push_back(r);
    ++rows;
  }
  if (rows == 0) throw FormatError(path + ": no proposals");
  return result;
}

void save_proposals(std::ostream& out,
                    const std::map<std::string, ProposalSet>& by_image) {
  out.precision(17);
  for (const auto& [id, set] : by_image) {
    for (const Region& r : set.regions) {
      out << id << ' ' << r.x1 << ' ' << r.y1 << ' ' << r.x2 << ' ' << r.y2 << '\n';
    }
  }
}

void save_proposals(const std::string& path,
                    const std::map<std::string, ProposalSet>& by_image) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write proposals file: " + path);
  save_proposals(out, by_image);
  if (!out.good()) throw IoError("short write to proposals file: " + path);
}

}  // namespace rstar
