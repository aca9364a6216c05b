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
#include "rstar/region.hpp"

#include <algorithm>
#include <stdexcept>

namespace rstar {

Region whole_image_region(double width, double height) {
  return Region{0.0, 0.0, width, height, RegionSource::kWholeImage};
}

Region clip_region(const Region& r, double width, double height) {
  Region c = r;
  c.x1 = std::max(0.0, std::min(c.x1, width));
  c.y1 = std::max(0.0, std::min(c.y1, height));
  c.x2 = std::max(0.0, std::min(c.x2, width));
  c.y2 = std::max(0.0, std::min(c.y2, height));
  if (!c.valid()) {
    throw std::invalid_argument("clip_region: region (" +
                                std::to_string(r.x1) + "," + std::to_string(r.y1) + "," +
                                std::to_string(r.x2) + "," + std::to_string(r.y2) +
                                ") has no area inside a " + std::to_string(width) + "x" +
                                std::to_string(height) + " image");
  }
  return c;
}

double iou(const Region& a, const Region& b) {
  if (!a.valid() || !b.valid()) {
    throw std::invalid_argument("iou: degenerate region (area must be > 0)");
  }
  const double ix1 = std::max(a.x1, b.x1);
  const double iy1 = std::max(a.y1, b.y1);
  const double ix2 = std::min(a.x2, b.x2);
  const double iy2 = std::min(a.y2, b.y2);
  if (ix1 >= ix2 || iy1 >= iy2) return 0.0;
  const double inter = (ix2 - ix1) * (iy2 - iy1);
  return inter / (a.area() + b.area() - inter);
}

void validate_bounds(const OverlapBounds& b) {
  if (!(b.lower >= 0.0 && b.lower <= b.upper && b.upper <= 1.0)) {
    throw std::invalid_argument("overlap bounds must satisfy 0 <= l <= u <= 1, got l=" +
                                std::to_string(b.lower) + " u=" + std::to_string(b.upper));
  }
}

namespace {

ProposalSet fallback_or(ProposalSet result, const ProposalSet& proposals) {
  if (result.regions.empty()) {
    result.regions.push_back(
        whole_image_region(proposals.image_width, proposals.image_height));
  }
  return result;
}

}  // namespace

ProposalSet candidate_set(const Region& primary, const ProposalSet& proposals,
                          const OverlapBounds& bounds) {
  validate_bounds(bounds);
  if (!primary.valid()) {
    throw std::invalid_argument("candidate_set: degenerate primary region");
  }
  ProposalSet result;
  result.image_id = proposals.image_id;
  result.image_width = proposals.image_width;
  result.image_height = proposals.image_height;
  for (const Region& s : proposals.regions) {
    if (bounds.contains(iou(s, primary))) result.regions.push_back(s);
  }
  return fallback_or(std::move(result), proposals);
}

ProposalSet greedy_restrict(const std::vector<Region>& selected,
                            const ProposalSet& proposals,
                            const OverlapBounds& bounds) {
  validate_bounds(bounds);
  if (selected.empty()) {
    throw std::invalid_argument("greedy_restrict: selected region list is empty");
  }
  ProposalSet result;
  result.image_id = proposals.image_id;
  result.image_width = proposals.image_width;
  result.image_height = proposals.image_height;
  for (const Region& s : proposals.regions) {
    bool ok = true;
    for (const Region& r : selected) {
      if (!bounds.contains(iou(s, r))) {
        ok = false;
        break;
      }
    }
    if (ok) result.regions.push_back(s);
  }
  return fallback_or(std::move(result), proposals);
}

std::vector<LabeledRegion> augment_primaries(
    const std::vector<LabeledRegion>& ground_truth,
    const ProposalSet& proposals) {
  if (ground_truth.empty()) {
    throw std::invalid_argument("augment_primaries: no ground-truth regions");
  }
  std::vector<LabeledRegion> out = ground_truth;
  for (const Region& p : proposals.regions) {
    double best = 0.0;
    int best_idx = -1;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      const double ov = iou(p, ground_truth[g].region);
      if (ov > best) {  // strict: ties keep the lowest ground-truth index
        best = ov;
        best_idx = static_cast<int>(g);
      }
    }
    if (best > 0.5 && best_idx >= 0) {
      out.push_back(LabeledRegion{p, ground_truth[best_idx].label});
    }
  }
  return out;
}

}  // namespace rstar
