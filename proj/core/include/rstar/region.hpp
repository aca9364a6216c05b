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
#ifndef RSTAR_REGION_HPP_
#define RSTAR_REGION_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rstar {

enum class RegionSource : std::uint8_t {
  kProposal = 0,
  kGroundTruth = 1,
  kWholeImage = 2,
};

/// Axis-aligned box in continuous pixel coordinates, corner-exclusive:
/// area = (x2 - x1) * (y2 - y1), no pixel-grid +1 correction.
struct Region {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
  RegionSource source = RegionSource::kProposal;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  bool valid() const { return x1 < x2 && y1 < y2; }

  bool same_coords(const Region& o) const {
    return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
  }
};

/// Region spanning a full w-by-h image.
Region whole_image_region(double width, double height);

/// Clips r to [0,w] x [0,h]. Throws std::invalid_argument if nothing is left.
Region clip_region(const Region& r, double width, double height);

/// Intersection over union. Both regions must have positive area.
double iou(const Region& a, const Region& b);

/// Inclusive IoU interval used to gate candidate secondary regions.
struct OverlapBounds {
  double lower = 0.0;
  double upper = 1.0;

  bool contains(double overlap) const {
    return overlap >= lower && overlap <= upper;
  }
};

/// Validates 0 <= l <= u <= 1; throws std::invalid_argument otherwise.
void validate_bounds(const OverlapBounds& b);

/// Ordered proposal list for one image. Order is generation order and is
/// preserved by every operation that filters it.
struct ProposalSet {
  std::string image_id;
  double image_width = 0.0;
  double image_height = 0.0;
  std::vector<Region> regions;

  bool empty() const { return regions.empty(); }
  std::size_t size() const { return regions.size(); }
};

/// Proposals whose IoU with the primary lies in [l,u], in input order.
/// An empty result degrades to the single whole-image region so that a max
/// over the candidate set is always well defined.
ProposalSet candidate_set(const Region& primary, const ProposalSet& proposals,
                          const OverlapBounds& bounds);

/// Proposals within bounds of *every* region in `selected`; same whole-image
/// fallback as candidate_set. Used when picking additional secondary regions
/// greedily.
ProposalSet greedy_restrict(const std::vector<Region>& selected,
                            const ProposalSet& proposals,
                            const OverlapBounds& bounds);

struct LabeledRegion {
  Region region;
  int label = 0;
};

/// Ground-truth pairs plus every proposal overlapping a ground truth by
/// strictly more than 0.5 IoU, labeled by the best-overlapping ground truth
/// (ties break to the lowest ground-truth index).
std::vector<LabeledRegion> augment_primaries(
    const std::vector<LabeledRegion>& ground_truth,
    const ProposalSet& proposals);

}  // namespace rstar

#endif  // RSTAR_REGION_HPP_
