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
#ifndef RSTAR_DATASET_HPP_
#define RSTAR_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rstar/image.hpp"
#include "rstar/region.hpp"

namespace rstar {

/// Synthetic contextual dataset: each instance is a class-uninformative
/// "person" rectangle whose label is encoded only by a cue glyph planted
/// near, but strictly outside, the person box. The "other" class has no cue.
/// Distractor glyphs of non-label classes appear at reduced contrast, so a
/// model has to discriminate full-contrast cues, not merely detect glyphs.
struct SyntheticConfig {
  int width = 64;
  int height = 64;
  int channels = 3;
  int num_classes = 5;  // class 0 is "other"; classes 1..4 carry cue glyphs
  int min_instances = 1;
  int max_instances = 3;
  double cue_size = 16.0;
  double cue_ring_min = 10.0;  // gap between person box and cue, pixels
  double cue_ring_max = 24.0;
  int distractors = 2;
  double distractor_contrast = 0.35;
  double noise = 0.05;  // additive amplitude on the [0,1] intensity scale
  int train_instances = 500;
  int test_instances = 200;
  std::uint64_t seed = 0;

  bool multilabel = false;  // independent binary attributes instead of classes
  int num_attributes = 3;
};

void validate_synthetic_config(const SyntheticConfig& cfg);

struct Instance {
  Region person;
  int label = 0;                   // single-label mode
  std::vector<double> attributes;  // multilabel mode, entries 0/1
  std::vector<Region> cues;        // planted cue regions (empty for "other")
};

struct DatasetImage {
  std::string id;
  Image image;
  std::vector<Instance> instances;
  int frame_id = 0;
};

struct Dataset {
  std::vector<std::string> class_names;  // class or attribute names
  bool multilabel = false;
  std::vector<DatasetImage> images;
  std::string proposal_file;  // optional reference to external proposals

  std::size_t num_instances() const;
  int num_classes() const { return static_cast<int>(class_names.size()); }
};

struct SyntheticData {
  Dataset train;
  Dataset test;
};

/// Deterministic per seed. Throws rstar::Error if glyph placement is
/// infeasible for the configured geometry.
SyntheticData synth_generate(const SyntheticConfig& cfg);

/// Decodes the cue glyph planted for an instance directly from the pixels.
/// Returns the class index, or -1 if no glyph matches. Generator self-check;
/// exact only for noise 0.
int decode_cue_glyph(const Image& img, const Instance& inst,
                     const SyntheticConfig& cfg);

/// Versioned binary container with header and pixel checksums.
/// Round-trips are bit-exact.
void save_dataset(const std::string& path, const Dataset& dataset);
Dataset load_dataset(const std::string& path);

bool dataset_equal(const Dataset& a, const Dataset& b);

}  // namespace rstar

#endif  // RSTAR_DATASET_HPP_
