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
#ifndef RSTAR_MODEL_HPP_
#define RSTAR_MODEL_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rstar/graph.hpp"
#include "rstar/image.hpp"
#include "rstar/ops.hpp"
#include "rstar/region.hpp"

namespace rstar {

/// Scoring variants: the full latent-selection model and its controls.
///   kRStar  - secondary region picked per action by a max over candidates
///   kRcnn   - primary region only
///   kRandom - secondary region drawn uniformly per forward pass
///   kScene  - secondary region fixed to the whole image
enum class Mode { kRStar, kRcnn, kRandom, kScene };

enum class LossKind { kSoftmax, kMultilabel };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& name);
std::string loss_name(LossKind k);
LossKind parse_loss(const std::string& name);

struct ConvLayerSpec {
  int channels = 8;
  int kernel = 3;
  int stride = 1;
  int padding = 1;
  bool pool = true;  // 2x2 max pool after the conv+relu
  int pool_window = 2;
  int pool_stride = 2;
};

struct ModelConfig {
  int input_width = 64;
  int input_height = 64;
  int input_channels = 3;
  std::vector<ConvLayerSpec> trunk = {ConvLayerSpec{8}, ConvLayerSpec{16}};
  int roi_pool_size = 4;
  int fc1_width = 64;  // shared fully-connected stack, used identically by
  int fc2_width = 64;  // the primary and the secondary stream
  std::vector<std::string> actions;
  LossKind loss = LossKind::kSoftmax;
  Mode mode = Mode::kRStar;
  int n_secondary = 1;  // number of greedily selected secondary regions
  OverlapBounds bounds{0.2, 0.75};

  int num_actions() const { return static_cast<int>(actions.size()); }
  /// Image-to-feature coordinate scale implied by the trunk strides.
  double spatial_scale() const;
  /// Trunk output (height, width).
  std::pair<int, int> feature_extent() const;
  int trunk_channels() const;
  int fc_input_width() const;
  void validate() const;
};

/// All learnable weights. The fully-connected stack is one storage shared by
/// both streams (tying is structural); only the per-action scoring heads
/// differ between the primary and the secondary stream.
struct ModelParams {
  std::vector<ad::TensorPtr> conv_w;
  std::vector<ad::TensorPtr> conv_b;
  ad::TensorPtr fc1_w, fc1_b;
  ad::TensorPtr fc2_w, fc2_b;
  ad::TensorPtr head_primary_w, head_primary_b;
  ad::TensorPtr head_secondary_w, head_secondary_b;

  /// Deterministic (name, tensor) order used by the optimizer, checkpoints
  /// and gradient checks.
  std::vector<std::pair<std::string, ad::TensorPtr>> named() const;
  void zero_grad() const;
};

/// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases,
/// deterministic per seed.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);

/// Shared convolutional trunk; runs once per image and is reused by every
/// region scored on that graph.
ad::TensorPtr trunk_forward(ad::Graph& g, const Image& image,
                            const ModelParams& params, const ModelConfig& cfg);

/// ROI pooling plus the tied fully-connected stack for one region.
ad::TensorPtr region_features(ad::Graph& g, const ad::TensorPtr& trunk_features,
                              const Region& region, const ModelParams& params,
                              const ModelConfig& cfg);

/// Mode-dependent action scores for one primary region on an existing graph:
/// primary-head scores plus the selected secondary-head contribution.
struct RegionScores {
  ad::TensorPtr scores;                        // [A]
  std::vector<std::vector<Region>> selected;   // per action, n_secondary picks
};
RegionScores score_regions(ad::Graph& g, const ad::TensorPtr& trunk_features,
                           const Region& primary, const ProposalSet& candidates,
                           const ModelParams& params, const ModelConfig& cfg,
                           std::uint64_t random_draw_seed = 0);

/// Full forward pass for one primary region: trunk, both streams, latent
/// selection. `candidates` must be nonempty (candidate_set provides the
/// whole-image fallback upstream).
struct ForwardResult {
  std::vector<double> scores;
  ad::TensorPtr score_tensor;
  std::vector<std::vector<Region>> selected;
  std::shared_ptr<ad::Graph> graph;
};
ForwardResult forward_scores(const Image& image, const Region& primary,
                             const ProposalSet& candidates, const ModelParams& params,
                             const ModelConfig& cfg, std::uint64_t random_draw_seed = 0);

/// Softmax over scores, or independent logistics in multilabel mode.
std::vector<double> probabilities(const std::vector<double>& scores,
                                  const ModelConfig& cfg);

struct InstancePrediction {
  std::vector<double> scores;
  std::vector<double> probabilities;
  std::vector<std::vector<Region>> selected;
};

/// Candidate construction plus forward_scores for each primary, with
/// per-instance derived draw seeds in random mode.
std::vector<InstancePrediction> predict(const Image& image,
                                        const std::vector<Region>& primaries,
                                        const ProposalSet& proposals,
                                        const ModelParams& params, const ModelConfig& cfg,
                                        std::uint64_t draw_seed = 0);

}  // namespace rstar

#endif  // RSTAR_MODEL_HPP_
