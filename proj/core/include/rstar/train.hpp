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
#ifndef RSTAR_TRAIN_HPP_
#define RSTAR_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rstar/dataset.hpp"
#include "rstar/model.hpp"
#include "rstar/proposals.hpp"
#include "rstar/region.hpp"
#include "rstar/rng.hpp"

namespace rstar {

struct TrainConfig {
  double learning_rate = 1e-4;
  int batch_primaries = 30;   // examples per step (M)
  int images_per_batch = 2;
  int secondary_sample = 10;  // candidates drawn per primary (N)
  int iterations = 2000;
  OverlapBounds bounds{0.2, 0.75};
  Mode mode = Mode::kRStar;
  int n_secondary = 1;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::kSoftmax;
  int checkpoint_interval = 0;  // 0: checkpoint only at the end

  void validate() const;
};

/// Copies the knobs shared between the two configs (mode, bounds, loss,
/// n_secondary) onto the model config so one source of truth reaches the
/// forward pass.
void apply_train_config(const TrainConfig& tc, ModelConfig& mc);

/// One sampled training example: an augmented primary with its candidate
/// subsample (empty in modes that do not sample secondaries).
struct BatchExample {
  int image_index = 0;
  Region primary;
  int label = 0;
  std::vector<double> attributes;
  ProposalSet candidates;
};

struct Batch {
  std::vector<BatchExample> examples;
};

/// Augmented primaries plus their full candidate sets, computed once per
/// (dataset, proposals, bounds).
struct TrainingIndex {
  struct Example {
    Region primary;
    int label = 0;
    std::vector<double> attributes;
    ProposalSet candidates;  // full candidate set, whole-image fallback applied
  };
  std::vector<std::vector<Example>> per_image;  // aligned with dataset.images
  std::vector<int> usable_images;               // images with >= 1 primary
  std::vector<std::string> warnings;
};

/// Proposal sets aligned with dataset.images, generated per image extent.
std::vector<ProposalSet> generate_dataset_proposals(const Dataset& dataset,
                                                    const ProposalConfig& cfg);

/// Aligns externally loaded proposals to dataset.images by image id.
/// Throws rstar::Error when an image has no proposals.
std::vector<ProposalSet> align_proposals(const Dataset& dataset,
                                         const std::map<std::string, ProposalSet>& by_image);

TrainingIndex build_training_index(const Dataset& dataset,
                                   const std::vector<ProposalSet>& proposals,
                                   const TrainConfig& cfg);

/// images_per_batch images drawn uniformly, batch_primaries primaries from
/// their augmented-primary pools (with replacement only if the pool is
/// smaller), and per primary up to secondary_sample candidates without
/// replacement. Fully determined by the Rng state.
Batch sample_batch(const TrainingIndex& index, const TrainConfig& cfg, Rng& rng);

/// Forward on every example (trunk shared per distinct image), mean loss,
/// backward, plain SGD step. Returns the batch loss. Throws rstar::Error
/// with the offending example named if the loss turns non-finite.
double train_step(ModelParams& params, const Batch& batch, const Dataset& dataset,
                  const ModelConfig& mcfg, const TrainConfig& tcfg, int iteration);

struct TrainResult {
  ModelParams params;
  std::vector<double> losses;  // one entry per iteration
};

using CheckpointFn = std::function<void(int iteration, const ModelParams&)>;

/// Full SGD loop; bitwise deterministic for a fixed (dataset, configs, seed).
TrainResult train(const Dataset& dataset, const std::vector<ProposalSet>& proposals,
                  ModelConfig mcfg, const TrainConfig& tcfg,
                  const CheckpointFn& on_checkpoint = {});

/// Loss curve as "iteration,loss" CSV.
void write_loss_csv(std::ostream& out, const std::vector<double>& losses);

}  // namespace rstar

#endif  // RSTAR_TRAIN_HPP_
