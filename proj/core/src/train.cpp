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
#include "rstar/train.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rstar/error.hpp"

namespace rstar {

namespace {

// Seed-stream tags so the sampler, the random-mode draws and the parameter
// init never share a stream.
constexpr std::uint64_t kSamplerStream = 0x5a;
constexpr std::uint64_t kRandomModeStream = 0x7d;

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (batch_primaries < 1) throw std::invalid_argument("batch_primaries must be >= 1");
  if (images_per_batch < 1) throw std::invalid_argument("images_per_batch must be >= 1");
  if (secondary_sample < 1) throw std::invalid_argument("secondary_sample must be >= 1 (N)");
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (n_secondary < 1) throw std::invalid_argument("n_secondary must be >= 1");
  if (checkpoint_interval < 0) throw std::invalid_argument("checkpoint_interval must be >= 0");
  validate_bounds(bounds);
}

void apply_train_config(const TrainConfig& tc, ModelConfig& mc) {
  mc.mode = tc.mode;
  mc.bounds = tc.bounds;
  mc.loss = tc.loss;
  mc.n_secondary = tc.n_secondary;
}

std::vector<ProposalSet> generate_dataset_proposals(const Dataset& dataset,
                                                    const ProposalConfig& cfg) {
  std::vector<ProposalSet> out;
  out.reserve(dataset.images.size());
  for (const DatasetImage& di : dataset.images) {
    out.push_back(generate_proposals(di.image.width, di.image.height, cfg, di.id));
  }
  return out;
}

std::vector<ProposalSet> align_proposals(
    const Dataset& dataset, const std::map<std::string, ProposalSet>& by_image) {
  std::vector<ProposalSet> out;
  out.reserve(dataset.images.size());
  for (const DatasetImage& di : dataset.images) {
    auto it = by_image.find(di.id);
    if (it == by_image.end() || it->second.regions.empty()) {
      throw Error("no proposals for image " + di.id);
    }
    ProposalSet set = it->second;
    set.image_width = di.image.width;
    set.image_height = di.image.height;
    out.push_back(std::move(set));
  }
  return out;
}

TrainingIndex build_training_index(const Dataset& dataset,
                                   const std::vector<ProposalSet>& proposals,
                                   const TrainConfig& cfg) {
  if (dataset.images.empty()) throw std::invalid_argument("training dataset is empty");
  if (proposals.size() != dataset.images.size()) {
    throw std::invalid_argument("proposal list does not match dataset images");
  }
  TrainingIndex index;
  index.per_image.resize(dataset.images.size());
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    const DatasetImage& di = dataset.images[i];
    if (di.instances.empty()) {
      index.warnings.push_back("image " + di.id + " has no instances; skipped");
      continue;
    }
    std::vector<LabeledRegion> gt;
    for (const Instance& inst : di.instances) {
      gt.push_back(LabeledRegion{inst.person, inst.label});
    }
    const std::vector<LabeledRegion> augmented = augment_primaries(gt, proposals[i]);
    for (std::size_t a = 0; a < augmented.size(); ++a) {
      TrainingIndex::Example ex;
      ex.primary = augmented[a].region;
      ex.label = augmented[a].label;
      if (dataset.multilabel) {
        // Attributes travel with the matched ground-truth instance.
        const std::size_t gt_index =
            a < gt.size() ? a : [&] {
              double best = 0.0;
              std::size_t bi = 0;
              for (std::size_t g = 0; g < gt.size(); ++g) {
                const double ov = iou(augmented[a].region, gt[g].region);
                if (ov > best) {
                  best = ov;
                  bi = g;
                }
              }
              return bi;
            }();
        ex.attributes = di.instances[gt_index].attributes;
      }
      ex.candidates = candidate_set(ex.primary, proposals[i], cfg.bounds);
      index.per_image[i].push_back(std::move(ex));
    }
    if (!index.per_image[i].empty()) {
      index.usable_images.push_back(static_cast<int>(i));
    }
  }
  if (index.usable_images.empty()) {
    throw Error("no image in the dataset yields a training primary");
  }
  return index;
}

Batch sample_batch(const TrainingIndex& index, const TrainConfig& cfg, Rng& rng) {
  // Images first, without replacement when possible.
  std::vector<int> images;
  const std::size_t pool = index.usable_images.size();
  if (static_cast<std::size_t>(cfg.images_per_batch) >= pool) {
    images = index.usable_images;
  } else {
    std::vector<int> perm = index.usable_images;
    for (int i = 0; i < cfg.images_per_batch; ++i) {
      const std::size_t j = i + rng.below(perm.size() - i);
      std::swap(perm[i], perm[j]);
      images.push_back(perm[i]);
    }
  }

  // Pool of (image, example) references across the chosen images.
  std::vector<std::pair<int, int>> primaries;
  for (int img : images) {
    for (std::size_t e = 0; e < index.per_image[img].size(); ++e) {
      primaries.emplace_back(img, static_cast<int>(e));
    }
  }

  std::vector<std::pair<int, int>> chosen;
  const int m = cfg.batch_primaries;
  if (primaries.size() < static_cast<std::size_t>(m)) {
    for (int i = 0; i < m; ++i) chosen.push_back(primaries[rng.below(primaries.size())]);
  } else {
    for (int i = 0; i < m; ++i) {
      const std::size_t j = i + rng.below(primaries.size() - i);
      std::swap(primaries[i], primaries[j]);
      chosen.push_back(primaries[i]);
    }
  }

  const bool sample_secondaries = cfg.mode == Mode::kRStar || cfg.mode == Mode::kRandom;
  Batch batch;
  for (const auto& [img, e] : chosen) {
    const TrainingIndex::Example& ex = index.per_image[img][e];
    BatchExample be;
    be.image_index = img;
    be.primary = ex.primary;
    be.label = ex.label;
    be.attributes = ex.attributes;
    be.candidates.image_id = ex.candidates.image_id;
    be.candidates.image_width = ex.candidates.image_width;
    be.candidates.image_height = ex.candidates.image_height;
    if (sample_secondaries) {
      const std::size_t k = ex.candidates.size();
      if (k <= static_cast<std::size_t>(cfg.secondary_sample)) {
        be.candidates.regions = ex.candidates.regions;
      } else {
        // Partial Fisher-Yates over indices; output kept in draw order.
        std::vector<std::uint32_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<std::uint32_t>(i);
        for (int i = 0; i < cfg.secondary_sample; ++i) {
          const std::size_t j = i + rng.below(k - i);
          std::swap(idx[i], idx[j]);
          be.candidates.regions.push_back(ex.candidates.regions[idx[i]]);
        }
      }
    }
    batch.examples.push_back(std::move(be));
  }
  return batch;
}

double train_step(ModelParams& params, const Batch& batch, const Dataset& dataset,
                  const ModelConfig& mcfg, const TrainConfig& tcfg, int iteration) {
  if (batch.examples.empty()) throw std::invalid_argument("train_step: empty batch");
  params.zero_grad();

  // Group examples by image so the trunk runs once per distinct image.
  std::vector<int> image_order;
  std::vector<std::vector<int>> groups;  // example indices per image_order entry
  for (std::size_t e = 0; e < batch.examples.size(); ++e) {
    const int img = batch.examples[e].image_index;
    std::size_t gi = 0;
    for (; gi < image_order.size(); ++gi) {
      if (image_order[gi] == img) break;
    }
    if (gi == image_order.size()) {
      image_order.push_back(img);
      groups.emplace_back();
    }
    groups[gi].push_back(static_cast<int>(e));
  }

  const double inv_m = 1.0 / static_cast<double>(batch.examples.size());
  double total_loss = 0.0;
  for (std::size_t gi = 0; gi < image_order.size(); ++gi) {
    const DatasetImage& di = dataset.images[image_order[gi]];
    ad::Graph g;
    ad::TensorPtr features = trunk_forward(g, di.image, params, mcfg);
    std::vector<ad::TensorPtr> losses;
    for (int e : groups[gi]) {
      const BatchExample& ex = batch.examples[e];
      const std::uint64_t draw =
          derive_seed(tcfg.seed, kRandomModeStream, static_cast<std::uint64_t>(iteration),
                      static_cast<std::uint64_t>(e));
      RegionScores rs = score_regions(g, features, ex.primary, ex.candidates, params, mcfg, draw);
      ad::LossResult lr = mcfg.loss == LossKind::kSoftmax
                              ? ad::softmax_logloss(g, rs.scores, ex.label)
                              : ad::sigmoid_cross_entropy(g, rs.scores, ex.attributes);
      const double v = lr.loss->values[0];
      if (!std::isfinite(v)) {
        throw Error("non-finite loss at iteration " + std::to_string(iteration) +
                    " on image " + di.id + " primary (" + std::to_string(ex.primary.x1) +
                    "," + std::to_string(ex.primary.y1) + "," + std::to_string(ex.primary.x2) +
                    "," + std::to_string(ex.primary.y2) + ")");
      }
      total_loss += v * inv_m;
      losses.push_back(lr.loss);
    }
    ad::TensorPtr partial = ad::scale(g, ad::sum_scalars(g, losses), inv_m);
    g.backward(partial);
  }

  for (const auto& [name, t] : params.named()) {
    if (!t->has_grad()) continue;
    for (std::size_t i = 0; i < t->values.size(); ++i) {
      t->values[i] -= tcfg.learning_rate * t->grad[i];
    }
  }
  return total_loss;
}

TrainResult train(const Dataset& dataset, const std::vector<ProposalSet>& proposals,
                  ModelConfig mcfg, const TrainConfig& tcfg,
                  const CheckpointFn& on_checkpoint) {
  tcfg.validate();
  apply_train_config(tcfg, mcfg);
  mcfg.validate();

  const TrainingIndex index = build_training_index(dataset, proposals, tcfg);
  Rng sampler(derive_seed(tcfg.seed, kSamplerStream));

  TrainResult result;
  result.params = init_params(mcfg, tcfg.seed);
  result.losses.reserve(tcfg.iterations);
  for (int it = 0; it < tcfg.iterations; ++it) {
    const Batch batch = sample_batch(index, tcfg, sampler);
    result.losses.push_back(train_step(result.params, batch, dataset, mcfg, tcfg, it));
    if (on_checkpoint && tcfg.checkpoint_interval > 0 &&
        (it + 1) % tcfg.checkpoint_interval == 0 && it + 1 < tcfg.iterations) {
      on_checkpoint(it + 1, result.params);
    }
  }
  if (on_checkpoint) on_checkpoint(tcfg.iterations, result.params);
  return result;
}

void write_loss_csv(std::ostream& out, const std::vector<double>& losses) {
  out.precision(17);
  out << "iteration,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out << i << ',' << losses[i] << '\n';
  }
}

}  // namespace rstar
