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
#include "rstar/model.hpp"

#include <cmath>
#include <stdexcept>

#include "rstar/error.hpp"
#include "rstar/rng.hpp"

namespace rstar {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kRStar: return "rstar";
    case Mode::kRcnn: return "rcnn";
    case Mode::kRandom: return "random";
    case Mode::kScene: return "scene";
  }
  throw std::invalid_argument("unknown mode value");
}

Mode parse_mode(const std::string& name) {
  if (name == "rstar") return Mode::kRStar;
  if (name == "rcnn") return Mode::kRcnn;
  if (name == "random") return Mode::kRandom;
  if (name == "scene") return Mode::kScene;
  throw std::invalid_argument("unknown mode '" + name + "' (rstar|rcnn|random|scene)");
}

std::string loss_name(LossKind k) {
  return k == LossKind::kSoftmax ? "softmax" : "multilabel";
}

LossKind parse_loss(const std::string& name) {
  if (name == "softmax") return LossKind::kSoftmax;
  if (name == "multilabel") return LossKind::kMultilabel;
  throw std::invalid_argument("unknown loss '" + name + "' (softmax|multilabel)");
}

double ModelConfig::spatial_scale() const {
  double scale = 1.0;
  for (const ConvLayerSpec& l : trunk) {
    scale /= l.stride;
    if (l.pool) scale /= l.pool_stride;
  }
  return scale;
}

std::pair<int, int> ModelConfig::feature_extent() const {
  int h = input_height, w = input_width;
  for (const ConvLayerSpec& l : trunk) {
    h = (h + 2 * l.padding - l.kernel) / l.stride + 1;
    w = (w + 2 * l.padding - l.kernel) / l.stride + 1;
    if (l.pool) {
      h = (h - l.pool_window) / l.pool_stride + 1;
      w = (w - l.pool_window) / l.pool_stride + 1;
    }
    if (h <= 0 || w <= 0) {
      throw std::invalid_argument("trunk reduces the input to nothing");
    }
  }
  return {h, w};
}

int ModelConfig::trunk_channels() const {
  return trunk.empty() ? input_channels : trunk.back().channels;
}

int ModelConfig::fc_input_width() const {
  return trunk_channels() * roi_pool_size * roi_pool_size;
}

void ModelConfig::validate() const {
  if (input_width <= 0 || input_height <= 0 || input_channels <= 0) {
    throw std::invalid_argument("model input extent must be positive");
  }
  if (num_actions() < 2) throw std::invalid_argument("need at least 2 actions");
  if (roi_pool_size < 1) throw std::invalid_argument("roi_pool_size must be >= 1");
  if (fc1_width < 1 || fc2_width < 1) throw std::invalid_argument("fc widths must be >= 1");
  if (n_secondary < 1) throw std::invalid_argument("n_secondary must be >= 1");
  validate_bounds(bounds);
  const auto [fh, fw] = feature_extent();
  if (fh < roi_pool_size || fw < roi_pool_size) {
    throw std::invalid_argument("trunk output " + std::to_string(fh) + "x" +
                                std::to_string(fw) + " smaller than roi_pool_size " +
                                std::to_string(roi_pool_size));
  }
}

std::vector<std::pair<std::string, ad::TensorPtr>> ModelParams::named() const {
  std::vector<std::pair<std::string, ad::TensorPtr>> out;
  for (std::size_t i = 0; i < conv_w.size(); ++i) {
    out.emplace_back("conv" + std::to_string(i) + ".weight", conv_w[i]);
    out.emplace_back("conv" + std::to_string(i) + ".bias", conv_b[i]);
  }
  out.emplace_back("fc1.weight", fc1_w);
  out.emplace_back("fc1.bias", fc1_b);
  out.emplace_back("fc2.weight", fc2_w);
  out.emplace_back("fc2.bias", fc2_b);
  out.emplace_back("head_primary.weight", head_primary_w);
  out.emplace_back("head_primary.bias", head_primary_b);
  out.emplace_back("head_secondary.weight", head_secondary_w);
  out.emplace_back("head_secondary.bias", head_secondary_b);
  return out;
}

void ModelParams::zero_grad() const {
  for (const auto& [name, t] : named()) t->zero_grad();
}

namespace {

ad::TensorPtr glorot(Rng& rng, std::vector<int> shape, int fan_in, int fan_out) {
  ad::TensorPtr t = ad::make_tensor(std::move(shape));
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : t->values) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  ModelParams p;
  int cin = cfg.input_channels;
  for (const ConvLayerSpec& l : cfg.trunk) {
    const int fan_in = cin * l.kernel * l.kernel;
    const int fan_out = l.channels * l.kernel * l.kernel;
    p.conv_w.push_back(glorot(rng, {l.channels, cin, l.kernel, l.kernel}, fan_in, fan_out));
    p.conv_b.push_back(ad::make_tensor({l.channels}));
    cin = l.channels;
  }
  const int d = cfg.fc_input_width();
  p.fc1_w = glorot(rng, {cfg.fc1_width, d}, d, cfg.fc1_width);
  p.fc1_b = ad::make_tensor({cfg.fc1_width});
  p.fc2_w = glorot(rng, {cfg.fc2_width, cfg.fc1_width}, cfg.fc1_width, cfg.fc2_width);
  p.fc2_b = ad::make_tensor({cfg.fc2_width});
  const int a = cfg.num_actions();
  p.head_primary_w = glorot(rng, {a, cfg.fc2_width}, cfg.fc2_width, a);
  p.head_primary_b = ad::make_tensor({a});
  p.head_secondary_w = glorot(rng, {a, cfg.fc2_width}, cfg.fc2_width, a);
  p.head_secondary_b = ad::make_tensor({a});
  return p;
}

namespace {

void check_region_inside(const Region& r, const ModelConfig& cfg, const char* what) {
  if (!r.valid() || r.x1 < 0.0 || r.y1 < 0.0 || r.x2 > cfg.input_width ||
      r.y2 > cfg.input_height) {
    throw std::invalid_argument(std::string(what) + " region (" + std::to_string(r.x1) +
                                "," + std::to_string(r.y1) + "," + std::to_string(r.x2) +
                                "," + std::to_string(r.y2) + ") lies outside the " +
                                std::to_string(cfg.input_width) + "x" +
                                std::to_string(cfg.input_height) + " image");
  }
}

}  // namespace

ad::TensorPtr trunk_forward(ad::Graph& g, const Image& image, const ModelParams& params,
                            const ModelConfig& cfg) {
  if (image.width != cfg.input_width || image.height != cfg.input_height ||
      image.channels != cfg.input_channels) {
    throw std::invalid_argument("image extent does not match the model config");
  }
  ad::TensorPtr x = image_to_tensor(image);
  for (std::size_t i = 0; i < cfg.trunk.size(); ++i) {
    const ConvLayerSpec& l = cfg.trunk[i];
    x = ad::conv2d(g, x, params.conv_w[i], params.conv_b[i], l.stride, l.padding);
    x = ad::relu(g, x);
    if (l.pool) x = ad::max_pool2d(g, x, l.pool_window, l.pool_stride);
  }
  return x;
}

ad::TensorPtr region_features(ad::Graph& g, const ad::TensorPtr& trunk_features,
                              const Region& region, const ModelParams& params,
                              const ModelConfig& cfg) {
  ad::TensorPtr x = ad::roi_max_pool(g, trunk_features, region, cfg.spatial_scale(),
                                     cfg.roi_pool_size);
  x = ad::flatten(g, x);
  x = ad::relu(g, ad::linear(g, x, params.fc1_w, params.fc1_b));
  x = ad::relu(g, ad::linear(g, x, params.fc2_w, params.fc2_b));
  return x;
}

RegionScores score_regions(ad::Graph& g, const ad::TensorPtr& trunk_features,
                           const Region& primary, const ProposalSet& candidates,
                           const ModelParams& params, const ModelConfig& cfg,
                           std::uint64_t random_draw_seed) {
  check_region_inside(primary, cfg, "primary");
  const int a = cfg.num_actions();

  RegionScores out;
  out.selected.assign(a, {});

  ad::TensorPtr primary_feat = region_features(g, trunk_features, primary, params, cfg);
  ad::TensorPtr scores =
      ad::linear(g, primary_feat, params.head_primary_w, params.head_primary_b);

  switch (cfg.mode) {
    case Mode::kRcnn:
      break;

    case Mode::kScene: {
      const Region whole = whole_image_region(cfg.input_width, cfg.input_height);
      ad::TensorPtr feat = region_features(g, trunk_features, whole, params, cfg);
      ad::TensorPtr sec = ad::linear(g, feat, params.head_secondary_w, params.head_secondary_b);
      scores = ad::add(g, scores, sec);
      for (int i = 0; i < a; ++i) out.selected[i].push_back(whole);
      break;
    }

    case Mode::kRandom: {
      if (candidates.empty()) {
        throw std::invalid_argument("score_regions: empty candidate set");
      }
      Rng rng(random_draw_seed);
      const std::size_t pick = rng.below(candidates.size());
      const Region& r = candidates.regions[pick];
      check_region_inside(r, cfg, "secondary");
      ad::TensorPtr feat = region_features(g, trunk_features, r, params, cfg);
      ad::TensorPtr sec = ad::linear(g, feat, params.head_secondary_w, params.head_secondary_b);
      scores = ad::add(g, scores, sec);
      for (int i = 0; i < a; ++i) out.selected[i].push_back(r);
      break;
    }

    case Mode::kRStar: {
      if (candidates.empty()) {
        throw std::invalid_argument("score_regions: empty candidate set");
      }
      const int k = static_cast<int>(candidates.size());
      const Region whole = whole_image_region(cfg.input_width, cfg.input_height);
      const bool with_sentinel = cfg.n_secondary > 1;

      std::vector<ad::TensorPtr> rows;
      rows.reserve(k + 1);
      for (const Region& r : candidates.regions) {
        check_region_inside(r, cfg, "secondary");
        ad::TensorPtr feat = region_features(g, trunk_features, r, params, cfg);
        rows.push_back(
            ad::linear(g, feat, params.head_secondary_w, params.head_secondary_b));
      }
      if (with_sentinel) {
        ad::TensorPtr feat = region_features(g, trunk_features, whole, params, cfg);
        rows.push_back(
            ad::linear(g, feat, params.head_secondary_w, params.head_secondary_b));
      }
      ad::TensorPtr matrix = ad::stack_rows(g, rows);
      const int total_rows = static_cast<int>(rows.size());

      // eligible[row*a + col]: row may serve as the next pick for action col.
      std::vector<std::uint8_t> eligible(static_cast<std::size_t>(total_rows) * a, 0);
      for (int row = 0; row < k; ++row) {
        for (int col = 0; col < a; ++col) eligible[static_cast<std::size_t>(row) * a + col] = 1;
      }

      for (int pick = 0; pick < cfg.n_secondary; ++pick) {
        if (with_sentinel) {
          // The whole-image sentinel stands in only where nothing is left.
          for (int col = 0; col < a; ++col) {
            bool any = false;
            for (int row = 0; row < k && !any; ++row) {
              any = eligible[static_cast<std::size_t>(row) * a + col] != 0;
            }
            eligible[static_cast<std::size_t>(k) * a + col] = any ? 0 : 1;
          }
        }
        ad::RowMax m = with_sentinel ? ad::reduce_max_rows(g, matrix, eligible)
                                     : ad::reduce_max_rows(g, matrix);
        scores = ad::add(g, scores, m.values);
        for (int col = 0; col < a; ++col) {
          const Region& chosen =
              m.argmax[col] < k ? candidates.regions[m.argmax[col]] : whole;
          out.selected[col].push_back(chosen);
          if (pick + 1 < cfg.n_secondary) {
            // Greedy restriction: later picks must stay within bounds of
            // every earlier pick for the same action.
            for (int row = 0; row < k; ++row) {
              std::uint8_t& e = eligible[static_cast<std::size_t>(row) * a + col];
              if (e && !cfg.bounds.contains(iou(candidates.regions[row], chosen))) {
                e = 0;
              }
            }
          }
        }
      }
      break;
    }
  }

  out.scores = scores;
  return out;
}

ForwardResult forward_scores(const Image& image, const Region& primary,
                             const ProposalSet& candidates, const ModelParams& params,
                             const ModelConfig& cfg, std::uint64_t random_draw_seed) {
  cfg.validate();
  auto graph = std::make_shared<ad::Graph>();
  ad::TensorPtr features = trunk_forward(*graph, image, params, cfg);
  RegionScores rs =
      score_regions(*graph, features, primary, candidates, params, cfg, random_draw_seed);
  ForwardResult res;
  res.scores = rs.scores->values;
  res.score_tensor = rs.scores;
  res.selected = std::move(rs.selected);
  res.graph = std::move(graph);
  return res;
}

std::vector<double> probabilities(const std::vector<double>& scores,
                                  const ModelConfig& cfg) {
  return cfg.loss == LossKind::kSoftmax ? ad::softmax_values(scores)
                                        : ad::sigmoid_values(scores);
}

std::vector<InstancePrediction> predict(const Image& image,
                                        const std::vector<Region>& primaries,
                                        const ProposalSet& proposals,
                                        const ModelParams& params, const ModelConfig& cfg,
                                        std::uint64_t draw_seed) {
  std::vector<InstancePrediction> out;
  out.reserve(primaries.size());
  for (std::size_t i = 0; i < primaries.size(); ++i) {
    const ProposalSet cands = candidate_set(primaries[i], proposals, cfg.bounds);
    ForwardResult fr = forward_scores(image, primaries[i], cands, params, cfg,
                                      derive_seed(draw_seed, i));
    InstancePrediction p;
    p.scores = fr.scores;
    p.probabilities = probabilities(fr.scores, cfg);
    p.selected = std::move(fr.selected);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rstar
