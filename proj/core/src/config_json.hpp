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
#ifndef RSTAR_SRC_CONFIG_JSON_HPP_
#define RSTAR_SRC_CONFIG_JSON_HPP_

#include <json.hpp>

#include "rstar/model.hpp"
#include "rstar/train.hpp"

namespace rstar {

inline void to_json(nlohmann::json& j, const ConvLayerSpec& l) {
  j = nlohmann::json{{"channels", l.channels}, {"kernel", l.kernel},
                     {"stride", l.stride},     {"padding", l.padding},
                     {"pool", l.pool},         {"pool_window", l.pool_window},
                     {"pool_stride", l.pool_stride}};
}

inline void from_json(const nlohmann::json& j, ConvLayerSpec& l) {
  j.at("channels").get_to(l.channels);
  j.at("kernel").get_to(l.kernel);
  j.at("stride").get_to(l.stride);
  j.at("padding").get_to(l.padding);
  j.at("pool").get_to(l.pool);
  j.at("pool_window").get_to(l.pool_window);
  j.at("pool_stride").get_to(l.pool_stride);
}

inline void to_json(nlohmann::json& j, const OverlapBounds& b) {
  j = nlohmann::json{{"l", b.lower}, {"u", b.upper}};
}

inline void from_json(const nlohmann::json& j, OverlapBounds& b) {
  j.at("l").get_to(b.lower);
  j.at("u").get_to(b.upper);
}

inline void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"input_width", c.input_width},
                     {"input_height", c.input_height},
                     {"input_channels", c.input_channels},
                     {"trunk", c.trunk},
                     {"roi_pool_size", c.roi_pool_size},
                     {"fc1_width", c.fc1_width},
                     {"fc2_width", c.fc2_width},
                     {"actions", c.actions},
                     {"loss", loss_name(c.loss)},
                     {"mode", mode_name(c.mode)},
                     {"n_secondary", c.n_secondary},
                     {"bounds", c.bounds}};
}

inline void from_json(const nlohmann::json& j, ModelConfig& c) {
  j.at("input_width").get_to(c.input_width);
  j.at("input_height").get_to(c.input_height);
  j.at("input_channels").get_to(c.input_channels);
  j.at("trunk").get_to(c.trunk);
  j.at("roi_pool_size").get_to(c.roi_pool_size);
  j.at("fc1_width").get_to(c.fc1_width);
  j.at("fc2_width").get_to(c.fc2_width);
  j.at("actions").get_to(c.actions);
  c.loss = parse_loss(j.at("loss").get<std::string>());
  c.mode = parse_mode(j.at("mode").get<std::string>());
  j.at("n_secondary").get_to(c.n_secondary);
  j.at("bounds").get_to(c.bounds);
}

inline void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"learning_rate", c.learning_rate},
                     {"batch_primaries", c.batch_primaries},
                     {"images_per_batch", c.images_per_batch},
                     {"secondary_sample", c.secondary_sample},
                     {"iterations", c.iterations},
                     {"bounds", c.bounds},
                     {"mode", mode_name(c.mode)},
                     {"n_secondary", c.n_secondary},
                     {"seed", c.seed},
                     {"loss", loss_name(c.loss)},
                     {"checkpoint_interval", c.checkpoint_interval}};
}

inline void from_json(const nlohmann::json& j, TrainConfig& c) {
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("batch_primaries").get_to(c.batch_primaries);
  j.at("images_per_batch").get_to(c.images_per_batch);
  j.at("secondary_sample").get_to(c.secondary_sample);
  j.at("iterations").get_to(c.iterations);
  j.at("bounds").get_to(c.bounds);
  c.mode = parse_mode(j.at("mode").get<std::string>());
  j.at("n_secondary").get_to(c.n_secondary);
  j.at("seed").get_to(c.seed);
  c.loss = parse_loss(j.at("loss").get<std::string>());
  j.at("checkpoint_interval").get_to(c.checkpoint_interval);
}

}  // namespace rstar

#endif  // RSTAR_SRC_CONFIG_JSON_HPP_
